// report.hpp - machine-readable concept reports for the CLI.
//
// JSON serialization is canonical: object keys are sorted, the concept list
// is ordered by id, and float formatting is the shortest round-trip form, so
// identical inputs always produce byte-identical reports.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "concepts.hpp"
#include "corpus.hpp"

namespace ludecon {

struct PlayoutBlock {
    int trials = 0;
    std::uint64_t seed = 0;
    std::string policy;
    double truncated_fraction = 0.0;
};

struct ConceptReport {
    std::string game;
    std::string source;
    ConceptVector vector;
    bool scan_only = false;
    std::optional<PlayoutBlock> playout;
    std::vector<std::string> warnings;
    std::map<std::string, std::string> annotations;
};

inline nlohmann::json concept_row(Concept id, double value) {
    const ConceptDef& def = concept_def(id);
    nlohmann::json row;
    row["id"] = static_cast<int>(id);
    row["name"] = def.name;
    row["category"] = to_string(def.category);
    row["dataType"] = to_string(def.dataType);
    row["computation"] = to_string(def.computation);
    if (def.dataType == ConceptDataType::NumericalFloat)
        row["value"] = value;
    else
        row["value"] = static_cast<long long>(value);
    return row;
}

inline nlohmann::json report_json(const ConceptReport& report) {
    nlohmann::json j;
    j["game"] = report.game;
    j["source"] = report.source;
    j["scanOnly"] = report.scan_only;
    j["concepts"] = nlohmann::json::array();
    for (const auto& [id, value] : report.vector.values)  // map: ordered by id
        j["concepts"].push_back(concept_row(id, value));
    if (report.playout) {
        j["playout"] = {{"trials", report.playout->trials},
                        {"seed", report.playout->seed},
                        {"policy", report.playout->policy},
                        {"truncatedFraction", report.playout->truncated_fraction}};
    }
    j["warnings"] = report.warnings;
    if (!report.annotations.empty()) j["annotations"] = report.annotations;
    return j;
}

inline std::string report_csv(const ConceptReport& report) {
    std::string out = "id,name,category,dataType,computation,value\n";
    for (const auto& [id, value] : report.vector.values) {
        const ConceptDef& def = concept_def(id);
        out += std::to_string(static_cast<int>(id)) + ",\"" + def.name + "\"," +
               to_string(def.category) + "," + to_string(def.dataType) + "," +
               to_string(def.computation) + "," + format_value(id, value) + "\n";
    }
    return out;
}

inline nlohmann::json registry_json() {
    nlohmann::json arr = nlohmann::json::array();
    for (const ConceptDef& def : registry()) {
        arr.push_back({{"id", static_cast<int>(def.id)},
                       {"name", def.name},
                       {"category", to_string(def.category)},
                       {"dataType", to_string(def.dataType)},
                       {"computation", to_string(def.computation)},
                       {"description", def.description}});
    }
    return arr;
}

}  // namespace ludecon
