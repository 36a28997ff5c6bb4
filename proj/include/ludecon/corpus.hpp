// corpus.hpp - concept-vector corpus over a game library: build, persist as a
// CSV matrix (+ JSON sidecar), inter-game distances, nearest-neighbour and
// like/dislike recommendation queries.
#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "compiler.hpp"
#include "concepts.hpp"
#include "playout.hpp"

namespace ludecon {

struct CorpusError : std::runtime_error {
    CorpusError(std::string code_, const std::string& m)
        : std::runtime_error(m), code(std::move(code_)) {}
    std::string code;  // UnknownGame, EmptyLikes, EmptyIntersection
};

struct CorpusEntry {
    std::string game_id;  // file stem
    std::string display_name;
    ConceptVector vector;
    bool scan_only = false;
    std::map<std::string, std::string> annotations;
    std::vector<std::string> warnings;
};

struct CorpusBuildOptions {
    int trials = 10000;
    std::uint64_t master_seed = 0;
    PlayoutPolicy policy = PlayoutPolicy::UniformRandom;
    int threads = 1;
};

struct CorpusBuildResult {
    std::vector<CorpusEntry> entries;
    std::vector<std::pair<std::string, std::string>> errors;  // (path, message)
};

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Scan every file; additionally run playouts for every description that
// compiles. Files that fail to parse are reported and skipped.
inline CorpusBuildResult build_corpus(const std::vector<std::filesystem::path>& files,
                                      const CorpusBuildOptions& options) {
    CorpusBuildResult result;
    for (const auto& path : files) {
        try {
            std::string source = read_file(path);
            LudemeNode tree = parse(source);
            ScanReport scan = static_scan(tree);
            scan.annotations = parse_annotations(source);
            CorpusEntry entry;
            entry.game_id = path.stem().string();
            entry.display_name = entry.game_id;
            for (const auto& c : tree.children)
                if (c.is(NodeKind::StringLit)) entry.display_name = c.value;
            entry.annotations = scan.annotations;
            for (const auto& u : scan.unknown_constructors)
                entry.warnings.push_back("unknown constructor: " + u);
            try {
                GameSpec spec = compile(tree);
                if (options.trials > 0) {
                    PlayoutConfig cfg;
                    cfg.trials = options.trials;
                    cfg.master_seed = options.master_seed;
                    cfg.policy = options.policy;
                    cfg.threads = options.threads;
                    entry.vector = merge(scan.vector, analyze(spec, cfg));
                } else {
                    entry.vector = scan.vector;
                }
            } catch (const UnsupportedLudemeError& e) {
                entry.scan_only = true;
                entry.vector = scan.vector;
                for (const auto& item : e.items)
                    entry.warnings.push_back("UnsupportedLudeme: " + item);
            }
            result.entries.push_back(std::move(entry));
        } catch (const ParseError& e) {
            result.errors.emplace_back(path.string(), e.what());
        } catch (const std::exception& e) {
            result.errors.emplace_back(path.string(), e.what());
        }
    }
    std::sort(result.entries.begin(), result.entries.end(),
              [](const CorpusEntry& a, const CorpusEntry& b) { return a.game_id < b.game_id; });
    return result;
}

// ---------------------------------------------------------------------------
// Distances
// ---------------------------------------------------------------------------

struct DistanceConfig {
    std::set<ConceptCategory> include = {ConceptCategory::Properties,
                                         ConceptCategory::Equipment,
                                         ConceptCategory::Rules, ConceptCategory::Math,
                                         ConceptCategory::Metrics};
    double binary_weight = 0.5;
    // Per-concept min-max over the corpus, for normalizing numeric values.
    std::map<Concept, std::pair<double, double>> numeric_range;
};

inline DistanceConfig make_distance_config(const std::vector<CorpusEntry>& corpus,
                                           double binary_weight = 0.5) {
    DistanceConfig cfg;
    cfg.binary_weight = binary_weight;
    for (const auto& entry : corpus) {
        for (const auto& [id, value] : entry.vector.values) {
            if (concept_def(id).dataType == ConceptDataType::Binary) continue;
            auto it = cfg.numeric_range.find(id);
            if (it == cfg.numeric_range.end())
                cfg.numeric_range[id] = {value, value};
            else {
                it->second.first = std::min(it->second.first, value);
                it->second.second = std::max(it->second.second, value);
            }
        }
    }
    return cfg;
}

// d = w * Jaccard distance over binary supports
//   + (1-w) * mean normalized |delta| over numeric concepts present in BOTH
// entries. Numeric concepts present in only one entry are skipped; when one
// part has nothing to compare the other part carries full weight.
inline double distance(const CorpusEntry& a, const CorpusEntry& b,
                       const DistanceConfig& cfg) {
    int bin_union = 0, bin_inter = 0;
    int num_shared = 0;
    double num_diff = 0.0;

    auto it_a = a.vector.values.begin();
    auto it_b = b.vector.values.begin();
    auto consider = [&](Concept id, const double* va, const double* vb) {
        const ConceptDef& def = concept_def(id);
        if (!cfg.include.count(def.category)) return;
        if (def.dataType == ConceptDataType::Binary) {
            bool fa = va && *va == 1.0;
            bool fb = vb && *vb == 1.0;
            if (fa || fb) ++bin_union;
            if (fa && fb) ++bin_inter;
            return;
        }
        if (!va || !vb) return;  // numeric present in only one: skipped
        ++num_shared;
        auto range = cfg.numeric_range.find(id);
        double lo = range == cfg.numeric_range.end() ? 0.0 : range->second.first;
        double hi = range == cfg.numeric_range.end() ? 0.0 : range->second.second;
        if (hi > lo) num_diff += std::fabs(*va - *vb) / (hi - lo);
    };
    while (it_a != a.vector.values.end() || it_b != b.vector.values.end()) {
        if (it_b == b.vector.values.end() ||
            (it_a != a.vector.values.end() && it_a->first < it_b->first)) {
            consider(it_a->first, &it_a->second, nullptr);
            ++it_a;
        } else if (it_a == a.vector.values.end() || it_b->first < it_a->first) {
            consider(it_b->first, nullptr, &it_b->second);
            ++it_b;
        } else {
            consider(it_a->first, &it_a->second, &it_b->second);
            ++it_a;
            ++it_b;
        }
    }

    if (bin_union == 0 && num_shared == 0)
        throw CorpusError("EmptyIntersection",
                          "no comparable concepts between " + a.game_id + " and " + b.game_id);
    double jaccard = bin_union == 0
                         ? 0.0
                         : 1.0 - static_cast<double>(bin_inter) / bin_union;
    double numeric = num_shared == 0 ? 0.0 : num_diff / num_shared;
    if (num_shared == 0) return jaccard;
    if (bin_union == 0) return numeric;
    return cfg.binary_weight * jaccard + (1.0 - cfg.binary_weight) * numeric;
}

inline const CorpusEntry& corpus_entry(const std::vector<CorpusEntry>& corpus,
                                       const std::string& game_id) {
    for (const auto& e : corpus)
        if (e.game_id == game_id) return e;
    throw CorpusError("UnknownGame", "unknown game id: " + game_id);
}

struct RankedGame {
    std::string game_id;
    double value = 0.0;  // distance for nearest(), score for recommend()
};

inline std::vector<RankedGame> nearest(const std::vector<CorpusEntry>& corpus,
                                       const std::string& target, int k,
                                       const DistanceConfig& cfg) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const CorpusEntry& t = corpus_entry(corpus, target);
    std::vector<RankedGame> ranked;
    for (const auto& e : corpus) {
        if (e.game_id == target) continue;
        ranked.push_back({e.game_id, distance(t, e, cfg)});
    }
    std::sort(ranked.begin(), ranked.end(), [](const RankedGame& a, const RankedGame& b) {
        if (a.value != b.value) return a.value < b.value;
        return a.game_id < b.game_id;
    });
    if (static_cast<int>(ranked.size()) > k) ranked.resize(k);
    return ranked;
}

// score(g) = mean over likes of (1-d) - mean over dislikes of (1-d).
// Dislikes that duplicate likes are ignored; candidates exclude both lists.
inline std::vector<RankedGame> recommend(const std::vector<CorpusEntry>& corpus,
                                         const std::vector<std::string>& likes,
                                         const std::vector<std::string>& dislikes, int k,
                                         const DistanceConfig& cfg) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (likes.empty()) throw CorpusError("EmptyLikes", "at least one liked game is required");
    for (const auto& id : likes) corpus_entry(corpus, id);
    for (const auto& id : dislikes) corpus_entry(corpus, id);
    std::set<std::string> like_set(likes.begin(), likes.end());
    std::set<std::string> dislike_set;
    for (const auto& id : dislikes)
        if (!like_set.count(id)) dislike_set.insert(id);

    std::vector<RankedGame> ranked;
    for (const auto& e : corpus) {
        if (like_set.count(e.game_id) || dislike_set.count(e.game_id)) continue;
        double like_score = 0.0;
        for (const auto& id : like_set)
            like_score += 1.0 - distance(e, corpus_entry(corpus, id), cfg);
        like_score /= static_cast<double>(like_set.size());
        double dislike_score = 0.0;
        if (!dislike_set.empty()) {
            for (const auto& id : dislike_set)
                dislike_score += 1.0 - distance(e, corpus_entry(corpus, id), cfg);
            dislike_score /= static_cast<double>(dislike_set.size());
        }
        ranked.push_back({e.game_id, like_score - dislike_score});
    }
    std::sort(ranked.begin(), ranked.end(), [](const RankedGame& a, const RankedGame& b) {
        if (a.value != b.value) return a.value > b.value;
        return a.game_id < b.game_id;
    });
    if (static_cast<int>(ranked.size()) > k) ranked.resize(k);
    return ranked;
}

// ---------------------------------------------------------------------------
// Persistence: CSV matrix (rows = games, columns = concepts ordered by id,
// empty cell = absent) plus a JSON sidecar with column ids and playout
// provenance.
// ---------------------------------------------------------------------------

inline std::string format_value(Concept id, double value) {
    const ConceptDef& def = concept_def(id);
    if (def.dataType != ConceptDataType::NumericalFloat)
        return std::to_string(static_cast<long long>(value));
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

inline std::string format_real(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

inline std::string sidecar_path(const std::string& csv_path) {
    return csv_path + ".meta.json";
}

inline void write_corpus(const std::vector<CorpusEntry>& corpus,
                         const std::string& csv_path) {
    std::set<Concept> used;
    for (const auto& e : corpus)
        for (const auto& [id, _] : e.vector.values) used.insert(id);
    std::vector<Concept> columns(used.begin(), used.end());

    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + csv_path);
    csv << "game";
    for (Concept id : columns) csv << "," << concept_def(id).name;
    csv << "\n";
    for (const auto& e : corpus) {
        csv << e.game_id;
        for (Concept id : columns) {
            csv << ",";
            if (e.vector.has(id)) csv << format_value(id, e.vector.get(id));
        }
        csv << "\n";
    }

    nlohmann::json meta;
    meta["columns"] = nlohmann::json::array();
    for (Concept id : columns)
        meta["columns"].push_back({{"id", static_cast<int>(id)},
                                   {"name", concept_def(id).name}});
    meta["entries"] = nlohmann::json::object();
    for (const auto& e : corpus) {
        nlohmann::json je;
        je["displayName"] = e.display_name;
        je["scanOnly"] = e.scan_only;
        if (e.vector.provenance) {
            je["playout"] = {{"trials", e.vector.provenance->trials},
                             {"seed", e.vector.provenance->seed},
                             {"policy", e.vector.provenance->policy}};
        }
        if (!e.annotations.empty()) je["annotations"] = e.annotations;
        meta["entries"][e.game_id] = je;
    }
    std::ofstream side(sidecar_path(csv_path), std::ios::binary);
    if (!side) throw std::runtime_error("cannot write " + sidecar_path(csv_path));
    side << meta.dump(2) << "\n";
}

inline std::vector<CorpusEntry> read_corpus(const std::string& csv_path) {
    std::ifstream csv(csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open " + csv_path);
    std::string header;
    if (!std::getline(csv, header)) throw std::runtime_error("empty corpus file");
    if (!header.empty() && header.back() == '\r') header.pop_back();

    std::vector<Concept> columns;
    {
        std::stringstream ss(header);
        std::string cell;
        bool first = true;
        while (std::getline(ss, cell, ',')) {
            if (first) {
                first = false;
                continue;
            }
            const ConceptDef* def = find_concept(cell);
            if (!def) throw std::runtime_error("unknown concept column: " + cell);
            columns.push_back(def->id);
        }
    }

    std::vector<CorpusEntry> corpus;
    std::string line;
    while (std::getline(csv, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        CorpusEntry entry;
        std::size_t col = 0;
        while (std::getline(ss, cell, ',')) {
            if (col == 0) {
                entry.game_id = cell;
                entry.display_name = cell;
            } else if (!cell.empty() && col - 1 < columns.size()) {
                double v = 0.0;
                auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
                if (ec != std::errc() || ptr != cell.data() + cell.size())
                    throw std::runtime_error("bad cell value '" + cell + "' in " + csv_path);
                entry.vector.set(columns[col - 1], v);
            }
            ++col;
        }
        corpus.push_back(std::move(entry));
    }

    std::ifstream side(sidecar_path(csv_path), std::ios::binary);
    if (side) {
        nlohmann::json meta = nlohmann::json::parse(side);
        for (auto& entry : corpus) {
            auto it = meta["entries"].find(entry.game_id);
            if (it == meta["entries"].end()) continue;
            entry.display_name = it->value("displayName", entry.game_id);
            entry.scan_only = it->value("scanOnly", false);
            if (it->contains("playout")) {
                PlayoutProvenance p;
                p.trials = (*it)["playout"].value("trials", 0);
                p.seed = (*it)["playout"].value("seed", 0ULL);
                p.policy = (*it)["playout"].value("policy", "random");
                entry.vector.provenance = p;
            }
            if (it->contains("annotations"))
                for (auto& [k, v] : (*it)["annotations"].items())
                    entry.annotations[k] = v.get<std::string>();
        }
    }
    return corpus;
}

}  // namespace ludecon
