// ludecon - game concept extraction and recommendation over .lud descriptions.
//
// Subcommands:
//   concepts --list               emit the concept catalog as JSON
//   concepts <file> [options]     compilation + playout concepts for one game
//   scan <file>                   compilation concepts only
//   playout <file> [options]      print one seeded trial as a move trace
//   board <file> --describe       board summary (sites, degree histogram)
//   corpus <dir> --out <csv>      build the concept matrix for a directory
//   nearest --corpus <csv> <id>   nearest neighbours of a game
//   recommend --corpus <csv> --like <id> [...]   like/dislike recommendations
//
// Exit codes: 0 success, 2 missing input, 3 parse/description error,
// 4 unknown game id or missing --like.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ludecon/compiler.hpp"
#include "ludecon/corpus.hpp"
#include "ludecon/engine.hpp"
#include "ludecon/parser.hpp"
#include "ludecon/playout.hpp"
#include "ludecon/report.hpp"

namespace fs = std::filesystem;
using namespace ludecon;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMissingInput = 2;
constexpr int kExitParseError = 3;
constexpr int kExitUnknownGame = 4;

int worker_threads() {
    if (const char* env = std::getenv("LUDECON_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

PlayoutPolicy parse_policy(const std::string& name) {
    if (name == "first") return PlayoutPolicy::FirstLegal;
    return PlayoutPolicy::UniformRandom;
}

struct LoadedGame {
    std::string source_text;
    LudemeNode tree;
    ScanReport scan;
};

// Shared front half of the file commands; exits on missing/unparseable input.
LoadedGame load_game(const std::string& path) {
    if (!fs::exists(path)) {
        std::cerr << "error: no such file: " << path << "\n";
        std::exit(kExitMissingInput);
    }
    LoadedGame g;
    try {
        g.source_text = read_file(path);
        g.tree = parse(g.source_text);
        g.scan = static_scan(g.tree);
        g.scan.annotations = parse_annotations(g.source_text);
    } catch (const ParseError& e) {
        std::cerr << "error: " << path << ": " << e.what() << "\n";
        std::exit(kExitParseError);
    } catch (const std::exception& e) {
        std::cerr << "error: " << path << ": " << e.what() << "\n";
        std::exit(kExitParseError);
    }
    return g;
}

ConceptReport base_report(const std::string& path, const LoadedGame& g) {
    ConceptReport report;
    report.game = path;
    for (const auto& c : g.tree.children)
        if (c.is(NodeKind::StringLit)) report.game = c.value;
    report.source = path;
    report.vector = g.scan.vector;
    report.annotations = g.scan.annotations;
    for (const auto& u : g.scan.unknown_constructors)
        report.warnings.push_back("unknown constructor: " + u);
    return report;
}

void emit_report(const ConceptReport& report, const std::string& format) {
    if (format == "csv")
        std::cout << report_csv(report);
    else
        std::cout << report_json(report).dump(2) << "\n";
}

int cmd_scan(const std::string& path, const std::string& format) {
    LoadedGame g = load_game(path);
    emit_report(base_report(path, g), format);
    return kExitOk;
}

int cmd_concepts(const std::string& path, int trials, std::uint64_t seed,
                 const std::string& policy, const std::string& format) {
    LoadedGame g = load_game(path);
    ConceptReport report = base_report(path, g);
    try {
        GameSpec spec = compile(g.tree);
        if (trials > 0) {
            PlayoutConfig cfg;
            cfg.trials = trials;
            cfg.master_seed = seed;
            cfg.policy = parse_policy(policy);
            cfg.threads = worker_threads();
            PlayoutAnalysis analysis = analyze_playouts(spec, cfg);
            report.vector = merge(g.scan.vector, analysis.vector);
            report.playout = PlayoutBlock{cfg.trials, cfg.master_seed,
                                          to_string(cfg.policy),
                                          analysis.truncated_fraction()};
        }
    } catch (const UnsupportedLudemeError& e) {
        report.scan_only = true;
        for (const auto& item : e.items)
            report.warnings.push_back("UnsupportedLudeme: " + item);
    } catch (const SemanticError& e) {
        std::cerr << "error: " << path << ": " << e.what() << "\n";
        return kExitParseError;
    }
    emit_report(report, format);
    return kExitOk;
}

int cmd_playout(const std::string& path, std::uint64_t seed, bool verbose,
                const std::string& policy) {
    LoadedGame g = load_game(path);
    try {
        GameSpec spec = compile(g.tree);
        Trial trial = run_trial_traced(
            spec, parse_policy(policy), seed, 0,
            [&](int number, int mover, const Move& m, int) {
                std::cout << number << " P" << mover << " "
                          << describe_move(spec, m, verbose) << "\n";
            });
        if (trial.truncated) {
            std::cout << "outcome: truncated after " << trial.length() << " moves\n";
        } else if (trial.result->win()) {
            std::cout << "outcome: Win P" << trial.result->winner << " (";
            bool first = true;
            for (Concept c : trial.result->end_tags) {
                if (!first) std::cout << ", ";
                first = false;
                std::cout << concept_def(c).name;
            }
            std::cout << ")\n";
        } else {
            std::cout << "outcome: Draw\n";
        }
        return kExitOk;
    } catch (const UnsupportedLudemeError& e) {
        std::cerr << "error: " << path << " is not playable: " << e.what() << "\n";
        return kExitParseError;
    } catch (const SemanticError& e) {
        std::cerr << "error: " << path << ": " << e.what() << "\n";
        return kExitParseError;
    }
}

int cmd_board(const std::string& path) {
    LoadedGame g = load_game(path);
    auto board = board_of(g.tree);
    if (!board) {
        std::cerr << "error: " << path << " declares no recognizable board\n";
        return kExitParseError;
    }
    std::cout << "sites: " << board->site_count() << "\n";
    std::map<int, int> histogram;
    for (SiteId s = 0; s < board->site_count(); ++s)
        ++histogram[static_cast<int>(board->neighbors(s).size())];
    std::cout << "degree histogram:\n";
    for (const auto& [degree, count] : histogram)
        std::cout << "  " << degree << ": " << count << "\n";
    std::cout << "mean degree: " << format_real(mean_degree(*board)) << "\n";
    std::cout << "corners: " << board->corners.size() << "\n";
    for (const auto& name : board->side_names())
        std::cout << "side " << name << ": " << board->sides.at(name).size()
                  << " sites (corners excluded)\n";
    return kExitOk;
}

int cmd_corpus(const std::string& dir, const std::string& out, int trials,
               std::uint64_t seed, const std::string& policy) {
    if (!fs::is_directory(dir)) {
        std::cerr << "error: no such directory: " << dir << "\n";
        return kExitMissingInput;
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".lud") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    CorpusBuildOptions options;
    options.trials = trials;
    options.master_seed = seed;
    options.policy = parse_policy(policy);
    options.threads = worker_threads();
    CorpusBuildResult result = build_corpus(files, options);
    for (const auto& [file, message] : result.errors)
        std::cerr << "skipped " << file << ": " << message << "\n";
    write_corpus(result.entries, out);
    int playable = 0;
    for (const auto& e : result.entries) playable += e.scan_only ? 0 : 1;
    std::cout << "corpus: " << result.entries.size() << " games (" << playable
              << " playable) -> " << out << "\n";
    return kExitOk;
}

int cmd_nearest(const std::string& corpus_path, const std::string& game, int k) {
    if (!fs::exists(corpus_path)) {
        std::cerr << "error: no such corpus: " << corpus_path << "\n";
        return kExitMissingInput;
    }
    std::vector<CorpusEntry> corpus = read_corpus(corpus_path);
    DistanceConfig cfg = make_distance_config(corpus);
    try {
        for (const auto& r : nearest(corpus, game, k, cfg))
            std::cout << r.game_id << " " << format_real(r.value) << "\n";
        return kExitOk;
    } catch (const CorpusError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnknownGame;
    }
}

int cmd_recommend(const std::string& corpus_path, const std::vector<std::string>& likes,
                  const std::vector<std::string>& dislikes, int k) {
    if (!fs::exists(corpus_path)) {
        std::cerr << "error: no such corpus: " << corpus_path << "\n";
        return kExitMissingInput;
    }
    if (likes.empty()) {
        std::cerr << "error: at least one --like game is required\n"
                  << "usage: ludecon recommend --corpus <csv> --like <id> "
                     "[--like <id> ...] [--dislike <id> ...] [-k N]\n";
        return kExitUnknownGame;
    }
    std::vector<CorpusEntry> corpus = read_corpus(corpus_path);
    DistanceConfig cfg = make_distance_config(corpus);
    try {
        for (const auto& r : recommend(corpus, likes, dislikes, k, cfg))
            std::cout << r.game_id << " " << format_real(r.value) << "\n";
        return kExitOk;
    } catch (const CorpusError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnknownGame;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"game concept extraction and recommendation"};
    app.require_subcommand(1);

    std::string path, format = "json", policy = "random", out = "corpus.csv";
    std::string corpus_path, game_id;
    std::vector<std::string> likes, dislikes;
    int trials = 10000;
    int k = 5;
    std::uint64_t seed = 0;
    bool list_flag = false, verbose = false, describe = false;

    auto* concepts = app.add_subcommand("concepts", "full concept report");
    concepts->add_option("file", path, "game description (.lud)");
    concepts->add_flag("--list", list_flag, "emit the concept catalog as JSON");
    concepts->add_option("--trials", trials, "playout count (0 skips playouts)");
    concepts->add_option("--seed", seed, "master seed");
    concepts->add_option("--policy", policy, "random|first");
    concepts->add_option("--format", format, "json|csv");

    auto* scan = app.add_subcommand("scan", "compilation concepts only");
    scan->add_option("file", path, "game description (.lud)")->required();
    scan->add_option("--format", format, "json|csv");

    auto* playout = app.add_subcommand("playout", "trace one seeded trial");
    playout->add_option("file", path, "game description (.lud)")->required();
    playout->add_option("--seed", seed, "trial seed");
    playout->add_option("--policy", policy, "random|first");
    playout->add_flag("--verbose", verbose, "include atomic actions");

    auto* board = app.add_subcommand("board", "board summary");
    board->add_option("file", path, "game description (.lud)")->required();
    board->add_flag("--describe", describe, "print site counts and degrees");

    auto* corpus = app.add_subcommand("corpus", "build a concept matrix");
    corpus->add_option("dir", path, "directory of .lud files")->required();
    corpus->add_option("--out", out, "output CSV path");
    corpus->add_option("--trials", trials, "playouts per playable game");
    corpus->add_option("--seed", seed, "master seed");
    corpus->add_option("--policy", policy, "random|first");

    auto* nearest_cmd = app.add_subcommand("nearest", "nearest neighbours");
    nearest_cmd->add_option("--corpus", corpus_path, "corpus CSV")->required();
    nearest_cmd->add_option("game", game_id, "target game id")->required();
    nearest_cmd->add_option("-k", k, "result count");

    auto* recommend_cmd = app.add_subcommand("recommend", "like/dislike query");
    recommend_cmd->add_option("--corpus", corpus_path, "corpus CSV")->required();
    recommend_cmd->add_option("--like", likes, "liked game ids");
    recommend_cmd->add_option("--dislike", dislikes, "disliked game ids");
    recommend_cmd->add_option("-k", k, "result count");

    CLI11_PARSE(app, argc, argv);

    try {
        if (concepts->parsed()) {
            if (list_flag) {
                std::cout << registry_json().dump(2) << "\n";
                return kExitOk;
            }
            if (path.empty()) {
                std::cerr << "error: a file argument or --list is required\n";
                return kExitMissingInput;
            }
            return cmd_concepts(path, trials, seed, policy, format);
        }
        if (scan->parsed()) return cmd_scan(path, format);
        if (playout->parsed()) return cmd_playout(path, seed, verbose, policy);
        if (board->parsed()) return cmd_board(path);
        if (corpus->parsed()) return cmd_corpus(path, out, trials, seed, policy);
        if (nearest_cmd->parsed()) return cmd_nearest(corpus_path, game_id, k);
        if (recommend_cmd->parsed()) return cmd_recommend(corpus_path, likes, dislikes, k);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
