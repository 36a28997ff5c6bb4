// Shared helpers for the test suites: bundled-game loading and tree mutation.
#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "ludecon/compiler.hpp"
#include "ludecon/parser.hpp"
#include "ludecon/rng.hpp"

namespace testutil {

inline std::filesystem::path games_dir() { return LUDECON_GAMES_DIR; }

inline std::vector<std::filesystem::path> corpus_files() {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(games_dir()))
        if (entry.path().extension() == ".lud") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

inline std::string read_game(const std::string& name) {
    std::ifstream in(games_dir() / (name + ".lud"), std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ludecon::LudemeNode parse_game(const std::string& name) {
    return ludecon::parse(read_game(name));
}

inline ludecon::GameSpec compile_game(const std::string& name) {
    return ludecon::compile(parse_game(name));
}

inline void collect_constructors(ludecon::LudemeNode& node,
                                 std::vector<ludecon::LudemeNode*>& out) {
    if (node.kind == ludecon::NodeKind::Constructor) out.push_back(&node);
    for (auto& c : node.children) collect_constructors(c, out);
}

// Replaces the head of one randomly chosen non-root constructor with a fresh
// symbol; returns false if the tree has no non-root constructor.
inline bool mutate_random_head(ludecon::LudemeNode& root, ludecon::Rng& rng) {
    std::vector<ludecon::LudemeNode*> nodes;
    collect_constructors(root, nodes);
    if (nodes.size() <= 1) return false;
    auto* target = nodes[1 + rng.below(static_cast<std::uint32_t>(nodes.size() - 1))];
    target->head = "zz" + std::to_string(rng.next() % 1000000);
    return true;
}

}  // namespace testutil
