// playout.hpp - seeded playouts and playout-concept extraction.
//
// Trials are embarrassingly parallel: trial i always runs with the seed
// derived from (master_seed, i) and aggregation iterates results in trial
// order, so values are bit-identical across runs and worker counts.
#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "compiler.hpp"
#include "concepts.hpp"
#include "engine.hpp"
#include "rng.hpp"

namespace ludecon {

enum class PlayoutPolicy { UniformRandom, FirstLegal };

inline std::string to_string(PlayoutPolicy p) {
    return p == PlayoutPolicy::UniformRandom ? "random" : "first";
}

struct MoveRecord {
    TagMask tags = 0;
    int branching = 0;  // k legal moves at this decision point
};

struct Trial {
    std::vector<MoveRecord> records;
    std::optional<Outcome> result;  // absent only for truncated trials
    bool truncated = false;

    int length() const { return static_cast<int>(records.size()); }
};

struct PlayoutConfig {
    int trials = 10000;
    std::uint64_t master_seed = 0;
    PlayoutPolicy policy = PlayoutPolicy::UniformRandom;
    int move_cap = 0;  // 0 = 2 * sites * players
    int threads = 1;   // worker count; results do not depend on it
};

inline int default_move_cap(const GameSpec& spec) {
    return 2 * spec.board.site_count() * spec.num_players;
}

// Runs one trial, invoking on_move(move_number, mover, move, k) for every
// move chosen (move_number is 1-based).
template <typename Fn>
inline Trial run_trial_traced(const GameSpec& spec, PlayoutPolicy policy,
                              std::uint64_t seed, int move_cap, Fn&& on_move) {
    if (move_cap <= 0) move_cap = default_move_cap(spec);
    Trial trial;
    GameState state = initial_state(spec, seed);
    Rng select(derive_seed(seed, 0x5E1EC7));
    for (;;) {
        MoveList moves = detail::generate(spec, state, state.mover);
        auto out = outcome_with_hint(spec, state, static_cast<int>(moves.size()));
        if (out) {
            trial.result = std::move(out);
            break;
        }
        if (trial.length() >= move_cap) {
            trial.truncated = true;
            break;
        }
        std::size_t pick = policy == PlayoutPolicy::FirstLegal
                               ? 0
                               : select.below(static_cast<std::uint32_t>(moves.size()));
        on_move(trial.length() + 1, state.mover, moves[pick],
                static_cast<int>(moves.size()));
        trial.records.push_back({moves[pick].tags, static_cast<int>(moves.size())});
        state = apply(spec, state, moves[pick]);
    }
    return trial;
}

inline Trial run_trial(const GameSpec& spec, PlayoutPolicy policy, std::uint64_t seed,
                       int move_cap = 0) {
    return run_trial_traced(spec, policy, seed, move_cap,
                            [](int, int, const Move&, int) {});
}

namespace detail {

inline std::vector<Trial> run_trials(const GameSpec& spec, const PlayoutConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("trial count must be >= 1");
    std::vector<Trial> trials(cfg.trials);
    int workers = std::max(1, cfg.threads);
    if (workers == 1) {
        for (int i = 0; i < cfg.trials; ++i)
            trials[i] = run_trial(spec, cfg.policy, derive_seed(cfg.master_seed, i),
                                  cfg.move_cap);
        return trials;
    }
    std::atomic<int> next{0};
    auto work = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= cfg.trials) return;
            trials[i] = run_trial(spec, cfg.policy, derive_seed(cfg.master_seed, i),
                                  cfg.move_cap);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    return trials;
}

}  // namespace detail

struct PlayoutAnalysis {
    ConceptVector vector;
    int trials = 0;
    int truncated_trials = 0;

    double truncated_fraction() const {
        return trials == 0 ? 0.0 : static_cast<double>(truncated_trials) / trials;
    }
};

// Move-type frequencies are per-trial fractions averaged over trials;
// end-type frequencies are the fraction of trials finishing with that tag
// (truncated trials stay in the denominator). Branching factor pools every
// decision point across trials.
inline PlayoutAnalysis analyze_playouts(const GameSpec& spec, const PlayoutConfig& cfg) {
    const std::vector<Trial> trials = detail::run_trials(spec, cfg);
    PlayoutAnalysis out;
    out.trials = cfg.trials;

    static const MoveTag kFreqTags[] = {TagAdd,  TagSlide,        TagShoot,
                                        TagHop,  TagStep,         TagRoll,
                                        TagRemoveEffect, TagCapture, TagMoveAgain};
    double tag_freq_sum[kMoveTagCount] = {0};
    long long total_moves = 0;
    long long total_branching = 0;
    std::vector<int> wins(spec.num_players + 1, 0);
    int draws = 0;
    static const Concept kEndConcepts[] = {Concept::LineEnd, Concept::ConnectionEnd,
                                           Concept::LoopEnd, Concept::NoMovesEnd,
                                           Concept::ReachEnd};
    int end_counts[5] = {0};

    for (const Trial& t : trials) {
        if (t.length() > 0) {
            int counts[kMoveTagCount] = {0};
            for (const MoveRecord& r : t.records) {
                for (MoveTag tag : kFreqTags)
                    if ((r.tags >> tag) & 1) ++counts[tag];
                total_branching += r.branching;
            }
            for (MoveTag tag : kFreqTags)
                tag_freq_sum[tag] += static_cast<double>(counts[tag]) / t.length();
            total_moves += t.length();
        }
        if (t.truncated) {
            ++out.truncated_trials;
            continue;
        }
        const Outcome& res = *t.result;
        if (res.win()) {
            ++wins[res.winner];
            for (int e = 0; e < 5; ++e)
                if (res.has_tag(kEndConcepts[e])) ++end_counts[e];
        } else {
            ++draws;
        }
    }

    const double n = static_cast<double>(cfg.trials);
    for (MoveTag tag : kFreqTags)
        out.vector.set(frequency_concept_of(tag_concept(tag)), tag_freq_sum[tag] / n);
    for (int e = 0; e < 5; ++e)
        out.vector.set(frequency_concept_of(kEndConcepts[e]), end_counts[e] / n);
    out.vector.set(Concept::GameLength, total_moves / n);
    out.vector.set(Concept::BranchingFactor,
                   total_moves == 0 ? 0.0
                                    : static_cast<double>(total_branching) / total_moves);
    double mean_win = 0;
    for (int p = 1; p <= spec.num_players; ++p) mean_win += wins[p] / n;
    mean_win /= spec.num_players;
    out.vector.set(Concept::Balance, wins[1] / n - mean_win);
    out.vector.set(Concept::Drawishness, draws / n);
    out.vector.provenance = PlayoutProvenance{cfg.trials, cfg.master_seed,
                                              to_string(cfg.policy)};
    return out;
}

inline ConceptVector analyze(const GameSpec& spec, const PlayoutConfig& cfg) {
    return analyze_playouts(spec, cfg).vector;
}

}  // namespace ludecon
