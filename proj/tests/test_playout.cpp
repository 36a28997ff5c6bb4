#include <doctest.h>

#include <cmath>
#include <set>

#include "ludecon/playout.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace ludecon;

TEST_CASE("tic-tac-toe first-legal trial is fully determined") {
    GameSpec ttt = testutil::compile_game("TicTacToe");
    for (std::uint64_t seed : {0ULL, 1ULL, 42ULL}) {
        Trial t = run_trial(ttt, PlayoutPolicy::FirstLegal, seed);
        // Canonical order hands P1 the sites A1,C1,B2,A3; the C1-B2-A3
        // diagonal completes on move 7 regardless of seed.
        CHECK(t.length() == 7);
        REQUIRE(t.result);
        CHECK(t.result->win());
        CHECK(t.result->winner == 1);
        CHECK(t.result->has_tag(Concept::LineEnd));
    }
}

TEST_CASE("tic-tac-toe random trial length bounds") {
    GameSpec ttt = testutil::compile_game("TicTacToe");
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Trial t = run_trial(ttt, PlayoutPolicy::UniformRandom, seed);
        CHECK(t.length() >= 5);
        CHECK(t.length() <= 9);
        CHECK_FALSE(t.truncated);
        CHECK(t.records.front().branching == 9);
    }
}

TEST_CASE("amazons trials alternate slide and shoot records") {
    GameSpec amazons = testutil::compile_game("Amazons");
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Trial t = run_trial(amazons, PlayoutPolicy::UniformRandom, seed);
        REQUIRE(!t.truncated);
        for (int i = 0; i < t.length(); ++i) {
            MoveTag expect = i % 2 == 0 ? TagSlide : TagShoot;  // 1-based odd = slide
            bool tagged = ((t.records[i].tags >> expect) & 1) != 0;
            CHECK(tagged);
        }
        // Completed trials pair every slide with a shoot.
        int slides = 0, shoots = 0;
        for (const MoveRecord& r : t.records) {
            slides += (r.tags >> TagSlide) & 1;
            shoots += (r.tags >> TagShoot) & 1;
        }
        CHECK(std::abs(slides - shoots) <= 1);
    }
}

TEST_CASE("movement-type frequencies partition every trial") {
    const char* names[] = {"TicTacToe", "Amazons", "Hex", "SnakesAndLadders",
                           "ChineseCheckers"};
    static const MoveTag kMovementTags[] = {TagAdd, TagSlide, TagShoot,
                                            TagHop, TagStep, TagRoll};
    for (const char* name : names) {
        GameSpec spec = testutil::compile_game(name);
        // Per trial.
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            Trial t = run_trial(spec, PlayoutPolicy::UniformRandom, seed);
            if (t.length() == 0) continue;
            double sum = 0;
            for (MoveTag tag : kMovementTags) {
                int count = 0;
                for (const MoveRecord& r : t.records) count += (r.tags >> tag) & 1;
                sum += static_cast<double>(count) / t.length();
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        }
        // In aggregate.
        PlayoutConfig cfg;
        cfg.trials = 50;
        cfg.master_seed = 77;
        ConceptVector v = analyze(spec, cfg);
        double total = v.get(Concept::FreqAddMove) + v.get(Concept::FreqSlideMove) +
                       v.get(Concept::FreqShootMove) + v.get(Concept::FreqHopMove) +
                       v.get(Concept::FreqStepMove) + v.get(Concept::FreqRollMove);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("end-type frequencies partition with drawishness and truncation") {
    const char* names[] = {"TicTacToe", "Amazons", "Hex", "Havannah",
                           "SnakesAndLadders", "Gomoku"};
    for (const char* name : names) {
        GameSpec spec = testutil::compile_game(name);
        PlayoutConfig cfg;
        cfg.trials = name == std::string("Havannah") ? 30 : 100;
        cfg.master_seed = 9;
        PlayoutAnalysis a = analyze_playouts(spec, cfg);
        double total = a.vector.get(Concept::FreqLineEnd) +
                       a.vector.get(Concept::FreqConnectionEnd) +
                       a.vector.get(Concept::FreqLoopEnd) +
                       a.vector.get(Concept::FreqNoMovesEnd) +
                       a.vector.get(Concept::FreqReachEnd) +
                       a.vector.get(Concept::Drawishness) + a.truncated_fraction();
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("single-trial analysis equals that trial's statistics") {
    GameSpec ttt = testutil::compile_game("TicTacToe");
    PlayoutConfig cfg;
    cfg.trials = 1;
    cfg.master_seed = 123;
    cfg.policy = PlayoutPolicy::FirstLegal;
    ConceptVector v = analyze(ttt, cfg);
    Trial t = run_trial(ttt, PlayoutPolicy::FirstLegal, derive_seed(123, 0));
    CHECK(v.get(Concept::GameLength) == doctest::Approx(t.length()));
    long long k_total = 0;
    for (const MoveRecord& r : t.records) k_total += r.branching;
    CHECK(v.get(Concept::BranchingFactor) ==
          doctest::Approx(static_cast<double>(k_total) / t.length()));
    CHECK(v.get(Concept::FreqAddMove) == doctest::Approx(1.0));
    CHECK(v.get(Concept::FreqLineEnd) == doctest::Approx(1.0));
    CHECK(v.get(Concept::Drawishness) == doctest::Approx(0.0));
    CHECK(v.get(Concept::Balance) == doctest::Approx(0.5));  // one P1 win
}

TEST_CASE("analysis is bit-identical across runs and worker counts") {
    GameSpec amazons = testutil::compile_game("Amazons");
    PlayoutConfig cfg;
    cfg.trials = 40;
    cfg.master_seed = 2718;
    cfg.threads = 1;
    ConceptVector base = analyze(amazons, cfg);
    for (int threads : {1, 2, 4}) {
        cfg.threads = threads;
        ConceptVector again = analyze(amazons, cfg);
        REQUIRE(again.size() == base.size());
        for (const auto& [id, value] : base.values)
            CHECK(again.get(id) == value);  // exact, not approximate
    }
}

TEST_CASE("tic-tac-toe monte carlo tracks the exhaustive oracle") {
    const oracles::TttExact& exact = oracles::ttt_exact();
    CHECK(exact.sequences == 255168);
    CHECK(exact.p_line_end + exact.p_draw == doctest::Approx(1.0));
    CHECK(exact.pooled_branching() >= 5.0);
    CHECK(exact.pooled_branching() <= 7.0);

    GameSpec ttt = testutil::compile_game("TicTacToe");
    PlayoutConfig cfg;
    cfg.trials = 4000;
    cfg.master_seed = 31;
    ConceptVector v = analyze(ttt, cfg);
    double n = cfg.trials;
    double sigma_line = std::sqrt(exact.p_line_end * (1 - exact.p_line_end) / n);
    CHECK(std::fabs(v.get(Concept::FreqLineEnd) - exact.p_line_end) <= 4 * sigma_line);
    double sigma_draw = std::sqrt(exact.p_draw * (1 - exact.p_draw) / n);
    CHECK(std::fabs(v.get(Concept::Drawishness) - exact.p_draw) <= 4 * sigma_draw);
    // Balance compares P1 wins to the mean win rate.
    double exact_balance = exact.p_win_x - (exact.p_win_x + exact.p_win_o) / 2;
    CHECK(std::fabs(v.get(Concept::Balance) - exact_balance) <= 0.05);
    CHECK(v.get(Concept::BranchingFactor) ==
          doctest::Approx(exact.pooled_branching()).epsilon(0.05));
}

TEST_CASE("move cap truncates unfinishable games") {
    // Two kings on a 4x4 board with an unreachable line goal shuffle forever.
    GameSpec spec = compile(parse(
        "(game \"Wander\" (players 2) (equipment {(board (square 4)) "
        "(piece \"King\" Each (move Step (to (sites Empty))))}) (rules "
        "(start {(place \"King1\" {\"A1\"}) (place \"King2\" {\"D4\"})}) "
        "(play (forEach Piece)) "
        "(end (if (is Line 4) (result Mover Win)))))"));
    Trial t = run_trial(spec, PlayoutPolicy::UniformRandom, 5, 64);
    CHECK(t.truncated);
    CHECK(t.length() == 64);
    CHECK_FALSE(t.result);

    PlayoutConfig cfg;
    cfg.trials = 5;
    cfg.master_seed = 1;
    cfg.move_cap = 64;
    PlayoutAnalysis a = analyze_playouts(spec, cfg);
    CHECK(a.truncated_fraction() == doctest::Approx(1.0));
    CHECK(a.vector.get(Concept::Drawishness) == doctest::Approx(0.0));
}

TEST_CASE("scan concepts are witnessed by playouts where a witness exists") {
    // Move-type and end-type compilation concepts promise behaviour that
    // playouts can observe. Add Move accepts a shoot as witness because
    // shooting adds the projectile piece.
    struct Witness {
        Concept concept_id;
        std::vector<MoveTag> move_tags;   // any of these tags seen
        std::vector<Concept> end_tags;    // or any of these end tags seen
    };
    const Witness witnesses[] = {
        {Concept::AddMove, {TagAdd, TagShoot}, {}},
        {Concept::SlideMove, {TagSlide}, {}},
        {Concept::ShootMove, {TagShoot}, {}},
        {Concept::HopMove, {TagHop}, {}},
        {Concept::StepMove, {TagStep}, {}},
        {Concept::RollMove, {TagRoll}, {}},
        {Concept::MoveAgain, {TagMoveAgain}, {}},
        {Concept::RemoveEffect, {TagRemoveEffect}, {}},
        {Concept::Capture, {TagCapture}, {}},
        {Concept::LineEnd, {}, {Concept::LineEnd}},
        {Concept::ConnectionEnd, {}, {Concept::ConnectionEnd}},
        {Concept::LoopEnd, {}, {Concept::LoopEnd}},
        {Concept::NoMovesEnd, {}, {Concept::NoMovesEnd}},
        {Concept::ReachEnd, {}, {Concept::ReachEnd}},
    };
    const char* names[] = {"TicTacToe", "Amazons", "Hex", "Havannah", "Gomoku",
                           "SnakesAndLadders", "ChineseCheckers"};
    for (const char* name : names) {
        INFO("game: " << name);
        ScanReport scan = scan_source(testutil::read_game(name));
        GameSpec spec = testutil::compile_game(name);
        TagMask tags_seen = 0;
        std::set<Concept> ends_seen;
        for (std::uint64_t seed = 0; seed < 60; ++seed) {
            Trial t = run_trial(spec, PlayoutPolicy::UniformRandom, seed);
            for (const MoveRecord& r : t.records) tags_seen |= r.tags;
            if (t.result)
                for (Concept c : t.result->end_tags) ends_seen.insert(c);
        }
        for (const Witness& w : witnesses) {
            if (!scan.vector.flag(w.concept_id)) continue;
            bool witnessed = false;
            for (MoveTag tag : w.move_tags) witnessed |= ((tags_seen >> tag) & 1) != 0;
            for (Concept c : w.end_tags) witnessed |= ends_seen.count(c) != 0;
            INFO("concept: " << concept_def(w.concept_id).name);
            CHECK(witnessed);
        }
    }
}

TEST_CASE("trial seeds derive from the master seed by index") {
    GameSpec ttt = testutil::compile_game("TicTacToe");
    PlayoutConfig cfg;
    cfg.trials = 3;
    cfg.master_seed = 555;
    ConceptVector batch = analyze(ttt, cfg);
    // Reproduce by hand from the derived seeds.
    double length_sum = 0;
    for (int i = 0; i < 3; ++i)
        length_sum += run_trial(ttt, cfg.policy, derive_seed(555, i)).length();
    CHECK(batch.get(Concept::GameLength) == doctest::Approx(length_sum / 3));
}
