#include <doctest.h>

#include <algorithm>
#include <string>

#include "ludecon/compiler.hpp"
#include "ludecon/rng.hpp"
#include "test_util.hpp"

using namespace ludecon;

TEST_CASE("scan Amazons") {
    ScanReport r = scan_source(testutil::read_game("Amazons"));
    const ConceptVector& v = r.vector;
    CHECK(v.get(Concept::NumPlayers) == 2);
    CHECK(v.flag(Concept::TwoPlayer));
    CHECK(v.flag(Concept::SquareTiling));
    CHECK(v.get(Concept::NumPlayableSites) == 100);
    CHECK(v.flag(Concept::SlideMove));
    CHECK(v.flag(Concept::ShootMove));
    CHECK(v.flag(Concept::AddMove));  // shooting adds the arrow piece
    CHECK(v.flag(Concept::MoveAgain));
    CHECK(v.flag(Concept::NoMovesEnd));
    CHECK(v.flag(Concept::NeutralPiece));
    CHECK(v.flag(Concept::Parity));
    CHECK(v.flag(Concept::Counting));
    CHECK_FALSE(v.flag(Concept::Stochastic));
    CHECK(v.flag(Concept::Deterministic));
    CHECK_FALSE(v.flag(Concept::Capture));
    CHECK_FALSE(v.flag(Concept::CheckmateEnd));
    CHECK(v.get(Concept::NumComponentTypes) == 2);
    CHECK(v.get(Concept::NumStartPieces) == 8);
    CHECK(v.flag(Concept::PiecesPlacedOnBoard));
    CHECK(v.get(Concept::NumDirections) ==
          doctest::Approx(mean_degree(build_square(10))));
    CHECK(r.unknown_constructors.empty());
}

TEST_CASE("scan Havannah") {
    ScanReport r = scan_source(testutil::read_game("Havannah"));
    const ConceptVector& v = r.vector;
    CHECK(v.flag(Concept::HexTiling));
    CHECK(v.flag(Concept::HexagonShape));
    CHECK(v.get(Concept::NumPlayableSites) == 169);
    CHECK(v.flag(Concept::AddMove));
    CHECK(v.flag(Concept::ConnectionEnd));
    CHECK(v.flag(Concept::LoopEnd));
    CHECK(v.flag(Concept::Logic));
    CHECK_FALSE(v.flag(Concept::SquareTiling));
    CHECK_FALSE(v.flag(Concept::Capture));
    CHECK(r.unknown_constructors.empty());
}

TEST_CASE("scan a minimal line game") {
    ScanReport r = scan_source(
        "(game \"X\" (players 2) (equipment {(board (square 3))}) (rules "
        "(play (move Add (to (sites Empty)))) "
        "(end (if (is Line 3) (result Mover Win)))))");
    CHECK(r.vector.flag(Concept::LineEnd));
    CHECK(r.vector.flag(Concept::AddMove));
    CHECK(r.vector.flag(Concept::SquareTiling));
    CHECK(r.vector.get(Concept::NumPlayableSites) == 9);
    CHECK(r.vector.flag(Concept::DrawPossible));  // board can fill without a line
}

TEST_CASE("scan capture combinations") {
    // remove inside a hop: hop capture.
    ScanReport hop = scan_source(
        "(game \"H\" (players 2) (equipment {(board (square 4))}) (rules "
        "(play (move Hop (between Enemy (apply (remove))) (to (sites Empty)))) "
        "(end (if (no Moves Next) (result Mover Win)))))");
    CHECK(hop.vector.flag(Concept::HopMove));
    CHECK(hop.vector.flag(Concept::HopCapture));
    CHECK(hop.vector.flag(Concept::RemoveEffect));
    CHECK(hop.vector.flag(Concept::Capture));
    CHECK_FALSE(hop.vector.flag(Concept::ReplacementCapture));

    // remove inside a to: replacement capture.
    ScanReport step = scan_source(
        "(game \"S\" (players 2) (equipment {(board (square 4))}) (rules "
        "(play (move Step (to (sites Enemy) (apply (remove))))) "
        "(end (if (no Moves Next) (result Mover Win)))))");
    CHECK(step.vector.flag(Concept::ReplacementCapture));
    CHECK(step.vector.flag(Concept::Capture));
    CHECK_FALSE(step.vector.flag(Concept::HopCapture));

    // stochastic triggers in isolation.
    ScanReport random_value = scan_source(
        "(game \"R\" (players 2) (equipment {(board (square 4))}) (rules "
        "(play (move Add (to (sites Empty)) (then (value Random 1 5)))) "
        "(end (if (no Moves Next) (result Mover Win)))))");
    CHECK(random_value.vector.flag(Concept::Stochastic));
    CHECK_FALSE(random_value.vector.flag(Concept::Deterministic));
}

TEST_CASE("scan is total over unknown constructors") {
    ScanReport r = scan_source(
        "(game \"U\" (players 3) (equipment {(board (wobble 4)) (gizmo 1)}) "
        "(rules (play (frobnicate)) (end (if (no Moves Next) (result Mover Win)))))");
    CHECK(r.vector.get(Concept::NumPlayers) == 3);
    CHECK(r.vector.flag(Concept::Multiplayer));
    CHECK_FALSE(r.vector.has(Concept::NumPlayableSites));  // board form unknown
    std::vector<std::string> expect = {"wobble", "gizmo", "frobnicate"};
    CHECK(r.unknown_constructors == expect);

    CHECK_THROWS_AS(static_scan(parse("(match \"x\" (players 2))")), NotAGameError);
    // Invalid sizes on recognized boards do propagate.
    CHECK_THROWS_AS(
        static_scan(parse("(game \"B\" (players 2) (equipment {(board (square 0))}))")),
        BoardError);
}

TEST_CASE("scan totality under random head mutations") {
    Rng rng(2024);
    std::string source = testutil::read_game("Havannah");
    for (int i = 0; i < 500; ++i) {
        LudemeNode tree = parse(source);
        testutil::mutate_random_head(tree, rng);
        CHECK_NOTHROW(static_scan(tree));
    }
}

TEST_CASE("scan-only corpus annotations") {
    ScanReport shogi = scan_source(testutil::read_game("Shogi"));
    CHECK(shogi.vector.get(Concept::NumPlayableSites) == 81);  // computed from board
    CHECK(shogi.annotations.at("PlayableSites") == "95");      // declared, not computed
    CHECK(shogi.vector.flag(Concept::Promotion));
    CHECK(shogi.vector.flag(Concept::CheckmateEnd));

    ScanReport oware = scan_source(testutil::read_game("Oware"));
    CHECK(oware.vector.flag(Concept::TrackBoard));
    CHECK(oware.vector.flag(Concept::Sow));
    CHECK(oware.vector.flag(Concept::Counting));
    CHECK(oware.annotations.at("PlayableSites") == "14");

    ScanReport go = scan_source(testutil::read_game("Go"));
    CHECK(go.vector.flag(Concept::NoRepetition));
    CHECK(go.vector.flag(Concept::AddMove));
    CHECK(go.vector.flag(Concept::Capture));
}

TEST_CASE("compile Amazons") {
    GameSpec spec = testutil::compile_game("Amazons");
    CHECK(spec.name == "Amazons");
    CHECK(spec.num_players == 2);
    REQUIRE(spec.piece_types.size() == 3);
    CHECK(spec.piece_types[0].name == "Queen1");
    CHECK(spec.piece_types[0].owner == 1);
    CHECK(spec.piece_types[1].name == "Queen2");
    CHECK(spec.piece_types[1].owner == 2);
    CHECK(spec.piece_types[2].name == "Dot0");
    CHECK(spec.piece_types[2].owner == 0);
    REQUIRE(spec.piece_types[0].move_rule);
    CHECK(spec.piece_types[0].move_rule->kind == PlayRule::Kind::Slide);
    CHECK(spec.piece_types[0].move_rule->move_again);
    CHECK(spec.play.kind == PlayRule::Kind::IfEvenMoveCount);
    CHECK(spec.start_placements.size() == 2);
}

TEST_CASE("compile Havannah") {
    GameSpec spec = testutil::compile_game("Havannah");
    CHECK(spec.num_players == 2);
    REQUIRE(spec.end_rules.size() == 1);
    const Condition& cond = spec.end_rules[0].condition;
    CHECK(cond.kind == Condition::Kind::Or);
    REQUIRE(cond.children.size() == 3);
    CHECK(cond.children[0].kind == Condition::Kind::Loop);
    CHECK(cond.children[1].kind == Condition::Kind::ConnectedRegions);
    CHECK(cond.children[1].connect_count == 3);
    CHECK(cond.children[1].regions == Condition::RegionSet::SidesNoCorners);
    CHECK(cond.children[2].kind == Condition::Kind::ConnectedRegions);
    CHECK(cond.children[2].connect_count == 2);
    CHECK(cond.children[2].regions == Condition::RegionSet::Corners);
}

TEST_CASE("compile partitions the corpus into playable and scan-only") {
    for (const auto& name : {"Amazons", "Havannah", "Hex", "TicTacToe", "Gomoku",
                             "SnakesAndLadders", "ChineseCheckers"})
        CHECK_NOTHROW(testutil::compile_game(name));
    for (const auto& name : {"Chess", "Shogi", "Xiangqi", "Go", "Backgammon", "Oware"})
        CHECK_THROWS_AS(testutil::compile_game(name), UnsupportedLudemeError);
}

TEST_CASE("compile Chess reports is Checkmate") {
    try {
        testutil::compile_game("Chess");
        FAIL("expected UnsupportedLudemeError");
    } catch (const UnsupportedLudemeError& e) {
        bool found = std::find(e.items.begin(), e.items.end(), "is Checkmate") !=
                     e.items.end();
        CHECK(found);
    }
}

TEST_CASE("compile semantic errors") {
    CHECK_THROWS_AS(
        compile(parse("(game \"X\" (players 2) (equipment {(board (square 3)) "
                      "(piece \"Disc\" Each)}) (rules "
                      "(start (place \"Ghost1\" {\"A1\"})) "
                      "(play (move Add (to (sites Empty)))) "
                      "(end (if (is Line 3) (result Mover Win)))))")),
        SemanticError);
    CHECK_THROWS_AS(
        compile(parse("(game \"X\" (players 2) (equipment {(board (square 3)) "
                      "(piece \"Disc\" Each)}) (rules "
                      "(start (place \"Disc1\" {\"Z9\"})) "
                      "(play (move Add (to (sites Empty)))) "
                      "(end (if (is Line 3) (result Mover Win)))))")),
        SemanticError);
    // Roll without dice in the equipment.
    CHECK_THROWS_AS(
        compile(parse("(game \"X\" (players 2) (equipment {(board (square 3)) "
                      "(piece \"Pawn\" Each)}) (rules "
                      "(start (place \"Pawn1\" {\"A1\"})) "
                      "(play (move Roll (advance))) "
                      "(end (if (is Reach (sites End)) (result Mover Win)))))")),
        SemanticError);
    CHECK_THROWS_AS(compile(parse("(thing 2)")), NotAGameError);
}

TEST_CASE("scan vectors hold compilation concepts only") {
    for (const auto& file : testutil::corpus_files()) {
        ScanReport r = scan_source(testutil::read_game(file.stem().string()));
        for (const auto& [id, value] : r.vector.values) {
            const ConceptDef& def = concept_def(id);
            CHECK(def.computation == ConceptComputation::Compilation);
            if (def.dataType == ConceptDataType::Binary) CHECK(value == 1.0);
        }
    }
}

TEST_CASE("every bundled description scans without warnings") {
    for (const auto& file : testutil::corpus_files()) {
        INFO("file: " << file.string());
        ScanReport r = scan_source(testutil::read_game(file.stem().string()));
        CHECK(r.unknown_constructors.empty());
    }
}

TEST_CASE("connected-opposite-sides accepts the counted form") {
    GameSpec spec = compile(parse(
        "(game \"Y\" (players 2) (equipment {(board (hex Diamond 3)) "
        "(piece \"Marker\" Each)}) (rules "
        "(play (move Add (to (sites Empty)))) "
        "(end (if (is Connected 2 OppositeSides) (result Mover Win)))))"));
    REQUIRE(spec.end_rules.size() == 1);
    CHECK(spec.end_rules[0].condition.kind == Condition::Kind::ConnectedOppositeSides);
}

TEST_CASE("scan and compile are deterministic") {
    LudemeNode tree = testutil::parse_game("Amazons");
    ScanReport a = static_scan(tree);
    ScanReport b = static_scan(tree);
    CHECK(a.vector.values == b.vector.values);
    GameSpec s1 = compile(tree);
    GameSpec s2 = compile(tree);
    CHECK(s1.piece_types.size() == s2.piece_types.size());
    CHECK(s1.end_rules.size() == s2.end_rules.size());
}
