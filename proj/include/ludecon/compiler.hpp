// compiler.hpp - two-phase front end over parsed game descriptions.
//
// Phase 1, static_scan: a purely syntactic pass that works on ANY parseable
// (game ...) tree and reports compilation concepts. Unknown constructor heads
// are collected, never fatal, so the scan also covers descriptions far
// outside the playable subset.
//
// Phase 2, compile: full compilation of the supported subset into a playable
// GameSpec. Descriptions using constructs outside the subset fail here with
// the complete list of offending constructors.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "board.hpp"
#include "concepts.hpp"
#include "parser.hpp"

namespace ludecon {

struct NotAGameError : std::runtime_error {
    explicit NotAGameError(const std::string& m) : std::runtime_error(m) {}
};

struct SemanticError : std::runtime_error {
    explicit SemanticError(const std::string& m) : std::runtime_error(m) {}
};

struct UnsupportedLudemeError : std::runtime_error {
    UnsupportedLudemeError(std::string msg, std::vector<std::string> list)
        : std::runtime_error(std::move(msg)), items(std::move(list)) {}
    std::vector<std::string> items;
};

// ---------------------------------------------------------------------------
// Static scan
// ---------------------------------------------------------------------------

struct ScanReport {
    ConceptVector vector;  // compilation concepts only
    std::vector<std::string> unknown_constructors;
    std::map<std::string, std::string> annotations;  // declared, never computed
};

namespace detail {

// Constructor heads the scanner understands, either structurally or through
// the trigger table below. Anything else lands in unknown_constructors.
inline const std::set<std::string>& known_heads() {
    static const std::set<std::string> heads = {
        "game", "players", "equipment", "board", "square", "rectangle", "hex",
        "track", "piece", "dice", "rules", "meta", "no", "start", "place",
        "play", "end", "move", "forEach", "or", "and", "not", "if", "is",
        "then", "moveAgain", "remove", "to", "from", "between", "over",
        "sites", "apply", "count", "result", "value", "roll", "advance",
        "sow", "promote", "select", "at", "store",
    };
    return heads;
}

inline bool is_move_type(const std::string& s) {
    return s == "Add" || s == "Slide" || s == "Shoot" || s == "Hop" ||
           s == "Step" || s == "Roll";
}

// Board construction shared by scan and compile. Returns nothing when the
// board form is not recognized (the scan then simply skips board concepts).
inline std::optional<BoardGraph> board_from_node(const LudemeNode& board) {
    if (board.children.size() != 1) return std::nullopt;
    const LudemeNode& shape = board.children[0];
    if (!shape.is(NodeKind::Constructor)) return std::nullopt;
    if (shape.head == "square" && shape.children.size() == 1 &&
        shape.children[0].is(NodeKind::NumberLit))
        return build_square(static_cast<int>(shape.children[0].as_int()));
    if (shape.head == "rectangle" && shape.children.size() == 2 &&
        shape.children[0].is(NodeKind::NumberLit) &&
        shape.children[1].is(NodeKind::NumberLit)) {
        int rows = static_cast<int>(shape.children[0].as_int());
        int cols = static_cast<int>(shape.children[1].as_int());
        return build_rectangle(cols, rows);
    }
    if (shape.head == "hex" && shape.children.size() == 1 &&
        shape.children[0].is(NodeKind::NumberLit))
        return build_hex_hexagon(static_cast<int>(shape.children[0].as_int()));
    if (shape.head == "hex" && shape.children.size() == 2 &&
        shape.children[0].is_symbol("Diamond") &&
        shape.children[1].is(NodeKind::NumberLit))
        return build_hex_rhombus(static_cast<int>(shape.children[1].as_int()));
    if (shape.head == "track" && shape.children.size() == 1 &&
        shape.children[0].is(NodeKind::NumberLit))
        return build_track(static_cast<int>(shape.children[0].as_int()));
    return std::nullopt;
}

struct ScanState {
    ScanState(ConceptVector& v, std::vector<std::string>& u) : vec(v), unknown(u) {}

    ConceptVector& vec;
    std::vector<std::string>& unknown;
    std::set<std::string> unknown_seen;
    long long start_pieces = 0;
    int component_types = 0;
    bool saw_place = false;
    bool saw_add = false;
    bool saw_line = false;
    bool saw_draw_result = false;
    bool saw_remove = false;
    bool saw_hop_capture = false;
    bool saw_replacement_capture = false;

    void flag(Concept c) { vec.set_flag(c); }
    void record_unknown(const std::string& head) {
        if (unknown_seen.insert(head).second) unknown.push_back(head);
    }
};

// The trigger table: every syntactic pattern the scanner maps to a concept.
// Kept in one function so the mapping stays auditable next to its rules.
//
//   (players n)                 -> Num Players, Two Player / Multiplayer,
//                                  Alternating Turns
//   (board (square n))          -> Square Tiling, Square Shape (+ sites, dirs)
//   (board (rectangle r c))     -> Square Tiling (+ sites, dirs)
//   (board (hex n))             -> Hex Tiling, Hexagon Shape
//   (board (hex Diamond n))     -> Hex Tiling, Rhombus Shape
//   (board (track n))           -> Track Board
//   (piece _ Neutral ...)       -> Neutral Piece
//   (dice f [k])                -> Dice Used, Num Dice, Stochastic
//   (place ...)                 -> Pieces Placed On Board, Num Start Pieces
//   (move Add|Slide|Shoot|Hop|Step|Roll ...) -> the move-type concept;
//                                  Shoot also -> Add Move (it adds a piece);
//                                  Roll also -> Stochastic
//   (roll ...), (value Random ...) -> Stochastic
//   (moveAgain)                 -> Move Again
//   (remove ...)                -> Remove Effect; inside (move Hop ...) also
//                                  Hop Capture; inside (to ...) also
//                                  Replacement Capture
//   any of the above captures   -> Capture
//   (meta (no Repeat))          -> No Repetition
//   (is Line n)                 -> Line End
//   (is Connected ...)          -> Connection End
//   (is Loop)                   -> Loop End
//   (no Moves ...)              -> No Moves End
//   (is Reach ...)              -> Reach End
//   (is Checkmate)              -> Checkmate End
//   (result _ Draw)             -> Draw Possible; also implied for add-move
//                                  games with a line goal (board can fill)
//   (or|and|not ...)            -> Logic
//   (is Even|Odd ...)           -> Parity
//   (count ...)                 -> Counting
//   (sum|difference|product|mod ...) -> Arithmetic (reserved heads)
//   (sow ...)                   -> Sow
//   (promote ...)               -> Promotion
struct ScanFlags {
    bool in_hop = false;
    bool in_to = false;
    bool in_equipment = false;  // piece/dice declarations live here
};

inline void scan_node(const LudemeNode& node, ScanState& st, ScanFlags flags) {
    if (!node.is(NodeKind::Constructor)) {
        for (const auto& c : node.children) scan_node(c, st, flags);
        return;
    }
    const std::string& h = node.head;
    if (!known_heads().count(h)) st.record_unknown(h);

    if (h == "players" && node.children.size() == 1 &&
        node.children[0].is(NodeKind::NumberLit)) {
        long long n = node.children[0].as_int();
        st.vec.set(Concept::NumPlayers, static_cast<double>(n));
        if (n == 2) st.flag(Concept::TwoPlayer);
        if (n > 2) st.flag(Concept::Multiplayer);
        if (n >= 1) st.flag(Concept::AlternatingTurns);
    } else if (h == "equipment") {
        flags.in_equipment = true;
    } else if (h == "piece" && flags.in_equipment) {
        ++st.component_types;
        if (node.children.size() >= 2 && node.children[1].is_symbol("Neutral"))
            st.flag(Concept::NeutralPiece);
    } else if (h == "dice" && flags.in_equipment) {
        ++st.component_types;
        st.flag(Concept::DiceUsed);
        st.flag(Concept::Stochastic);
        long long count = 1;
        if (node.children.size() >= 2 && node.children[1].is(NodeKind::NumberLit))
            count = node.children[1].as_int();
        st.vec.set(Concept::NumDice, static_cast<double>(count));
    } else if (h == "place") {
        st.saw_place = true;
        for (const auto& c : node.children) {
            if (c.is(NodeKind::Set)) st.start_pieces += static_cast<long long>(c.children.size());
        }
        if (node.children.size() == 2 && node.children[1].is(NodeKind::StringLit))
            ++st.start_pieces;
    } else if (h == "move" && !node.children.empty() &&
               node.children[0].is(NodeKind::SymbolLit) &&
               is_move_type(node.children[0].value)) {
        const std::string& mt = node.children[0].value;
        if (mt == "Add") { st.flag(Concept::AddMove); st.saw_add = true; }
        else if (mt == "Slide") st.flag(Concept::SlideMove);
        else if (mt == "Shoot") {
            st.flag(Concept::ShootMove);
            st.flag(Concept::AddMove);  // shooting adds the projectile piece
            st.saw_add = true;
        } else if (mt == "Hop") { st.flag(Concept::HopMove); flags.in_hop = true; }
        else if (mt == "Step") st.flag(Concept::StepMove);
        else if (mt == "Roll") { st.flag(Concept::RollMove); st.flag(Concept::Stochastic); }
    } else if (h == "roll") {
        st.flag(Concept::Stochastic);
    } else if (h == "value" && !node.children.empty() && node.children[0].is_symbol("Random")) {
        st.flag(Concept::Stochastic);
    } else if (h == "moveAgain") {
        st.flag(Concept::MoveAgain);
    } else if (h == "remove") {
        st.saw_remove = true;
        st.flag(Concept::RemoveEffect);
        if (flags.in_hop) { st.saw_hop_capture = true; st.flag(Concept::HopCapture); }
        if (flags.in_to) {
            st.saw_replacement_capture = true;
            st.flag(Concept::ReplacementCapture);
        }
    } else if (h == "to") {
        flags.in_to = true;
    } else if (h == "sow") {
        st.flag(Concept::Sow);
    } else if (h == "promote") {
        st.flag(Concept::Promotion);
    } else if (h == "meta") {
        for (const auto& c : node.children)
            if (c.is_constructor("no") && !c.children.empty() && c.children[0].is_symbol("Repeat"))
                st.flag(Concept::NoRepetition);
    } else if (h == "no" && !node.children.empty() && node.children[0].is_symbol("Moves")) {
        st.flag(Concept::NoMovesEnd);
    } else if (h == "is" && !node.children.empty() && node.children[0].is(NodeKind::SymbolLit)) {
        const std::string& what = node.children[0].value;
        if (what == "Line") { st.flag(Concept::LineEnd); st.saw_line = true; }
        else if (what == "Connected") st.flag(Concept::ConnectionEnd);
        else if (what == "Loop") st.flag(Concept::LoopEnd);
        else if (what == "Reach") st.flag(Concept::ReachEnd);
        else if (what == "Checkmate") st.flag(Concept::CheckmateEnd);
        else if (what == "Even" || what == "Odd") st.flag(Concept::Parity);
    } else if (h == "or" || h == "and" || h == "not") {
        st.flag(Concept::Logic);
    } else if (h == "count") {
        st.flag(Concept::Counting);
    } else if (h == "sum" || h == "difference" || h == "product" || h == "mod") {
        st.flag(Concept::Arithmetic);
    } else if (h == "result") {
        for (const auto& c : node.children)
            if (c.is_symbol("Draw")) st.saw_draw_result = true;
    }

    for (const auto& c : node.children) scan_node(c, st, flags);
}

}  // namespace detail

inline ScanReport static_scan(const LudemeNode& tree) {
    if (!tree.is_constructor("game"))
        throw NotAGameError("root expression is not a (game ...) description");
    ScanReport report;
    detail::ScanState st(report.vector, report.unknown_constructors);
    detail::scan_node(tree, st, detail::ScanFlags{});

    if (st.component_types > 0)
        report.vector.set(Concept::NumComponentTypes, st.component_types);
    if (st.saw_place) {
        report.vector.set_flag(Concept::PiecesPlacedOnBoard);
        report.vector.set(Concept::NumStartPieces, static_cast<double>(st.start_pieces));
    }
    if (st.saw_remove || st.saw_hop_capture || st.saw_replacement_capture)
        report.vector.set_flag(Concept::Capture);
    if (!report.vector.flag(Concept::Stochastic))
        report.vector.set_flag(Concept::Deterministic);
    if (st.saw_draw_result || (st.saw_add && st.saw_line))
        report.vector.set_flag(Concept::DrawPossible);

    // Board concepts require building the board graph; a malformed size is an
    // error, while an unrecognized board form only skips these concepts.
    for (const auto& c : tree.children) {
        if (!c.is_constructor("equipment")) continue;
        auto visit_equipment = [&](const LudemeNode& item) {
            if (!item.is_constructor("board")) return;
            auto board = detail::board_from_node(item);
            if (!board) return;
            report.vector.set(Concept::NumPlayableSites, board->site_count());
            report.vector.set(Concept::NumDirections, mean_degree(*board));
            switch (board->tiling) {
                case Tiling::Square: report.vector.set_flag(Concept::SquareTiling); break;
                case Tiling::Hex: report.vector.set_flag(Concept::HexTiling); break;
                case Tiling::Track: report.vector.set_flag(Concept::TrackBoard); break;
            }
            switch (board->shape) {
                case BoardShape::Square: report.vector.set_flag(Concept::SquareShape); break;
                case BoardShape::Hexagon: report.vector.set_flag(Concept::HexagonShape); break;
                case BoardShape::Rhombus: report.vector.set_flag(Concept::RhombusShape); break;
                default: break;
            }
        };
        for (const auto& e : c.children) {
            if (e.is(NodeKind::Set))
                for (const auto& item : e.children) visit_equipment(item);
            else
                visit_equipment(e);
        }
    }
    return report;
}

inline ScanReport scan_source(std::string_view source) {
    ScanReport report = static_scan(parse(source));
    report.annotations = parse_annotations(source);
    return report;
}

// Board declared by a (game ...) tree, when its form is recognized.
inline std::optional<BoardGraph> board_of(const LudemeNode& tree) {
    for (const auto& c : tree.children) {
        if (!c.is_constructor("equipment")) continue;
        for (const auto& e : c.children) {
            if (e.is(NodeKind::Set)) {
                for (const auto& item : e.children)
                    if (item.is_constructor("board")) return detail::board_from_node(item);
            } else if (e.is_constructor("board")) {
                return detail::board_from_node(e);
            }
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Compilation to a playable GameSpec
// ---------------------------------------------------------------------------

struct SiteSetSpec {
    enum class Kind { Empty, Enemy, End, Corners };
    Kind kind = Kind::Empty;
};

struct PlayRule {
    enum class Kind { Add, Slide, Step, Hop, Shoot, Roll, ForEachPiece, IfEvenMoveCount, Or };
    Kind kind = Kind::Add;
    bool move_again = false;        // (then (moveAgain))
    bool step_capture = false;      // Step onto enemy with removal
    bool hop_over_enemy = false;    // Hop crosses enemy pieces only
    bool hop_remove = false;        // hopped-over piece is removed
    std::string shoot_piece;        // Shoot: added piece name
    std::vector<PlayRule> children; // Or (any), IfEvenMoveCount (exactly 2)
};

struct Condition {
    enum class Kind {
        NoMovesNext, NoMovesMover, Line, ConnectedRegions, ConnectedOppositeSides,
        Loop, Reach, Or, And, Not
    };
    enum class RegionSet { Sides, SidesNoCorners, Corners };
    Kind kind = Kind::NoMovesNext;
    int line_length = 0;
    int connect_count = 0;
    RegionSet regions = RegionSet::Sides;
    SiteSetSpec reach;
    std::vector<Condition> children;
};

enum class ResultWho { Mover, Next, Prev };
enum class ResultKind { Win, Loss, Draw };

struct EndRule {
    Condition condition;
    ResultWho who = ResultWho::Mover;
    ResultKind result = ResultKind::Win;
};

struct PieceType {
    std::string name;       // expanded, e.g. "Queen1", "Dot0"
    std::string base_name;  // declared, e.g. "Queen"
    int owner = 0;          // 0 = neutral
    std::optional<PlayRule> move_rule;
};

struct GameSpec {
    std::string name;
    int num_players = 0;
    BoardGraph board;
    std::vector<PieceType> piece_types;
    std::vector<std::pair<std::string, std::vector<std::string>>> start_placements;
    PlayRule play;
    std::vector<EndRule> end_rules;
    bool meta_no_repetition = false;
    int dice_faces = 0;  // 0 when the game uses no dice
    int num_dice = 0;

    int piece_type_index(const std::string& piece_name) const {
        for (std::size_t i = 0; i < piece_types.size(); ++i)
            if (piece_types[i].name == piece_name) return static_cast<int>(i);
        return -1;
    }
    bool stochastic() const { return dice_faces > 0; }
};

namespace detail {

struct CompileCtx {
    std::vector<std::string> unsupported;
    std::vector<int> lines;  // first offending line per item
    std::set<std::string> unsupported_seen;

    void reject(const LudemeNode& node, const std::string& what) {
        if (unsupported_seen.insert(what).second) {
            unsupported.push_back(what);
            lines.push_back(node.span.line);
        }
    }
};

inline std::string describe(const LudemeNode& node) {
    if (node.is(NodeKind::Constructor)) {
        // "is Checkmate" style discriminator: head plus leading symbol child.
        if (!node.children.empty() && node.children[0].is(NodeKind::SymbolLit))
            return node.head + " " + node.children[0].value;
        return node.head;
    }
    if (node.is(NodeKind::SymbolLit)) return node.value;
    return print(node);
}

inline std::optional<SiteSetSpec> parse_site_set(const LudemeNode& node) {
    if (!node.is_constructor("sites") || node.children.size() != 1 ||
        !node.children[0].is(NodeKind::SymbolLit))
        return std::nullopt;
    const std::string& s = node.children[0].value;
    if (s == "Empty") return SiteSetSpec{SiteSetSpec::Kind::Empty};
    if (s == "Enemy") return SiteSetSpec{SiteSetSpec::Kind::Enemy};
    if (s == "End") return SiteSetSpec{SiteSetSpec::Kind::End};
    if (s == "Corners") return SiteSetSpec{SiteSetSpec::Kind::Corners};
    return std::nullopt;
}

// (then (moveAgain)) is the only supported then-effect.
inline bool parse_then(const LudemeNode& node, PlayRule& rule, CompileCtx& ctx) {
    if (node.children.size() == 1 && node.children[0].is_constructor("moveAgain")) {
        rule.move_again = true;
        return true;
    }
    ctx.reject(node, "then " + (node.children.empty() ? std::string("<empty>")
                                                      : describe(node.children[0])));
    return false;
}

inline PlayRule parse_play_rule(const LudemeNode& node, CompileCtx& ctx);

inline PlayRule parse_move_rule(const LudemeNode& node, CompileCtx& ctx) {
    PlayRule rule;
    const std::string& mt = node.children[0].value;
    auto rest = [&](std::size_t from) {
        std::vector<const LudemeNode*> out;
        for (std::size_t i = from; i < node.children.size(); ++i)
            out.push_back(&node.children[i]);
        return out;
    };
    if (mt == "Add") {
        rule.kind = PlayRule::Kind::Add;
        bool saw_to = false;
        for (const LudemeNode* c : rest(1)) {
            if (c->is_constructor("to")) {
                auto set = c->children.size() == 1 ? parse_site_set(c->children[0])
                                                   : std::nullopt;
                if (set && set->kind == SiteSetSpec::Kind::Empty) { saw_to = true; continue; }
                ctx.reject(*c, "to " + (c->children.empty() ? std::string("<empty>")
                                                            : describe(c->children[0])));
            } else if (c->is_constructor("then")) {
                parse_then(*c, rule, ctx);
            } else {
                ctx.reject(*c, describe(*c));
            }
        }
        if (!saw_to) ctx.reject(node, "move Add without (to (sites Empty))");
        return rule;
    }
    if (mt == "Slide") {
        rule.kind = PlayRule::Kind::Slide;
        for (const LudemeNode* c : rest(1)) {
            if (c->is_constructor("then")) parse_then(*c, rule, ctx);
            else ctx.reject(*c, describe(*c));
        }
        return rule;
    }
    if (mt == "Step") {
        rule.kind = PlayRule::Kind::Step;
        bool saw_to = false;
        for (const LudemeNode* c : rest(1)) {
            if (c->is_constructor("to") && !c->children.empty()) {
                auto set = parse_site_set(c->children[0]);
                if (set && set->kind == SiteSetSpec::Kind::Empty && c->children.size() == 1) {
                    saw_to = true;
                    continue;
                }
                if (set && set->kind == SiteSetSpec::Kind::Enemy && c->children.size() == 2 &&
                    c->children[1].is_constructor("apply") &&
                    c->children[1].children.size() == 1 &&
                    c->children[1].children[0].is_constructor("remove")) {
                    saw_to = true;
                    rule.step_capture = true;
                    continue;
                }
                ctx.reject(*c, "to " + describe(c->children[0]));
            } else if (c->is_constructor("then")) {
                parse_then(*c, rule, ctx);
            } else {
                ctx.reject(*c, describe(*c));
            }
        }
        if (!saw_to) ctx.reject(node, "move Step without target sites");
        return rule;
    }
    if (mt == "Hop") {
        rule.kind = PlayRule::Kind::Hop;
        bool saw_between = false, saw_to = false;
        for (const LudemeNode* c : rest(1)) {
            if (c->is_constructor("between") && !c->children.empty() &&
                c->children[0].is(NodeKind::SymbolLit)) {
                const std::string& who = c->children[0].value;
                if (who == "Any" || who == "Enemy") {
                    saw_between = true;
                    rule.hop_over_enemy = who == "Enemy";
                    for (std::size_t i = 1; i < c->children.size(); ++i) {
                        const LudemeNode& eff = c->children[i];
                        if (eff.is_constructor("apply") && eff.children.size() == 1 &&
                            eff.children[0].is_constructor("remove"))
                            rule.hop_remove = true;
                        else
                            ctx.reject(eff, describe(eff));
                    }
                    continue;
                }
                ctx.reject(*c, "between " + who);
            } else if (c->is_constructor("to")) {
                auto set = c->children.size() == 1 ? parse_site_set(c->children[0])
                                                   : std::nullopt;
                if (set && set->kind == SiteSetSpec::Kind::Empty) { saw_to = true; continue; }
                ctx.reject(*c, "to " + (c->children.empty() ? std::string("<empty>")
                                                            : describe(c->children[0])));
            } else if (c->is_constructor("then")) {
                parse_then(*c, rule, ctx);
            } else {
                ctx.reject(*c, describe(*c));
            }
        }
        if (!saw_between || !saw_to) ctx.reject(node, "move Hop without between/to");
        return rule;
    }
    if (mt == "Shoot") {
        rule.kind = PlayRule::Kind::Shoot;
        if (node.children.size() == 2 && node.children[1].is_constructor("piece") &&
            node.children[1].children.size() == 1 &&
            node.children[1].children[0].is(NodeKind::StringLit)) {
            rule.shoot_piece = node.children[1].children[0].value;
        } else {
            ctx.reject(node, "move Shoot without (piece \"name\")");
        }
        return rule;
    }
    if (mt == "Roll") {
        rule.kind = PlayRule::Kind::Roll;
        for (const LudemeNode* c : rest(1)) {
            if (!c->is_constructor("advance")) ctx.reject(*c, describe(*c));
        }
        return rule;
    }
    ctx.reject(node, "move " + mt);
    return rule;
}

inline PlayRule parse_play_rule(const LudemeNode& node, CompileCtx& ctx) {
    PlayRule rule;
    if (node.is_constructor("move") && !node.children.empty() &&
        node.children[0].is(NodeKind::SymbolLit))
        return parse_move_rule(node, ctx);
    if (node.is_constructor("forEach") && node.children.size() == 1 &&
        node.children[0].is_symbol("Piece")) {
        rule.kind = PlayRule::Kind::ForEachPiece;
        return rule;
    }
    if (node.is_constructor("or")) {
        rule.kind = PlayRule::Kind::Or;
        auto add_child = [&](const LudemeNode& c) {
            rule.children.push_back(parse_play_rule(c, ctx));
        };
        for (const auto& c : node.children) {
            if (c.is(NodeKind::Set))
                for (const auto& cc : c.children) add_child(cc);
            else
                add_child(c);
        }
        return rule;
    }
    if (node.is_constructor("if") && node.children.size() == 3) {
        const LudemeNode& cond = node.children[0];
        bool even_moves = cond.is_constructor("is") && cond.children.size() == 2 &&
                          cond.children[0].is_symbol("Even") &&
                          cond.children[1].is_constructor("count") &&
                          cond.children[1].children.size() == 1 &&
                          cond.children[1].children[0].is_symbol("Moves");
        if (even_moves) {
            rule.kind = PlayRule::Kind::IfEvenMoveCount;
            rule.children.push_back(parse_play_rule(node.children[1], ctx));
            rule.children.push_back(parse_play_rule(node.children[2], ctx));
            return rule;
        }
        ctx.reject(cond, "if " + describe(cond));
        return rule;
    }
    ctx.reject(node, describe(node));
    return rule;
}

inline Condition parse_condition(const LudemeNode& node, CompileCtx& ctx) {
    Condition cond;
    if (node.is_constructor("no") && node.children.size() == 2 &&
        node.children[0].is_symbol("Moves") && node.children[1].is(NodeKind::SymbolLit)) {
        const std::string& who = node.children[1].value;
        if (who == "Next") { cond.kind = Condition::Kind::NoMovesNext; return cond; }
        if (who == "Mover") { cond.kind = Condition::Kind::NoMovesMover; return cond; }
        ctx.reject(node, "no Moves " + who);
        return cond;
    }
    if (node.is_constructor("is") && !node.children.empty() &&
        node.children[0].is(NodeKind::SymbolLit)) {
        const std::string& what = node.children[0].value;
        if (what == "Line" && node.children.size() == 2 &&
            node.children[1].is(NodeKind::NumberLit)) {
            cond.kind = Condition::Kind::Line;
            cond.line_length = static_cast<int>(node.children[1].as_int());
            return cond;
        }
        if (what == "Loop" && node.children.size() == 1) {
            cond.kind = Condition::Kind::Loop;
            return cond;
        }
        if (what == "Connected") {
            // Both (is Connected OppositeSides) and (is Connected 2 OppositeSides).
            if (node.children.back().is_symbol("OppositeSides") &&
                (node.children.size() == 2 ||
                 (node.children.size() == 3 && node.children[1].is(NodeKind::NumberLit)))) {
                cond.kind = Condition::Kind::ConnectedOppositeSides;
                return cond;
            }
            if (node.children.size() == 3 && node.children[1].is(NodeKind::NumberLit) &&
                node.children[2].is(NodeKind::SymbolLit)) {
                const std::string& regions = node.children[2].value;
                cond.kind = Condition::Kind::ConnectedRegions;
                cond.connect_count = static_cast<int>(node.children[1].as_int());
                if (regions == "Sides") { cond.regions = Condition::RegionSet::Sides; return cond; }
                if (regions == "SidesNoCorners") {
                    cond.regions = Condition::RegionSet::SidesNoCorners;
                    return cond;
                }
                if (regions == "Corners") { cond.regions = Condition::RegionSet::Corners; return cond; }
            }
            ctx.reject(node, "is Connected (unsupported form)");
            return cond;
        }
        if (what == "Reach" && node.children.size() == 2) {
            auto set = parse_site_set(node.children[1]);
            if (set) {
                cond.kind = Condition::Kind::Reach;
                cond.reach = *set;
                return cond;
            }
            ctx.reject(node, "is Reach (unsupported sites)");
            return cond;
        }
        ctx.reject(node, "is " + what);
        return cond;
    }
    if (node.is_constructor("or") || node.is_constructor("and")) {
        cond.kind = node.head == "or" ? Condition::Kind::Or : Condition::Kind::And;
        auto add_child = [&](const LudemeNode& c) {
            cond.children.push_back(parse_condition(c, ctx));
        };
        for (const auto& c : node.children) {
            if (c.is(NodeKind::Set))
                for (const auto& cc : c.children) add_child(cc);
            else
                add_child(c);
        }
        return cond;
    }
    if (node.is_constructor("not") && node.children.size() == 1) {
        cond.kind = Condition::Kind::Not;
        cond.children.push_back(parse_condition(node.children[0], ctx));
        return cond;
    }
    ctx.reject(node, describe(node));
    return cond;
}

inline std::optional<EndRule> parse_end_rule(const LudemeNode& node, CompileCtx& ctx) {
    if (!node.is_constructor("if") || node.children.size() != 2) {
        ctx.reject(node, "end " + describe(node));
        return std::nullopt;
    }
    EndRule rule;
    rule.condition = parse_condition(node.children[0], ctx);
    const LudemeNode& res = node.children[1];
    if (!res.is_constructor("result") || res.children.size() != 2 ||
        !res.children[0].is(NodeKind::SymbolLit) || !res.children[1].is(NodeKind::SymbolLit)) {
        ctx.reject(res, "result (unsupported form)");
        return std::nullopt;
    }
    const std::string& who = res.children[0].value;
    const std::string& kind = res.children[1].value;
    if (who == "Mover") rule.who = ResultWho::Mover;
    else if (who == "Next") rule.who = ResultWho::Next;
    else if (who == "Prev") rule.who = ResultWho::Prev;
    else { ctx.reject(res, "result " + who); return std::nullopt; }
    if (kind == "Win") rule.result = ResultKind::Win;
    else if (kind == "Loss") rule.result = ResultKind::Loss;
    else if (kind == "Draw") rule.result = ResultKind::Draw;
    else { ctx.reject(res, "result " + kind); return std::nullopt; }
    return rule;
}

}  // namespace detail

inline GameSpec compile(const LudemeNode& tree) {
    if (!tree.is_constructor("game"))
        throw NotAGameError("root expression is not a (game ...) description");

    detail::CompileCtx ctx;
    GameSpec spec;
    std::optional<BoardGraph> board;
    struct DeclaredPiece {
        std::string name;
        std::string owner;
        std::optional<PlayRule> rule;
    };
    std::vector<DeclaredPiece> declared;
    const LudemeNode* play_node = nullptr;
    std::vector<const LudemeNode*> end_nodes;

    for (const auto& c : tree.children) {
        if (c.is(NodeKind::StringLit)) {
            spec.name = c.value;
        } else if (c.is_constructor("players")) {
            if (c.children.size() == 1 && c.children[0].is(NodeKind::NumberLit))
                spec.num_players = static_cast<int>(c.children[0].as_int());
            else
                ctx.reject(c, "players (unsupported form)");
        } else if (c.is_constructor("equipment")) {
            auto visit = [&](const LudemeNode& item) {
                if (item.is_constructor("board")) {
                    board = detail::board_from_node(item);
                    if (!board) ctx.reject(item, "board " + detail::describe(item.children.empty() ? item : item.children[0]));
                } else if (item.is_constructor("piece")) {
                    DeclaredPiece p;
                    if (!item.children.empty() && item.children[0].is(NodeKind::StringLit))
                        p.name = item.children[0].value;
                    else {
                        ctx.reject(item, "piece without a name");
                        return;
                    }
                    if (item.children.size() >= 2 && item.children[1].is(NodeKind::SymbolLit))
                        p.owner = item.children[1].value;
                    else {
                        ctx.reject(item, "piece " + p.name + " without an owner");
                        return;
                    }
                    if (p.owner != "Each" && p.owner != "Neutral") {
                        ctx.reject(item, "piece owner " + p.owner);
                        return;
                    }
                    for (std::size_t i = 2; i < item.children.size(); ++i)
                        p.rule = detail::parse_play_rule(item.children[i], ctx);
                    declared.push_back(std::move(p));
                } else if (item.is_constructor("dice")) {
                    if (!item.children.empty() && item.children[0].is(NodeKind::NumberLit))
                        spec.dice_faces = static_cast<int>(item.children[0].as_int());
                    else
                        ctx.reject(item, "dice (unsupported form)");
                    spec.num_dice = 1;
                    if (item.children.size() >= 2 && item.children[1].is(NodeKind::NumberLit))
                        spec.num_dice = static_cast<int>(item.children[1].as_int());
                } else {
                    ctx.reject(item, detail::describe(item));
                }
            };
            for (const auto& e : c.children) {
                if (e.is(NodeKind::Set))
                    for (const auto& item : e.children) visit(item);
                else
                    visit(e);
            }
        } else if (c.is_constructor("rules")) {
            for (const auto& r : c.children) {
                if (r.is_constructor("meta")) {
                    for (const auto& m : r.children) {
                        if (m.is_constructor("no") && m.children.size() == 1 &&
                            m.children[0].is_symbol("Repeat"))
                            spec.meta_no_repetition = true;
                        else
                            ctx.reject(m, "meta " + detail::describe(m));
                    }
                } else if (r.is_constructor("start")) {
                    auto visit_place = [&](const LudemeNode& p) {
                        if (!p.is_constructor("place") || p.children.size() != 2 ||
                            !p.children[0].is(NodeKind::StringLit)) {
                            ctx.reject(p, "start " + detail::describe(p));
                            return;
                        }
                        std::vector<std::string> labels;
                        const LudemeNode& where = p.children[1];
                        if (where.is(NodeKind::StringLit)) {
                            labels.push_back(where.value);
                        } else if (where.is(NodeKind::Set)) {
                            for (const auto& l : where.children) {
                                if (l.is(NodeKind::StringLit)) labels.push_back(l.value);
                                else ctx.reject(l, "place target " + detail::describe(l));
                            }
                        } else {
                            ctx.reject(where, "place target " + detail::describe(where));
                            return;
                        }
                        spec.start_placements.emplace_back(p.children[0].value, std::move(labels));
                    };
                    for (const auto& s : r.children) {
                        if (s.is(NodeKind::Set))
                            for (const auto& p : s.children) visit_place(p);
                        else
                            visit_place(s);
                    }
                } else if (r.is_constructor("play")) {
                    if (r.children.size() == 1) play_node = &r.children[0];
                    else ctx.reject(r, "play (unsupported form)");
                } else if (r.is_constructor("end")) {
                    for (const auto& e : r.children) {
                        if (e.is(NodeKind::Set))
                            for (const auto& er : e.children) end_nodes.push_back(&er);
                        else
                            end_nodes.push_back(&e);
                    }
                } else {
                    ctx.reject(r, detail::describe(r));
                }
            }
        } else {
            ctx.reject(c, detail::describe(c));
        }
    }

    if (play_node) spec.play = detail::parse_play_rule(*play_node, ctx);
    for (const LudemeNode* e : end_nodes) {
        auto rule = detail::parse_end_rule(*e, ctx);
        if (rule) spec.end_rules.push_back(*rule);
    }

    if (!ctx.unsupported.empty()) {
        std::string msg = "unsupported ludemes:";
        for (std::size_t i = 0; i < ctx.unsupported.size(); ++i)
            msg += " [" + ctx.unsupported[i] + " (line " +
                   std::to_string(ctx.lines[i]) + ")]";
        throw UnsupportedLudemeError(msg, ctx.unsupported);
    }

    if (spec.num_players < 1) throw SemanticError("missing or invalid (players n)");
    if (!board) throw SemanticError("missing board");
    spec.board = std::move(*board);
    if (!play_node) throw SemanticError("missing (play ...) rule");
    if (end_nodes.empty()) throw SemanticError("missing (end ...) rules");

    // Expand Each into one piece type per player; Neutral keeps index 0.
    for (const auto& p : declared) {
        if (p.owner == "Each") {
            for (int player = 1; player <= spec.num_players; ++player)
                spec.piece_types.push_back(
                    {p.name + std::to_string(player), p.name, player, p.rule});
        } else {
            spec.piece_types.push_back({p.name + "0", p.name, 0, p.rule});
        }
    }

    for (const auto& [piece_name, labels] : spec.start_placements) {
        if (spec.piece_type_index(piece_name) < 0)
            throw SemanticError("placement references unknown piece " + piece_name);
        for (const auto& label : labels)
            if (!spec.board.has_label(label))
                throw SemanticError("placement label " + label + " not on the board");
    }

    // Dangling piece references in play rules.
    auto check_rule = [&](const PlayRule& rule, auto&& self) -> void {
        if (rule.kind == PlayRule::Kind::Shoot &&
            spec.piece_type_index(rule.shoot_piece) < 0)
            throw SemanticError("shoot references unknown piece " + rule.shoot_piece);
        if (rule.kind == PlayRule::Kind::Roll && spec.dice_faces <= 0)
            throw SemanticError("roll move requires dice in the equipment");
        for (const auto& c : rule.children) self(c, self);
    };
    check_rule(spec.play, check_rule);
    for (const auto& p : spec.piece_types)
        if (p.move_rule) check_rule(*p.move_rule, check_rule);

    for (const auto& e : spec.end_rules)
        if (e.result == ResultKind::Loss && spec.num_players != 2)
            throw SemanticError("Loss results are only supported for two players");

    return spec;
}

}  // namespace ludecon
