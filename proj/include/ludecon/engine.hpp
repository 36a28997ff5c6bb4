// engine.hpp - game state, legal-move generation with per-move concept tags,
// atomic-action application and end-rule evaluation.
//
// A move is an ordered sequence of atomic actions. Every generated move
// carries exactly one movement-type tag (Add/Slide/Shoot/Hop/Step/Roll) plus
// any effect tags (captures, move-again). Move lists are canonically sorted
// by (from, to, generation index) so seeded playouts reproduce bit-exactly
// across platforms and worker counts.
#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "board.hpp"
#include "compiler.hpp"
#include "concepts.hpp"
#include "rng.hpp"

namespace ludecon {

struct EngineError : std::runtime_error {
    explicit EngineError(const std::string& m) : std::runtime_error(m) {}
};

// --------------------------------------------------------------------------
// Moves
// --------------------------------------------------------------------------

struct AtomicAction {
    enum class Kind { AddPiece, RemovePiece, MovePiece, SetMoveAgain, SetDiceResult };
    Kind kind = Kind::AddPiece;
    SiteId a = -1;  // AddPiece/RemovePiece site, MovePiece origin
    SiteId b = -1;  // MovePiece destination
    std::int16_t piece_type = -1;
    std::int8_t owner = 0;
    int value = 0;  // SetDiceResult
};

inline bool operator==(const AtomicAction& x, const AtomicAction& y) {
    return x.kind == y.kind && x.a == y.a && x.b == y.b &&
           x.piece_type == y.piece_type && x.owner == y.owner && x.value == y.value;
}

// Move tag bits; the first six are the movement types, one of which is set
// on every move.
enum MoveTag : int {
    TagAdd = 0, TagSlide, TagShoot, TagHop, TagStep, TagRoll,
    TagRemoveEffect, TagMoveAgain, TagCapture, TagHopCapture, TagReplacementCapture,
    kMoveTagCount
};
using TagMask = std::uint16_t;
constexpr TagMask kMovementTagMask = (1 << TagAdd) | (1 << TagSlide) | (1 << TagShoot) |
                                     (1 << TagHop) | (1 << TagStep) | (1 << TagRoll);

inline Concept tag_concept(MoveTag t) {
    switch (t) {
        case TagAdd: return Concept::AddMove;
        case TagSlide: return Concept::SlideMove;
        case TagShoot: return Concept::ShootMove;
        case TagHop: return Concept::HopMove;
        case TagStep: return Concept::StepMove;
        case TagRoll: return Concept::RollMove;
        case TagRemoveEffect: return Concept::RemoveEffect;
        case TagMoveAgain: return Concept::MoveAgain;
        case TagCapture: return Concept::Capture;
        case TagHopCapture: return Concept::HopCapture;
        case TagReplacementCapture: return Concept::ReplacementCapture;
        default: throw EngineError("bad move tag");
    }
}

struct Move {
    std::array<AtomicAction, 3> actions{};
    int action_count = 0;
    TagMask tags = 0;
    SiteId from = -1;
    SiteId to = -1;

    void push(AtomicAction a) { actions[action_count++] = a; }
    bool tagged(MoveTag t) const { return (tags >> t) & 1; }
    bool sets_move_again() const {
        for (int i = 0; i < action_count; ++i)
            if (actions[i].kind == AtomicAction::Kind::SetMoveAgain) return true;
        return false;
    }
};

inline bool operator==(const Move& x, const Move& y) {
    if (x.action_count != y.action_count || x.tags != y.tags || x.from != y.from ||
        x.to != y.to)
        return false;
    for (int i = 0; i < x.action_count; ++i)
        if (!(x.actions[i] == y.actions[i])) return false;
    return true;
}

using MoveList = std::vector<Move>;

// --------------------------------------------------------------------------
// State
// --------------------------------------------------------------------------

struct Occupant {
    std::int16_t piece_type = -1;
    std::int8_t owner = 0;
    bool present() const { return piece_type >= 0; }
};

inline bool operator==(const Occupant& a, const Occupant& b) {
    return a.piece_type == b.piece_type && a.owner == b.owner;
}

// Zobrist keys, shared between states of one game (built once per spec).
struct ZobristTable {
    std::vector<std::uint64_t> site_piece;  // [site * piece_types + type]
    std::vector<std::uint64_t> mover;       // [player], index 0 unused
    int piece_type_count = 0;

    std::uint64_t key(SiteId s, int piece_type) const {
        return site_piece[static_cast<std::size_t>(s) * piece_type_count + piece_type];
    }
};

inline std::shared_ptr<const ZobristTable> make_zobrist(const GameSpec& spec) {
    auto t = std::make_shared<ZobristTable>();
    t->piece_type_count = static_cast<int>(spec.piece_types.size());
    std::uint64_t x = 0x0DDB1A5E5BAD5EEDULL;
    t->site_piece.resize(static_cast<std::size_t>(spec.board.site_count()) *
                         std::max(1, t->piece_type_count));
    for (auto& k : t->site_piece) k = x = splitmix64(x);
    t->mover.resize(spec.num_players + 1);
    for (auto& k : t->mover) k = x = splitmix64(x);
    return t;
}

struct GameState {
    std::vector<Occupant> occupancy;  // indexed by SiteId
    int mover = 1;                    // player to move
    int last_mover = 0;               // player who made the last move (0 = none)
    long long move_number = 0;        // completed moves
    bool move_again_pending = false;
    SiteId last_to = -1;              // destination of the last piece movement
    std::uint64_t dice_seed = 0;

    // Repetition tracking, only populated when the game has (meta (no Repeat)).
    std::shared_ptr<const ZobristTable> zobrist;
    std::uint64_t base_hash = 0;  // occupancy only
    std::unordered_set<std::uint64_t> position_history;

    const Occupant& at(SiteId s) const { return occupancy[s]; }
    bool empty(SiteId s) const { return !occupancy[s].present(); }
};

inline int next_player(const GameSpec& spec, int player) {
    return player % spec.num_players + 1;
}
inline int prev_player(const GameSpec& spec, int player) {
    return (player + spec.num_players - 2) % spec.num_players + 1;
}

inline GameState initial_state(const GameSpec& spec, std::uint64_t seed) {
    GameState st;
    st.occupancy.assign(spec.board.site_count(), Occupant{});
    st.dice_seed = derive_seed(seed, 0x7D1CE);
    if (spec.meta_no_repetition) st.zobrist = make_zobrist(spec);
    for (const auto& [piece_name, labels] : spec.start_placements) {
        int type = spec.piece_type_index(piece_name);
        const PieceType& pt = spec.piece_types[type];
        for (const auto& label : labels) {
            SiteId s = spec.board.site(label);
            st.occupancy[s] = {static_cast<std::int16_t>(type),
                               static_cast<std::int8_t>(pt.owner)};
            if (st.zobrist) st.base_hash ^= st.zobrist->key(s, type);
        }
    }
    if (st.zobrist) st.position_history.insert(st.base_hash ^ st.zobrist->mover[st.mover]);
    return st;
}

// --------------------------------------------------------------------------
// Move generation
// --------------------------------------------------------------------------

namespace detail {

inline bool enemy_of(const Occupant& occ, int player) {
    return occ.present() && occ.owner != 0 && occ.owner != player;
}

inline int mover_add_piece_type(const GameSpec& spec, int player) {
    for (std::size_t i = 0; i < spec.piece_types.size(); ++i)
        if (spec.piece_types[i].owner == player) return static_cast<int>(i);
    throw EngineError("player " + std::to_string(player) + " owns no piece type");
}

inline int dice_roll(const GameSpec& spec, const GameState& st) {
    return 1 + static_cast<int>(counter_draw(st.dice_seed,
                                             static_cast<std::uint64_t>(st.move_number),
                                             static_cast<std::uint32_t>(spec.dice_faces)));
}

inline void gen_piece_rule(const GameSpec& spec, const GameState& st, int player,
                           const PlayRule& rule, SiteId from, MoveList& out);

inline void gen_rule(const GameSpec& spec, const GameState& st, int player,
                     const PlayRule& rule, MoveList& out) {
    const BoardGraph& b = spec.board;
    switch (rule.kind) {
        case PlayRule::Kind::Add: {
            int type = mover_add_piece_type(spec, player);
            for (SiteId s = 0; s < b.site_count(); ++s) {
                if (!st.empty(s)) continue;
                Move m;
                m.push({AtomicAction::Kind::AddPiece, s, -1,
                        static_cast<std::int16_t>(type),
                        static_cast<std::int8_t>(player), 0});
                m.tags = 1 << TagAdd;
                if (rule.move_again) {
                    m.push({AtomicAction::Kind::SetMoveAgain, -1, -1, -1, 0, 0});
                    m.tags |= 1 << TagMoveAgain;
                }
                m.to = s;
                out.push_back(m);
            }
            return;
        }
        case PlayRule::Kind::Slide:
        case PlayRule::Kind::Step:
        case PlayRule::Kind::Hop:
            for (SiteId s = 0; s < b.site_count(); ++s)
                if (st.at(s).present() && st.at(s).owner == player)
                    gen_piece_rule(spec, st, player, rule, s, out);
            return;
        case PlayRule::Kind::ForEachPiece:
            for (SiteId s = 0; s < b.site_count(); ++s) {
                const Occupant& occ = st.at(s);
                if (!occ.present() || occ.owner != player) continue;
                const PieceType& pt = spec.piece_types[occ.piece_type];
                if (pt.move_rule) gen_piece_rule(spec, st, player, *pt.move_rule, s, out);
            }
            return;
        case PlayRule::Kind::Shoot: {
            if (st.last_to < 0) return;
            int type = spec.piece_type_index(rule.shoot_piece);
            int owner = spec.piece_types[type].owner;
            for (Dir d : b.directions(DirectionClass::All)) {
                SiteId t = b.neighbor(st.last_to, d);
                while (t >= 0 && st.empty(t)) {
                    Move m;
                    m.push({AtomicAction::Kind::AddPiece, t, -1,
                            static_cast<std::int16_t>(type),
                            static_cast<std::int8_t>(owner), 0});
                    m.tags = 1 << TagShoot;
                    m.from = st.last_to;
                    m.to = t;
                    out.push_back(m);
                    t = b.neighbor(t, d);
                }
            }
            return;
        }
        case PlayRule::Kind::Roll: {
            int v = dice_roll(spec, st);
            const SiteId last = b.site_count() - 1;
            for (SiteId s = 0; s < b.site_count(); ++s) {
                const Occupant& occ = st.at(s);
                if (!occ.present() || occ.owner != player) continue;
                SiteId dest = std::min<SiteId>(s + v, last);
                Move m;
                m.push({AtomicAction::Kind::SetDiceResult, -1, -1, -1, 0, v});
                m.tags = 1 << TagRoll;
                m.from = s;
                if (dest != s && st.empty(dest)) {
                    m.push({AtomicAction::Kind::MovePiece, s, dest, occ.piece_type,
                            occ.owner, 0});
                    m.to = dest;
                }
                out.push_back(m);
            }
            return;
        }
        case PlayRule::Kind::IfEvenMoveCount:
            gen_rule(spec, st, player, rule.children[st.move_number % 2 == 0 ? 0 : 1], out);
            return;
        case PlayRule::Kind::Or:
            for (const auto& c : rule.children) gen_rule(spec, st, player, c, out);
            return;
    }
}

inline void gen_piece_rule(const GameSpec& spec, const GameState& st, int player,
                           const PlayRule& rule, SiteId from, MoveList& out) {
    const BoardGraph& b = spec.board;
    const Occupant piece = st.at(from);
    switch (rule.kind) {
        case PlayRule::Kind::Slide:
            for (Dir d : b.directions(DirectionClass::All)) {
                SiteId t = b.neighbor(from, d);
                while (t >= 0 && st.empty(t)) {
                    Move m;
                    m.push({AtomicAction::Kind::MovePiece, from, t, piece.piece_type,
                            piece.owner, 0});
                    m.tags = 1 << TagSlide;
                    if (rule.move_again) {
                        m.push({AtomicAction::Kind::SetMoveAgain, -1, -1, -1, 0, 0});
                        m.tags |= 1 << TagMoveAgain;
                    }
                    m.from = from;
                    m.to = t;
                    out.push_back(m);
                    t = b.neighbor(t, d);
                }
            }
            return;
        case PlayRule::Kind::Step:
            for (Dir d : b.directions(DirectionClass::All)) {
                SiteId t = b.neighbor(from, d);
                if (t < 0) continue;
                if (st.empty(t)) {
                    Move m;
                    m.push({AtomicAction::Kind::MovePiece, from, t, piece.piece_type,
                            piece.owner, 0});
                    m.tags = 1 << TagStep;
                    if (rule.move_again) {
                        m.push({AtomicAction::Kind::SetMoveAgain, -1, -1, -1, 0, 0});
                        m.tags |= 1 << TagMoveAgain;
                    }
                    m.from = from;
                    m.to = t;
                    out.push_back(m);
                } else if (rule.step_capture && enemy_of(st.at(t), player)) {
                    Move m;
                    m.push({AtomicAction::Kind::RemovePiece, t, -1, st.at(t).piece_type,
                            st.at(t).owner, 0});
                    m.push({AtomicAction::Kind::MovePiece, from, t, piece.piece_type,
                            piece.owner, 0});
                    m.tags = (1 << TagStep) | (1 << TagRemoveEffect) | (1 << TagCapture) |
                             (1 << TagReplacementCapture);
                    m.from = from;
                    m.to = t;
                    out.push_back(m);
                }
            }
            return;
        case PlayRule::Kind::Hop:
            for (Dir d : b.directions(DirectionClass::All)) {
                SiteId over = b.neighbor(from, d);
                if (over < 0 || st.empty(over)) continue;
                if (rule.hop_over_enemy && !enemy_of(st.at(over), player)) continue;
                SiteId land = b.neighbor(over, d);
                if (land < 0 || !st.empty(land)) continue;
                Move m;
                if (rule.hop_remove) {
                    m.push({AtomicAction::Kind::RemovePiece, over, -1,
                            st.at(over).piece_type, st.at(over).owner, 0});
                    m.tags = (1 << TagHop) | (1 << TagRemoveEffect) | (1 << TagCapture) |
                             (1 << TagHopCapture);
                } else {
                    m.tags = 1 << TagHop;
                }
                m.push({AtomicAction::Kind::MovePiece, from, land, piece.piece_type,
                        piece.owner, 0});
                if (rule.move_again) {
                    m.push({AtomicAction::Kind::SetMoveAgain, -1, -1, -1, 0, 0});
                    m.tags |= 1 << TagMoveAgain;
                }
                m.from = from;
                m.to = land;
                out.push_back(m);
            }
            return;
        case PlayRule::Kind::Or:
            for (const auto& c : rule.children) gen_piece_rule(spec, st, player, c, from, out);
            return;
        default:
            // Add/Shoot/Roll/IfEven are position-independent rules.
            gen_rule(spec, st, player, rule, out);
            return;
    }
}

// Occupancy hash after applying the move, combined with the player to move.
inline std::uint64_t hash_after(const GameSpec& spec, const GameState& st, const Move& m) {
    const ZobristTable& z = *st.zobrist;
    std::uint64_t h = st.base_hash;
    // Tiny overlay for the handful of sites a move touches.
    std::array<std::pair<SiteId, std::int16_t>, 3> overlay{};
    int overlay_count = 0;
    auto type_at = [&](SiteId s) -> std::int16_t {
        for (int i = 0; i < overlay_count; ++i)
            if (overlay[i].first == s) return overlay[i].second;
        return st.at(s).piece_type;
    };
    auto set_type = [&](SiteId s, std::int16_t t) {
        for (int i = 0; i < overlay_count; ++i)
            if (overlay[i].first == s) {
                overlay[i].second = t;
                return;
            }
        overlay[overlay_count++] = {s, t};
    };
    bool again = false;
    for (int i = 0; i < m.action_count; ++i) {
        const AtomicAction& a = m.actions[i];
        switch (a.kind) {
            case AtomicAction::Kind::AddPiece:
                h ^= z.key(a.a, a.piece_type);
                set_type(a.a, a.piece_type);
                break;
            case AtomicAction::Kind::RemovePiece:
                h ^= z.key(a.a, type_at(a.a));
                set_type(a.a, -1);
                break;
            case AtomicAction::Kind::MovePiece: {
                std::int16_t t = type_at(a.a);
                h ^= z.key(a.a, t);
                h ^= z.key(a.b, t);
                set_type(a.a, -1);
                set_type(a.b, t);
                break;
            }
            case AtomicAction::Kind::SetMoveAgain: again = true; break;
            case AtomicAction::Kind::SetDiceResult: break;
        }
    }
    int mover_after = again ? st.mover : next_player(spec, st.mover);
    return h ^ z.mover[mover_after];
}

inline MoveList generate(const GameSpec& spec, const GameState& st, int player) {
    MoveList out;
    gen_rule(spec, st, player, spec.play, out);
    if (spec.meta_no_repetition && st.zobrist) {
        MoveList kept;
        kept.reserve(out.size());
        for (const Move& m : out)
            if (!st.position_history.count(hash_after(spec, st, m))) kept.push_back(m);
        out = std::move(kept);
    }
    std::stable_sort(out.begin(), out.end(), [](const Move& x, const Move& y) {
        if (x.from != y.from) return x.from < y.from;
        return x.to < y.to;
    });
    return out;
}

}  // namespace detail

// --------------------------------------------------------------------------
// Outcome evaluation
// --------------------------------------------------------------------------

struct Outcome {
    enum class Kind { Win, Draw };
    Kind kind = Kind::Draw;
    int winner = 0;  // meaningful for Win
    std::vector<Concept> end_tags;

    bool win() const { return kind == Kind::Win; }
    bool has_tag(Concept c) const {
        for (Concept t : end_tags)
            if (t == c) return true;
        return false;
    }
};

namespace detail {

// True when the player's stones enclose at least one cell: some non-player
// cell cannot reach the board boundary through non-player cells, or an
// interior player stone is surrounded entirely by player stones (a solid
// flower counts as a ring).
inline bool enclosure_exists(const BoardGraph& b, const GameState& st, int player,
                             SiteId ignore = -1) {
    const int n = b.site_count();
    auto is_own = [&](SiteId s) {
        return s != ignore && st.at(s).present() && st.at(s).owner == player;
    };
    std::vector<char> reached(n, 0);
    std::vector<SiteId> stack;
    std::vector<char> on_boundary(n, 0);
    for (SiteId s : b.boundary()) on_boundary[s] = 1;
    for (SiteId s = 0; s < n; ++s)
        if (on_boundary[s] && !is_own(s)) {
            reached[s] = 1;
            stack.push_back(s);
        }
    while (!stack.empty()) {
        SiteId s = stack.back();
        stack.pop_back();
        for (SiteId t : b.neighbors(s))
            if (!reached[t] && !is_own(t)) {
                reached[t] = 1;
                stack.push_back(t);
            }
    }
    for (SiteId s = 0; s < n; ++s) {
        if (!is_own(s)) {
            if (!reached[s]) return true;  // enclosed non-player cell
        } else if (!on_boundary[s]) {
            bool escape = false;
            for (SiteId t : b.neighbors(s)) escape = escape || (!is_own(t) && reached[t]);
            if (!escape) return true;  // interior stone walled in by own stones
        }
    }
    return false;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Union-find over the player's pieces; true when one group touches at least
// `needed` of the given regions.
inline bool connected_regions(const BoardGraph& b, const GameState& st, int player,
                              const std::vector<std::vector<SiteId>>& regions, int needed) {
    const int n = b.site_count();
    UnionFind uf(n);
    for (SiteId s = 0; s < n; ++s) {
        if (!st.at(s).present() || st.at(s).owner != player) continue;
        for (SiteId t : b.neighbors(s))
            if (t < s && st.at(t).present() && st.at(t).owner == player) uf.unite(s, t);
    }
    std::vector<std::uint32_t> touches(n, 0);
    for (std::size_t r = 0; r < regions.size(); ++r)
        for (SiteId s : regions[r])
            if (st.at(s).present() && st.at(s).owner == player)
                touches[uf.find(s)] |= 1u << r;
    for (SiteId s = 0; s < n; ++s) {
        int count = 0;
        for (std::uint32_t bits = touches[s]; bits; bits &= bits - 1) ++count;
        if (count >= needed) return true;
    }
    return false;
}

inline std::vector<SiteId> resolve_site_set(const GameSpec& spec, const GameState& st,
                                            int player, const SiteSetSpec& set) {
    std::vector<SiteId> out;
    switch (set.kind) {
        case SiteSetSpec::Kind::Empty:
            for (SiteId s = 0; s < spec.board.site_count(); ++s)
                if (st.empty(s)) out.push_back(s);
            break;
        case SiteSetSpec::Kind::Enemy:
            for (SiteId s = 0; s < spec.board.site_count(); ++s)
                if (enemy_of(st.at(s), player)) out.push_back(s);
            break;
        case SiteSetSpec::Kind::End:
            out.push_back(spec.board.site_count() - 1);
            break;
        case SiteSetSpec::Kind::Corners:
            out = spec.board.corners;
            break;
    }
    return out;
}

struct OutcomeEval {
    const GameSpec& spec;
    const GameState& st;
    int player;  // the player who made the last move
    std::optional<int> mover_move_count_hint;  // |legal moves| of st.mover

    int moves_available(int who) {
        if (who == st.mover && mover_move_count_hint) return *mover_move_count_hint;
        return static_cast<int>(generate(spec, st, who).size());
    }

    bool line_through_last(int length) {
        SiteId s = st.last_to;
        if (s < 0) return false;
        if (!st.at(s).present() || st.at(s).owner != player) return false;
        const BoardGraph& b = spec.board;
        for (Dir axis : b.line_axes()) {
            int run = 1;
            for (Dir d : {axis, opposite(axis)}) {
                SiteId t = b.neighbor(s, d);
                while (t >= 0 && st.at(t).present() && st.at(t).owner == player) {
                    ++run;
                    t = b.neighbor(t, d);
                }
            }
            if (run >= length) return true;
        }
        return false;
    }

    bool eval(const Condition& c, std::vector<Concept>& tags) {
        switch (c.kind) {
            case Condition::Kind::NoMovesNext:
                if (moves_available(next_player(spec, player)) == 0) {
                    tags.push_back(Concept::NoMovesEnd);
                    return true;
                }
                return false;
            case Condition::Kind::NoMovesMover:
                if (moves_available(player) == 0) {
                    tags.push_back(Concept::NoMovesEnd);
                    return true;
                }
                return false;
            case Condition::Kind::Line:
                if (line_through_last(c.line_length)) {
                    tags.push_back(Concept::LineEnd);
                    return true;
                }
                return false;
            case Condition::Kind::Loop:
                if (is_loop_win()) {
                    tags.push_back(Concept::LoopEnd);
                    return true;
                }
                return false;
            case Condition::Kind::ConnectedRegions: {
                std::vector<std::vector<SiteId>> regions;
                if (c.regions == Condition::RegionSet::Corners) {
                    for (SiteId corner : spec.board.corners) regions.push_back({corner});
                } else {
                    for (const auto& name : spec.board.side_names())
                        regions.push_back(c.regions == Condition::RegionSet::Sides
                                              ? spec.board.side_inclusive(name)
                                              : spec.board.sides.at(name));
                }
                if (connected_regions(spec.board, st, player, regions, c.connect_count)) {
                    tags.push_back(Concept::ConnectionEnd);
                    return true;
                }
                return false;
            }
            case Condition::Kind::ConnectedOppositeSides: {
                // Odd players connect N-S, even players E-W.
                const char* a = player % 2 == 1 ? "N" : "E";
                const char* bn = player % 2 == 1 ? "S" : "W";
                std::vector<std::vector<SiteId>> regions = {
                    spec.board.side_inclusive(a), spec.board.side_inclusive(bn)};
                if (connected_regions(spec.board, st, player, regions, 2)) {
                    tags.push_back(Concept::ConnectionEnd);
                    return true;
                }
                return false;
            }
            case Condition::Kind::Reach: {
                for (SiteId s : resolve_site_set(spec, st, player, c.reach))
                    if (st.at(s).present() && st.at(s).owner == player) {
                        tags.push_back(Concept::ReachEnd);
                        return true;
                    }
                return false;
            }
            case Condition::Kind::Or:
                for (const auto& child : c.children)
                    if (eval(child, tags)) return true;  // first satisfied disjunct tags
                return false;
            case Condition::Kind::And: {
                std::vector<Concept> collected;
                for (const auto& child : c.children)
                    if (!eval(child, collected)) return false;
                for (Concept t : collected) tags.push_back(t);
                return true;
            }
            case Condition::Kind::Not: {
                std::vector<Concept> ignored;
                return !eval(c.children[0], ignored);
            }
        }
        return false;
    }

    bool is_loop_win() {
        if (st.last_to < 0) return false;
        if (!st.at(st.last_to).present() || st.at(st.last_to).owner != player) return false;
        if (!enclosure_exists(spec.board, st, player)) return false;
        return !enclosure_exists(spec.board, st, player, st.last_to);
    }
};

}  // namespace detail

// True iff the player's pieces contain a ring through last_placed enclosing
// at least one cell (empty or occupied by either player).
inline bool is_loop(const GameSpec& spec, const GameState& st, int player,
                    SiteId last_placed) {
    if (last_placed < 0 || !st.at(last_placed).present() ||
        st.at(last_placed).owner != player)
        return false;
    return detail::enclosure_exists(spec.board, st, player) &&
           !detail::enclosure_exists(spec.board, st, player, last_placed);
}

// End rules run only between full turns: never before the first move and
// never while a move-again is pending, so "no Moves" conditions always refer
// to a whole turn. The timing choice is isolated here.
inline bool end_rules_active(const GameState& st) {
    return st.move_number > 0 && !st.move_again_pending;
}

// End rules are evaluated in declaration order after each completed move.
// When no rule fires and the player to move has no legal move, the game is
// a draw.
inline std::optional<Outcome> outcome_with_hint(const GameSpec& spec, const GameState& st,
                                                std::optional<int> mover_moves) {
    if (!end_rules_active(st)) return std::nullopt;
    detail::OutcomeEval eval{spec, st, st.last_mover, mover_moves};
    for (const EndRule& rule : spec.end_rules) {
        std::vector<Concept> tags;
        if (!eval.eval(rule.condition, tags)) continue;
        int subject = st.last_mover;
        if (rule.who == ResultWho::Next) subject = next_player(spec, st.last_mover);
        if (rule.who == ResultWho::Prev) subject = prev_player(spec, st.last_mover);
        Outcome out;
        out.end_tags = std::move(tags);
        switch (rule.result) {
            case ResultKind::Win:
                out.kind = Outcome::Kind::Win;
                out.winner = subject;
                break;
            case ResultKind::Loss:
                out.kind = Outcome::Kind::Win;
                out.winner = next_player(spec, subject);
                break;
            case ResultKind::Draw:
                out.kind = Outcome::Kind::Draw;
                out.end_tags.push_back(Concept::DrawPossible);
                break;
        }
        return out;
    }
    if (eval.moves_available(st.mover) == 0) {
        Outcome out;
        out.kind = Outcome::Kind::Draw;
        out.end_tags = {Concept::DrawPossible};
        return out;
    }
    return std::nullopt;
}

inline std::optional<Outcome> outcome(const GameSpec& spec, const GameState& st) {
    return outcome_with_hint(spec, st, std::nullopt);
}

inline MoveList legal_moves(const GameSpec& spec, const GameState& st) {
    MoveList moves = detail::generate(spec, st, st.mover);
    if (outcome_with_hint(spec, st, static_cast<int>(moves.size())))
        throw EngineError("TerminalState: an end rule already fired");
    return moves;
}

inline GameState apply(const GameSpec& spec, const GameState& st, const Move& move) {
    GameState ns = st;
    bool again = false;
    for (int i = 0; i < move.action_count; ++i) {
        const AtomicAction& a = move.actions[i];
        switch (a.kind) {
            case AtomicAction::Kind::AddPiece:
                ns.occupancy[a.a] = {a.piece_type, a.owner};
                if (ns.zobrist) ns.base_hash ^= ns.zobrist->key(a.a, a.piece_type);
                ns.last_to = a.a;
                break;
            case AtomicAction::Kind::RemovePiece:
                if (ns.zobrist)
                    ns.base_hash ^= ns.zobrist->key(a.a, ns.occupancy[a.a].piece_type);
                ns.occupancy[a.a] = Occupant{};
                break;
            case AtomicAction::Kind::MovePiece: {
                Occupant moving = ns.occupancy[a.a];
                if (ns.zobrist) {
                    ns.base_hash ^= ns.zobrist->key(a.a, moving.piece_type);
                    ns.base_hash ^= ns.zobrist->key(a.b, moving.piece_type);
                }
                ns.occupancy[a.a] = Occupant{};
                ns.occupancy[a.b] = moving;
                ns.last_to = a.b;
                break;
            }
            case AtomicAction::Kind::SetMoveAgain:
                again = true;
                break;
            case AtomicAction::Kind::SetDiceResult:
                break;
        }
    }
    ns.move_number = st.move_number + 1;
    ns.last_mover = st.mover;
    ns.move_again_pending = again;
    if (!again) ns.mover = next_player(spec, st.mover);
    if (ns.zobrist) ns.position_history.insert(ns.base_hash ^ ns.zobrist->mover[ns.mover]);
    return ns;
}

// Applies after verifying membership in the legal move list.
inline GameState apply_checked(const GameSpec& spec, const GameState& st, const Move& move) {
    for (const Move& m : legal_moves(spec, st))
        if (m == move) return apply(spec, st, move);
    throw EngineError("IllegalMove: move is not in the legal move list");
}

// One line per move for playout traces: moveNumber, mover, from->to, actions
// (verbose), tag names.
inline std::string describe_move(const GameSpec& spec, const Move& m, bool verbose) {
    auto label = [&](SiteId s) {
        return s < 0 ? std::string("-") : spec.board.labels[s];
    };
    std::string out = label(m.from) + "->" + label(m.to);
    if (verbose) {
        out += " [";
        for (int i = 0; i < m.action_count; ++i) {
            if (i) out += ", ";
            const AtomicAction& a = m.actions[i];
            switch (a.kind) {
                case AtomicAction::Kind::AddPiece:
                    out += "add " + spec.piece_types[a.piece_type].name + "@" + label(a.a);
                    break;
                case AtomicAction::Kind::RemovePiece:
                    out += "remove @" + label(a.a);
                    break;
                case AtomicAction::Kind::MovePiece:
                    out += "move " + label(a.a) + "->" + label(a.b);
                    break;
                case AtomicAction::Kind::SetMoveAgain:
                    out += "moveAgain";
                    break;
                case AtomicAction::Kind::SetDiceResult:
                    out += "dice=" + std::to_string(a.value);
                    break;
            }
        }
        out += "]";
    }
    out += " ";
    bool first = true;
    for (int t = 0; t < kMoveTagCount; ++t) {
        if (!m.tagged(static_cast<MoveTag>(t))) continue;
        if (!first) out += ",";
        first = false;
        out += concept_def(tag_concept(static_cast<MoveTag>(t))).name;
    }
    return out;
}

}  // namespace ludecon
