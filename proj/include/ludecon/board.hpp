// board.hpp - board graphs: playable sites with direction-labelled adjacency,
// side regions, corners and coordinate labels.
//
// Shapes: square/rectangular grids with 8-direction adjacency, hexagonal
// boards (hexagon or rhombus outline) with 6-direction adjacency, and cyclic
// tracks with 2-direction adjacency (race and sowing games). Side regions are
// stored exclusive of corners; side_inclusive() adds the adjacent corners for
// games that count them.
#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <utility>
#include <stdexcept>
#include <string>
#include <vector>

namespace ludecon {

using SiteId = int;  // 0-based index into the board's site list

enum class Tiling { Square, Hex, Track };
enum class BoardShape { Square, Rectangle, Hexagon, Rhombus, Track };

// Compass directions. Square boards use all 8 slots; hex boards use the six
// slots E, W, NE, NW, SE, SW; tracks use E (forward) and W (backward).
enum Dir : int { DirN = 0, DirNE = 1, DirE = 2, DirSE = 3, DirS = 4, DirSW = 5, DirW = 6, DirNW = 7 };
constexpr int kDirSlots = 8;

inline Dir opposite(Dir d) { return static_cast<Dir>((d + 4) % 8); }

inline const char* dir_name(Dir d) {
    static const char* names[kDirSlots] = {"N", "NE", "E", "SE", "S", "SW", "W", "NW"};
    return names[d];
}

enum class DirectionClass { Orthogonal, Diagonal, All };

struct BoardError : std::runtime_error {
    explicit BoardError(const std::string& m) : std::runtime_error(m) {}
};

struct BoardGraph {
    Tiling tiling = Tiling::Square;
    BoardShape shape = BoardShape::Square;
    int size_a = 0;  // side length (cols for rectangles)
    int size_b = 0;  // rows for rectangles, otherwise == size_a

    std::vector<std::string> labels;            // SiteId -> coordinate label
    std::map<std::string, SiteId> label_index;  // coordinate label -> SiteId
    std::vector<std::array<SiteId, kDirSlots>> adjacency;  // -1 where absent
    std::vector<std::vector<SiteId>> neighbor_list;        // deduplicated
    std::vector<Dir> dirs_in_use;                          // canonical order
    std::vector<SiteId> corners;
    std::map<std::string, std::vector<SiteId>> sides;  // exclusive of corners
    std::map<std::string, std::vector<SiteId>> side_corner_map;

    int site_count() const { return static_cast<int>(labels.size()); }

    SiteId site(const std::string& label) const {
        auto it = label_index.find(label);
        if (it == label_index.end()) throw BoardError("unknown coordinate " + label);
        return it->second;
    }
    bool has_label(const std::string& label) const { return label_index.count(label) != 0; }

    SiteId neighbor(SiteId s, Dir d) const { return adjacency[s][d]; }
    const std::vector<SiteId>& neighbors(SiteId s) const { return neighbor_list[s]; }

    std::vector<Dir> directions(DirectionClass cls) const {
        switch (cls) {
            case DirectionClass::All:
                return dirs_in_use;
            case DirectionClass::Orthogonal:
                if (tiling == Tiling::Square) return {DirN, DirE, DirS, DirW};
                return dirs_in_use;  // hex/track adjacency is all orthogonal
            case DirectionClass::Diagonal:
                if (tiling != Tiling::Square)
                    throw BoardError("diagonal directions undefined on this tiling");
                return {DirNE, DirSE, DirSW, DirNW};
        }
        return dirs_in_use;
    }

    // Axes for line detection: one direction per opposite pair.
    std::vector<Dir> line_axes() const {
        switch (tiling) {
            case Tiling::Square: return {DirN, DirNE, DirE, DirSE};
            case Tiling::Hex: return {DirE, DirNE, DirSE};
            case Tiling::Track: return {DirE};
        }
        return {};
    }

    std::vector<SiteId> side_inclusive(const std::string& name) const {
        auto it = sides.find(name);
        if (it == sides.end()) throw BoardError("unknown side " + name);
        std::vector<SiteId> out = it->second;
        auto ct = side_corner_map.find(name);
        if (ct != side_corner_map.end())
            out.insert(out.end(), ct->second.begin(), ct->second.end());
        return out;
    }

    std::vector<std::string> side_names() const {
        std::vector<std::string> out;
        for (const auto& [name, _] : sides) out.push_back(name);
        return out;
    }

    // Sites with at least one missing neighbor direction.
    std::vector<SiteId> boundary() const {
        std::vector<SiteId> out;
        for (SiteId s = 0; s < site_count(); ++s)
            for (Dir d : dirs_in_use)
                if (adjacency[s][d] < 0) {
                    out.push_back(s);
                    break;
                }
        return out;
    }
};

inline double mean_degree(const BoardGraph& b) {
    if (b.site_count() == 0) return 0.0;
    long long total = 0;
    for (const auto& nb : b.neighbor_list) total += static_cast<long long>(nb.size());
    return static_cast<double>(total) / b.site_count();
}

namespace detail {

inline std::string column_letters(int c) {
    std::string out;
    do {
        out.insert(out.begin(), static_cast<char>('A' + c % 26));
        c = c / 26 - 1;
    } while (c >= 0);
    return out;
}

inline void finish_board(BoardGraph& b) {
    b.neighbor_list.assign(b.site_count(), {});
    for (SiteId s = 0; s < b.site_count(); ++s) {
        for (Dir d : b.dirs_in_use) {
            SiteId t = b.adjacency[s][d];
            if (t < 0) continue;
            auto& nb = b.neighbor_list[s];
            bool seen = false;
            for (SiteId u : nb) seen = seen || u == t;
            if (!seen) nb.push_back(t);
        }
    }
    for (SiteId s = 0; s < b.site_count(); ++s) b.label_index[b.labels[s]] = s;
}

inline void add_unique(std::vector<SiteId>& v, SiteId s) {
    for (SiteId u : v)
        if (u == s) return;
    v.push_back(s);
}

}  // namespace detail

// Rectangular grid of square cells, 8-direction adjacency, labels column
// letter + 1-based row number with A1 at the bottom-left.
inline BoardGraph build_rectangle(int cols, int rows) {
    if (cols < 1 || rows < 1) throw BoardError("InvalidSize: rectangle dimensions must be >= 1");
    BoardGraph b;
    b.tiling = Tiling::Square;
    b.shape = cols == rows ? BoardShape::Square : BoardShape::Rectangle;
    b.size_a = cols;
    b.size_b = rows;
    b.dirs_in_use = {DirN, DirNE, DirE, DirSE, DirS, DirSW, DirW, DirNW};

    auto id = [cols](int c, int r) { return r * cols + c; };
    b.labels.resize(static_cast<std::size_t>(cols) * rows);
    b.adjacency.assign(b.labels.size(), {-1, -1, -1, -1, -1, -1, -1, -1});
    static const int dc[kDirSlots] = {0, 1, 1, 1, 0, -1, -1, -1};
    static const int dr[kDirSlots] = {1, 1, 0, -1, -1, -1, 0, 1};
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            SiteId s = id(c, r);
            b.labels[s] = detail::column_letters(c) + std::to_string(r + 1);
            for (int d = 0; d < kDirSlots; ++d) {
                int nc = c + dc[d], nr = r + dr[d];
                if (nc >= 0 && nc < cols && nr >= 0 && nr < rows)
                    b.adjacency[s][d] = id(nc, nr);
            }
        }
    }
    detail::add_unique(b.corners, id(0, 0));
    detail::add_unique(b.corners, id(cols - 1, 0));
    detail::add_unique(b.corners, id(0, rows - 1));
    detail::add_unique(b.corners, id(cols - 1, rows - 1));
    b.sides = {{"N", {}}, {"S", {}}, {"E", {}}, {"W", {}}};
    for (int c = 1; c < cols - 1; ++c) {
        b.sides["S"].push_back(id(c, 0));
        b.sides["N"].push_back(id(c, rows - 1));
    }
    for (int r = 1; r < rows - 1; ++r) {
        b.sides["W"].push_back(id(0, r));
        b.sides["E"].push_back(id(cols - 1, r));
    }
    detail::add_unique(b.side_corner_map["S"], id(0, 0));
    detail::add_unique(b.side_corner_map["S"], id(cols - 1, 0));
    detail::add_unique(b.side_corner_map["N"], id(0, rows - 1));
    detail::add_unique(b.side_corner_map["N"], id(cols - 1, rows - 1));
    detail::add_unique(b.side_corner_map["W"], id(0, 0));
    detail::add_unique(b.side_corner_map["W"], id(0, rows - 1));
    detail::add_unique(b.side_corner_map["E"], id(cols - 1, 0));
    detail::add_unique(b.side_corner_map["E"], id(cols - 1, rows - 1));
    detail::finish_board(b);
    return b;
}

inline BoardGraph build_square(int n) { return build_rectangle(n, n); }

namespace detail {

// Axial hex direction deltas, indexed by Dir slot.
inline bool hex_delta(Dir d, int& dq, int& dr) {
    switch (d) {
        case DirE: dq = 1; dr = 0; return true;
        case DirW: dq = -1; dr = 0; return true;
        case DirNE: dq = 1; dr = -1; return true;
        case DirSW: dq = -1; dr = 1; return true;
        case DirNW: dq = 0; dr = -1; return true;
        case DirSE: dq = 0; dr = 1; return true;
        default: return false;
    }
}

inline const std::vector<Dir>& hex_dirs() {
    static const std::vector<Dir> dirs = {DirNE, DirE, DirSE, DirSW, DirW, DirNW};
    return dirs;
}

}  // namespace detail

// Hexagon-shaped board of hexagonal cells with side length n; 3n^2-3n+1
// sites, 6 corners, 6 side regions of n-2 sites each (corners excluded).
inline BoardGraph build_hex_hexagon(int n) {
    if (n < 1) throw BoardError("InvalidSize: hexagon side must be >= 1");
    BoardGraph b;
    b.tiling = Tiling::Hex;
    b.shape = BoardShape::Hexagon;
    b.size_a = b.size_b = n;
    b.dirs_in_use = detail::hex_dirs();

    const int m = n - 1;
    std::map<std::pair<int, int>, SiteId> index;  // (q, r) -> site
    // Rows bottom (r = m) to top (r = -m); row number n - r, letters restart at A.
    for (int r = m; r >= -m; --r) {
        int qlo = std::max(-m, -r - m);
        int qhi = std::min(m, -r + m);
        for (int q = qlo; q <= qhi; ++q) {
            SiteId s = static_cast<SiteId>(b.labels.size());
            index[{q, r}] = s;
            b.labels.push_back(detail::column_letters(q - qlo) + std::to_string(n - r));
        }
    }
    b.adjacency.assign(b.labels.size(), {-1, -1, -1, -1, -1, -1, -1, -1});
    for (const auto& [qr, s] : index) {
        for (Dir d : b.dirs_in_use) {
            int dq = 0, dr = 0;
            detail::hex_delta(d, dq, dr);
            auto it = index.find({qr.first + dq, qr.second + dr});
            if (it != index.end()) b.adjacency[s][d] = it->second;
        }
    }
    // Corners sit at distance m along each of the six directions.
    for (Dir d : b.dirs_in_use) {
        int dq = 0, dr = 0;
        detail::hex_delta(d, dq, dr);
        detail::add_unique(b.corners, index.at({dq * m, dr * m}));
    }
    // Sides: boundary cells with exactly one extremal cube coordinate.
    b.sides = {{"N", {}}, {"NE", {}}, {"SE", {}}, {"S", {}}, {"SW", {}}, {"NW", {}}};
    auto is_corner = [&](SiteId s) {
        for (SiteId c : b.corners)
            if (c == s) return true;
        return false;
    };
    for (const auto& [qr, s] : index) {
        if (is_corner(s)) continue;
        int q = qr.first, r = qr.second, w = -q - r;
        if (r == -m) b.sides["N"].push_back(s);
        else if (r == m) b.sides["S"].push_back(s);
        else if (q == m) b.sides["NE"].push_back(s);
        else if (q == -m) b.sides["SW"].push_back(s);
        else if (w == -m) b.sides["SE"].push_back(s);
        else if (w == m) b.sides["NW"].push_back(s);
    }
    {
        auto at = [&](int q, int r) { return index.at({q, r}); };
        auto pair = [&](const char* name, SiteId a, SiteId c) {
            detail::add_unique(b.side_corner_map[name], a);
            detail::add_unique(b.side_corner_map[name], c);
        };
        pair("N", at(0, -m), at(m, -m));
        pair("NE", at(m, -m), at(m, 0));
        pair("SE", at(m, 0), at(0, m));
        pair("S", at(0, m), at(-m, m));
        pair("SW", at(-m, m), at(-m, 0));
        pair("NW", at(-m, 0), at(0, -m));
    }
    detail::finish_board(b);
    return b;
}

// Rhombus-shaped board of hexagonal cells with side length n; n^2 sites,
// 4 corners, 4 side regions in two opposite pairs (N-S and E-W).
inline BoardGraph build_hex_rhombus(int n) {
    if (n < 1) throw BoardError("InvalidSize: rhombus side must be >= 1");
    BoardGraph b;
    b.tiling = Tiling::Hex;
    b.shape = BoardShape::Rhombus;
    b.size_a = b.size_b = n;
    b.dirs_in_use = detail::hex_dirs();

    auto id = [n](int q, int r) { return r * n + q; };
    b.labels.resize(static_cast<std::size_t>(n) * n);
    b.adjacency.assign(b.labels.size(), {-1, -1, -1, -1, -1, -1, -1, -1});
    for (int r = 0; r < n; ++r) {
        for (int q = 0; q < n; ++q) {
            SiteId s = id(q, r);
            b.labels[s] = detail::column_letters(q) + std::to_string(n - r);
            for (Dir d : b.dirs_in_use) {
                int dq = 0, dr = 0;
                detail::hex_delta(d, dq, dr);
                int nq = q + dq, nr = r + dr;
                if (nq >= 0 && nq < n && nr >= 0 && nr < n) b.adjacency[s][d] = id(nq, nr);
            }
        }
    }
    detail::add_unique(b.corners, id(0, 0));
    detail::add_unique(b.corners, id(n - 1, 0));
    detail::add_unique(b.corners, id(0, n - 1));
    detail::add_unique(b.corners, id(n - 1, n - 1));
    b.sides = {{"N", {}}, {"S", {}}, {"E", {}}, {"W", {}}};
    for (int q = 1; q < n - 1; ++q) {
        b.sides["N"].push_back(id(q, 0));
        b.sides["S"].push_back(id(q, n - 1));
    }
    for (int r = 1; r < n - 1; ++r) {
        b.sides["W"].push_back(id(0, r));
        b.sides["E"].push_back(id(n - 1, r));
    }
    detail::add_unique(b.side_corner_map["N"], id(0, 0));
    detail::add_unique(b.side_corner_map["N"], id(n - 1, 0));
    detail::add_unique(b.side_corner_map["S"], id(0, n - 1));
    detail::add_unique(b.side_corner_map["S"], id(n - 1, n - 1));
    detail::add_unique(b.side_corner_map["W"], id(0, 0));
    detail::add_unique(b.side_corner_map["W"], id(0, n - 1));
    detail::add_unique(b.side_corner_map["E"], id(n - 1, 0));
    detail::add_unique(b.side_corner_map["E"], id(n - 1, n - 1));
    detail::finish_board(b);
    return b;
}

// Cyclic track of n sites (race and sowing boards); E advances, W retreats.
inline BoardGraph build_track(int n) {
    if (n < 1) throw BoardError("InvalidSize: track length must be >= 1");
    BoardGraph b;
    b.tiling = Tiling::Track;
    b.shape = BoardShape::Track;
    b.size_a = b.size_b = n;
    b.dirs_in_use = {DirE, DirW};
    b.labels.resize(n);
    b.adjacency.assign(n, {-1, -1, -1, -1, -1, -1, -1, -1});
    for (int i = 0; i < n; ++i) {
        b.labels[i] = "T" + std::to_string(i + 1);
        if (n > 1) {
            b.adjacency[i][DirE] = (i + 1) % n;
            b.adjacency[i][DirW] = (i + n - 1) % n;
        }
    }
    detail::finish_board(b);
    return b;
}

}  // namespace ludecon
