#include <doctest.h>

#include <map>
#include <set>

#include "ludecon/board.hpp"

using namespace ludecon;

namespace {

void check_symmetry(const BoardGraph& b) {
    for (SiteId s = 0; s < b.site_count(); ++s) {
        for (SiteId t : b.neighbors(s)) {
            bool back = false;
            for (SiteId u : b.neighbors(t)) back = back || u == s;
            CHECK(back);
        }
    }
}

void check_labels(const BoardGraph& b) {
    for (SiteId s = 0; s < b.site_count(); ++s) CHECK(b.site(b.labels[s]) == s);
}

void check_sides_cover_boundary(const BoardGraph& b) {
    std::set<SiteId> covered(b.corners.begin(), b.corners.end());
    for (const auto& [name, sites] : b.sides)
        covered.insert(sites.begin(), sites.end());
    std::set<SiteId> boundary;
    for (SiteId s : b.boundary()) boundary.insert(s);
    CHECK(covered == boundary);
}

}  // namespace

TEST_CASE("square boards") {
    BoardGraph b10 = build_square(10);
    CHECK(b10.site_count() == 100);
    CHECK(b10.site("A4") == 30);
    CHECK(b10.site("J4") == 39);
    CHECK(b10.labels[0] == "A1");

    BoardGraph b1 = build_square(1);
    CHECK(b1.site_count() == 1);
    CHECK(b1.neighbors(0).empty());
    REQUIRE(b1.corners.size() >= 1);
    CHECK(b1.corners[0] == 0);  // the lone site serves as every corner

    BoardGraph b3 = build_square(3);
    SiteId a1 = b3.site("A1");
    auto nbrs = b3.neighbors(a1);
    CHECK(nbrs.size() == 3);
    std::set<SiteId> expect = {b3.site("A2"), b3.site("B1"), b3.site("B2")};
    CHECK(std::set<SiteId>(nbrs.begin(), nbrs.end()) == expect);
    CHECK(b3.neighbor(a1, DirN) == b3.site("A2"));
    CHECK(b3.neighbor(a1, DirE) == b3.site("B1"));
    CHECK(b3.neighbor(a1, DirNE) == b3.site("B2"));
    CHECK(b3.neighbor(a1, DirS) == -1);
}

TEST_CASE("rectangle boards") {
    BoardGraph b = build_rectangle(9, 10);  // Xiangqi grid: 9 columns, 10 rows
    CHECK(b.site_count() == 90);
    CHECK(b.tiling == Tiling::Square);
    CHECK(b.shape == BoardShape::Rectangle);
    CHECK(b.has_label("I10"));
    CHECK_FALSE(b.has_label("J1"));
    CHECK_THROWS_AS(build_rectangle(0, 5), BoardError);
}

TEST_CASE("hexagon boards") {
    CHECK(build_hex_hexagon(8).site_count() == 169);
    CHECK(build_hex_hexagon(1).site_count() == 1);

    BoardGraph b2 = build_hex_hexagon(2);
    CHECK(b2.site_count() == 7);
    CHECK(b2.corners.size() == 6);
    for (const auto& [name, sites] : b2.sides) CHECK(sites.empty());
    // All six non-centre sites are corners; the centre has full degree.
    int degree6 = 0;
    for (SiteId s = 0; s < 7; ++s)
        if (b2.neighbors(s).size() == 6) ++degree6;
    CHECK(degree6 == 1);

    BoardGraph b3 = build_hex_hexagon(3);
    CHECK(b3.site_count() == 19);
    CHECK(b3.corners.size() == 6);
    for (const auto& [name, sites] : b3.sides) CHECK(sites.size() == 1);  // n-2
}

TEST_CASE("rhombus boards") {
    CHECK(build_hex_rhombus(11).site_count() == 121);

    BoardGraph b1 = build_hex_rhombus(1);
    CHECK(b1.site_count() == 1);
    for (const auto& name : b1.side_names())
        CHECK(b1.side_inclusive(name) == std::vector<SiteId>{0});

    BoardGraph b2 = build_hex_rhombus(2);
    CHECK(b2.site_count() == 4);
    // Acute corners have degree 2, the other two corners degree 3.
    std::multiset<std::size_t> degrees;
    for (SiteId s = 0; s < 4; ++s) degrees.insert(b2.neighbors(s).size());
    CHECK(degrees == std::multiset<std::size_t>{2, 2, 3, 3});

    BoardGraph b4 = build_hex_rhombus(4);
    CHECK(b4.sides.at("N").size() == 2);
    CHECK(b4.side_inclusive("N").size() == 4);
}

TEST_CASE("track boards") {
    BoardGraph t = build_track(24);
    CHECK(t.site_count() == 24);
    CHECK(t.tiling == Tiling::Track);
    for (SiteId s = 0; s < 24; ++s) CHECK(t.neighbors(s).size() == 2);
    CHECK(t.neighbor(23, DirE) == 0);  // cyclic
    CHECK(t.boundary().empty());
    CHECK(t.site("T1") == 0);
}

TEST_CASE("mean degree") {
    CHECK(mean_degree(build_square(1)) == 0.0);
    CHECK(mean_degree(build_square(3)) == doctest::Approx(40.0 / 9.0));

    // Independent hand enumeration of the 7-cell hexagon: ring cells touch
    // the centre and their two ring neighbours, so degrees are 6,3,3,3,3,3,3.
    BoardGraph b2 = build_hex_hexagon(2);
    long long total = 0;
    for (SiteId s = 0; s < b2.site_count(); ++s)
        total += static_cast<long long>(b2.neighbors(s).size());
    CHECK(total == 24);
    CHECK(mean_degree(b2) == doctest::Approx(24.0 / 7.0));

    CHECK(mean_degree(build_track(24)) == doctest::Approx(2.0));
}

TEST_CASE("board properties up to n=12") {
    for (int n = 1; n <= 12; ++n) {
        BoardGraph sq = build_square(n);
        CHECK(sq.site_count() == n * n);
        check_symmetry(sq);
        check_labels(sq);
        check_sides_cover_boundary(sq);

        BoardGraph hexagon = build_hex_hexagon(n);
        CHECK(hexagon.site_count() == 3 * n * n - 3 * n + 1);
        check_symmetry(hexagon);
        check_labels(hexagon);
        check_sides_cover_boundary(hexagon);

        BoardGraph rhombus = build_hex_rhombus(n);
        CHECK(rhombus.site_count() == n * n);
        check_symmetry(rhombus);
        check_labels(rhombus);
        check_sides_cover_boundary(rhombus);

        BoardGraph track = build_track(n);
        CHECK(track.site_count() == n);
        check_symmetry(track);
        check_labels(track);
    }
}

TEST_CASE("invalid sizes") {
    CHECK_THROWS_AS(build_square(0), BoardError);
    CHECK_THROWS_AS(build_hex_hexagon(-1), BoardError);
    CHECK_THROWS_AS(build_hex_rhombus(0), BoardError);
    CHECK_THROWS_AS(build_track(0), BoardError);
}

TEST_CASE("direction classes") {
    BoardGraph sq = build_square(4);
    CHECK(sq.directions(DirectionClass::All).size() == 8);
    CHECK(sq.directions(DirectionClass::Orthogonal).size() == 4);
    CHECK(sq.directions(DirectionClass::Diagonal).size() == 4);

    BoardGraph hx = build_hex_hexagon(3);
    CHECK(hx.directions(DirectionClass::All).size() == 6);
    CHECK_THROWS_AS(hx.directions(DirectionClass::Diagonal), BoardError);
}
