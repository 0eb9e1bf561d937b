#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "doorsom/linefit.hpp"
#include "doorsom/rng.hpp"

using namespace doorsom;

namespace {

EdgeChain make_chain(std::initializer_list<PixCoord> pts) {
    EdgeChain c;
    c.label = 1;
    c.points.assign(pts);
    return c;
}

void append_stroke(std::vector<PixCoord>& pts, int x1, int y1) {
    // Bresenham from the current tail, excluding the tail itself.
    int x0 = pts.back().x, y0 = pts.back().y;
    int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (x0 != x1 || y0 != y1) {
        int e2 = 2 * err;
        if (e2 >= dy) { err += dy; x0 += sx; }
        if (e2 <= dx) { err += dx; y0 += sy; }
        pts.push_back({x0, y0});
    }
}

EdgeChain random_polyline(SplitMix64& rng) {
    EdgeChain c;
    c.label = 1;
    c.points.push_back({static_cast<int>(rng.range_int(50, 150)),
                        static_cast<int>(rng.range_int(50, 150))});
    int strokes = static_cast<int>(rng.range_int(2, 4));
    double heading = rng.range_real(0.0, 6.28318);
    for (int s = 0; s < strokes; ++s) {
        double len = rng.range_real(15.0, 60.0);
        heading += rng.range_real(-1.2, 1.2);
        int tx = c.points.back().x + static_cast<int>(std::lround(len * std::cos(heading)));
        int ty = c.points.back().y + static_cast<int>(std::lround(len * std::sin(heading)));
        append_stroke(c.points, tx, ty);
    }
    return c;
}

bool seg_equal(const LineSegment& a, const LineSegment& b) { return a.p0 == b.p0 && a.p1 == b.p1; }

bool seg_near(const LineSegment& a, const LineSegment& b, double tol = 1e-9) {
    return std::abs(a.p0.x - b.p0.x) < tol && std::abs(a.p0.y - b.p0.y) < tol &&
           std::abs(a.p1.x - b.p1.x) < tol && std::abs(a.p1.y - b.p1.y) < tol;
}

std::vector<LineSegment> sorted_segs(std::vector<LineSegment> s) {
    std::sort(s.begin(), s.end(), [](const LineSegment& a, const LineSegment& b) {
        return std::tie(a.p0.x, a.p0.y, a.p1.x, a.p1.y) < std::tie(b.p0.x, b.p0.y, b.p1.x, b.p1.y);
    });
    return s;
}

}  // namespace

TEST_CASE("segment geometry accessors") {
    LineSegment s{{0, 0}, {3, 4}};
    CHECK(s.length() == doctest::Approx(5.0));
    CHECK(s.midpoint().x == doctest::Approx(1.5));
    LineSegment v{{2, 0}, {2, 10}};
    CHECK(v.angle() == doctest::Approx(std::numbers::pi / 2));
    CHECK(LineSegment{{0, 5}, {10, 5}}.angle() == doctest::Approx(0.0));
    CHECK(v.x_at(7.0) == doctest::Approx(2.0));

    CHECK(point_line_distance({5, 5}, {0, 0}, {10, 0}) == doctest::Approx(5.0));
    CHECK(angle_between(0.1, 3.1) == doctest::Approx(std::numbers::pi - 3.0).epsilon(1e-9));
}

TEST_CASE("tracking a straight run yields one chain") {
    EdgeMap e(16, 5);
    for (int x = 3; x < 13; ++x) e.set(x, 2, true);
    std::vector<EdgeChain> chains = track_edge_chains(e);
    REQUIRE(chains.size() == 1);
    CHECK(chains[0].points.size() == 10);
}

TEST_CASE("a plus sign splits into four chains at the junction") {
    EdgeMap e(11, 11);
    for (int x = 1; x < 10; ++x) e.set(x, 5, true);
    for (int y = 1; y < 10; ++y) e.set(5, y, true);
    std::vector<EdgeChain> chains = track_edge_chains(e);
    CHECK(chains.size() == 4);

    std::size_t total = 0;
    std::set<std::pair<int, int>> seen;
    for (const EdgeChain& c : chains) {
        total += c.points.size();
        for (const PixCoord& p : c.points) CHECK(seen.insert({p.x, p.y}).second);
    }
    CHECK(total == e.count());
}

TEST_CASE("disjoint runs get distinct labels") {
    EdgeMap e(20, 8);
    for (int x = 1; x < 8; ++x) e.set(x, 2, true);
    for (int x = 11; x < 18; ++x) e.set(x, 6, true);
    std::vector<EdgeChain> chains = track_edge_chains(e);
    REQUIRE(chains.size() == 2);
    CHECK(chains[0].label != chains[1].label);
    CHECK(track_edge_chains(EdgeMap(5, 5)).empty());
}

TEST_CASE("chains partition random edge maps") {
    SplitMix64 rng(0xC0DE);
    for (int trial = 0; trial < 20; ++trial) {
        EdgeMap e(30, 30);
        for (int y = 0; y < 30; ++y)
            for (int x = 0; x < 30; ++x)
                if (rng.chance(0.25)) e.set(x, y, true);
        std::vector<EdgeChain> chains = track_edge_chains(e);
        std::size_t total = 0;
        std::set<std::pair<int, int>> seen;
        for (const EdgeChain& c : chains) {
            total += c.points.size();
            for (const PixCoord& p : c.points) {
                CHECK(e.at(p.x, p.y));
                CHECK(seen.insert({p.x, p.y}).second);
            }
        }
        CHECK(total == e.count());
    }
}

TEST_CASE("splitting a collinear chain returns it whole") {
    EdgeChain c;
    c.label = 1;
    for (int x = 0; x <= 10; ++x) c.points.push_back({x, 0});
    std::vector<LineSegment> segs = split_chain(c, 2.0);
    REQUIRE(segs.size() == 1);
    CHECK(seg_near(segs[0], LineSegment{{0, 0}, {10, 0}}));
}

TEST_CASE("an L chain splits at the corner") {
    EdgeChain c;
    c.label = 1;
    for (int x = 0; x <= 5; ++x) c.points.push_back({x, 0});
    for (int y = 1; y <= 5; ++y) c.points.push_back({5, y});
    std::vector<LineSegment> segs = split_chain(c, 1.0);
    REQUIRE(segs.size() == 2);
    CHECK(seg_near(segs[0], LineSegment{{0, 0}, {5, 0}}));
    CHECK(seg_near(segs[1], LineSegment{{5, 0}, {5, 5}}));

    std::vector<std::pair<int, int>> ranges = split_chain_ranges(c, 1.0);
    REQUIRE(ranges.size() == 2);
    CHECK(ranges[0] == std::pair{0, 5});
    CHECK(ranges[1] == std::pair{5, 10});
}

TEST_CASE("degenerate chains and bad tolerances") {
    CHECK(split_chain(make_chain({{3, 3}}), 2.0).empty());
    CHECK(split_chain(make_chain({}), 2.0).empty());
    CHECK_THROWS_AS(split_chain(make_chain({{0, 0}, {1, 0}}), 0.0), std::invalid_argument);
}

TEST_CASE("collinear segments merge across a small gap") {
    std::vector<LineSegment> segs{{{0, 0}, {4, 0}}, {{5, 0}, {9, 0}}};
    std::vector<LineSegment> merged = merge_segments(segs, 0.05, 2.0);
    REQUIRE(merged.size() == 1);
    CHECK(merged[0].length() == doctest::Approx(9.0));
    CHECK(std::min(merged[0].p0.x, merged[0].p1.x) == doctest::Approx(0.0));
    CHECK(std::max(merged[0].p0.x, merged[0].p1.x) == doctest::Approx(9.0));
}

TEST_CASE("perpendicular neighbors do not merge") {
    std::vector<LineSegment> segs{{{0, 0}, {5, 0}}, {{5, 0}, {5, 5}}};
    CHECK(merge_segments(segs, 0.05, 5.0).size() == 2);
    CHECK_THROWS_AS(merge_segments(segs, 0.0, 5.0), std::invalid_argument);
}

TEST_CASE("chained fragments collapse to one segment") {
    std::vector<LineSegment> segs{{{0, 0}, {30, 0}}, {{33, 0}, {60, 0}}, {{63, 0}, {90, 0}}};
    std::vector<LineSegment> merged = merge_segments(segs, 0.05, 5.0);
    REQUIRE(merged.size() == 1);
    CHECK(merged[0].length() == doctest::Approx(90.0));
}

TEST_CASE("merge is idempotent on random segment soups") {
    SplitMix64 rng(0x5E65);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<LineSegment> segs;
        int n = static_cast<int>(rng.range_int(2, 14));
        for (int i = 0; i < n; ++i) {
            double x = rng.range_real(0, 200), y = rng.range_real(0, 200);
            double a = rng.chance(0.5) ? 0.0 : rng.range_real(0, 3.14);
            double len = rng.range_real(8, 60);
            segs.push_back({{x, y}, {x + len * std::cos(a), y + len * std::sin(a)}});
        }
        std::vector<LineSegment> once = merge_segments(segs, 0.05, 5.0);
        std::vector<LineSegment> twice = merge_segments(once, 0.05, 5.0);
        REQUIRE(once.size() == twice.size());
        std::vector<LineSegment> a = sorted_segs(once), b = sorted_segs(twice);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(seg_equal(a[i], b[i]));
    }
}

TEST_CASE("split assigns every chain point within tolerance of its segment") {
    SplitMix64 rng(0x9017);
    const double dev_tol = 2.0;
    for (int trial = 0; trial < 200; ++trial) {
        EdgeChain chain = random_polyline(rng);
        std::vector<std::pair<int, int>> ranges = split_chain_ranges(chain, dev_tol);
        std::vector<LineSegment> segs = split_chain(chain, dev_tol);
        REQUIRE(ranges.size() == segs.size());
        REQUIRE(!ranges.empty());

        CHECK(ranges.front().first == 0);
        CHECK(ranges.back().second == static_cast<int>(chain.points.size()) - 1);
        for (std::size_t k = 0; k + 1 < ranges.size(); ++k)
            CHECK(ranges[k + 1].first == ranges[k].second);

        for (std::size_t k = 0; k < ranges.size(); ++k) {
            for (int i = ranges[k].first; i <= ranges[k].second; ++i) {
                Vec2 p{static_cast<double>(chain.points[i].x),
                       static_cast<double>(chain.points[i].y)};
                CHECK(point_line_distance(p, segs[k].p0, segs[k].p1) <= dev_tol + 1e-9);
            }
        }
    }
}

TEST_CASE("detect_lines recovers a rectangle outline") {
    EdgeMap e(100, 80);
    for (int x = 20; x <= 70; ++x) { e.set(x, 15, true); e.set(x, 55, true); }
    for (int y = 15; y <= 55; ++y) { e.set(20, y, true); e.set(70, y, true); }
    std::vector<LineSegment> segs = detect_lines(e);
    REQUIRE(segs.size() == 4);
    int horiz = 0, vert = 0;
    for (const LineSegment& s : segs) {
        if (angle_between(s.angle(), 0.0) < 0.05) ++horiz;
        if (angle_between(s.angle(), std::numbers::pi / 2) < 0.05) ++vert;
        CHECK(s.length() > 35.0);
    }
    CHECK(horiz == 2);
    CHECK(vert == 2);

    CHECK(detect_lines(EdgeMap(50, 50)).empty());
}

TEST_CASE("short specks are filtered out") {
    EdgeMap e(60, 60);
    e.set(10, 10, true);
    e.set(11, 10, true);
    e.set(40, 40, true);
    CHECK(detect_lines(e).empty());
}
