#pragma once

#include <utility>
#include <vector>

#include "doorsom/canny.hpp"

namespace doorsom {

struct PixCoord {
    int x = 0;
    int y = 0;
    bool operator==(const PixCoord&) const = default;
};

struct EdgeChain {
    int label = 0;
    std::vector<PixCoord> points;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Vec2&) const = default;
};

struct LineSegment {
    Vec2 p0;
    Vec2 p1;

    double length() const;
    double angle() const;  // undirected, in [0, pi)
    Vec2 midpoint() const;
    double x_at(double y) const;  // interpolated; midpoint x if horizontal
    double y_at(double x) const;
};

double point_line_distance(const Vec2& p, const Vec2& a, const Vec2& b);

// Difference of undirected angles, in [0, pi/2].
double angle_between(double a0, double a1);

struct LinefitParams {
    double dev_tol = 2.0;
    double angle_tol = 0.05;
    double gap_tol = 5.0;
    double lat_tol = 1.5;
    double min_frag = 8.0;  // corner debris shorter than this never enters merging
    double min_len = 20.0;
};

// Junction = edge pixel with more than two 4-adjacent edge neighbors; a
// junction joins the first chain that reaches it and terminates tracking.
std::vector<EdgeChain> track_edge_chains(const EdgeMap& edges);

// Inclusive index ranges of the chain covered by each output segment.
std::vector<std::pair<int, int>> split_chain_ranges(const EdgeChain& chain, double dev_tol);
std::vector<LineSegment> split_chain(const EdgeChain& chain, double dev_tol);

std::vector<LineSegment> merge_segments(std::vector<LineSegment> segs, double angle_tol,
                                        double gap_tol, double lat_tol = 1.5);

std::vector<LineSegment> detect_lines(const EdgeMap& edges, const LinefitParams& params = {});

}  // namespace doorsom
