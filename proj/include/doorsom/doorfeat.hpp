#pragma once

#include <optional>
#include <span>
#include <vector>

#include "doorsom/image.hpp"
#include "doorsom/linefit.hpp"

namespace doorsom {

struct BoxD {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // x0 <= x1, y0 <= y1
    double area() const { return (x1 > x0 && y1 > y0) ? (x1 - x0) * (y1 - y0) : 0.0; }
};

double iou(const BoxD& a, const BoxD& b);

// Estimated wall/floor boundary, queryable per column.
struct FloorLine {
    LineSegment line;
    double y_at(double x) const { return line.y_at(x); }
};

struct FeatureParams {
    double vert_tol_deg = 10.0;       // post angle tolerance from vertical
    double min_len_frac = 0.25;       // post length floor, fraction of image height
    double horizon_frac = 0.5;        // post tops must start above this row
    double w_min_frac = 0.05;         // post separation bounds, fraction of width
    double w_max_frac = 0.8;
    double horiz_tol_deg = 10.0;      // floor/bottom-edge angle tolerance
    double floor_region_frac = 0.6;   // floor candidates live below this row
    double floor_min_span_frac = 0.3; // shorter floor segments fall back to horizontal
    double floor_band_tol = 1.5;      // px; lowest-band grouping of floor candidates
    double conc_band = 15.0;          // px above floor searched for the bottom edge
    double conc_max = 10.0;           // concavity normalizer
    int sample_cols = 16;             // M columns sampled between posts
    int window_rows = 6;              // w rows sampled either side of the bottom edge
    int bins = 8;                     // K profile bins

    int dim() const { return 3 + bins; }
};

struct DoorCandidate {
    LineSegment left_post;
    LineSegment right_post;
    std::optional<LineSegment> bottom_edge;
    std::optional<FloorLine> floor;

    BoxD region() const;
};

struct GapProfile {
    double contrast = 0.0;       // |gap_mean - surround_mean|
    double gap_mean = 0.0;       // rows just below the bottom edge
    double surround_mean = 0.0;  // rows above the bottom edge
    std::vector<double> bins;    // vertical profile resampled to K, min-max scaled
    bool valid = false;
};

struct NormalizationStats {
    std::vector<double> min_v;
    std::vector<double> max_v;

    std::size_t dim() const { return min_v.size(); }
    static NormalizationStats fit(std::span<const std::vector<double>> raw);
    std::vector<double> apply(const std::vector<double>& raw) const;
};

struct CandidateFeatures {
    double post_dist = 0.0;
    std::optional<double> conc;
    GapProfile gap;
    std::vector<double> raw;  // pre-normalization vector, dimension 3 + K
};

std::optional<FloorLine> estimate_floor_line(const std::vector<LineSegment>& segs, int width,
                                             int height, const FeatureParams& p = {});

std::vector<DoorCandidate> find_post_candidates(const std::vector<LineSegment>& segs,
                                                const GrayImage& img,
                                                const FeatureParams& p = {});

double post_distance(const DoorCandidate& c);

std::optional<double> concavity(const DoorCandidate& c, const GrayImage& img,
                                const FeatureParams& p = {});

GapProfile bottom_gap_profile(const DoorCandidate& c, const GrayImage& img,
                              const FeatureParams& p = {});

CandidateFeatures compute_features(const DoorCandidate& c, const GrayImage& img,
                                   const FeatureParams& p = {});

std::vector<double> build_feature_vector(const DoorCandidate& c, const GrayImage& img,
                                         const FeatureParams& p,
                                         const NormalizationStats* stats);

}  // namespace doorsom
