#include "doorsom/doorfeat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace doorsom {

namespace {

constexpr double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

double mid_x(const LineSegment& s) { return (s.p0.x + s.p1.x) / 2; }
double mid_y(const LineSegment& s) { return (s.p0.y + s.p1.y) / 2; }
double top_y(const LineSegment& s) { return std::min(s.p0.y, s.p1.y); }
double bottom_y(const LineSegment& s) { return std::max(s.p0.y, s.p1.y); }

bool lex_less(const LineSegment& a, const LineSegment& b) {
    if (a.p0.x != b.p0.x) return a.p0.x < b.p0.x;
    if (a.p0.y != b.p0.y) return a.p0.y < b.p0.y;
    if (a.p1.x != b.p1.x) return a.p1.x < b.p1.x;
    return a.p1.y < b.p1.y;
}

}  // namespace

double iou(const BoxD& a, const BoxD& b) {
    double ix0 = std::max(a.x0, b.x0), iy0 = std::max(a.y0, b.y0);
    double ix1 = std::min(a.x1, b.x1), iy1 = std::min(a.y1, b.y1);
    double inter = (ix1 > ix0 && iy1 > iy0) ? (ix1 - ix0) * (iy1 - iy0) : 0.0;
    double uni = a.area() + b.area() - inter;
    return uni > 0 ? inter / uni : 0.0;
}

BoxD DoorCandidate::region() const {
    const Vec2 pts[4] = {left_post.p0, left_post.p1, right_post.p0, right_post.p1};
    BoxD box{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
    for (const Vec2& p : pts) {
        box.x0 = std::min(box.x0, p.x);
        box.y0 = std::min(box.y0, p.y);
        box.x1 = std::max(box.x1, p.x);
        box.y1 = std::max(box.y1, p.y);
    }
    return box;
}

std::optional<FloorLine> estimate_floor_line(const std::vector<LineSegment>& segs, int width,
                                             int height, const FeatureParams& p) {
    double horiz_tol = deg2rad(p.horiz_tol_deg);
    std::vector<LineSegment> cands;
    for (const LineSegment& s : segs)
        if (angle_between(s.angle(), 0.0) <= horiz_tol && mid_y(s) >= p.floor_region_frac * height)
            cands.push_back(s);
    if (cands.empty()) return std::nullopt;

    // The boundary is the lowest horizontal structure; segments slightly above
    // it (door bottoms, gap edges) must not pull the estimate up.
    double y_low = mid_y(cands[0]);
    for (const LineSegment& s : cands) y_low = std::max(y_low, mid_y(s));

    const LineSegment* best = nullptr;
    for (const LineSegment& s : cands) {
        if (mid_y(s) < y_low - p.floor_band_tol) continue;
        if (!best || s.length() > best->length() ||
            (s.length() == best->length() && lex_less(s, *best)))
            best = &s;
    }

    if (best->length() >= p.floor_min_span_frac * width) return FloorLine{*best};
    double y = mid_y(*best);
    return FloorLine{{{0.0, y}, {static_cast<double>(width - 1), y}}};
}

namespace {

// Drops the below-floor part of a near-vertical segment (ground reflections
// mirror the posts there). Returns false if nothing remains above the floor.
bool clip_at_floor(LineSegment& s, const FloorLine& floor) {
    double fy = floor.y_at(mid_x(s));
    if (top_y(s) >= fy) return false;
    if (bottom_y(s) <= fy) return true;
    Vec2& lower = s.p0.y > s.p1.y ? s.p0 : s.p1;
    lower = {s.x_at(fy), fy};
    return true;
}

struct BottomScan {
    double edge_y = 0.0;
    double floor_y = 0.0;
};

double median_of(std::vector<int>& v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

// Fitted segments smear the door bottom, the gap band, and the floor front
// edge into one line once they sit within a blur radius of each other. The
// raw column profiles still separate them. Between the posts, the first
// strong departure from the door face marks the top of the gap; the doorway
// shows the floor through the gap, so the floor's front edge is only visible
// in columns outside the posts, as the first departure from the wall face.
std::optional<BottomScan> scan_bottom(const GrayImage& img, double xl, double xr,
                                      const FloorLine& floor, const FeatureParams& p) {
    constexpr int thr = 10;
    constexpr int reach = 12;  // search depth above the floor fit

    auto first_drop = [&](double xf) -> int {
        int x = static_cast<int>(std::lround(xf));
        if (x < 0 || x >= img.width) return -1;
        int rf = static_cast<int>(std::lround(floor.y_at(xf)));
        if (rf - reach - 3 < 0 || rf + 3 >= img.height) return -1;
        double face = (img.at(x, rf - reach - 3) + img.at(x, rf - reach - 2) +
                       img.at(x, rf - reach - 1)) / 3.0;
        for (int y = rf - reach; y <= rf + 2; ++y)
            if (std::abs(img.at(x, y) - face) > thr) return y;
        return -1;
    };

    int m = std::max(4, p.sample_cols);
    std::vector<int> gap_rows;
    for (int k = 0; k < m; ++k) {
        int r = first_drop(xl + 2 + (xr - xl - 4) * k / (m - 1));
        if (r >= 0) gap_rows.push_back(r);
    }
    std::vector<int> floor_rows;
    for (int k = 0; k < 8; ++k) {
        double off = 4.0 + 3.0 * k;
        for (double xf : {xl - off, xr + off}) {
            int r = first_drop(xf);
            if (r >= 0) floor_rows.push_back(r);
        }
    }
    if (static_cast<int>(gap_rows.size()) < std::max(3, m / 3) ||
        static_cast<int>(floor_rows.size()) < 3)
        return std::nullopt;
    double edge_y = median_of(gap_rows);
    double floor_y = median_of(floor_rows);
    if (floor_y - edge_y < 1.0 || floor_y - edge_y > reach) return std::nullopt;
    return BottomScan{edge_y, floor_y};
}

std::optional<LineSegment> pick_bottom_edge(const std::vector<LineSegment>& segs, double xl,
                                            double xr, const std::optional<FloorLine>& floor,
                                            int height, const FeatureParams& p) {
    double horiz_tol = deg2rad(p.horiz_tol_deg);
    double span = xr - xl;
    const LineSegment* best = nullptr;
    for (const LineSegment& s : segs) {
        if (angle_between(s.angle(), 0.0) > horiz_tol) continue;
        double sx0 = std::min(s.p0.x, s.p1.x), sx1 = std::max(s.p0.x, s.p1.x);
        if (std::min(sx1, xr) - std::max(sx0, xl) < 0.5 * span) continue;
        double y = mid_y(s);
        if (floor) {
            double fy = floor->y_at((xl + xr) / 2);
            if (y <= fy - p.conc_band || y > fy - 0.5) continue;
        } else if (y < p.floor_region_frac * height) {
            continue;
        }
        if (!best || y < mid_y(*best) ||
            (y == mid_y(*best) &&
             (s.length() > best->length() ||
              (s.length() == best->length() && lex_less(s, *best)))))
            best = &s;
    }
    if (!best) return std::nullopt;
    return *best;
}

}  // namespace

std::vector<DoorCandidate> find_post_candidates(const std::vector<LineSegment>& segs,
                                                const GrayImage& img, const FeatureParams& p) {
    const int W = img.width, H = img.height;
    std::optional<FloorLine> floor = estimate_floor_line(segs, W, H, p);

    double vert_tol = deg2rad(p.vert_tol_deg);
    std::vector<LineSegment> posts;
    for (LineSegment s : segs) {
        if (angle_between(s.angle(), std::numbers::pi / 2) > vert_tol) continue;
        if (floor && !clip_at_floor(s, *floor)) continue;
        if (s.length() < p.min_len_frac * H) continue;
        if (top_y(s) >= p.horizon_frac * H) continue;
        posts.push_back(s);
    }
    std::sort(posts.begin(), posts.end(),
              [](const LineSegment& a, const LineSegment& b) {
                  if (mid_x(a) != mid_x(b)) return mid_x(a) < mid_x(b);
                  return lex_less(a, b);
              });

    std::vector<DoorCandidate> out;
    for (std::size_t i = 0; i < posts.size(); ++i)
        for (std::size_t j = i + 1; j < posts.size(); ++j) {
            double sep = mid_x(posts[j]) - mid_x(posts[i]);
            if (sep < p.w_min_frac * W || sep > p.w_max_frac * W) continue;
            DoorCandidate c;
            c.left_post = posts[i];
            c.right_post = posts[j];
            c.floor = floor;
            c.bottom_edge =
                pick_bottom_edge(segs, mid_x(posts[i]), mid_x(posts[j]), floor, H, p);
            if (floor) {
                double xl = mid_x(posts[i]), xr = mid_x(posts[j]);
                if (auto scan = scan_bottom(img, xl, xr, *floor, p)) {
                    c.bottom_edge = LineSegment{{xl, scan->edge_y}, {xr, scan->edge_y}};
                    c.floor = FloorLine{{{xl, scan->floor_y}, {xr, scan->floor_y}}};
                }
            }
            out.push_back(std::move(c));
        }
    return out;
}

double post_distance(const DoorCandidate& c) {
    double y = std::max(bottom_y(c.left_post), bottom_y(c.right_post));
    return std::abs(c.right_post.x_at(y) - c.left_post.x_at(y));
}

std::optional<double> concavity(const DoorCandidate& c, const GrayImage& img,
                                const FeatureParams& p) {
    if (!c.bottom_edge || !c.floor) return std::nullopt;
    double y_edge = mid_y(*c.bottom_edge);
    double xl = c.left_post.x_at(y_edge), xr = c.right_post.x_at(y_edge);
    if (xr < xl) std::swap(xl, xr);
    int m = std::max(1, p.sample_cols);
    double sum = 0.0;
    for (int k = 0; k < m; ++k) {
        double x = m == 1 ? (xl + xr) / 2 : xl + (xr - xl) * k / (m - 1);
        x = std::clamp(x, 0.0, static_cast<double>(img.width - 1));
        sum += std::abs(c.bottom_edge->y_at(x) - c.floor->y_at(x));
    }
    return sum / m;
}

GapProfile bottom_gap_profile(const DoorCandidate& c, const GrayImage& img,
                              const FeatureParams& p) {
    GapProfile out;
    if (!c.bottom_edge) return out;
    const int w = p.window_rows;
    if (w < 2) return out;

    double y_ref = mid_y(*c.bottom_edge);
    double xl = c.left_post.x_at(y_ref), xr = c.right_post.x_at(y_ref);
    if (xr < xl) std::swap(xl, xr);
    xl += 2;  // stay off the post edge pixels
    xr -= 2;
    if (xr <= xl) return out;

    int m = std::max(2, p.sample_cols);
    std::vector<double> profile(static_cast<std::size_t>(2 * w + 1), 0.0);
    for (int k = 0; k < m; ++k) {
        double xf = xl + (xr - xl) * k / (m - 1);
        int x = std::clamp(static_cast<int>(std::lround(xf)), 0, img.width - 1);
        int ye = static_cast<int>(std::lround(c.bottom_edge->y_at(xf)));
        for (int d = -w; d <= w; ++d) {
            int y = std::clamp(ye + d, 0, img.height - 1);
            profile[static_cast<std::size_t>(d + w)] += img.at(x, y);
        }
    }
    for (double& v : profile) v /= m;

    // The row just below the edge is the gap (deeper rows can undershoot a
    // 2 px gap into whatever lies beneath); rows above are the door face.
    double sur_sum = 0.0;
    int sur_n = 0;
    for (int d = -w; d <= -2; ++d) {
        sur_sum += profile[static_cast<std::size_t>(d + w)];
        ++sur_n;
    }
    out.gap_mean = profile[static_cast<std::size_t>(w + 1)];
    out.surround_mean = sur_sum / sur_n;
    out.contrast = std::abs(out.gap_mean - out.surround_mean);

    int K = std::max(1, p.bins);
    out.bins.resize(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        double t = K == 1 ? w : k * (2.0 * w) / (K - 1);
        int lo = std::clamp(static_cast<int>(std::floor(t)), 0, 2 * w);
        int hi = std::min(lo + 1, 2 * w);
        double f = t - lo;
        out.bins[static_cast<std::size_t>(k)] =
            profile[static_cast<std::size_t>(lo)] * (1 - f) +
            profile[static_cast<std::size_t>(hi)] * f;
    }
    auto [mn_it, mx_it] = std::minmax_element(out.bins.begin(), out.bins.end());
    double mn = *mn_it, mx = *mx_it;
    if (mx > mn)
        for (double& v : out.bins) v = (v - mn) / (mx - mn);
    else
        std::fill(out.bins.begin(), out.bins.end(), 0.0);
    // Orient so the gap reads as a dip regardless of its polarity.
    if (out.gap_mean > out.surround_mean && mx > mn)
        for (double& v : out.bins) v = 1.0 - v;

    out.valid = true;
    return out;
}

CandidateFeatures compute_features(const DoorCandidate& c, const GrayImage& img,
                                   const FeatureParams& p) {
    CandidateFeatures f;
    f.post_dist = post_distance(c);
    f.conc = concavity(c, img, p);
    f.gap = bottom_gap_profile(c, img, p);

    f.raw.reserve(static_cast<std::size_t>(p.dim()));
    f.raw.push_back(f.post_dist / img.width);
    f.raw.push_back(std::clamp(f.conc.value_or(0.0) / p.conc_max, 0.0, 1.0));
    f.raw.push_back(f.gap.valid ? f.gap.contrast / 255.0 : 0.0);
    for (int k = 0; k < p.bins; ++k)
        f.raw.push_back(f.gap.valid ? f.gap.bins[static_cast<std::size_t>(k)] : 0.0);
    return f;
}

NormalizationStats NormalizationStats::fit(std::span<const std::vector<double>> raw) {
    if (raw.empty()) throw std::invalid_argument("NormalizationStats::fit: empty sample");
    NormalizationStats s;
    s.min_v = raw[0];
    s.max_v = raw[0];
    for (const auto& v : raw) {
        if (v.size() != s.min_v.size())
            throw std::invalid_argument("NormalizationStats::fit: inconsistent dimensions");
        for (std::size_t i = 0; i < v.size(); ++i) {
            s.min_v[i] = std::min(s.min_v[i], v[i]);
            s.max_v[i] = std::max(s.max_v[i], v[i]);
        }
    }
    return s;
}

std::vector<double> NormalizationStats::apply(const std::vector<double>& raw) const {
    if (raw.size() != min_v.size())
        throw std::invalid_argument("NormalizationStats::apply: dimension mismatch");
    std::vector<double> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        double range = max_v[i] - min_v[i];
        out[i] = range > 0 ? std::clamp((raw[i] - min_v[i]) / range, 0.0, 1.0) : 0.0;
    }
    return out;
}

std::vector<double> build_feature_vector(const DoorCandidate& c, const GrayImage& img,
                                         const FeatureParams& p,
                                         const NormalizationStats* stats) {
    std::vector<double> raw = compute_features(c, img, p).raw;
    return stats ? stats->apply(raw) : raw;
}

}  // namespace doorsom
