#include "doorsom/linefit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace doorsom {

double LineSegment::length() const { return std::hypot(p1.x - p0.x, p1.y - p0.y); }

double LineSegment::angle() const {
    double a = std::atan2(p1.y - p0.y, p1.x - p0.x);
    if (a < 0) a += std::numbers::pi;
    if (a >= std::numbers::pi) a -= std::numbers::pi;
    return a;
}

Vec2 LineSegment::midpoint() const { return {(p0.x + p1.x) / 2, (p0.y + p1.y) / 2}; }

double LineSegment::x_at(double y) const {
    double dy = p1.y - p0.y;
    if (dy == 0.0) return (p0.x + p1.x) / 2;
    return p0.x + (p1.x - p0.x) * (y - p0.y) / dy;
}

double LineSegment::y_at(double x) const {
    double dx = p1.x - p0.x;
    if (dx == 0.0) return (p0.y + p1.y) / 2;
    return p0.y + (p1.y - p0.y) * (x - p0.x) / dx;
}

double point_line_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    double dx = b.x - a.x, dy = b.y - a.y;
    double len = std::hypot(dx, dy);
    if (len == 0.0) return std::hypot(p.x - a.x, p.y - a.y);
    return std::abs(dx * (p.y - a.y) - dy * (p.x - a.x)) / len;
}

double angle_between(double a0, double a1) {
    double d = std::abs(a0 - a1);
    while (d >= std::numbers::pi) d -= std::numbers::pi;
    if (d > std::numbers::pi / 2) d = std::numbers::pi - d;
    return d;
}

namespace {

// 4-adjacent steps first so tracking hugs the pixel chain instead of cutting
// corners diagonally.
constexpr int step_dx[8] = {1, 0, -1, 0, 1, 1, -1, -1};
constexpr int step_dy[8] = {0, 1, 0, -1, 1, -1, 1, -1};

}  // namespace

std::vector<EdgeChain> track_edge_chains(const EdgeMap& edges) {
    const int w = edges.width, h = edges.height;
    auto is_edge = [&](int x, int y) {
        return x >= 0 && x < w && y >= 0 && y < h && edges.at(x, y);
    };

    std::vector<std::uint8_t> junction(static_cast<std::size_t>(w) * h, 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!edges.at(x, y)) continue;
            int n4 = is_edge(x + 1, y) + is_edge(x - 1, y) + is_edge(x, y + 1) + is_edge(x, y - 1);
            if (n4 > 2) junction[static_cast<std::size_t>(y) * w + x] = 1;
        }
    auto is_junction = [&](int x, int y) { return junction[static_cast<std::size_t>(y) * w + x] != 0; };

    std::vector<std::uint8_t> visited(static_cast<std::size_t>(w) * h, 0);
    auto seen = [&](int x, int y) -> std::uint8_t& {
        return visited[static_cast<std::size_t>(y) * w + x];
    };

    // Walks from (x, y), already marked, appending until a dead end or a
    // junction (which is claimed and terminates the walk). A diagonal step
    // whose bridging 4-neighbor is itself an edge pixel is skipped: the chain
    // runs through that pixel, and hopping over it would sneak around a
    // claimed junction into another arm.
    auto walk = [&](int x, int y, std::vector<PixCoord>& out) {
        while (true) {
            int nx = -1, ny = -1;
            for (int k = 0; k < 8; ++k) {
                int cx = x + step_dx[k], cy = y + step_dy[k];
                if (!is_edge(cx, cy) || seen(cx, cy)) continue;
                if (k >= 4 && (is_edge(cx, y) || is_edge(x, cy))) continue;
                nx = cx;
                ny = cy;
                break;
            }
            if (nx < 0) return;
            seen(nx, ny) = 1;
            out.push_back({nx, ny});
            if (is_junction(nx, ny)) return;
            x = nx;
            y = ny;
        }
    };

    std::vector<EdgeChain> chains;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!edges.at(x, y) || seen(x, y)) continue;
            seen(x, y) = 1;
            EdgeChain chain;
            chain.label = static_cast<int>(chains.size());
            chain.points.push_back({x, y});
            if (!is_junction(x, y)) {
                walk(x, y, chain.points);
                // The scan may have started mid-chain; extend the other way
                // and stitch the halves together.
                std::vector<PixCoord> back;
                walk(x, y, back);
                if (!back.empty()) {
                    std::reverse(back.begin(), back.end());
                    back.insert(back.end(), chain.points.begin(), chain.points.end());
                    chain.points = std::move(back);
                }
            }
            chains.push_back(std::move(chain));
        }
    return chains;
}

namespace {

struct FitLine {
    Vec2 mean;
    Vec2 dir;
};

FitLine tls_fit(const std::vector<PixCoord>& pts, int i, int j, const std::vector<bool>* keep) {
    double mx = 0, my = 0;
    int n = 0;
    for (int k = i; k <= j; ++k) {
        if (keep && !(*keep)[static_cast<std::size_t>(k - i)]) continue;
        mx += pts[static_cast<std::size_t>(k)].x;
        my += pts[static_cast<std::size_t>(k)].y;
        ++n;
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (int k = i; k <= j; ++k) {
        if (keep && !(*keep)[static_cast<std::size_t>(k - i)]) continue;
        double dx = pts[static_cast<std::size_t>(k)].x - mx;
        double dy = pts[static_cast<std::size_t>(k)].y - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
    return {{mx, my}, {std::cos(theta), std::sin(theta)}};
}

void split_recurse(const std::vector<PixCoord>& pts, int i, int j, double dev_tol,
                   std::vector<std::pair<int, int>>& out) {
    Vec2 a{static_cast<double>(pts[i].x), static_cast<double>(pts[i].y)};
    Vec2 b{static_cast<double>(pts[j].x), static_cast<double>(pts[j].y)};
    int split = -1;
    double max_dev = dev_tol;
    for (int k = i + 1; k < j; ++k) {
        double d = point_line_distance({static_cast<double>(pts[k].x), static_cast<double>(pts[k].y)}, a, b);
        if (d > max_dev) {
            max_dev = d;
            split = k;
        }
    }
    if (split < 0) {
        // The chord can run diagonally across two offset parallel runs and
        // hide the step, so also bound residuals against the fitted line.
        // Split preferentially where the signed residual changes sign: that
        // is the boundary between offset runs, and splitting at a raw argmax
        // inside a run degenerates into single-pixel fragments.
        if (j - i + 1 >= 4) {
            FitLine f = tls_fit(pts, i, j, nullptr);
            double tol = 0.4 * dev_tol;
            std::vector<double> res(static_cast<std::size_t>(j - i + 1));
            for (int k = i; k <= j; ++k) {
                const PixCoord& p = pts[static_cast<std::size_t>(k)];
                res[static_cast<std::size_t>(k - i)] =
                    (p.x - f.mean.x) * f.dir.y - (p.y - f.mean.y) * f.dir.x;
            }
            double best = tol;
            bool best_flip = false;
            for (int k = i + 1; k < j; ++k) {
                double r = std::abs(res[static_cast<std::size_t>(k - i)]);
                if (r <= tol) continue;
                bool pos = res[static_cast<std::size_t>(k - i)] > 0;
                bool flip = pos != (res[static_cast<std::size_t>(k - i - 1)] > 0) ||
                            pos != (res[static_cast<std::size_t>(k - i + 1)] > 0);
                if ((flip && !best_flip) || (flip == best_flip && r > best)) {
                    best = r;
                    split = k;
                    best_flip = flip;
                }
            }
            if (split >= 0) {
                split_recurse(pts, i, split, dev_tol, out);
                split_recurse(pts, split, j, dev_tol, out);
                return;
            }
        }
        out.emplace_back(i, j);
        return;
    }
    split_recurse(pts, i, split, dev_tol, out);
    split_recurse(pts, split, j, dev_tol, out);
}

}  // namespace

std::vector<std::pair<int, int>> split_chain_ranges(const EdgeChain& chain, double dev_tol) {
    if (dev_tol <= 0) throw std::invalid_argument("split_chain: dev_tol must be positive");
    if (chain.points.size() < 2) return {};
    std::vector<std::pair<int, int>> out;
    split_recurse(chain.points, 0, static_cast<int>(chain.points.size()) - 1, dev_tol, out);
    return out;
}

namespace {

// Orthogonal-regression fit over a chain range. Stray points such as corner
// pixels inherited from an adjoining edge get one chance to be trimmed, then
// the range endpoints are projected onto the fitted line. The refit may only
// tighten the split guarantee: if any point of the range ends up farther than
// dev_tol from the fitted line, fall back to the chord, which satisfies the
// bound by construction.
LineSegment fit_range(const std::vector<PixCoord>& pts, int i, int j, double dev_tol) {
    Vec2 a{static_cast<double>(pts[static_cast<std::size_t>(i)].x),
           static_cast<double>(pts[static_cast<std::size_t>(i)].y)};
    Vec2 b{static_cast<double>(pts[static_cast<std::size_t>(j)].x),
           static_cast<double>(pts[static_cast<std::size_t>(j)].y)};
    int n = j - i + 1;
    if (n <= 2) return {a, b};

    FitLine f = tls_fit(pts, i, j, nullptr);
    std::vector<bool> keep(static_cast<std::size_t>(n), true);
    int kept = n;
    for (int pass = 0; pass < 3; ++pass) {
        int dropped = 0;
        for (int k = i; k <= j; ++k) {
            if (!keep[static_cast<std::size_t>(k - i)]) continue;
            double dx = pts[static_cast<std::size_t>(k)].x - f.mean.x;
            double dy = pts[static_cast<std::size_t>(k)].y - f.mean.y;
            double res = std::abs(dx * f.dir.y - dy * f.dir.x);
            if (res > 0.8) {
                keep[static_cast<std::size_t>(k - i)] = false;
                ++dropped;
            }
        }
        if (dropped == 0) break;
        if (kept - dropped < 2 || kept - dropped < n / 2) break;
        kept -= dropped;
        f = tls_fit(pts, i, j, &keep);
    }

    auto project = [&](const Vec2& p) -> Vec2 {
        double t = (p.x - f.mean.x) * f.dir.x + (p.y - f.mean.y) * f.dir.y;
        return {f.mean.x + t * f.dir.x, f.mean.y + t * f.dir.y};
    };
    LineSegment fitted{project(a), project(b)};
    for (int k = i; k <= j; ++k) {
        Vec2 p{static_cast<double>(pts[static_cast<std::size_t>(k)].x),
               static_cast<double>(pts[static_cast<std::size_t>(k)].y)};
        if (point_line_distance(p, fitted.p0, fitted.p1) > dev_tol) return {a, b};
    }
    return fitted;
}

}  // namespace

std::vector<LineSegment> split_chain(const EdgeChain& chain, double dev_tol) {
    std::vector<LineSegment> segs;
    for (auto [i, j] : split_chain_ranges(chain, dev_tol))
        segs.push_back(fit_range(chain.points, i, j, dev_tol));
    return segs;
}

namespace {

LineSegment canonical(LineSegment s) {
    if (s.p1.x < s.p0.x || (s.p1.x == s.p0.x && s.p1.y < s.p0.y)) std::swap(s.p0, s.p1);
    return s;
}

bool seg_order(const LineSegment& a, const LineSegment& b) {
    double aa = a.angle(), ab = b.angle();
    if (aa != ab) return aa < ab;
    if (a.p0.x != b.p0.x) return a.p0.x < b.p0.x;
    if (a.p0.y != b.p0.y) return a.p0.y < b.p0.y;
    if (a.p1.x != b.p1.x) return a.p1.x < b.p1.x;
    return a.p1.y < b.p1.y;
}

double min_endpoint_gap(const LineSegment& a, const LineSegment& b) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec2* p : {&a.p0, &a.p1})
        for (const Vec2* q : {&b.p0, &b.p1})
            best = std::min(best, std::hypot(p->x - q->x, p->y - q->y));
    return best;
}

// Spanning segment over both inputs: the farthest pair among the 4 endpoints.
LineSegment spanning(const LineSegment& a, const LineSegment& b) {
    const Vec2 pts[4] = {a.p0, a.p1, b.p0, b.p1};
    double best = -1.0;
    LineSegment out{a.p0, a.p1};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            double d = std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y);
            if (d > best) {
                best = d;
                out = {pts[i], pts[j]};
            }
        }
    return out;
}

// Lateral coherence is judged at the junction: the nearest endpoint of each
// segment must lie close to the other's infinite line. A spanning-line check
// would tilt over a long merged extent and swallow a parallel 2 px jog.
bool mergeable(const LineSegment& a, const LineSegment& b, double angle_tol, double gap_tol,
               double lat_tol, LineSegment& merged) {
    if (angle_between(a.angle(), b.angle()) > angle_tol) return false;
    if (min_endpoint_gap(a, b) > gap_tol) return false;
    const Vec2* pa = &a.p0;
    const Vec2* pb = &b.p0;
    double best = std::numeric_limits<double>::infinity();
    for (const Vec2* p : {&a.p0, &a.p1})
        for (const Vec2* q : {&b.p0, &b.p1}) {
            double d = std::hypot(p->x - q->x, p->y - q->y);
            if (d < best) {
                best = d;
                pa = p;
                pb = q;
            }
        }
    if (point_line_distance(*pb, a.p0, a.p1) > lat_tol) return false;
    if (point_line_distance(*pa, b.p0, b.p1) > lat_tol) return false;
    merged = spanning(a, b);
    return true;
}

}  // namespace

std::vector<LineSegment> merge_segments(std::vector<LineSegment> segs, double angle_tol,
                                        double gap_tol, double lat_tol) {
    if (angle_tol <= 0 || gap_tol <= 0 || lat_tol <= 0)
        throw std::invalid_argument("merge_segments: tolerances must be positive");
    for (auto& s : segs) s = canonical(s);

    bool changed = true;
    while (changed) {
        changed = false;
        std::sort(segs.begin(), segs.end(), seg_order);
        for (std::size_t i = 0; i < segs.size() && !changed; ++i)
            for (std::size_t j = i + 1; j < segs.size() && !changed; ++j) {
                LineSegment merged;
                if (mergeable(segs[i], segs[j], angle_tol, gap_tol, lat_tol, merged)) {
                    segs[i] = canonical(merged);
                    segs.erase(segs.begin() + static_cast<std::ptrdiff_t>(j));
                    changed = true;
                }
            }
    }
    return segs;
}

std::vector<LineSegment> detect_lines(const EdgeMap& edges, const LinefitParams& params) {
    std::vector<LineSegment> segs;
    for (const EdgeChain& chain : track_edge_chains(edges))
        for (const LineSegment& s : split_chain(chain, params.dev_tol)) segs.push_back(s);
    std::erase_if(segs, [&](const LineSegment& s) { return s.length() < params.min_frag; });
    segs = merge_segments(std::move(segs), params.angle_tol, params.gap_tol, params.lat_tol);
    std::erase_if(segs, [&](const LineSegment& s) { return s.length() < params.min_len; });
    return segs;
}

}  // namespace doorsom
