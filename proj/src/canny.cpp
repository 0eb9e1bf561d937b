#include "doorsom/canny.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace doorsom {

std::size_t EdgeMap::count() const {
    return static_cast<std::size_t>(std::count(edge.begin(), edge.end(), std::uint8_t{1}));
}

GradientField sobel_gradients(const RealImage& img) {
    if (img.width < 3 || img.height < 3)
        throw std::invalid_argument("sobel_gradients: image must be at least 3x3");

    const int w = img.width, h = img.height;
    GradientField g;
    g.width = w;
    g.height = h;
    g.magnitude.resize(static_cast<std::size_t>(w) * h);
    g.direction.resize(static_cast<std::size_t>(w) * h);

    auto px = [&](int x, int y) {
        x = std::clamp(x, 0, w - 1);
        y = std::clamp(y, 0, h - 1);
        return img.at(x, y);
    };

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double gx = -px(x - 1, y - 1) + px(x + 1, y - 1) - 2 * px(x - 1, y) +
                        2 * px(x + 1, y) - px(x - 1, y + 1) + px(x + 1, y + 1);
            double gy = -px(x - 1, y - 1) - 2 * px(x, y - 1) - px(x + 1, y - 1) +
                        px(x - 1, y + 1) + 2 * px(x, y + 1) + px(x + 1, y + 1);
            std::size_t i = static_cast<std::size_t>(y) * w + x;
            g.magnitude[i] = std::hypot(gx, gy);
            g.direction[i] = std::atan2(gy, gx);
        }
    }
    return g;
}

GradientField sobel_gradients(const GrayImage& img) { return sobel_gradients(to_real(img)); }

RealImage non_max_suppression(const GradientField& g) {
    const int w = g.width, h = g.height;
    RealImage out(w, h);

    // Step offsets per direction bin: 0, 45, 90, 135 degrees. Image y grows
    // downward, which only mirrors the diagonal bins; the paired +/- probe
    // makes the comparison symmetric either way.
    static constexpr int dx[4] = {1, 1, 0, -1};
    static constexpr int dy[4] = {0, 1, 1, 1};

    auto mag_at = [&](int x, int y) {
        if (x < 0 || x >= w || y < 0 || y >= h) return 0.0;
        return g.mag(x, y);
    };

    constexpr double pi = std::numbers::pi;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double m = g.mag(x, y);
            if (m <= 0.0) continue;
            double theta = g.dir(x, y);
            if (theta < 0) theta += pi;  // fold onto [0, pi)
            int bin = static_cast<int>(std::lround(theta / (pi / 4))) & 3;
            double fwd = mag_at(x + dx[bin], y + dy[bin]);
            double bwd = mag_at(x - dx[bin], y - dy[bin]);
            if (m >= fwd && m > bwd) out.at(x, y) = m;
        }
    }
    return out;
}

EdgeMap hysteresis(const RealImage& nms, double lo, double hi) {
    if (!(lo >= 0.0 && lo < hi))
        throw std::invalid_argument("hysteresis: thresholds must satisfy 0 <= lo < hi");

    const int w = nms.width, h = nms.height;
    EdgeMap out(w, h);
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (nms.at(x, y) >= hi && !out.at(x, y)) {
                out.set(x, y, true);
                stack.emplace_back(x, y);
                while (!stack.empty()) {
                    auto [cx, cy] = stack.back();
                    stack.pop_back();
                    for (int oy = -1; oy <= 1; ++oy)
                        for (int ox = -1; ox <= 1; ++ox) {
                            int nx = cx + ox, ny = cy + oy;
                            if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                            if (out.at(nx, ny) || nms.at(nx, ny) < lo) continue;
                            out.set(nx, ny, true);
                            stack.emplace_back(nx, ny);
                        }
                }
            }
    return out;
}

EdgeMap canny(const GrayImage& img, const CannyParams& params) {
    RealImage smoothed = gaussian_blur_real(img, params.sigma);
    GradientField g = sobel_gradients(smoothed);
    RealImage nms = non_max_suppression(g);

    double max_mag = 0.0;
    for (double m : nms.data) max_mag = std::max(max_mag, m);
    if (max_mag <= 0.0) return EdgeMap(img.width, img.height);

    return hysteresis(nms, params.low_frac * max_mag, params.high_frac * max_mag);
}

}  // namespace doorsom
