#pragma once

#include <vector>

#include "doorsom/image.hpp"

namespace doorsom {

struct GradientField {
    int width = 0;
    int height = 0;
    std::vector<double> magnitude;  // >= 0 per pixel
    std::vector<double> direction;  // atan2(gy, gx), radians in (-pi, pi]

    double mag(int x, int y) const { return magnitude[static_cast<std::size_t>(y) * width + x]; }
    double dir(int x, int y) const { return direction[static_cast<std::size_t>(y) * width + x]; }
};

struct EdgeMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> edge;  // 0 or 1

    EdgeMap() = default;
    EdgeMap(int w, int h) : width(w), height(h), edge(static_cast<std::size_t>(w) * h, 0) {}
    bool at(int x, int y) const { return edge[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { edge[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
    std::size_t count() const;
};

// Thresholds are fractions of the per-image maximum gradient magnitude.
struct CannyParams {
    double sigma = 1.4;
    double low_frac = 0.10;
    double high_frac = 0.25;
};

GradientField sobel_gradients(const RealImage& img);
GradientField sobel_gradients(const GrayImage& img);

// Quantizes direction to {0, 45, 90, 135} degrees and keeps a pixel iff its
// magnitude is >= the forward neighbor and > the backward neighbor along that
// axis, so plateau ties retain exactly one pixel.
RealImage non_max_suppression(const GradientField& g);

EdgeMap hysteresis(const RealImage& nms, double lo, double hi);

EdgeMap canny(const GrayImage& img, const CannyParams& params = {});

}  // namespace doorsom
