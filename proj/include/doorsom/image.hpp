#pragma once

#include <cstdint>
#include <vector>

namespace doorsom {

// Row-major 8-bit luminance raster. Pixel (x, y) lives at data[y*width + x].
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0);

    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }

    bool operator==(const GrayImage&) const = default;
};

// Row-major 8-bit RGB raster, interleaved channels.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // 3 * width * height bytes

    RgbImage() = default;
    RgbImage(int w, int h);

    std::uint8_t at(int x, int y, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);

    bool operator==(const RgbImage&) const = default;
};

// Real-valued raster carried between stages that need sub-level precision
// (smoothing output, gradient magnitudes).
struct RealImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    RealImage() = default;
    RealImage(int w, int h, double fill = 0.0);

    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
};

RealImage to_real(const GrayImage& img);

/// Rounds to nearest level and clamps to [0, 255].
GrayImage quantize(const RealImage& img);

/// Rec.601 integer luma.
GrayImage rgb_to_gray(const RgbImage& img);

/// Normalized 1-D Gaussian taps for the given sigma; radius = ceil(3*sigma).
std::vector<double> gaussian_kernel(double sigma);

// Separable Gaussian smoothing. Borders are handled by replicating the edge
// pixel so that flat regions stay flat all the way to the image boundary.
RealImage gaussian_blur_real(const RealImage& img, double sigma);
RealImage gaussian_blur_real(const GrayImage& img, double sigma);
GrayImage gaussian_blur(const GrayImage& img, double sigma);

}  // namespace doorsom
