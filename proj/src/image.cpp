#include "doorsom/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace doorsom {

namespace {

void check_dims(int w, int h) {
    if (w <= 0 || h <= 0) throw std::invalid_argument("image dimensions must be positive");
}

}  // namespace

GrayImage::GrayImage(int w, int h, std::uint8_t fill) : width(w), height(h) {
    check_dims(w, h);
    data.assign(static_cast<std::size_t>(w) * h, fill);
}

RgbImage::RgbImage(int w, int h) : width(w), height(h) {
    check_dims(w, h);
    data.assign(static_cast<std::size_t>(w) * h * 3, 0);
}

void RgbImage::set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
    data[i] = r;
    data[i + 1] = g;
    data[i + 2] = b;
}

RealImage::RealImage(int w, int h, double fill) : width(w), height(h) {
    check_dims(w, h);
    data.assign(static_cast<std::size_t>(w) * h, fill);
}

RealImage to_real(const GrayImage& img) {
    RealImage out(img.width, img.height);
    std::copy(img.data.begin(), img.data.end(), out.data.begin());
    return out;
}

GrayImage quantize(const RealImage& img) {
    GrayImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        long v = std::lround(img.data[i]);
        out.data[i] = static_cast<std::uint8_t>(std::clamp(v, 0l, 255l));
    }
    return out;
}

GrayImage rgb_to_gray(const RgbImage& img) {
    GrayImage out(img.width, img.height);
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        unsigned r = img.data[3 * i], g = img.data[3 * i + 1], b = img.data[3 * i + 2];
        out.data[i] = static_cast<std::uint8_t>((299u * r + 587u * g + 114u * b + 500u) / 1000u);
    }
    return out;
}

std::vector<double> gaussian_kernel(double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("gaussian sigma must be positive");
    int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        double v = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
        k[static_cast<std::size_t>(i + radius)] = v;
        sum += v;
    }
    for (double& v : k) v /= sum;
    return k;
}

namespace {

// One separable pass along x; the y pass runs the same code on the transpose.
RealImage convolve_rows(const RealImage& img, const std::vector<double>& k) {
    int radius = static_cast<int>(k.size() / 2);
    RealImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                int xi = std::clamp(x + i, 0, img.width - 1);
                acc += k[static_cast<std::size_t>(i + radius)] * img.at(xi, y);
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

RealImage transpose(const RealImage& img) {
    RealImage out(img.height, img.width);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) out.at(y, x) = img.at(x, y);
    return out;
}

}  // namespace

RealImage gaussian_blur_real(const RealImage& img, double sigma) {
    std::vector<double> k = gaussian_kernel(sigma);
    RealImage horiz = convolve_rows(img, k);
    return transpose(convolve_rows(transpose(horiz), k));
}

RealImage gaussian_blur_real(const GrayImage& img, double sigma) {
    return gaussian_blur_real(to_real(img), sigma);
}

GrayImage gaussian_blur(const GrayImage& img, double sigma) {
    return quantize(gaussian_blur_real(img, sigma));
}

}  // namespace doorsom
