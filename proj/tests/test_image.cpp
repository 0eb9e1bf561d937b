#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "doorsom/image.hpp"
#include "doorsom/rng.hpp"

using namespace doorsom;

namespace {

GrayImage random_image(int w, int h, std::uint64_t seed) {
    GrayImage img(w, h);
    SplitMix64 rng(seed);
    for (auto& p : img.data) p = static_cast<std::uint8_t>(rng.below(256));
    return img;
}

}  // namespace

TEST_CASE("gray image construction and access") {
    GrayImage img(4, 3, 7);
    CHECK(img.width == 4);
    CHECK(img.height == 3);
    CHECK(img.data.size() == 12);
    for (auto p : img.data) CHECK(p == 7);
    img.at(2, 1) = 99;
    CHECK(img.at(2, 1) == 99);
    CHECK_THROWS_AS(GrayImage(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(GrayImage(3, -1), std::invalid_argument);
}

TEST_CASE("rgb image layout") {
    RgbImage img(2, 2);
    CHECK(img.data.size() == 12);
    img.set(1, 0, 10, 20, 30);
    CHECK(img.at(1, 0, 0) == 10);
    CHECK(img.at(1, 0, 1) == 20);
    CHECK(img.at(1, 0, 2) == 30);
}

TEST_CASE("rgb_to_gray maps gray triples to themselves") {
    RgbImage img(3, 1);
    img.set(0, 0, 0, 0, 0);
    img.set(1, 0, 128, 128, 128);
    img.set(2, 0, 255, 255, 255);
    GrayImage g = rgb_to_gray(img);
    CHECK(g.at(0, 0) == 0);
    CHECK(g.at(1, 0) == 128);
    CHECK(g.at(2, 0) == 255);
}

TEST_CASE("quantize round-trips to_real") {
    GrayImage img = random_image(16, 16, 5);
    CHECK(quantize(to_real(img)) == img);
}

TEST_CASE("gaussian kernel is normalized and symmetric with radius ceil(3 sigma)") {
    for (double sigma : {0.5, 1.0, 1.4, 2.3}) {
        std::vector<double> k = gaussian_kernel(sigma);
        int radius = static_cast<int>(std::ceil(3.0 * sigma));
        CHECK(static_cast<int>(k.size()) == 2 * radius + 1);
        double sum = 0.0;
        for (double v : k) sum += v;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t i = 0; i < k.size(); ++i) CHECK(k[i] == k[k.size() - 1 - i]);
    }
}

TEST_CASE("blur keeps a constant image constant") {
    GrayImage img(17, 9, 100);
    for (double sigma : {0.7, 1.4, 3.0}) {
        RealImage out = gaussian_blur_real(img, sigma);
        for (double v : out.data) CHECK(v == doctest::Approx(100.0).epsilon(1e-9));
        GrayImage q = gaussian_blur(img, sigma);
        CHECK(q == img);
    }
}

TEST_CASE("impulse response equals the squared kernel center") {
    RealImage img(9, 9, 0.0);
    img.at(4, 4) = 1.0;
    RealImage out = gaussian_blur_real(img, 1.0);

    // Independent kernel: exp(-k^2 / 2 sigma^2) over radius 3, normalized.
    double taps[7], sum = 0.0;
    for (int k = -3; k <= 3; ++k) sum += taps[k + 3] = std::exp(-k * k / 2.0);
    double center = taps[3] / sum;
    CHECK(out.at(4, 4) == doctest::Approx(center * center).epsilon(1e-12));
}

TEST_CASE("blurring twice approximates one wider blur") {
    // Exact in the continuum (sigma then sigma equals sigma*sqrt(2)); the
    // sampled, truncated kernel and the clamped border leave a small residue,
    // so compare real responses away from the border.
    GrayImage img = random_image(32, 32, 11);
    double s = 1.2;
    RealImage twice = gaussian_blur_real(gaussian_blur_real(to_real(img), s), s);
    RealImage once = gaussian_blur_real(to_real(img), s * std::sqrt(2.0));
    int margin = 2 * static_cast<int>(std::ceil(3.0 * s * std::sqrt(2.0)));
    double worst = 0.0;
    for (int y = margin; y < 32 - margin; ++y)
        for (int x = margin; x < 32 - margin; ++x)
            worst = std::max(worst, std::abs(twice.at(x, y) - once.at(x, y)));
    CHECK(worst < 1.0);
}

TEST_CASE("blur stays inside the input range") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        GrayImage img = random_image(24, 20, seed);
        RealImage out = gaussian_blur_real(img, 1.4);
        int lo = 255, hi = 0;
        for (auto p : img.data) {
            lo = std::min(lo, int(p));
            hi = std::max(hi, int(p));
        }
        for (double v : out.data) {
            CHECK(v >= lo - 1e-9);
            CHECK(v <= hi + 1e-9);
        }
    }
}

TEST_CASE("blur reproduces linear ramps away from the border") {
    // A symmetric normalized kernel has zero first moment, so affine images
    // are fixed points wherever the support stays inside.
    RealImage img(40, 30);
    for (int y = 0; y < 30; ++y)
        for (int x = 0; x < 40; ++x) img.at(x, y) = 3.0 * x + 2.0 * y + 17.0;
    double sigma = 1.4;
    RealImage out = gaussian_blur_real(img, sigma);
    int r = static_cast<int>(std::ceil(3.0 * sigma));
    for (int y = r; y < 30 - r; ++y)
        for (int x = r; x < 40 - r; ++x)
            CHECK(out.at(x, y) == doctest::Approx(3.0 * x + 2.0 * y + 17.0).epsilon(1e-9));
}

TEST_CASE("non-positive sigma is rejected") {
    GrayImage img(8, 8, 0);
    CHECK_THROWS_AS(gaussian_blur(img, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_blur(img, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_kernel(0.0), std::invalid_argument);
}
