#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "doorsom/pnm.hpp"
#include "doorsom/rng.hpp"

using namespace doorsom;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& header,
                                   std::initializer_list<std::uint8_t> body) {
    std::vector<std::uint8_t> b(header.begin(), header.end());
    b.insert(b.end(), body);
    return b;
}

GrayImage random_gray(int w, int h, SplitMix64& rng) {
    GrayImage img(w, h);
    for (auto& p : img.data) p = static_cast<std::uint8_t>(rng.below(256));
    return img;
}

}  // namespace

TEST_CASE("p5 decode") {
    PnmImage img = load_pnm(bytes_of("P5\n2 1\n255\n", {0, 255}));
    auto& g = std::get<GrayImage>(img);
    CHECK(g.width == 2);
    CHECK(g.height == 1);
    CHECK(g.at(0, 0) == 0);
    CHECK(g.at(1, 0) == 255);
}

TEST_CASE("header comments are skipped") {
    GrayImage g = std::get<GrayImage>(load_pnm(bytes_of("P5\n# c\n1 1\n255\n", {7})));
    CHECK(g.width == 1);
    CHECK(g.at(0, 0) == 7);
}

TEST_CASE("p6 decode") {
    RgbImage c = std::get<RgbImage>(load_pnm(bytes_of("P6\n1 1\n255\n", {1, 2, 3})));
    CHECK(c.at(0, 0, 0) == 1);
    CHECK(c.at(0, 0, 1) == 2);
    CHECK(c.at(0, 0, 2) == 3);
}

TEST_CASE("malformed inputs fail with a byte offset") {
    auto expect_fail = [](std::vector<std::uint8_t> b, const char* frag) {
        try {
            load_pnm(b);
            FAIL_CHECK("expected parse error for ", frag);
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("pnm parse error at byte") != std::string::npos);
            CHECK(std::string(e.what()).find(frag) != std::string::npos);
        }
    };
    expect_fail(bytes_of("P4\n1 1\n255\n", {0}), "magic");
    expect_fail(bytes_of("P5\n1 1\n999\n", {0}), "maxval");
    expect_fail(bytes_of("P5\n2 2\n255\n", {0, 0}), "truncated");
    expect_fail(bytes_of("P5\n0 1\n255\n", {}), "dimension");

    // Truncation error reports the declared pixel count.
    try {
        load_pnm(bytes_of("P5\n3 2\n255\n", {0}));
        FAIL_CHECK("expected truncation error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("expected 6 bytes, got 1") != std::string::npos);
    }
}

TEST_CASE("minimal encodes") {
    GrayImage g(1, 1, 0);
    std::vector<std::uint8_t> want = bytes_of("P5\n1 1\n255\n", {0});
    CHECK(save_pnm(g) == want);

    RgbImage c(1, 1);
    c.set(0, 0, 1, 2, 3);
    CHECK(save_pnm(c) == bytes_of("P6\n1 1\n255\n", {1, 2, 3}));
}

TEST_CASE("round-trip is a bitwise identity") {
    SplitMix64 rng(77);
    GrayImage g = random_gray(16, 16, rng);
    CHECK(std::get<GrayImage>(load_pnm(save_pnm(g))) == g);

    for (int i = 0; i < 40; ++i) {
        int w = 1 + static_cast<int>(rng.below(64));
        int h = 1 + static_cast<int>(rng.below(64));
        GrayImage img = random_gray(w, h, rng);
        CHECK(std::get<GrayImage>(load_pnm(save_pnm(img))) == img);

        RgbImage rgb(w, h);
        for (auto& p : rgb.data) p = static_cast<std::uint8_t>(rng.below(256));
        CHECK(std::get<RgbImage>(load_pnm(save_pnm(rgb))) == rgb);
    }
}

TEST_CASE("file io round-trip") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "doorsom_pnm_test";
    fs::create_directories(dir);
    SplitMix64 rng(3);
    GrayImage img = random_gray(12, 9, rng);
    std::string path = (dir / "t.pgm").string();
    save_pnm_file(path, img);
    CHECK(to_gray(load_pnm_file(path)) == img);
    CHECK_THROWS(load_pnm_file((dir / "missing.pgm").string()));
    fs::remove_all(dir);
}
