#include "doorsom/pnm.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace doorsom {

namespace {

[[noreturn]] void parse_fail(std::size_t offset, const std::string& what) {
    throw std::runtime_error("pnm parse error at byte " + std::to_string(offset) + ": " + what);
}

bool is_space(std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

// Skips whitespace and '#'-to-end-of-line comments between header tokens.
void skip_separators(std::span<const std::uint8_t> bytes, std::size_t& pos) {
    while (pos < bytes.size()) {
        if (is_space(bytes[pos])) {
            ++pos;
        } else if (bytes[pos] == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else {
            break;
        }
    }
}

unsigned read_uint(std::span<const std::uint8_t> bytes, std::size_t& pos, const char* name) {
    skip_separators(bytes, pos);
    if (pos >= bytes.size() || bytes[pos] < '0' || bytes[pos] > '9')
        parse_fail(pos, std::string("expected unsigned integer for ") + name);
    unsigned value = 0;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
        value = value * 10 + (bytes[pos] - '0');
        if (value > 1000000u) parse_fail(pos, std::string(name) + " out of range");
        ++pos;
    }
    return value;
}

}  // namespace

PnmImage load_pnm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2) parse_fail(0, "missing magic");
    if (bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6'))
        parse_fail(0, "bad magic, expected P5 or P6");
    bool rgb = bytes[1] == '6';

    std::size_t pos = 2;
    unsigned width = read_uint(bytes, pos, "width");
    unsigned height = read_uint(bytes, pos, "height");
    unsigned maxval = read_uint(bytes, pos, "maxval");
    if (width == 0 || height == 0) parse_fail(pos, "zero image dimension");
    if (maxval == 0 || maxval > 255) parse_fail(pos, "maxval must be in [1, 255]");

    // Exactly one whitespace byte separates the header from the binary body.
    if (pos >= bytes.size() || !is_space(bytes[pos]))
        parse_fail(pos, "expected single whitespace before pixel data");
    ++pos;

    std::size_t npix = static_cast<std::size_t>(width) * height * (rgb ? 3 : 1);
    if (bytes.size() - pos < npix)
        parse_fail(bytes.size(), "truncated pixel data, expected " + std::to_string(npix) +
                                     " bytes, got " + std::to_string(bytes.size() - pos));

    if (rgb) {
        RgbImage img(static_cast<int>(width), static_cast<int>(height));
        std::copy(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                  bytes.begin() + static_cast<std::ptrdiff_t>(pos + npix), img.data.begin());
        return img;
    }
    GrayImage img(static_cast<int>(width), static_cast<int>(height));
    std::copy(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
              bytes.begin() + static_cast<std::ptrdiff_t>(pos + npix), img.data.begin());
    return img;
}

namespace {

std::vector<std::uint8_t> write_pnm(const char* magic, int w, int h,
                                    const std::vector<std::uint8_t>& body) {
    char header[64];
    int n = std::snprintf(header, sizeof header, "%s\n%d %d\n255\n", magic, w, h);
    std::vector<std::uint8_t> out;
    out.reserve(static_cast<std::size_t>(n) + body.size());
    out.insert(out.end(), header, header + n);
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

}  // namespace

std::vector<std::uint8_t> save_pnm(const GrayImage& img) {
    return write_pnm("P5", img.width, img.height, img.data);
}

std::vector<std::uint8_t> save_pnm(const RgbImage& img) {
    return write_pnm("P6", img.width, img.height, img.data);
}

std::vector<std::uint8_t> save_pnm(const PnmImage& img) {
    return std::visit([](const auto& i) { return save_pnm(i); }, img);
}

PnmImage load_pnm_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                    std::istreambuf_iterator<char>());
    return load_pnm(bytes);
}

namespace {

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace

void save_pnm_file(const std::string& path, const GrayImage& img) {
    write_file(path, save_pnm(img));
}

void save_pnm_file(const std::string& path, const RgbImage& img) {
    write_file(path, save_pnm(img));
}

GrayImage to_gray(const PnmImage& img) {
    if (const auto* g = std::get_if<GrayImage>(&img)) return *g;
    return rgb_to_gray(std::get<RgbImage>(img));
}

}  // namespace doorsom
