#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "doorsom/image.hpp"

namespace doorsom {

using PnmImage = std::variant<GrayImage, RgbImage>;

// Binary Netpbm I/O: "P5" grayscale and "P6" RGB, maxval <= 255, '#' comments
// permitted in the header. Pixel values pass through untouched, so
// load_pnm(save_pnm(img)) is a bitwise identity.
PnmImage load_pnm(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> save_pnm(const GrayImage& img);
std::vector<std::uint8_t> save_pnm(const RgbImage& img);
std::vector<std::uint8_t> save_pnm(const PnmImage& img);

PnmImage load_pnm_file(const std::string& path);
void save_pnm_file(const std::string& path, const GrayImage& img);
void save_pnm_file(const std::string& path, const RgbImage& img);

/// Grayscale view of a loaded PNM; P6 data goes through rgb_to_gray.
GrayImage to_gray(const PnmImage& img);

}  // namespace doorsom
