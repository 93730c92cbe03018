#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "dofseg/colorspace.hpp"

namespace dofseg {

class BinaryMask;

/// Decode PNG (8/16-bit, gray/RGB, with or without alpha, palette) or JPEG
/// to 8-bit sRGB. Gray expands to r=g=b; alpha is dropped; 16-bit samples
/// are rescaled to [0,255]. Throws Error(DecodeFailed).
RgbImage decode_rgb(std::span<const std::uint8_t> bytes);

/// decode_rgb followed by the Lab conversion.
LabImage decode_image(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
RgbImage load_rgb(const std::filesystem::path& path);

/// 8-bit gray raster of `width*height` samples.
std::vector<std::uint8_t> encode_png_gray(int width, int height, std::span<const std::uint8_t> gray);
std::vector<std::uint8_t> encode_png_rgb(const RgbImage& img);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// Mask PNG: 0 background / 255 foreground.
void save_mask_png(const std::filesystem::path& path, const BinaryMask& mask);

/// Any decodable image; a pixel is on when its gray level is >= 128.
BinaryMask load_mask(const std::filesystem::path& path);

} // namespace dofseg
