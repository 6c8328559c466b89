#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fiberfuse/image.hpp"
#include "fiberfuse/raster.hpp"

namespace fiberfuse {

/// Gray PNGs load with one channel, everything else with three. Alpha is
/// composited away.
Image read_png(const std::filesystem::path& path);
Image decode_png(const std::vector<std::uint8_t>& bytes);
void write_png(const std::filesystem::path& path, const Image& img);
std::vector<std::uint8_t> encode_png(const Image& img);

/// Any nonzero sample marks foreground.
BinaryMask mask_from_image(const Image& img);
/// Foreground is written as 255, background as 0.
Image mask_to_image(const BinaryMask& m);

BinaryMask read_mask_png(const std::filesystem::path& path);
void write_mask_png(const std::filesystem::path& path, const BinaryMask& m);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

}  // namespace fiberfuse
