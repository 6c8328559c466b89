#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fiberfuse {

/// Interleaved 8-bit raster with 1 (gray) or 3 (RGB) channels, row-major.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> samples;

  Image() = default;
  Image(int w, int h, int c, std::uint8_t fill = 0);

  std::size_t offset(int x, int y, int c = 0) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
            static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(channels) +
           static_cast<std::size_t>(c);
  }
  std::uint8_t at(int x, int y, int c = 0) const { return samples[offset(x, y, c)]; }
  std::uint8_t& at(int x, int y, int c = 0) { return samples[offset(x, y, c)]; }

  /// Copy of a single channel as a gray image.
  Image channel(int c) const;
  /// Gray images are replicated into three channels; RGB is returned as is.
  Image to_rgb() const;

  friend bool operator==(const Image&, const Image&) = default;
};

}  // namespace fiberfuse
