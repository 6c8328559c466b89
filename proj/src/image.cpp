#include "fiberfuse/image.hpp"

#include <string>

#include "fiberfuse/error.hpp"

namespace fiberfuse {

Image::Image(int w, int h, int c, std::uint8_t fill) : width(w), height(h), channels(c) {
  if (w < 0 || h < 0) throw InputError("image dimensions must be non-negative");
  if (c != 1 && c != 3) throw InputError("image must have 1 or 3 channels");
  samples.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) *
                     static_cast<std::size_t>(c),
                 fill);
}

Image Image::channel(int c) const {
  if (c < 0 || c >= channels) throw InputError("channel index " + std::to_string(c) + " out of range");
  Image out(width, height, 1);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) out.at(x, y) = at(x, y, c);
  }
  return out;
}

Image Image::to_rgb() const {
  if (channels == 3) return *this;
  Image out(width, height, 3);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = at(x, y);
    }
  }
  return out;
}

}  // namespace fiberfuse
