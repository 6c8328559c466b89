#include "fiberfuse/png_io.hpp"

#include <openssl/evp.h>
#include <png.h>

#include <cctype>
#include <fstream>
#include <iterator>

#include "fiberfuse/error.hpp"

namespace fiberfuse {

namespace {

Image finish_read(png_image& png, const std::string& source) {
  const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  Image img(static_cast<int>(png.width), static_cast<int>(png.height), color ? 3 : 1);
  if (!png_image_finish_read(&png, nullptr, img.samples.data(), 0, nullptr)) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw InputError("cannot decode PNG " + source + ": " + msg);
  }
  return img;
}

png_image make_write_header(const Image& img) {
  if (img.width <= 0 || img.height <= 0) throw InputError("cannot encode an empty image");
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(img.width);
  png.height = static_cast<png_uint_32>(img.height);
  png.format = img.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  return png;
}

}  // namespace

Image read_png(const std::filesystem::path& path) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  const std::string name = path.string();
  if (!png_image_begin_read_from_file(&png, name.c_str())) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw InputError("cannot read PNG " + name + ": " + msg);
  }
  return finish_read(png, name);
}

Image decode_png(const std::vector<std::uint8_t>& bytes) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size())) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw InputError("cannot decode in-memory PNG: " + msg);
  }
  return finish_read(png, "<memory>");
}

void write_png(const std::filesystem::path& path, const Image& img) {
  const auto bytes = encode_png(img);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("failed writing " + path.string());
}

std::vector<std::uint8_t> encode_png(const Image& img) {
  png_image png = make_write_header(img);
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&png, nullptr, &size, 0, img.samples.data(), 0, nullptr)) {
    throw InputError(std::string("PNG size query failed: ") + png.message);
  }
  std::vector<std::uint8_t> bytes(size);
  if (!png_image_write_to_memory(&png, bytes.data(), &size, 0, img.samples.data(), 0, nullptr)) {
    throw InputError(std::string("PNG encode failed: ") + png.message);
  }
  bytes.resize(size);
  return bytes;
}

BinaryMask mask_from_image(const Image& img) {
  BinaryMask m(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      bool on = false;
      for (int c = 0; c < img.channels; ++c) on = on || img.at(x, y, c) != 0;
      if (on) m.set(x, y);
    }
  }
  return m;
}

Image mask_to_image(const BinaryMask& m) {
  Image img(m.width(), m.height(), 1);
  for (std::size_t i = 0; i < m.bits().size(); ++i) img.samples[i] = m.bits()[i] ? 255 : 0;
  return img;
}

BinaryMask read_mask_png(const std::filesystem::path& path) { return mask_from_image(read_png(path)); }

void write_mask_png(const std::filesystem::path& path, const BinaryMask& m) {
  write_png(path, mask_to_image(m));
}

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  std::string clean;
  clean.reserve(text.size());
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) clean.push_back(c);
  }
  if (clean.size() % 4 != 0) throw InputError("base64 payload length is not a multiple of 4");
  std::vector<std::uint8_t> out(3 * clean.size() / 4);
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(clean.data()),
                                static_cast<int>(clean.size()));
  if (n < 0) throw InputError("invalid base64 payload");
  // EVP_DecodeBlock keeps the bytes produced by '=' padding.
  std::size_t size = static_cast<std::size_t>(n);
  if (!clean.empty() && clean.back() == '=') --size;
  if (clean.size() >= 2 && clean[clean.size() - 2] == '=') --size;
  out.resize(size);
  return out;
}

}  // namespace fiberfuse
