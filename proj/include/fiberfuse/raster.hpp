#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fiberfuse {

/// Inclusive pixel rectangle. Empty when x1 < x0 or y1 < y0.
struct PixelBox {
  int x0 = 0;
  int y0 = 0;
  int x1 = -1;
  int y1 = -1;

  bool empty() const { return x1 < x0 || y1 < y0; }
  PixelBox intersected(const PixelBox& o) const;
  PixelBox united(const PixelBox& o) const;
};

/// Row-major bit raster. Pixel (x, y) has its center at coordinate (x, y).
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return bits_.size(); }

  bool at(int x, int y) const { return bits_[index(x, y)] != 0; }
  void set(int x, int y, bool v = true) { bits_[index(x, y)] = v ? 1 : 0; }
  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::vector<std::uint8_t>& bits() { return bits_; }

  /// Number of set pixels.
  std::size_t count() const;
  bool none() const { return count() == 0; }

  /// Tight box around set pixels; empty box for an empty mask.
  PixelBox bounding_box() const;

  BinaryMask& operator|=(const BinaryMask& o);
  BinaryMask& operator&=(const BinaryMask& o);

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

BinaryMask operator|(BinaryMask a, const BinaryMask& b);
BinaryMask operator&(BinaryMask a, const BinaryMask& b);
/// a \ b
BinaryMask difference(const BinaryMask& a, const BinaryMask& b);

std::size_t intersect_count(const BinaryMask& a, const BinaryMask& b);
std::size_t union_count(const BinaryMask& a, const BinaryMask& b);
/// Intersection restricted to a box; both masks must share dimensions.
std::size_t intersect_count(const BinaryMask& a, const BinaryMask& b, const PixelBox& box);

/// Chebyshev dilation (square structuring element of side 2r+1).
BinaryMask dilate(const BinaryMask& m, int radius);

/// Row-major integer grid: class labels, component labels, instance ids.
struct LabelGrid {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> labels;

  LabelGrid() = default;
  LabelGrid(int w, int h, std::int32_t fill = 0);

  std::int32_t at(int x, int y) const {
    return labels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(x)];
  }
  std::int32_t& at(int x, int y) {
    return labels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(x)];
  }

  /// Pixels equal to `value`.
  BinaryMask select(std::int32_t value) const;

  friend bool operator==(const LabelGrid&, const LabelGrid&) = default;
};

enum class Connectivity { Four = 4, Eight = 8 };

Connectivity connectivity_from_int(int n);

/// Dense labels 1..count; 0 is background.
struct ComponentLabeling {
  LabelGrid grid;
  int count = 0;

  /// Pixel count per label, indexed by label (entry 0 is background).
  std::vector<std::size_t> areas() const;
};

/// Labels are assigned in raster-scan order of each component's first pixel.
ComponentLabeling connected_components(const BinaryMask& m,
                                       Connectivity connectivity = Connectivity::Eight);

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Implicitly closed ring of at least three vertices.
class Polygon {
 public:
  explicit Polygon(std::vector<Point> vertices);

  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }

  /// Shoelace sum over (x, y) as stored; negative for rings that run
  /// counterclockwise on screen (y axis pointing down).
  double signed_area() const;

  friend bool operator==(const Polygon&, const Polygon&) = default;

 private:
  std::vector<Point> vertices_;
};

/// Sets every pixel whose center is inside `p` under the even-odd rule.
BinaryMask rasterize(const Polygon& p, int width, int height);

/// Outer boundary of each 8-connected component, counterclockwise on screen,
/// ordered by component label. Vertices lie on pixel corners, so rasterizing a
/// contour reproduces its component with any holes filled.
std::vector<Polygon> extract_contours(const BinaryMask& m);

/// Convex hull (counterclockwise on screen) of the corners of every set pixel.
/// Returns an empty vector for an empty mask.
std::vector<Point> pixel_convex_hull(const BinaryMask& m);

}  // namespace fiberfuse
