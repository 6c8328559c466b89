#include "fiberfuse/raster.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "fiberfuse/error.hpp"

namespace fiberfuse {

void check_same_size(int w0, int h0, int w1, int h1, const char* what) {
  if (w0 != w1 || h0 != h1) {
    throw DimensionError(std::string(what) + ": size mismatch " + std::to_string(w0) + "x" +
                         std::to_string(h0) + " vs " + std::to_string(w1) + "x" +
                         std::to_string(h1));
  }
}

PixelBox PixelBox::intersected(const PixelBox& o) const {
  return {std::max(x0, o.x0), std::max(y0, o.y0), std::min(x1, o.x1), std::min(y1, o.y1)};
}

PixelBox PixelBox::united(const PixelBox& o) const {
  if (empty()) return o;
  if (o.empty()) return *this;
  return {std::min(x0, o.x0), std::min(y0, o.y0), std::max(x1, o.x1), std::max(y1, o.y1)};
}

BinaryMask::BinaryMask(int width, int height) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw InputError("mask dimensions must be non-negative");
  bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count_if(bits_.begin(), bits_.end(),
                                                [](std::uint8_t b) { return b != 0; }));
}

PixelBox BinaryMask::bounding_box() const {
  PixelBox box;
  box.x0 = width_;
  box.y0 = height_;
  for (int y = 0; y < height_; ++y) {
    const std::uint8_t* row = bits_.data() + index(0, y);
    for (int x = 0; x < width_; ++x) {
      if (!row[x]) continue;
      box.x0 = std::min(box.x0, x);
      box.x1 = std::max(box.x1, x);
      box.y0 = std::min(box.y0, y);
      box.y1 = std::max(box.y1, y);
    }
  }
  if (box.x1 < 0) return PixelBox{};
  return box;
}

BinaryMask& BinaryMask::operator|=(const BinaryMask& o) {
  check_same_size(width_, height_, o.width_, o.height_, "mask union");
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] = (bits_[i] | o.bits_[i]) ? 1 : 0;
  return *this;
}

BinaryMask& BinaryMask::operator&=(const BinaryMask& o) {
  check_same_size(width_, height_, o.width_, o.height_, "mask intersection");
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] = (bits_[i] && o.bits_[i]) ? 1 : 0;
  return *this;
}

BinaryMask operator|(BinaryMask a, const BinaryMask& b) { return a |= b; }
BinaryMask operator&(BinaryMask a, const BinaryMask& b) { return a &= b; }

BinaryMask difference(const BinaryMask& a, const BinaryMask& b) {
  check_same_size(a.width(), a.height(), b.width(), b.height(), "mask difference");
  BinaryMask out = a;
  auto& bits = out.bits();
  const auto& other = b.bits();
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = (bits[i] && !other[i]) ? 1 : 0;
  return out;
}

std::size_t intersect_count(const BinaryMask& a, const BinaryMask& b) {
  check_same_size(a.width(), a.height(), b.width(), b.height(), "intersect_count");
  std::size_t n = 0;
  const auto& x = a.bits();
  const auto& y = b.bits();
  for (std::size_t i = 0; i < x.size(); ++i) n += (x[i] && y[i]) ? 1 : 0;
  return n;
}

std::size_t union_count(const BinaryMask& a, const BinaryMask& b) {
  check_same_size(a.width(), a.height(), b.width(), b.height(), "union_count");
  std::size_t n = 0;
  const auto& x = a.bits();
  const auto& y = b.bits();
  for (std::size_t i = 0; i < x.size(); ++i) n += (x[i] || y[i]) ? 1 : 0;
  return n;
}

std::size_t intersect_count(const BinaryMask& a, const BinaryMask& b, const PixelBox& box) {
  check_same_size(a.width(), a.height(), b.width(), b.height(), "intersect_count");
  const PixelBox clip = box.intersected({0, 0, a.width() - 1, a.height() - 1});
  if (clip.empty()) return 0;
  std::size_t n = 0;
  for (int y = clip.y0; y <= clip.y1; ++y) {
    for (int x = clip.x0; x <= clip.x1; ++x) n += (a.at(x, y) && b.at(x, y)) ? 1 : 0;
  }
  return n;
}

BinaryMask dilate(const BinaryMask& m, int radius) {
  if (radius <= 0) return m;
  const int w = m.width();
  const int h = m.height();
  BinaryMask horizontal(w, h);
  for (int y = 0; y < h; ++y) {
    // Sliding-window count of set pixels in [x - r, x + r].
    int run = 0;
    for (int x = 0; x < std::min(radius, w); ++x) run += m.at(x, y);
    for (int x = 0; x < w; ++x) {
      if (x + radius < w) run += m.at(x + radius, y);
      if (x - radius - 1 >= 0) run -= m.at(x - radius - 1, y);
      if (run > 0) horizontal.set(x, y);
    }
  }
  BinaryMask out(w, h);
  for (int x = 0; x < w; ++x) {
    int run = 0;
    for (int y = 0; y < std::min(radius, h); ++y) run += horizontal.at(x, y);
    for (int y = 0; y < h; ++y) {
      if (y + radius < h) run += horizontal.at(x, y + radius);
      if (y - radius - 1 >= 0) run -= horizontal.at(x, y - radius - 1);
      if (run > 0) out.set(x, y);
    }
  }
  return out;
}

LabelGrid::LabelGrid(int w, int h, std::int32_t fill) : width(w), height(h) {
  if (w < 0 || h < 0) throw InputError("label grid dimensions must be non-negative");
  labels.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill);
}

BinaryMask LabelGrid::select(std::int32_t value) const {
  BinaryMask m(width, height);
  auto& bits = m.bits();
  for (std::size_t i = 0; i < labels.size(); ++i) bits[i] = labels[i] == value ? 1 : 0;
  return m;
}

Connectivity connectivity_from_int(int n) {
  if (n == 4) return Connectivity::Four;
  if (n == 8) return Connectivity::Eight;
  throw InputError("connectivity must be 4 or 8, got " + std::to_string(n));
}

std::vector<std::size_t> ComponentLabeling::areas() const {
  std::vector<std::size_t> out(static_cast<std::size_t>(count) + 1, 0);
  for (auto l : grid.labels) ++out[static_cast<std::size_t>(l)];
  return out;
}

ComponentLabeling connected_components(const BinaryMask& m, Connectivity connectivity) {
  ComponentLabeling result;
  result.grid = LabelGrid(m.width(), m.height());
  static constexpr std::array<std::array<int, 2>, 8> kOffsets = {
      {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, 1}, {1, -1}, {-1, -1}}};
  const int neighbors = connectivity == Connectivity::Eight ? 8 : 4;

  std::vector<std::array<int, 2>> stack;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (!m.at(x, y) || result.grid.at(x, y) != 0) continue;
      const int label = ++result.count;
      result.grid.at(x, y) = label;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        for (int k = 0; k < neighbors; ++k) {
          const int nx = cx + kOffsets[k][0];
          const int ny = cy + kOffsets[k][1];
          if (!m.contains(nx, ny) || !m.at(nx, ny) || result.grid.at(nx, ny) != 0) continue;
          result.grid.at(nx, ny) = label;
          stack.push_back({nx, ny});
        }
      }
    }
  }
  return result;
}

Polygon::Polygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3) throw InputError("polygon needs at least 3 vertices");
  for (const auto& p : vertices_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InputError("polygon vertex is not finite");
    }
  }
}

double Polygon::signed_area() const {
  double sum = 0.0;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = vertices_[i];
    const Point& b = vertices_[(i + 1) % n];
    sum += a.x * b.y - b.x * a.y;
  }
  return 0.5 * sum;
}

BinaryMask rasterize(const Polygon& p, int width, int height) {
  if (width <= 0 || height <= 0) throw InputError("rasterize: canvas must be non-empty");
  BinaryMask out(width, height);
  const auto& v = p.vertices();
  double ymin = v[0].y;
  double ymax = v[0].y;
  for (const auto& q : v) {
    ymin = std::min(ymin, q.y);
    ymax = std::max(ymax, q.y);
  }
  const int row0 = std::max(0, static_cast<int>(std::ceil(ymin)));
  const int row1 = std::min(height - 1, static_cast<int>(std::floor(ymax)));

  std::vector<double> crossings;
  for (int row = row0; row <= row1; ++row) {
    const double y = row;
    crossings.clear();
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
      const Point& a = v[j];
      const Point& b = v[i];
      // Half-open in y so a vertex on the scanline is counted once.
      if ((a.y <= y) == (b.y <= y)) continue;
      crossings.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
    }
    std::sort(crossings.begin(), crossings.end());
    for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
      // Inside iff crossings[k] <= x < crossings[k + 1].
      const double lo = std::max(std::ceil(crossings[k]), 0.0);
      const double hi = std::min(std::ceil(crossings[k + 1]) - 1.0, width - 1.0);
      for (int x = static_cast<int>(lo); x <= static_cast<int>(hi); ++x) out.set(x, row);
    }
  }
  return out;
}

namespace {

// Headings on the corner lattice: east, north, west, south (screen orientation,
// y down). Left turn is +1, right turn is +3 (mod 4).
constexpr std::array<std::array<int, 2>, 4> kStep = {{{1, 0}, {0, -1}, {-1, 0}, {0, 1}}};
// Pixel offsets from corner (cx, cy) for the pixel ahead-left / ahead-right of
// each heading. Corner (cx, cy) is the top-left corner of pixel (cx, cy).
constexpr std::array<std::array<int, 2>, 4> kAheadLeft = {{{0, -1}, {-1, -1}, {-1, 0}, {0, 0}}};
constexpr std::array<std::array<int, 2>, 4> kAheadRight = {{{0, 0}, {0, -1}, {-1, -1}, {-1, 0}}};

Polygon trace_outer_boundary(const LabelGrid& grid, int label, int px, int py) {
  auto inside = [&](int x, int y) {
    return x >= 0 && y >= 0 && x < grid.width && y < grid.height && grid.at(x, y) == label;
  };
  // Top edge of the topmost-leftmost pixel, walked westward with the region on
  // the left.
  const int start_x = px + 1;
  const int start_y = py;
  const int start_dir = 2;

  std::vector<Point> ring;
  int cx = start_x;
  int cy = start_y;
  int dir = start_dir;
  do {
    cx += kStep[dir][0];
    cy += kStep[dir][1];
    const bool left = inside(cx + kAheadLeft[dir][0], cy + kAheadLeft[dir][1]);
    const bool right = inside(cx + kAheadRight[dir][0], cy + kAheadRight[dir][1]);
    int next = dir;
    if (right) {
      next = (dir + 3) % 4;
    } else if (!left) {
      next = (dir + 1) % 4;
    }
    if (next != dir) ring.push_back({cx - 0.5, cy - 0.5});
    dir = next;
  } while (cx != start_x || cy != start_y || dir != start_dir);
  return Polygon(std::move(ring));
}

}  // namespace

std::vector<Polygon> extract_contours(const BinaryMask& m) {
  const ComponentLabeling cc = connected_components(m, Connectivity::Eight);
  std::vector<Polygon> out;
  out.reserve(static_cast<std::size_t>(cc.count));
  int next_label = 1;
  for (int y = 0; y < m.height() && next_label <= cc.count; ++y) {
    for (int x = 0; x < m.width(); ++x) {
      // First pixels appear in label order because labels follow raster scan.
      if (cc.grid.at(x, y) == next_label) {
        out.push_back(trace_outer_boundary(cc.grid, next_label, x, y));
        ++next_label;
      }
    }
  }
  return out;
}

std::vector<Point> pixel_convex_hull(const BinaryMask& m) {
  std::vector<Point> pts;
  for (int y = 0; y < m.height(); ++y) {
    int lo = -1;
    int hi = -1;
    for (int x = 0; x < m.width(); ++x) {
      if (!m.at(x, y)) continue;
      if (lo < 0) lo = x;
      hi = x;
    }
    if (lo < 0) continue;
    pts.push_back({lo - 0.5, y - 0.5});
    pts.push_back({lo - 0.5, y + 0.5});
    pts.push_back({hi + 0.5, y - 0.5});
    pts.push_back({hi + 0.5, y + 0.5});
  }
  if (pts.empty()) return pts;

  std::sort(pts.begin(), pts.end(),
            [](const Point& a, const Point& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  auto cross = [](const Point& o, const Point& a, const Point& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  // Monotone chain.
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    const Point& p = pts[i - 1];
    while (k >= t && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  // The chain above is counterclockwise for y up; flip for screen orientation.
  std::reverse(hull.begin(), hull.end());
  return hull;
}

}  // namespace fiberfuse
