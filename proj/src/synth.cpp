#include "fiberfuse/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "fiberfuse/error.hpp"

namespace fiberfuse {

void SceneSpec::validate() const {
  if (width <= 0 || height <= 0) throw InputError("scene canvas must be non-empty");
  if (fragments < 1) throw InputError("fragments per stripe must be at least 1");
  if (!(gap >= 0.0)) throw InputError("gap must be non-negative");
  for (const auto& s : stripes) {
    if (!(s.width >= 1.0)) throw InputError("stripe width must be at least 1 px");
    if (!(s.length > 0.0)) throw InputError("stripe length must be positive");
    if (!(gap < s.length / fragments)) throw InputError("gap must be shorter than length / fragments");
    if (!std::isfinite(s.cx) || !std::isfinite(s.cy) || !std::isfinite(s.angle_deg)) {
      throw InputError("stripe geometry must be finite");
    }
  }
  if (noise.count < 0) throw InputError("noise blob count must be non-negative");
  if (noise.count > 0 && !(noise.min_radius > 0.0 && noise.min_radius <= noise.max_radius)) {
    throw InputError("noise radii must satisfy 0 < min_radius <= max_radius");
  }
}

SceneSpec scene_spec_from_json(const nlohmann::json& j) {
  SceneSpec spec;
  try {
    spec.width = j.at("width").get<int>();
    spec.height = j.at("height").get<int>();
    for (const auto& s : j.at("stripes")) {
      spec.stripes.push_back({s.at("cx").get<double>(), s.at("cy").get<double>(),
                              s.at("length").get<double>(), s.at("width").get<double>(),
                              s.value("angle", 0.0)});
    }
    spec.fragments = j.value("fragments", 1);
    spec.gap = j.value("gap", 0.0);
    if (j.contains("noise_blobs")) {
      const auto& n = j.at("noise_blobs");
      spec.noise.count = n.value("count", 0);
      spec.noise.min_radius = n.value("min_radius", spec.noise.min_radius);
      spec.noise.max_radius = n.value("max_radius", spec.noise.max_radius);
    }
    spec.seed = j.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed scene spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

nlohmann::json to_json(const SceneSpec& spec) {
  nlohmann::json stripes = nlohmann::json::array();
  for (const auto& s : spec.stripes) {
    stripes.push_back({{"cx", s.cx}, {"cy", s.cy}, {"length", s.length}, {"width", s.width}, {"angle", s.angle_deg}});
  }
  return {{"width", spec.width},
          {"height", spec.height},
          {"stripes", std::move(stripes)},
          {"fragments", spec.fragments},
          {"gap", spec.gap},
          {"noise_blobs",
           {{"count", spec.noise.count}, {"min_radius", spec.noise.min_radius}, {"max_radius", spec.noise.max_radius}}},
          {"seed", spec.seed}};
}

namespace {

struct Axis {
  double ux;
  double uy;
};

Axis stripe_axis(const StripeSpec& s) {
  const double a = s.angle_deg * std::numbers::pi / 180.0;
  return {std::cos(a), -std::sin(a)};
}

Polygon circle_polygon(double cx, double cy, double r) {
  constexpr int kSides = 24;
  std::vector<Point> pts;
  for (int k = 0; k < kSides; ++k) {
    const double a = 2.0 * std::numbers::pi * k / kSides;
    pts.push_back({cx + r * std::cos(a), cy - r * std::sin(a)});
  }
  return Polygon(std::move(pts));
}

// Splits a stripe mask into pieces along its axis, leaving `gap` between them.
std::vector<BinaryMask> cut_stripe(const BinaryMask& stripe, const StripeSpec& s, int pieces, double gap) {
  const Axis u = stripe_axis(s);
  const double piece = (s.length - (pieces - 1) * gap) / pieces;
  std::vector<BinaryMask> out(static_cast<std::size_t>(pieces), BinaryMask(stripe.width(), stripe.height()));
  const PixelBox box = stripe.bounding_box();
  for (int y = box.y0; y <= box.y1; ++y) {
    for (int x = box.x0; x <= box.x1; ++x) {
      if (!stripe.at(x, y)) continue;
      const double t = (x - s.cx) * u.ux + (y - s.cy) * u.uy + 0.5 * s.length;
      const int k = std::clamp(static_cast<int>(std::floor(t / (piece + gap))), 0, pieces - 1);
      if (k < pieces - 1 && t - k * (piece + gap) >= piece) continue;
      out[static_cast<std::size_t>(k)].set(x, y);
    }
  }
  return out;
}

std::uint8_t to_sample(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

}  // namespace

Polygon stripe_polygon(const StripeSpec& s) {
  const Axis u = stripe_axis(s);
  const double nx = -u.uy;
  const double ny = u.ux;
  const double hl = 0.5 * s.length;
  const double hw = 0.5 * s.width;
  return Polygon({{s.cx - u.ux * hl - nx * hw, s.cy - u.uy * hl - ny * hw},
                  {s.cx + u.ux * hl - nx * hw, s.cy + u.uy * hl - ny * hw},
                  {s.cx + u.ux * hl + nx * hw, s.cy + u.uy * hl + ny * hw},
                  {s.cx - u.ux * hl + nx * hw, s.cy - u.uy * hl + ny * hw}});
}

SyntheticScene generate(const SceneSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  SyntheticScene scene;
  scene.ground_truth = {spec.width, spec.height, {}};
  scene.fragmented = {spec.width, spec.height, {}};
  scene.semantic = BinaryMask(spec.width, spec.height);

  std::uniform_real_distribution<double> score_dist(0.5, 1.0);
  int next_fragment_id = 1;
  for (std::size_t i = 0; i < spec.stripes.size(); ++i) {
    const StripeSpec& s = spec.stripes[i];
    Polygon outline = stripe_polygon(s);
    BinaryMask mask = rasterize(outline, spec.width, spec.height);
    if (mask.none()) throw InputError("stripe " + std::to_string(i) + " lies entirely off the canvas");
    for (auto& piece : cut_stripe(mask, s, spec.fragments, spec.gap)) {
      if (piece.none()) continue;
      scene.fragmented.instances.push_back({next_fragment_id++, 1, score_dist(rng), std::move(piece), std::nullopt});
    }
    scene.semantic |= mask;
    scene.ground_truth.instances.push_back({static_cast<int>(i) + 1, 1, std::nullopt, std::move(mask), std::move(outline)});
  }
  // A fragment count of one with no gap reproduces the stripe exactly; carry
  // the outline over so both files encode it the same way.
  if (spec.fragments == 1) {
    for (auto& f : scene.fragmented.instances) {
      for (const auto& g : scene.ground_truth.instances) {
        if (f.mask == g.mask) f.polygon = g.polygon;
      }
    }
  }

  std::vector<BinaryMask> blobs;
  if (spec.noise.count > 0) {
    std::uniform_real_distribution<double> xs(0.0, spec.width - 1.0);
    std::uniform_real_distribution<double> ys(0.0, spec.height - 1.0);
    std::uniform_real_distribution<double> rs(spec.noise.min_radius, spec.noise.max_radius);
    for (int b = 0; b < spec.noise.count; ++b) {
      for (int attempt = 0; attempt < 100; ++attempt) {
        const double cx = xs(rng);
        const double cy = ys(rng);
        const double r = rs(rng);
        Polygon outline = circle_polygon(cx, cy, r);
        BinaryMask m = rasterize(outline, spec.width, spec.height);
        if (m.none() || intersect_count(m, scene.semantic) > 0) continue;
        blobs.push_back(m);
        scene.fragmented.instances.push_back({next_fragment_id++, 1, score_dist(rng), std::move(m), std::move(outline)});
        break;
      }
    }
  }

  scene.image = Image(spec.width, spec.height, 3);
  std::uniform_int_distribution<int> grain(-6, 6);
  constexpr std::array<int, 3> kSheet = {214, 204, 186};
  constexpr std::array<int, 3> kFiber = {52, 70, 150};
  constexpr std::array<int, 3> kBubble = {240, 240, 236};
  BinaryMask blob_union(spec.width, spec.height);
  for (const auto& b : blobs) blob_union |= b;
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      const auto& base = scene.semantic.at(x, y) ? kFiber : blob_union.at(x, y) ? kBubble : kSheet;
      const int g = grain(rng);
      for (int c = 0; c < 3; ++c) scene.image.at(x, y, c) = to_sample(base[static_cast<std::size_t>(c)] + g);
    }
  }
  return scene;
}

std::pair<Image, std::vector<BinaryMask>> geometric_augment(const Image& img,
                                                            const std::vector<BinaryMask>& masks,
                                                            const GeometricParams& params) {
  if (!(params.scale > 0.0)) throw InputError("scale must be positive");
  for (const auto& m : masks) check_same_size(img.width, img.height, m.width(), m.height(), "geometric_augment");

  auto snap = [](double v) {
    if (std::abs(v) < 1e-12) return 0.0;
    if (std::abs(v - 1.0) < 1e-12) return 1.0;
    if (std::abs(v + 1.0) < 1e-12) return -1.0;
    return v;
  };
  const double a = params.rotation_deg * std::numbers::pi / 180.0;
  const double c = snap(std::cos(a));
  const double s = snap(std::sin(a));
  // Forward map M = R * Shear * Scale.
  const double m00 = params.scale * c;
  const double m01 = params.scale * (c * params.shear - s);
  const double m10 = params.scale * s;
  const double m11 = params.scale * (s * params.shear + c);
  const double det = m00 * m11 - m01 * m10;
  const double i00 = m11 / det;
  const double i01 = -m01 / det;
  const double i10 = -m10 / det;
  const double i11 = m00 / det;
  const double cx = 0.5 * (img.width - 1);
  const double cy = 0.5 * (img.height - 1);

  Image out_img(img.width, img.height, img.channels);
  std::vector<BinaryMask> out_masks(masks.size(), BinaryMask(img.width, img.height));
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const double sx = cx + i00 * (x - cx) + i01 * (y - cy);
      const double sy = cy + i10 * (x - cx) + i11 * (y - cy);
      if (sx < -0.5 || sy < -0.5 || sx >= img.width - 0.5 || sy >= img.height - 0.5) continue;

      const long nx = std::clamp(std::lround(sx), 0L, static_cast<long>(img.width - 1));
      const long ny = std::clamp(std::lround(sy), 0L, static_cast<long>(img.height - 1));
      for (std::size_t k = 0; k < masks.size(); ++k) {
        if (masks[k].at(static_cast<int>(nx), static_cast<int>(ny))) out_masks[k].set(x, y);
      }

      const double bx = std::clamp(sx, 0.0, img.width - 1.0);
      const double by = std::clamp(sy, 0.0, img.height - 1.0);
      const int x0 = static_cast<int>(std::floor(bx));
      const int y0 = static_cast<int>(std::floor(by));
      const int x1 = std::min(x0 + 1, img.width - 1);
      const int y1 = std::min(y0 + 1, img.height - 1);
      const double fx = bx - x0;
      const double fy = by - y0;
      for (int ch = 0; ch < img.channels; ++ch) {
        const double v = (1 - fx) * (1 - fy) * img.at(x0, y0, ch) + fx * (1 - fy) * img.at(x1, y0, ch) +
                         (1 - fx) * fy * img.at(x0, y1, ch) + fx * fy * img.at(x1, y1, ch);
        out_img.at(x, y, ch) = to_sample(v);
      }
    }
  }
  return {std::move(out_img), std::move(out_masks)};
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma >= 0.0)) throw InputError("blur sigma must be non-negative");
  if (sigma == 0.0) return {1.0};
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * r + 1));
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    const double w = std::exp(-0.5 * i * i / (sigma * sigma));
    k[static_cast<std::size_t>(i + r)] = w;
    sum += w;
  }
  for (auto& w : k) w /= sum;
  return k;
}

std::vector<double> gaussian_blur(const std::vector<double>& samples, int width, int height, int channels,
                                  double sigma) {
  const auto k = gaussian_kernel(sigma);
  const int r = static_cast<int>(k.size() / 2);
  if (r == 0) return samples;
  auto idx = [&](int x, int y, int c) {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(channels) +
           static_cast<std::size_t>(c);
  };
  std::vector<double> tmp(samples.size());
  std::vector<double> out(samples.size());
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        double acc = 0.0;
        for (int i = -r; i <= r; ++i) acc += k[static_cast<std::size_t>(i + r)] * samples[idx(std::clamp(x + i, 0, width - 1), y, c)];
        tmp[idx(x, y, c)] = acc;
      }
    }
  }
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        double acc = 0.0;
        for (int i = -r; i <= r; ++i) acc += k[static_cast<std::size_t>(i + r)] * tmp[idx(x, std::clamp(y + i, 0, height - 1), c)];
        out[idx(x, y, c)] = acc;
      }
    }
  }
  return out;
}

Image advanced_augment(const Image& img, const AdvancedParams& params) {
  if (!(params.blur_sigma >= 0.0)) throw InputError("blur sigma must be non-negative");
  if (!(params.noise_stddev >= 0.0)) throw InputError("noise stddev must be non-negative");
  constexpr double kSharpenSigma = 1.0;

  std::vector<double> v(img.samples.begin(), img.samples.end());
  if (params.blur_sigma > 0.0) v = gaussian_blur(v, img.width, img.height, img.channels, params.blur_sigma);
  if (params.sharpness_amount != 0.0) {
    const auto soft = gaussian_blur(v, img.width, img.height, img.channels, kSharpenSigma);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += params.sharpness_amount * (v[i] - soft[i]);
  }
  if (params.brightness_delta != 0.0) {
    for (auto& x : v) x += params.brightness_delta;
  }
  if (params.noise_stddev > 0.0) {
    std::mt19937_64 rng(params.noise_seed);
    std::normal_distribution<double> noise(0.0, params.noise_stddev);
    for (auto& x : v) x += noise(rng);
  }
  Image out(img.width, img.height, img.channels);
  for (std::size_t i = 0; i < v.size(); ++i) out.samples[i] = to_sample(v[i]);
  return out;
}

}  // namespace fiberfuse
