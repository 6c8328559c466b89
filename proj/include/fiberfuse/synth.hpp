#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "json.hpp"

#include "fiberfuse/fusion.hpp"
#include "fiberfuse/image.hpp"
#include "fiberfuse/raster.hpp"

namespace fiberfuse {

/// A straight fiber drawn as a rotated rectangle. The angle is measured in
/// degrees counterclockwise on screen from the +x axis.
struct StripeSpec {
  double cx = 0.0;
  double cy = 0.0;
  double length = 0.0;
  double width = 1.0;
  double angle_deg = 0.0;
};

/// Round false positives (bubbles, dust) placed off the fibers.
struct NoiseBlobSpec {
  int count = 0;
  double min_radius = 2.0;
  double max_radius = 5.0;
};

struct SceneSpec {
  int width = 0;
  int height = 0;
  std::vector<StripeSpec> stripes;
  int fragments = 1;  ///< pieces each stripe is cut into
  double gap = 0.0;   ///< length removed between neighbouring pieces
  NoiseBlobSpec noise;
  std::uint64_t seed = 0;

  void validate() const;
};

SceneSpec scene_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SceneSpec& spec);

struct SyntheticScene {
  InstanceSet ground_truth;  ///< one instance per stripe, ids 1..S
  InstanceSet fragmented;    ///< pieces of every stripe, then noise blobs
  BinaryMask semantic;       ///< union of the ground-truth stripes
  Image image;               ///< RGB rendering
};

Polygon stripe_polygon(const StripeSpec& stripe);

/// Pure function of the spec. Throws InputError for an invalid spec or a
/// stripe that misses the canvas entirely.
SyntheticScene generate(const SceneSpec& spec);

struct GeometricParams {
  double scale = 1.0;
  double rotation_deg = 0.0;
  /// Horizontal shear factor, our reading of "distortion".
  double shear = 0.0;
};

/// Applies scale, shear and rotation about the canvas center. The image is
/// resampled bilinearly, masks by nearest neighbour; the canvas size is kept
/// and uncovered pixels become 0.
std::pair<Image, std::vector<BinaryMask>> geometric_augment(const Image& img,
                                                            const std::vector<BinaryMask>& masks,
                                                            const GeometricParams& params);

struct AdvancedParams {
  double blur_sigma = 0.0;
  double noise_stddev = 0.0;
  std::uint64_t noise_seed = 0;
  double brightness_delta = 0.0;
  double sharpness_amount = 0.0;
};

/// Photometric augmentation, applied as blur, unsharp mask, brightness shift,
/// then additive Gaussian noise. Results are rounded and clamped to [0, 255].
Image advanced_augment(const Image& img, const AdvancedParams& params);

/// Normalized Gaussian taps for offsets -r..r with r = ceil(3 sigma).
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian blur with replicated borders (no rounding).
std::vector<double> gaussian_blur(const std::vector<double>& samples, int width, int height,
                                  int channels, double sigma);

}  // namespace fiberfuse
