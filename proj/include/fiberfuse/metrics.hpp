#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"

#include "fiberfuse/image.hpp"
#include "fiberfuse/raster.hpp"

namespace fiberfuse {

/// Pixel counts of a candidate mask B against a reference mask A.
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct ClassIoU {
  std::int32_t class_id = 0;
  double iou = 0.0;
};

struct EvalReport {
  std::vector<ClassIoU> per_class_iou;
  double mean_iou = 0.0;

  std::size_t class_count() const { return per_class_iou.size(); }
};

// Both empty counts as perfect agreement (1.0) for iou and dice, so classes
// absent from prediction and truth do not drag a mean down.
double iou(const BinaryMask& a, const BinaryMask& b);
double dice(const BinaryMask& a, const BinaryMask& b);

/// Share of `b` lying inside `a`: |A ∩ B| / |B|. Throws InputError for empty b.
double containment(const BinaryMask& a, const BinaryMask& b);

ConfusionCounts confusion(const BinaryMask& reference, const BinaryMask& candidate);

/// Class-vs-rest IoU per listed class and their arithmetic mean. The mean runs
/// over `classes` as given, whether or not a class occurs in either grid.
EvalReport mean_iou(const LabelGrid& prediction, const LabelGrid& truth,
                    std::span<const std::int32_t> classes);

/// Population variance of a single-channel image.
double channel_variance(const Image& gray);
double channel_variance(const Image& img, int channel);

nlohmann::json to_json(const EvalReport& report);
EvalReport eval_report_from_json(const nlohmann::json& j);

}  // namespace fiberfuse
