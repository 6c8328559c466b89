#include "fiberfuse/metrics.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "fiberfuse/error.hpp"

namespace fiberfuse {

double iou(const BinaryMask& a, const BinaryMask& b) {
  const std::size_t inter = intersect_count(a, b);
  const std::size_t uni = union_count(a, b);
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double dice(const BinaryMask& a, const BinaryMask& b) {
  const std::size_t inter = intersect_count(a, b);
  const std::size_t sizes = a.count() + b.count();
  if (sizes == 0) return 1.0;
  return 2.0 * static_cast<double>(inter) / static_cast<double>(sizes);
}

double containment(const BinaryMask& a, const BinaryMask& b) {
  const std::size_t inter = intersect_count(a, b);
  const std::size_t nb = b.count();
  if (nb == 0) throw InputError("containment of an empty mask is undefined");
  return static_cast<double>(inter) / static_cast<double>(nb);
}

ConfusionCounts confusion(const BinaryMask& reference, const BinaryMask& candidate) {
  check_same_size(reference.width(), reference.height(), candidate.width(), candidate.height(),
                  "confusion");
  ConfusionCounts c;
  const auto& a = reference.bits();
  const auto& b = candidate.bits();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] && b[i]) {
      ++c.tp;
    } else if (b[i]) {
      ++c.fp;
    } else if (a[i]) {
      ++c.fn;
    } else {
      ++c.tn;
    }
  }
  return c;
}

EvalReport mean_iou(const LabelGrid& prediction, const LabelGrid& truth,
                    std::span<const std::int32_t> classes) {
  check_same_size(prediction.width, prediction.height, truth.width, truth.height, "mean_iou");
  if (classes.empty()) throw InputError("mean_iou needs at least one class");

  // One pass accumulating per-class intersection and union.
  std::unordered_map<std::int32_t, std::size_t> slot;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (!slot.emplace(classes[i], i).second) {
      throw InputError("duplicate class id " + std::to_string(classes[i]) + " in class list");
    }
  }
  std::vector<std::size_t> inter(classes.size(), 0);
  std::vector<std::size_t> uni(classes.size(), 0);
  for (std::size_t i = 0; i < truth.labels.size(); ++i) {
    const auto p = slot.find(prediction.labels[i]);
    const auto t = slot.find(truth.labels[i]);
    if (p != slot.end() && t != slot.end() && p->second == t->second) {
      ++inter[p->second];
      ++uni[p->second];
      continue;
    }
    if (p != slot.end()) ++uni[p->second];
    if (t != slot.end()) ++uni[t->second];
  }

  EvalReport report;
  double sum = 0.0;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const double v =
        uni[k] == 0 ? 1.0 : static_cast<double>(inter[k]) / static_cast<double>(uni[k]);
    report.per_class_iou.push_back({classes[k], v});
    sum += v;
  }
  report.mean_iou = sum / static_cast<double>(classes.size());
  return report;
}

double channel_variance(const Image& gray) {
  if (gray.channels != 1) throw InputError("channel_variance expects a single-channel image");
  return channel_variance(gray, 0);
}

double channel_variance(const Image& img, int channel) {
  if (img.width <= 0 || img.height <= 0) throw InputError("channel_variance of an empty image");
  if (channel < 0 || channel >= img.channels) throw InputError("channel index out of range");
  const std::size_t n = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean += img.samples[i * static_cast<std::size_t>(img.channels) + static_cast<std::size_t>(channel)];
  }
  mean /= static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d =
        img.samples[i * static_cast<std::size_t>(img.channels) + static_cast<std::size_t>(channel)] -
        mean;
    acc += d * d;
  }
  return acc / static_cast<double>(n);
}

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : report.per_class_iou) classes.push_back({{"id", c.class_id}, {"iou", c.iou}});
  return {{"classes", std::move(classes)}, {"mean_iou", report.mean_iou}};
}

EvalReport eval_report_from_json(const nlohmann::json& j) {
  EvalReport r;
  try {
    for (const auto& c : j.at("classes")) {
      r.per_class_iou.push_back({c.at("id").get<std::int32_t>(), c.at("iou").get<double>()});
    }
    r.mean_iou = j.at("mean_iou").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed evaluation report: ") + e.what());
  }
  return r;
}

}  // namespace fiberfuse
