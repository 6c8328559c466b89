#include "fiberfuse/lossmath.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fiberfuse/error.hpp"

namespace fiberfuse {

namespace {

void check_shape(int width, int height, int classes, std::size_t n, const char* what) {
  if (width <= 0 || height <= 0) throw InputError(std::string(what) + ": empty map");
  if (classes < 1) throw InputError(std::string(what) + ": need at least one class");
  const std::size_t expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) *
                               static_cast<std::size_t>(classes);
  if (n != expected) {
    throw InputError(std::string(what) + ": expected " + std::to_string(expected) + " values, got " +
                     std::to_string(n));
  }
}

void check_pair(const ProbabilityMap& p, const GroundTruthMap& t, const char* what) {
  check_same_size(p.width(), p.height(), t.width(), t.height(), what);
  if (p.classes() != t.classes()) {
    throw DimensionError(std::string(what) + ": class count mismatch " +
                         std::to_string(p.classes()) + " vs " + std::to_string(t.classes()));
  }
}

double clamp_prob(double v, const LossConfig& cfg) { return std::clamp(v, cfg.clamp, 1.0 - cfg.clamp); }

bool in_clamp_range(double v, const LossConfig& cfg) { return v > cfg.clamp && v < 1.0 - cfg.clamp; }

// Binary cross-entropy over the entries channel, channel + stride, ...
LossResult binary_crossentropy_channel(const ProbabilityMap& p, const GroundTruthMap& t,
                                       const LossConfig& cfg, int channel) {
  const auto& pv = p.values();
  const auto& tv = t.values();
  const std::size_t stride = static_cast<std::size_t>(p.classes());
  const double n = static_cast<double>(p.pixels());
  LossResult r;
  r.gradient.assign(pv.size(), 0.0);
  double sum = 0.0;
  for (std::size_t px = 0; px < p.pixels(); ++px) {
    const std::size_t i = px * stride + static_cast<std::size_t>(channel);
    const double y = tv[i];
    const double q = clamp_prob(pv[i], cfg);
    sum += -(y * std::log(q) + (1.0 - y) * std::log(1.0 - q));
    if (in_clamp_range(pv[i], cfg)) r.gradient[i] = (-y / q + (1.0 - y) / (1.0 - q)) / n;
  }
  r.value = sum / n;
  return r;
}

}  // namespace

ProbabilityMap::ProbabilityMap(int width, int height, int classes, std::vector<double> probs,
                               SimplexCheck check)
    : width_(width), height_(height), classes_(classes), probs_(std::move(probs)) {
  check_shape(width_, height_, classes_, probs_.size(), "probability map");
  for (double v : probs_) {
    if (!(v >= 0.0 && v <= 1.0)) throw InputError("probability outside [0, 1]");
  }
  if (classes_ > 1 && check == SimplexCheck::Enforce) {
    for (std::size_t px = 0; px < pixels(); ++px) {
      double s = 0.0;
      for (int c = 0; c < classes_; ++c) s += probs_[px * static_cast<std::size_t>(classes_) + static_cast<std::size_t>(c)];
      if (std::abs(s - 1.0) > 1e-6) {
        throw InputError("class probabilities of pixel " + std::to_string(px) + " sum to " +
                         std::to_string(s));
      }
    }
  }
}

GroundTruthMap::GroundTruthMap(int width, int height, int classes, std::vector<double> targets)
    : width_(width), height_(height), classes_(classes), targets_(std::move(targets)) {
  check_shape(width_, height_, classes_, targets_.size(), "target map");
  for (double v : targets_) {
    if (v != 0.0 && v != 1.0) throw InputError("target values must be 0 or 1");
  }
  if (classes_ > 1) {
    for (std::size_t px = 0; px < pixels(); ++px) {
      int active = 0;
      for (int c = 0; c < classes_; ++c) {
        active += targets_[px * static_cast<std::size_t>(classes_) + static_cast<std::size_t>(c)] == 1.0;
      }
      if (active != 1) throw InputError("target of pixel " + std::to_string(px) + " is not one-hot");
    }
  }
}

void LossConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0, 1)");
  if (!(clamp > 0.0 && clamp < 0.5)) throw InputError("clamp must lie in (0, 0.5)");
}

LossResult dice_loss(const ProbabilityMap& p, const GroundTruthMap& t, const LossConfig& cfg) {
  cfg.validate();
  check_pair(p, t, "dice_loss");
  const auto& pv = p.values();
  const auto& tv = t.values();
  double overlap = 0.0;
  double sizes = 0.0;
  for (std::size_t i = 0; i < pv.size(); ++i) {
    overlap += tv[i] * pv[i];
    sizes += tv[i] + pv[i];
  }
  const double num = 2.0 * overlap + cfg.epsilon;
  const double den = sizes + cfg.epsilon;
  LossResult r;
  r.value = 1.0 - num / den;
  r.gradient.resize(pv.size());
  // d/dp_i of -num/den = -(2 t_i den - num) / den^2
  for (std::size_t i = 0; i < pv.size(); ++i) r.gradient[i] = -(2.0 * tv[i] * den - num) / (den * den);
  return r;
}

LossResult binary_crossentropy(const ProbabilityMap& p, const GroundTruthMap& t, const LossConfig& cfg) {
  cfg.validate();
  check_pair(p, t, "binary_crossentropy");
  if (p.classes() != 1) throw InputError("binary_crossentropy expects a single-class map");
  return binary_crossentropy_channel(p, t, cfg, 0);
}

LossResult categorical_crossentropy(const ProbabilityMap& p, const GroundTruthMap& t,
                                    const LossConfig& cfg) {
  cfg.validate();
  check_pair(p, t, "categorical_crossentropy");
  if (p.classes() < 2) throw InputError("categorical_crossentropy needs at least two classes");
  const auto& pv = p.values();
  const auto& tv = t.values();
  const double n = static_cast<double>(p.pixels());
  LossResult r;
  r.gradient.assign(pv.size(), 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < pv.size(); ++i) {
    if (tv[i] == 0.0) continue;
    const double q = clamp_prob(pv[i], cfg);
    sum += -tv[i] * std::log(q);
    if (in_clamp_range(pv[i], cfg)) r.gradient[i] = -tv[i] / q / n;
  }
  r.value = sum / n;
  return r;
}

LossResult crossentropy(const ProbabilityMap& p, const GroundTruthMap& t, const LossConfig& cfg,
                        CrossEntropyForm form) {
  switch (form) {
    case CrossEntropyForm::Automatic:
      return p.classes() == 1 ? binary_crossentropy(p, t, cfg) : categorical_crossentropy(p, t, cfg);
    case CrossEntropyForm::Binary:
      if (p.classes() == 1) return binary_crossentropy(p, t, cfg);
      if (p.classes() == 2) {
        cfg.validate();
        check_pair(p, t, "binary_crossentropy");
        return binary_crossentropy_channel(p, t, cfg, 1);
      }
      throw InputError("binary cross-entropy needs a one- or two-class map");
    case CrossEntropyForm::Categorical:
      return categorical_crossentropy(p, t, cfg);
  }
  throw InputError("unknown cross-entropy form");
}

LossResult dice_entropy(const ProbabilityMap& p, const GroundTruthMap& t, const LossConfig& cfg,
                        CrossEntropyForm form) {
  LossResult d = dice_loss(p, t, cfg);
  const LossResult ce = crossentropy(p, t, cfg, form);
  d.value += ce.value;
  for (std::size_t i = 0; i < d.gradient.size(); ++i) d.gradient[i] += ce.gradient[i];
  return d;
}

double mean_empirical_risk(std::span<const double> losses) {
  if (losses.empty()) throw InputError("empirical risk of an empty sample");
  double sum = 0.0;
  for (double l : losses) sum += l;
  return sum / static_cast<double>(losses.size());
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double sigmoid_derivative(double x) {
  const double s = sigmoid(x);
  return s * (1.0 - s);
}

double swish(double x) { return x * sigmoid(x); }

double swish_derivative(double x) {
  const double s = sigmoid(x);
  return s * (1.0 + x * (1.0 - s));
}

double relu(double x) { return x > 0.0 ? x : 0.0; }

double relu_derivative(double x) { return x > 0.0 ? 1.0 : 0.0; }

namespace {

template <class F>
std::vector<double> map_each(std::span<const double> xs, F f) {
  std::vector<double> out(xs.size());
  std::transform(xs.begin(), xs.end(), out.begin(), f);
  return out;
}

}  // namespace

std::vector<double> sigmoid(std::span<const double> xs) { return map_each(xs, [](double x) { return sigmoid(x); }); }
std::vector<double> swish(std::span<const double> xs) { return map_each(xs, [](double x) { return swish(x); }); }
std::vector<double> relu(std::span<const double> xs) { return map_each(xs, [](double x) { return relu(x); }); }
std::vector<double> sigmoid_derivative(std::span<const double> xs) {
  return map_each(xs, [](double x) { return sigmoid_derivative(x); });
}
std::vector<double> swish_derivative(std::span<const double> xs) {
  return map_each(xs, [](double x) { return swish_derivative(x); });
}
std::vector<double> relu_derivative(std::span<const double> xs) {
  return map_each(xs, [](double x) { return relu_derivative(x); });
}

Extremum swish_minimum() {
  // swish' has a single root on the negative axis; Newton converges from -1.
  double x = -1.0;
  for (int i = 0; i < 100; ++i) {
    const double s = sigmoid(x);
    const double ds = s * (1.0 - s);
    const double f = s * (1.0 + x * (1.0 - s));
    const double df = ds * (1.0 + x * (1.0 - s)) + s * ((1.0 - s) - x * ds);
    const double step = f / df;
    x -= step;
    if (std::abs(step) < 1e-15) break;
  }
  return {x, swish(x)};
}

}  // namespace fiberfuse
