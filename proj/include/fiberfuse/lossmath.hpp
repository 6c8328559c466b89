#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fiberfuse {

enum class SimplexCheck { Enforce, Skip };

/// Per-pixel class probabilities, pixel-major with the class index fastest.
class ProbabilityMap {
 public:
  /// Values must lie in [0, 1]; with more than one class each pixel must sum
  /// to 1 within 1e-6 unless `check` is Skip (finite-difference probes step
  /// off the simplex).
  ProbabilityMap(int width, int height, int classes, std::vector<double> probs,
                 SimplexCheck check = SimplexCheck::Enforce);

  int width() const { return width_; }
  int height() const { return height_; }
  int classes() const { return classes_; }
  std::size_t pixels() const { return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_); }
  const std::vector<double>& values() const { return probs_; }

 private:
  int width_;
  int height_;
  int classes_;
  std::vector<double> probs_;
};

/// Binary (one class) or one-hot (several classes) targets, same layout as
/// ProbabilityMap.
class GroundTruthMap {
 public:
  GroundTruthMap(int width, int height, int classes, std::vector<double> targets);

  int width() const { return width_; }
  int height() const { return height_; }
  int classes() const { return classes_; }
  std::size_t pixels() const { return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_); }
  const std::vector<double>& values() const { return targets_; }

 private:
  int width_;
  int height_;
  int classes_;
  std::vector<double> targets_;
};

struct LossConfig {
  double epsilon = 1e-6;  ///< smoothing term of the soft Dice ratio
  double clamp = 1e-7;    ///< log arguments are clipped to [clamp, 1 - clamp]

  void validate() const;
};

/// Loss value and its gradient with respect to every probability entry.
struct LossResult {
  double value = 0.0;
  std::vector<double> gradient;
};

enum class CrossEntropyForm {
  Automatic,    ///< binary for one class, categorical otherwise
  Binary,       ///< one class, or the foreground channel (index 1) of a two-class map
  Categorical,  ///< requires two or more classes
};

/// 1 - (2·Σt·p + ε) / (Σt + Σp + ε), summed over every pixel and class.
LossResult dice_loss(const ProbabilityMap& p, const GroundTruthMap& t, const LossConfig& cfg = {});

/// Pixel mean of -(y log ŷ + (1 - y) log(1 - ŷ)) for one-class maps.
LossResult binary_crossentropy(const ProbabilityMap& p, const GroundTruthMap& t,
                               const LossConfig& cfg = {});

/// Pixel mean of -Σ_i y_i log p_i for maps with two or more classes.
LossResult categorical_crossentropy(const ProbabilityMap& p, const GroundTruthMap& t,
                                    const LossConfig& cfg = {});

/// The cross-entropy term `dice_entropy` adds for the given form.
LossResult crossentropy(const ProbabilityMap& p, const GroundTruthMap& t, const LossConfig& cfg,
                        CrossEntropyForm form);

/// Dice loss plus cross-entropy; the gradient is the sum of both gradients.
LossResult dice_entropy(const ProbabilityMap& p, const GroundTruthMap& t, const LossConfig& cfg = {},
                        CrossEntropyForm form = CrossEntropyForm::Automatic);

/// Arithmetic mean of per-sample losses.
double mean_empirical_risk(std::span<const double> losses);

double sigmoid(double x);
double sigmoid_derivative(double x);
double swish(double x);
double swish_derivative(double x);
double relu(double x);
/// 0 at x == 0.
double relu_derivative(double x);

std::vector<double> sigmoid(std::span<const double> xs);
std::vector<double> swish(std::span<const double> xs);
std::vector<double> relu(std::span<const double> xs);
std::vector<double> sigmoid_derivative(std::span<const double> xs);
std::vector<double> swish_derivative(std::span<const double> xs);
std::vector<double> relu_derivative(std::span<const double> xs);

struct Extremum {
  double x = 0.0;
  double value = 0.0;
};

/// Global minimum of swish, found by Newton iteration on its derivative.
Extremum swish_minimum();

}  // namespace fiberfuse
