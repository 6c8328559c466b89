#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fiberfuse {

enum class DecayShape { Linear, Exponential };

DecayShape decay_shape_from_string(const std::string& s);
std::string to_string(DecayShape shape);

/// Three-phase learning-rate curve: linear warmup from lr_start to lr_max, a
/// constant plateau at lr_max, then a descent to lr_end. The default
/// magnitudes are our own choice.
struct ScheduleConfig {
  double lr_start = 1e-5;
  double lr_max = 1e-3;
  double lr_end = 1e-6;
  std::int64_t warmup_steps = 100;
  std::int64_t plateau_steps = 400;
  std::int64_t decay_steps = 500;
  DecayShape decay_shape = DecayShape::Linear;

  std::int64_t total_steps() const { return warmup_steps + plateau_steps + decay_steps; }
};

enum class Phase { Warmup, Plateau, Decay };

class LearningRateSchedule {
 public:
  /// Throws InputError when the configuration is inconsistent.
  explicit LearningRateSchedule(ScheduleConfig cfg);

  const ScheduleConfig& config() const { return cfg_; }

  /// Steps past the end of the decay return lr_end.
  double lr_at(std::int64_t step) const;

  /// Evaluates one phase's formula at an offset from that phase's first step.
  /// Used to check continuity where phases meet.
  double phase_value(Phase phase, double offset) const;

  /// Rows (step, rate) for steps 0 .. total_steps - 1.
  std::vector<std::pair<std::int64_t, double>> emit_curve(std::int64_t total_steps) const;

 private:
  ScheduleConfig cfg_;
};

/// CSV with header `step,learning_rate`; rates use 9 significant digits.
std::string format_schedule_csv(const std::vector<std::pair<std::int64_t, double>>& rows);

}  // namespace fiberfuse
