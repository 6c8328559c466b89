#include "fiberfuse/schedule.hpp"

#include <cmath>

#include <fmt/format.h>

#include "fiberfuse/error.hpp"

namespace fiberfuse {

DecayShape decay_shape_from_string(const std::string& s) {
  if (s == "linear") return DecayShape::Linear;
  if (s == "exponential") return DecayShape::Exponential;
  throw InputError("unknown decay shape '" + s + "' (expected linear or exponential)");
}

std::string to_string(DecayShape shape) {
  return shape == DecayShape::Linear ? "linear" : "exponential";
}

LearningRateSchedule::LearningRateSchedule(ScheduleConfig cfg) : cfg_(cfg) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(cfg_.lr_start) || !positive(cfg_.lr_max) || !positive(cfg_.lr_end)) {
    throw InputError("learning rates must be positive and finite");
  }
  if (cfg_.lr_start > cfg_.lr_max) throw InputError("lr_start must not exceed lr_max");
  if (cfg_.lr_end > cfg_.lr_max) throw InputError("lr_end must not exceed lr_max");
  if (cfg_.warmup_steps < 0 || cfg_.plateau_steps < 0 || cfg_.decay_steps < 0) {
    throw InputError("phase lengths must be non-negative");
  }
  if (cfg_.total_steps() <= 0) throw InputError("schedule needs at least one step");
}

double LearningRateSchedule::phase_value(Phase phase, double offset) const {
  switch (phase) {
    case Phase::Warmup:
      if (cfg_.warmup_steps == 0) return cfg_.lr_max;
      return cfg_.lr_start +
             (cfg_.lr_max - cfg_.lr_start) * offset / static_cast<double>(cfg_.warmup_steps);
    case Phase::Plateau:
      return cfg_.lr_max;
    case Phase::Decay: {
      if (cfg_.decay_steps == 0) return cfg_.lr_end;
      const double frac = offset / static_cast<double>(cfg_.decay_steps);
      if (cfg_.decay_shape == DecayShape::Linear) {
        return cfg_.lr_max + (cfg_.lr_end - cfg_.lr_max) * frac;
      }
      // Rate solves lr_max * r^decay_steps = lr_end.
      return cfg_.lr_max * std::pow(cfg_.lr_end / cfg_.lr_max, frac);
    }
  }
  return cfg_.lr_end;
}

double LearningRateSchedule::lr_at(std::int64_t step) const {
  if (step < 0) throw InputError("step must be non-negative");
  if (step < cfg_.warmup_steps) return phase_value(Phase::Warmup, static_cast<double>(step));
  step -= cfg_.warmup_steps;
  if (step < cfg_.plateau_steps) return cfg_.lr_max;
  step -= cfg_.plateau_steps;
  if (step <= cfg_.decay_steps) return phase_value(Phase::Decay, static_cast<double>(step));
  return cfg_.lr_end;
}

std::vector<std::pair<std::int64_t, double>> LearningRateSchedule::emit_curve(
    std::int64_t total_steps) const {
  if (total_steps < 1) throw InputError("curve needs at least one step");
  std::vector<std::pair<std::int64_t, double>> rows;
  rows.reserve(static_cast<std::size_t>(total_steps));
  for (std::int64_t s = 0; s < total_steps; ++s) rows.emplace_back(s, lr_at(s));
  return rows;
}

std::string format_schedule_csv(const std::vector<std::pair<std::int64_t, double>>& rows) {
  std::string out = "step,learning_rate\n";
  for (const auto& [step, rate] : rows) out += fmt::format("{},{:.8e}\n", step, rate);
  return out;
}

}  // namespace fiberfuse
