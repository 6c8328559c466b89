// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "fiberfuse/cli.hpp"
#include "fiberfuse/error.hpp"
#include "fiberfuse/fusion.hpp"
#include "fiberfuse/instance_io.hpp"
#include "fiberfuse/lossmath.hpp"
#include "fiberfuse/metrics.hpp"
#include "fiberfuse/schedule.hpp"
#include "fiberfuse/synth.hpp"
#include "oracles.hpp"

namespace ff = fiberfuse;
namespace oracle = fiberfuse::oracle;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Records the first few failures of a criterion.
struct Tally {
  bool ok = true;
  int failures = 0;
  std::string first;
  void fail(const std::string& what) {
    ok = false;
    if (failures++ == 0) first = what;
  }
  std::string suffix() const { return ok ? "" : fmt::format("; {} failures, first: {}", failures, first); }
};

// ---------------------------------------------------------------------------

Outcome dice_iou_identity() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<int> side(1, 64);
  std::uniform_real_distribution<double> density(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int w = side(rng);
    const int h = side(rng);
    const ff::BinaryMask a = oracle::random_mask(rng, w, h, density(rng));
    const ff::BinaryMask b = oracle::random_mask(rng, w, h, density(rng));
    const double i = ff::iou(a, b);
    worst = std::max(worst, std::abs(ff::dice(a, b) - 2.0 * i / (1.0 + i)));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-12 && secs < 5.0,
          fmt::format("1000 pairs, max |dice - 2iou/(1+iou)| = {:.3g}, {:.2f} s", worst, secs)};
}

Outcome exhaustive_metric_oracle() {
  std::vector<ff::BinaryMask> masks;
  std::vector<oracle::PixelSet> sets;
  for (int bits = 0; bits < 512; ++bits) {
    ff::BinaryMask m(3, 3);
    for (int k = 0; k < 9; ++k) m.set(k % 3, k / 3, (bits >> k) & 1);
    sets.push_back(oracle::to_set(m));
    masks.push_back(std::move(m));
  }
  Tally t;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < masks.size(); ++i) {
    for (std::size_t j = 0; j < masks.size(); ++j) {
      ++pairs;
      const auto& A = sets[i];
      const auto& B = sets[j];
      const auto inter = oracle::intersection_size(A, B);
      const auto uni = oracle::union_size(A, B);
      const std::string tag = fmt::format("pair ({}, {})", i, j);

      if (ff::iou(masks[i], masks[j]) != oracle::set_iou(A, B)) t.fail(tag + " iou");
      if (ff::dice(masks[i], masks[j]) != oracle::set_dice(A, B)) t.fail(tag + " dice");

      if (B.empty()) {
        bool threw = false;
        try {
          (void)ff::containment(masks[i], masks[j]);
        } catch (const ff::InputError&) {
          threw = true;
        }
        if (!threw) t.fail(tag + " containment of empty reference did not throw");
      } else if (ff::containment(masks[i], masks[j]) !=
                 static_cast<double>(inter) / static_cast<double>(B.size())) {
        t.fail(tag + " containment");
      }

      const ff::ConfusionCounts c = ff::confusion(masks[i], masks[j]);
      const ff::ConfusionCounts expected{inter, B.size() - inter, A.size() - inter, 9 - uni};
      if (!(c == expected)) t.fail(tag + " confusion");
    }
  }
  return {t.ok, fmt::format("{} pairs of 3x3 masks against set oracle{}", pairs, t.suffix())};
}

Outcome dice_entropy_additivity() {
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<int> classes(1, 4);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const oracle::RandomMaps r = oracle::random_maps(rng, classes(rng));
    const ff::ProbabilityMap p(r.width, r.height, r.classes, r.probs);
    const ff::GroundTruthMap t(r.width, r.height, r.classes, r.targets);
    const double total = ff::dice_entropy(p, t).value;
    const double parts = ff::dice_loss(p, t).value + ff::crossentropy(p, t, {}, ff::CrossEntropyForm::Automatic).value;
    worst = std::max(worst, std::abs(total - parts));
  }
  return {worst <= 1e-12, fmt::format("100 maps, max |DE - (Dice + CE)| = {:.3g}", worst)};
}

Outcome gradient_checks() {
  const auto t0 = Clock::now();
  using LossFn = std::function<ff::LossResult(const ff::ProbabilityMap&, const ff::GroundTruthMap&)>;
  struct Case {
    std::string name;
    LossFn fn;
    int min_classes;
    int max_classes;
  };
  const std::vector<Case> cases = {
      {"dice", [](const auto& p, const auto& t) { return ff::dice_loss(p, t); }, 1, 4},
      {"binary ce", [](const auto& p, const auto& t) { return ff::binary_crossentropy(p, t); }, 1, 1},
      {"categorical ce", [](const auto& p, const auto& t) { return ff::categorical_crossentropy(p, t); }, 2, 4},
      {"dice entropy", [](const auto& p, const auto& t) { return ff::dice_entropy(p, t); }, 1, 4},
  };
  std::mt19937_64 rng(404);
  std::vector<std::string> parts;
  bool ok = true;
  for (const auto& c : cases) {
    std::uniform_int_distribution<int> classes(c.min_classes, c.max_classes);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const oracle::RandomMaps r = oracle::random_maps(rng, classes(rng));
      const ff::GroundTruthMap t(r.width, r.height, r.classes, r.targets);
      const auto analytic = c.fn(ff::ProbabilityMap(r.width, r.height, r.classes, r.probs), t).gradient;
      const auto numeric = oracle::central_differences(
          [&](const std::vector<double>& x) {
            return c.fn(ff::ProbabilityMap(r.width, r.height, r.classes, x, ff::SimplexCheck::Skip), t).value;
          },
          r.probs, 1e-5);
      worst = std::max(worst, oracle::max_relative_error(analytic, numeric));
    }
    ok = ok && worst <= 1e-4;
    parts.push_back(fmt::format("{} {:.2g}", c.name, worst));
  }
  const double secs = seconds_since(t0);
  std::string detail = "max relative error:";
  for (const auto& p : parts) detail += " " + p + ",";
  return {ok && secs < 30.0, detail + fmt::format(" {:.2f} s", secs)};
}

Outcome dice_borderline() {
  const ff::ProbabilityMap p(4, 4, 1, std::vector<double>(16, 0.0));
  const ff::GroundTruthMap t(4, 4, 1, std::vector<double>(16, 0.0));
  ff::LossConfig cfg;
  cfg.epsilon = 1e-6;
  const double v = ff::dice_loss(p, t, cfg).value;
  return {v == 0.0, fmt::format("empty prediction and target, loss = {}", v)};
}

Outcome swish_properties() {
  const ff::Extremum m = ff::swish_minimum();
  const auto [ox, ov] = oracle::golden_section_minimum(
      [](double x) { return x / (1.0 + std::exp(-x)); }, -5.0, 0.0);
  bool ok = std::abs(m.x - ox) <= 1e-3 && std::abs(m.value - ov) <= 1e-3;
  ok = ok && std::abs(m.x - (-1.27846)) <= 1e-3 && std::abs(m.value - (-0.278465)) <= 1e-3;

  bool bounded = true;
  bool rises = false;
  bool falls = false;
  double prev = ff::swish(-10.0);
  for (int k = 1; k <= 20000; ++k) {
    const double x = -10.0 + k * 1e-3;
    const double v = ff::swish(x);
    if (v < m.value - 1e-12) bounded = false;
    if (v > prev) rises = true;
    if (v < prev) falls = true;
    prev = v;
  }
  ok = ok && bounded && rises && falls;
  return {ok, fmt::format("minimum at x = {:.6f}, value {:.6f} (oracle {:.6f}, {:.6f}); bounded below {}, "
                          "non-monotone {}",
                          m.x, m.value, ox, ov, bounded, rises && falls)};
}

Outcome schedule_shape() {
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> log_lr(-7.0, -1.0);
  std::uniform_int_distribution<std::int64_t> steps(0, 300);
  Tally t;
  for (int trial = 0; trial < 10; ++trial) {
    ff::ScheduleConfig cfg;
    cfg.lr_max = std::pow(10.0, log_lr(rng));
    cfg.lr_start = cfg.lr_max * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    cfg.lr_end = cfg.lr_max * std::uniform_real_distribution<double>(1e-4, 1.0)(rng);
    cfg.warmup_steps = steps(rng);
    cfg.plateau_steps = steps(rng);
    cfg.decay_steps = steps(rng) + 1;
    cfg.decay_shape = trial % 2 == 0 ? ff::DecayShape::Linear : ff::DecayShape::Exponential;
    const ff::LearningRateSchedule s(cfg);
    const std::int64_t w = cfg.warmup_steps;
    const std::int64_t p = cfg.plateau_steps;
    const auto rows = s.emit_curve(cfg.total_steps() + 1);
    const std::string tag = fmt::format("config {}", trial);
    for (std::int64_t k = 1; k < w; ++k) {
      if (rows[k].second < rows[k - 1].second) t.fail(tag + " warmup decreases");
    }
    for (std::int64_t k = w; k < w + p; ++k) {
      if (rows[k].second != cfg.lr_max) t.fail(tag + " plateau not constant");
    }
    for (std::int64_t k = w + p + 1; k < static_cast<std::int64_t>(rows.size()); ++k) {
      if (rows[k].second > rows[k - 1].second) t.fail(tag + " decay increases");
    }
    if (std::abs(s.phase_value(ff::Phase::Warmup, static_cast<double>(w)) - s.phase_value(ff::Phase::Plateau, 0.0)) >
        1e-12) {
      t.fail(tag + " warmup/plateau jump");
    }
    if (std::abs(s.phase_value(ff::Phase::Plateau, static_cast<double>(p)) - s.phase_value(ff::Phase::Decay, 0.0)) >
        1e-12) {
      t.fail(tag + " plateau/decay jump");
    }
    if (std::abs(s.phase_value(ff::Phase::Decay, static_cast<double>(cfg.decay_steps)) - cfg.lr_end) > 1e-12) {
      t.fail(tag + " decay does not end at lr_end");
    }
  }
  return {t.ok, "10 configs, both decay shapes" + t.suffix()};
}

// ---------------------------------------------------------------------------
// Fusion scenes shared by criteria 8 and 9.

struct Scene {
  ff::SceneSpec spec;
  ff::SyntheticScene data;
};

// Stripes are redrawn until every stripe is its own semantic component.
Scene fusion_scene(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> stripe_count(1, 5);
  std::uniform_int_distribution<int> fragments(2, 5);
  std::uniform_real_distribution<double> angle(10.0, 80.0);
  std::uniform_real_distribution<double> length(60.0, 150.0);
  std::uniform_real_distribution<double> width(3.0, 8.0);
  std::uniform_real_distribution<double> gap(2.0, 6.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr int kSide = 256;

  ff::SceneSpec spec;
  spec.width = kSide;
  spec.height = kSide;
  spec.fragments = fragments(rng);
  spec.gap = gap(rng);
  spec.seed = rng();
  const int n = stripe_count(rng);
  for (;;) {
    spec.stripes.clear();
    for (int k = 0; k < n; ++k) {
      const double len = length(rng);
      const double a = angle(rng);
      const double half = 0.5 * len + 6.0;
      // Keep the whole stripe on the canvas.
      const double ex = half * std::abs(std::cos(a * std::numbers::pi / 180.0)) + 6.0;
      const double ey = half * std::abs(std::sin(a * std::numbers::pi / 180.0)) + 6.0;
      spec.stripes.push_back({ex + unit(rng) * (kSide - 2 * ex), ey + unit(rng) * (kSide - 2 * ey), len, width(rng), a});
    }
    ff::SyntheticScene data = ff::generate(spec);
    if (ff::connected_components(data.semantic).count == n) return {spec, std::move(data)};
  }
}

double scene_mean_iou(const ff::InstanceSet& pred, const ff::InstanceSet& truth) {
  static const std::vector<std::int32_t> classes = {0, 1};
  return ff::mean_iou(ff::class_map(pred), ff::class_map(truth), classes).mean_iou;
}

bool same_instances(const ff::InstanceSet& a, const ff::InstanceSet& b) {
  if (a.width != b.width || a.height != b.height || a.instances.size() != b.instances.size()) return false;
  for (std::size_t k = 0; k < a.instances.size(); ++k) {
    const auto& x = a.instances[k];
    const auto& y = b.instances[k];
    if (x.id != y.id || x.class_id != y.class_id || x.score != y.score || !(x.mask == y.mask)) return false;
  }
  return true;
}

const std::vector<Scene>& fusion_scenes() {
  static const std::vector<Scene> scenes = [] {
    std::mt19937_64 rng(808);
    std::vector<Scene> out;
    for (int k = 0; k < 200; ++k) out.push_back(fusion_scene(rng));
    return out;
  }();
  return scenes;
}

Outcome fusion_recovery() {
  Tally count_tally;
  Tally iou_tally;
  double gain = 0.0;
  for (std::size_t k = 0; k < fusion_scenes().size(); ++k) {
    const Scene& s = fusion_scenes()[k];
    const auto& truth = s.data.ground_truth;
    const auto& frag = s.data.fragmented;
    const std::string tag = fmt::format("scene {}", k);

    // Every fragment lies inside its stripe's component here, so (a) applies
    // to every scene.
    const ff::FusionConfig cfg;
    bool contained = true;
    for (const auto& f : frag.instances) contained = contained && ff::containment(s.data.semantic, f.mask) >= cfg.containment_threshold;
    const ff::FusionResult plain = ff::fuse(frag, s.data.semantic, cfg);
    if (contained && plain.instances.instances.size() != truth.instances.size()) {
      count_tally.fail(fmt::format("{}: {} outputs for {} stripes", tag, plain.instances.instances.size(),
                                   truth.instances.size()));
    }

    ff::FusionConfig bridge_cfg;
    bridge_cfg.semantic_fill = ff::SemanticFill::FillBridge;
    const ff::FusionResult bridged = ff::fuse(frag, s.data.semantic, bridge_cfg);
    if (contained && bridged.instances.instances.size() != truth.instances.size()) {
      count_tally.fail(tag + " (fill_bridge) count mismatch");
    }

    const double before = scene_mean_iou(frag, truth);
    const double after_plain = scene_mean_iou(plain.instances, truth);
    const double after_bridge = scene_mean_iou(bridged.instances, truth);
    if (after_plain < before) iou_tally.fail(fmt::format("{}: union_only {} < {}", tag, after_plain, before));
    if (!(after_bridge > before)) iou_tally.fail(fmt::format("{}: fill_bridge {} <= {}", tag, after_bridge, before));
    gain += after_bridge - before;
  }

  // (c) one large scene.
  ff::SceneSpec big;
  big.width = 1024;
  big.height = 1024;
  big.fragments = 5;
  big.gap = 4;
  big.seed = 5;
  big.noise = {20, 3, 8};
  for (int k = 0; k < 8; ++k) big.stripes.push_back({120.0 + 110.0 * k, 512.0, 900.0, 6.0, 60.0 + 3.0 * k});
  const ff::SyntheticScene scene = ff::generate(big);
  double slowest = 0.0;
  for (auto fill : {ff::SemanticFill::UnionOnly, ff::SemanticFill::FillBridge}) {
    ff::FusionConfig cfg;
    cfg.semantic_fill = fill;
    const auto t0 = Clock::now();
    (void)ff::fuse(scene.fragmented, scene.semantic, cfg);
    slowest = std::max(slowest, seconds_since(t0));
  }
  const bool fast = slowest < 1.0;

  return {count_tally.ok && iou_tally.ok && fast,
          fmt::format("(a) counts {}{}; (b) MeanIoU {}, mean fill_bridge gain {:.4f}{}; (c) 1024x1024 fuse "
                      "{:.3f} s",
                      count_tally.ok ? "ok" : "FAIL", count_tally.suffix(), iou_tally.ok ? "ok" : "FAIL",
                      gain / static_cast<double>(fusion_scenes().size()), iou_tally.suffix(), slowest)};
}

Outcome fusion_idempotence() {
  Tally t;
  std::mt19937_64 rng(909);
  for (std::size_t k = 0; k < fusion_scenes().size(); ++k) {
    const Scene& s = fusion_scenes()[k];
    for (auto fill : {ff::SemanticFill::UnionOnly, ff::SemanticFill::FillBridge}) {
      ff::FusionConfig cfg;
      cfg.semantic_fill = fill;
      const std::string tag = fmt::format("scene {} ({})", k, ff::to_string(fill));
      const ff::FusionResult once = ff::fuse(s.data.fragmented, s.data.semantic, cfg);
      const ff::FusionResult twice = ff::fuse(once.instances, s.data.semantic, cfg);
      if (!same_instances(once.instances, twice.instances)) t.fail(tag + " not idempotent");

      ff::InstanceSet permuted = s.data.fragmented;
      for (int rep = 0; rep < 3; ++rep) {
        if (rep == 0) {
          std::reverse(permuted.instances.begin(), permuted.instances.end());
        } else {
          std::shuffle(permuted.instances.begin(), permuted.instances.end(), rng);
        }
        const ff::FusionResult again = ff::fuse(permuted, s.data.semantic, cfg);
        if (!same_instances(once.instances, again.instances)) t.fail(tag + " depends on input order");
        if (ff::to_json(again.report) != ff::to_json(once.report)) t.fail(tag + " report depends on input order");
      }
    }
  }
  return {t.ok, fmt::format("{} scenes x 2 fill modes, 3 permutations each{}", fusion_scenes().size(), t.suffix())};
}

// ---------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool valid_instance_json(const json& j) {
  if (!j.is_object() || !j.contains("width") || !j.contains("height") || !j["instances"].is_array()) return false;
  for (const auto& inst : j["instances"]) {
    if (!inst["id"].is_number_integer() || !inst["class_id"].is_number_integer()) return false;
    if (!inst.contains("polygon") && !inst["mask_png"].is_string()) return false;
    if (inst.contains("score") && !inst["score"].is_number()) return false;
  }
  return true;
}

bool valid_report_json(const json& j) {
  for (const char* key : {"iou_threshold", "containment_threshold", "connectivity", "orphan_policy", "semantic_fill"}) {
    if (!j["config"].contains(key)) return false;
  }
  if (!j["input_count"].is_number_integer() || !j["output_count"].is_number_integer()) return false;
  if (!j["merges"].is_array() || !j["survivors"].is_array() || !j["orphans"].is_array()) return false;
  for (const auto& m : j["merges"]) {
    if (!m["survivor"].is_number_integer() || !m["absorbed"].is_array() || !m["reasons"].is_array()) return false;
  }
  return true;
}

bool valid_eval_json(const json& j) {
  auto report_ok = [](const json& r) {
    if (!r["classes"].is_array() || !r["mean_iou"].is_number()) return false;
    const double m = r["mean_iou"].get<double>();
    if (m < 0.0 || m > 1.0) return false;
    for (const auto& c : r["classes"]) {
      if (!c["id"].is_number_integer() || !c["iou"].is_number()) return false;
    }
    return true;
  };
  if (!report_ok(j) || !j["images"].is_array() || j["images"].empty()) return false;
  for (const auto& img : j["images"]) {
    if (!report_ok(img) || !img["prediction"].is_string() || !img["truth"].is_string()) return false;
  }
  return true;
}

Outcome cli_round_trip() {
  const fs::path dir = fs::temp_directory_path() / "fiberfuse_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  ff::SceneSpec spec;
  spec.width = 200;
  spec.height = 160;
  spec.stripes = {{60, 60, 90, 5, 30}, {140, 100, 70, 4, 115}, {100, 130, 60, 3, 5}};
  spec.fragments = 4;
  spec.gap = 4;
  spec.noise = {3, 2, 5};
  spec.seed = 2024;
  ff::write_json_file(dir / "spec.json", ff::to_json(spec));

  const auto p = [&](const std::string& name) { return (dir / name).string(); };
  const std::vector<std::vector<std::string>> commands = {
      {"fiberfuse", "synth", p("spec.json"), "--out-dir", p("scene")},
      {"fiberfuse", "fuse", p("scene/fragmented.json"), p("scene/semantic.png"), "--out", p("fused.json"), "--fill",
       "fill_bridge"},
      {"fiberfuse", "evaluate", "--pred", p("scene/fragmented.json"), "--pred", p("fused.json"), "--truth",
       p("scene/ground_truth.json"), "--truth", p("scene/ground_truth.json"), "--classes", "0,1", "--out",
       p("eval.json")},
  };
  const std::vector<std::string> outputs = {"scene/image.png",   "scene/semantic.png", "scene/ground_truth.json",
                                            "scene/fragmented.json", "fused.json",   "fused.report.json",
                                            "eval.json"};

  std::vector<std::string> problems;
  std::map<std::string, std::string> first_run;
  for (int run = 0; run < 2; ++run) {
    for (const auto& cmd : commands) {
      const int code = ff::run_cli(cmd);
      if (code != 0) problems.push_back(fmt::format("{} exited {}", cmd[1], code));
    }
    for (const auto& o : outputs) {
      if (!fs::exists(dir / o)) {
        problems.push_back(o + " missing");
        continue;
      }
      const std::string bytes = slurp(dir / o);
      if (run == 0) {
        first_run[o] = bytes;
      } else if (first_run[o] != bytes) {
        problems.push_back(o + " differs between runs");
      }
    }
  }

  try {
    if (!valid_instance_json(ff::read_json_file(dir / "scene/ground_truth.json")) ||
        !valid_instance_json(ff::read_json_file(dir / "scene/fragmented.json")) ||
        !valid_instance_json(ff::read_json_file(dir / "fused.json"))) {
      problems.push_back("instance JSON schema");
    }
    if (!valid_report_json(ff::read_json_file(dir / "fused.report.json"))) problems.push_back("report schema");
    const json eval = ff::read_json_file(dir / "eval.json");
    if (!valid_eval_json(eval)) problems.push_back("evaluate schema");
    else if (!(eval["images"][1]["mean_iou"].get<double>() > eval["images"][0]["mean_iou"].get<double>())) {
      problems.push_back("fused prediction did not beat the fragmented one");
    }
  } catch (const std::exception& e) {
    problems.push_back(std::string("unreadable output: ") + e.what());
  }
  fs::remove_all(dir);

  std::string detail = "synth -> fuse -> evaluate twice, 7 outputs compared byte for byte";
  for (const auto& pr : problems) detail += "; " + pr;
  return {problems.empty(), detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"dice-iou identity", dice_iou_identity},
      {"metric oracle equivalence", exhaustive_metric_oracle},
      {"dice entropy additivity", dice_entropy_additivity},
      {"loss gradient checks", gradient_checks},
      {"dice loss on empty masks", dice_borderline},
      {"swish properties", swish_properties},
      {"schedule shape", schedule_shape},
      {"fusion recovery", fusion_recovery},
      {"fusion idempotence and permutation invariance", fusion_idempotence},
      {"cli round trip", cli_round_trip},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    fmt::print("{} criterion {:2}: {} ({})\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
