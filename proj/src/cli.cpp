#include "fiberfuse/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "fiberfuse/error.hpp"
#include "fiberfuse/instance_io.hpp"
#include "fiberfuse/lossmath.hpp"
#include "fiberfuse/metrics.hpp"
#include "fiberfuse/png_io.hpp"
#include "fiberfuse/schedule.hpp"
#include "fiberfuse/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace fiberfuse {

namespace {

constexpr std::array<Rgb, 12> kPalette = {{{230, 25, 75},
                                           {60, 180, 75},
                                           {255, 225, 25},
                                           {0, 130, 200},
                                           {245, 130, 48},
                                           {145, 30, 180},
                                           {70, 240, 240},
                                           {240, 50, 230},
                                           {210, 245, 60},
                                           {250, 190, 212},
                                           {0, 128, 128},
                                           {170, 110, 40}}};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw InputError("cannot open " + out_path + " for writing");
  out << text;
}

// ---- fuse -------------------------------------------------------------------

struct FuseArgs {
  std::string instances;
  std::string semantic;
  std::string out;
  std::string report;
  double iou_threshold = FusionConfig{}.iou_threshold;
  double containment_threshold = FusionConfig{}.containment_threshold;
  int connectivity = 8;
  std::string orphan_policy = "keep";
  std::string fill = "union_only";
};

int cmd_fuse(const FuseArgs& a) {
  FusionConfig cfg;
  cfg.iou_threshold = a.iou_threshold;
  cfg.containment_threshold = a.containment_threshold;
  cfg.connectivity = connectivity_from_int(a.connectivity);
  cfg.orphan_policy = orphan_policy_from_string(a.orphan_policy);
  cfg.semantic_fill = semantic_fill_from_string(a.fill);
  cfg.validate();

  const InstanceSet input = read_instance_set(a.instances);
  const BinaryMask semantic = read_mask_png(a.semantic);
  const FusionResult result = fuse(input, semantic, cfg);

  fs::path report = a.report;
  if (report.empty()) {
    report = a.out;
    report.replace_extension(".report.json");
  }
  write_instance_set(a.out, result.instances);
  write_json_file(report, to_json(result.report));
  return kExitOk;
}

// ---- evaluate ---------------------------------------------------------------

LabelGrid load_labels(const fs::path& path) {
  if (path.extension() == ".png") {
    const Image img = read_png(path);
    if (img.channels != 1) throw InputError(path.string() + ": label PNG must be single-channel");
    LabelGrid grid(img.width, img.height);
    for (std::size_t i = 0; i < img.samples.size(); ++i) grid.labels[i] = img.samples[i];
    return grid;
  }
  return class_map(read_instance_set(path));
}

struct EvaluateArgs {
  std::vector<std::string> pred;
  std::vector<std::string> truth;
  std::vector<std::int32_t> classes;
  std::string out;
};

int cmd_evaluate(const EvaluateArgs& a) {
  if (a.pred.size() != a.truth.size()) {
    throw InputError("--pred and --truth must be given the same number of times");
  }
  std::vector<std::future<EvalReport>> jobs;
  for (std::size_t i = 0; i < a.pred.size(); ++i) {
    jobs.push_back(std::async(std::launch::async, [&, i] {
      return mean_iou(load_labels(a.pred[i]), load_labels(a.truth[i]), a.classes);
    }));
  }
  std::vector<EvalReport> reports;
  std::exception_ptr failure;
  for (auto& j : jobs) {
    try {
      reports.push_back(j.get());
    } catch (...) {
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  // Dataset level: per-class IoU and MeanIoU averaged over images.
  EvalReport overall;
  for (std::size_t k = 0; k < a.classes.size(); ++k) {
    double s = 0.0;
    for (const auto& r : reports) s += r.per_class_iou[k].iou;
    overall.per_class_iou.push_back({a.classes[k], s / static_cast<double>(reports.size())});
  }
  double total = 0.0;
  json images = json::array();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    total += reports[i].mean_iou;
    json item = to_json(reports[i]);
    item["prediction"] = a.pred[i];
    item["truth"] = a.truth[i];
    images.push_back(std::move(item));
  }
  overall.mean_iou = total / static_cast<double>(reports.size());
  json doc = to_json(overall);
  doc["images"] = std::move(images);
  emit(doc.dump(2) + "\n", a.out);
  return kExitOk;
}

// ---- overlay ----------------------------------------------------------------

struct OverlayArgs {
  std::string image;
  std::vector<std::string> instances;
  double alpha = 0.5;
  std::string out;
};

int cmd_overlay(const OverlayArgs& a) {
  if (!(a.alpha >= 0.0 && a.alpha <= 1.0)) throw InputError("--alpha must lie in [0, 1]");
  const Image base = read_png(a.image);
  std::vector<InstanceSet> sets;
  for (const auto& p : a.instances) sets.push_back(read_instance_set(p));
  write_png(a.out, render_overlay(base, sets, a.alpha));
  return kExitOk;
}

// ---- synth ------------------------------------------------------------------

int cmd_synth(const std::string& spec_path, const std::string& out_dir) {
  const SceneSpec spec = scene_spec_from_json(read_json_file(spec_path));
  const SyntheticScene scene = generate(spec);
  fs::create_directories(out_dir);
  const fs::path dir = out_dir;
  write_png(dir / "image.png", scene.image);
  write_mask_png(dir / "semantic.png", scene.semantic);
  write_instance_set(dir / "ground_truth.json", scene.ground_truth);
  write_instance_set(dir / "fragmented.json", scene.fragmented);
  return kExitOk;
}

// ---- schedule ---------------------------------------------------------------

struct ScheduleArgs {
  ScheduleConfig cfg;
  std::string decay_shape = "linear";
  std::int64_t total_steps = 0;
  std::string out;
};

int cmd_schedule(ScheduleArgs a) {
  a.cfg.decay_shape = decay_shape_from_string(a.decay_shape);
  const LearningRateSchedule schedule(a.cfg);
  const std::int64_t n = a.total_steps > 0 ? a.total_steps : a.cfg.total_steps();
  emit(format_schedule_csv(schedule.emit_curve(n)), a.out);
  return kExitOk;
}

// ---- loss -------------------------------------------------------------------

struct Grid {
  int width = 0;
  int height = 0;
  int classes = 1;
  std::vector<double> values;
};

// JSON grids: {"width":W,"height":H,"classes":m,"data":[...]} with the class
// index fastest. 8-bit PNGs are one-class maps scaled to [0, 1].
Grid load_grid(const fs::path& path, bool binarize_png) {
  Grid g;
  if (path.extension() == ".png") {
    const Image img = read_png(path);
    if (img.channels != 1) throw InputError(path.string() + ": map PNG must be single-channel");
    g.width = img.width;
    g.height = img.height;
    for (auto s : img.samples) g.values.push_back(binarize_png ? (s != 0 ? 1.0 : 0.0) : s / 255.0);
    return g;
  }
  const json j = read_json_file(path);
  try {
    g.width = j.at("width").get<int>();
    g.height = j.at("height").get<int>();
    g.classes = j.value("classes", 1);
    g.values = j.at("data").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return g;
}

CrossEntropyForm crossentropy_form_from_string(const std::string& s) {
  if (s == "auto") return CrossEntropyForm::Automatic;
  if (s == "binary") return CrossEntropyForm::Binary;
  if (s == "categorical") return CrossEntropyForm::Categorical;
  throw InputError("unknown cross-entropy form '" + s + "'");
}

struct LossArgs {
  std::string prediction;
  std::string target;
  double epsilon = LossConfig{}.epsilon;
  double clamp = LossConfig{}.clamp;
  std::string form = "auto";
  std::string out;
};

int cmd_loss(const LossArgs& a) {
  const Grid pg = load_grid(a.prediction, false);
  const Grid tg = load_grid(a.target, true);
  check_same_size(pg.width, pg.height, tg.width, tg.height, "loss maps");
  if (pg.classes != tg.classes) throw DimensionError("prediction and target class counts differ");
  const ProbabilityMap p(pg.width, pg.height, pg.classes, pg.values);
  const GroundTruthMap t(tg.width, tg.height, tg.classes, tg.values);
  LossConfig cfg{a.epsilon, a.clamp};
  cfg.validate();
  const CrossEntropyForm form = crossentropy_form_from_string(a.form);
  const CrossEntropyForm used =
      form == CrossEntropyForm::Automatic
          ? (p.classes() == 1 ? CrossEntropyForm::Binary : CrossEntropyForm::Categorical)
          : form;

  const double d = dice_loss(p, t, cfg).value;
  const double ce = crossentropy(p, t, cfg, form).value;
  const json doc = {{"epsilon", cfg.epsilon},
                    {"clamp", cfg.clamp},
                    {"classes", p.classes()},
                    {"crossentropy_form", used == CrossEntropyForm::Binary ? "binary" : "categorical"},
                    {"dice_loss", d},
                    {"crossentropy", ce},
                    {"dice_entropy", dice_entropy(p, t, cfg, form).value}};
  emit(doc.dump(2) + "\n", a.out);
  return kExitOk;
}

}  // namespace

Rgb instance_color(int id) {
  const int n = static_cast<int>(kPalette.size());
  return kPalette[static_cast<std::size_t>(((id % n) + n) % n)];
}

Image render_overlay(const Image& base, const std::vector<InstanceSet>& sets, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("alpha must lie in [0, 1]");
  Image out = base.to_rgb();
  for (const auto& set : sets) {
    check_same_size(base.width, base.height, set.width, set.height, "overlay");
    for (const auto& inst : set.instances) {
      const Rgb color = instance_color(inst.id);
      for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
          if (!inst.mask.at(x, y)) continue;
          for (int c = 0; c < 3; ++c) {
            const double v = (1.0 - alpha) * out.at(x, y, c) + alpha * color[static_cast<std::size_t>(c)];
            out.at(x, y, c) = static_cast<std::uint8_t>(std::lround(v));
          }
        }
      }
    }
  }
  return out;
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Fuse fragmented instance masks with a semantic pre-segmentation"};
  app.set_version_flag("--version", std::string("fiberfuse ") + kVersion);
  app.require_subcommand(1);

  FuseArgs fuse_args;
  auto* fuse_cmd = app.add_subcommand("fuse", "Merge instance fragments guided by a semantic mask");
  fuse_cmd->add_option("instances", fuse_args.instances, "Instance JSON")->required();
  fuse_cmd->add_option("semantic", fuse_args.semantic, "Semantic mask PNG")->required();
  fuse_cmd->add_option("--out", fuse_args.out, "Fused instance JSON")->required();
  fuse_cmd->add_option("--report", fuse_args.report, "Fusion report JSON (default: <out>.report.json)");
  fuse_cmd->add_option("--iou-threshold", fuse_args.iou_threshold, "IoU merge threshold")->capture_default_str();
  fuse_cmd->add_option("--containment-threshold", fuse_args.containment_threshold, "Containment merge threshold")
      ->capture_default_str();
  fuse_cmd->add_option("--connectivity", fuse_args.connectivity, "Semantic component connectivity (4 or 8)")
      ->capture_default_str();
  fuse_cmd->add_option("--orphan-policy", fuse_args.orphan_policy, "keep or drop")->capture_default_str();
  fuse_cmd->add_option("--fill", fuse_args.fill, "union_only or fill_bridge")->capture_default_str();

  EvaluateArgs eval_args;
  auto* eval_cmd = app.add_subcommand("evaluate", "Per-class IoU and MeanIoU of predictions against truth");
  eval_cmd->add_option("--pred", eval_args.pred, "Prediction (instance JSON or label PNG); repeatable")->required();
  eval_cmd->add_option("--truth", eval_args.truth, "Ground truth, paired with --pred in order")->required();
  eval_cmd->add_option("--classes", eval_args.classes, "Comma-separated class ids")->required()->delimiter(',');
  eval_cmd->add_option("--out", eval_args.out, "Report JSON (default: stdout)");

  OverlayArgs overlay_args;
  auto* overlay_cmd = app.add_subcommand("overlay", "Blend instance masks over an image");
  overlay_cmd->add_option("--image", overlay_args.image, "Base image PNG")->required();
  overlay_cmd->add_option("--instances", overlay_args.instances, "Instance JSON; repeatable")->required();
  overlay_cmd->add_option("--alpha", overlay_args.alpha, "Mask opacity in [0, 1]")->capture_default_str();
  overlay_cmd->add_option("--out", overlay_args.out, "Output PNG")->required();

  std::string synth_spec;
  std::string synth_dir;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic fiber scene");
  synth_cmd->add_option("spec", synth_spec, "Scene spec JSON")->required();
  synth_cmd->add_option("--out-dir", synth_dir, "Output directory")->required();

  ScheduleArgs sched_args;
  auto* sched_cmd = app.add_subcommand("schedule", "Write the warmup/plateau/decay learning-rate curve as CSV");
  sched_cmd->add_option("--lr-start", sched_args.cfg.lr_start)->capture_default_str();
  sched_cmd->add_option("--lr-max", sched_args.cfg.lr_max)->capture_default_str();
  sched_cmd->add_option("--lr-end", sched_args.cfg.lr_end)->capture_default_str();
  sched_cmd->add_option("--warmup", sched_args.cfg.warmup_steps, "Warmup steps")->capture_default_str();
  sched_cmd->add_option("--plateau", sched_args.cfg.plateau_steps, "Plateau steps")->capture_default_str();
  sched_cmd->add_option("--decay", sched_args.cfg.decay_steps, "Decay steps")->capture_default_str();
  sched_cmd->add_option("--decay-shape", sched_args.decay_shape, "linear or exponential")->capture_default_str();
  sched_cmd->add_option("--total-steps", sched_args.total_steps, "Rows to emit (default: sum of phases)");
  sched_cmd->add_option("--out", sched_args.out, "CSV path (default: stdout)");

  LossArgs loss_args;
  auto* loss_cmd = app.add_subcommand("loss", "Evaluate Dice, cross-entropy and Dice Entropy losses");
  loss_cmd->add_option("prediction", loss_args.prediction, "Probability map (JSON grid or PNG)")->required();
  loss_cmd->add_option("target", loss_args.target, "Target map (JSON grid or PNG)")->required();
  loss_cmd->add_option("--epsilon", loss_args.epsilon)->capture_default_str();
  loss_cmd->add_option("--clamp", loss_args.clamp)->capture_default_str();
  loss_cmd->add_option("--crossentropy", loss_args.form, "auto, binary or categorical")->capture_default_str();
  loss_cmd->add_option("--out", loss_args.out, "JSON path (default: stdout)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (fuse_cmd->parsed()) return cmd_fuse(fuse_args);
    if (eval_cmd->parsed()) return cmd_evaluate(eval_args);
    if (overlay_cmd->parsed()) return cmd_overlay(overlay_args);
    if (synth_cmd->parsed()) return cmd_synth(synth_spec, synth_dir);
    if (sched_cmd->parsed()) return cmd_schedule(sched_args);
    if (loss_cmd->parsed()) return cmd_loss(loss_args);
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDataMismatch;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace fiberfuse
