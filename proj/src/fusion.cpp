#include "fiberfuse/fusion.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_set>

#include "fiberfuse/error.hpp"

namespace fiberfuse {

void InstanceSet::validate() const {
  if (width <= 0 || height <= 0) throw InputError("instance canvas must be non-empty");
  std::unordered_set<int> ids;
  for (const auto& inst : instances) {
    if (!ids.insert(inst.id).second) throw InputError("duplicate instance id " + std::to_string(inst.id));
    check_same_size(width, height, inst.mask.width(), inst.mask.height(), "instance mask");
    if (inst.mask.none()) throw InputError("instance " + std::to_string(inst.id) + " has an empty mask");
    if (inst.score && !(*inst.score >= 0.0 && *inst.score <= 1.0)) {
      throw InputError("instance " + std::to_string(inst.id) + " score outside [0, 1]");
    }
  }
}

const Instance* InstanceSet::find(int id) const {
  for (const auto& inst : instances) {
    if (inst.id == id) return &inst;
  }
  return nullptr;
}

LabelGrid class_map(const InstanceSet& set) {
  LabelGrid grid(set.width, set.height);
  for (const auto& inst : set.instances) {
    check_same_size(set.width, set.height, inst.mask.width(), inst.mask.height(), "class_map");
    const auto& bits = inst.mask.bits();
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i]) grid.labels[i] = std::max(grid.labels[i], inst.class_id);
    }
  }
  return grid;
}

std::string to_string(OrphanPolicy p) { return p == OrphanPolicy::Keep ? "keep" : "drop"; }

std::string to_string(SemanticFill f) {
  return f == SemanticFill::UnionOnly ? "union_only" : "fill_bridge";
}

std::string to_string(MergeReason r) {
  switch (r) {
    case MergeReason::Iou:
      return "iou";
    case MergeReason::Containment:
      return "containment";
    case MergeReason::SharedRegion:
      return "shared_region";
  }
  return "unknown";
}

OrphanPolicy orphan_policy_from_string(const std::string& s) {
  if (s == "keep") return OrphanPolicy::Keep;
  if (s == "drop") return OrphanPolicy::Drop;
  throw InputError("unknown orphan policy '" + s + "' (expected keep or drop)");
}

SemanticFill semantic_fill_from_string(const std::string& s) {
  if (s == "union_only") return SemanticFill::UnionOnly;
  if (s == "fill_bridge") return SemanticFill::FillBridge;
  throw InputError("unknown fill mode '" + s + "' (expected union_only or fill_bridge)");
}

void FusionConfig::validate() const {
  if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0)) throw InputError("IoU threshold must lie in [0, 1]");
  if (!(containment_threshold >= 0.0 && containment_threshold <= 1.0)) {
    throw InputError("containment threshold must lie in [0, 1]");
  }
}

namespace {

constexpr int kBridgeMargin = 2;

// A mask with cached geometry; the working unit of the merge loop.
struct Blob {
  const BinaryMask* mask = nullptr;
  PixelBox box;
  std::size_t area = 0;
  int class_id = 0;
};

Blob make_blob(const BinaryMask& m, int class_id) {
  return {&m, m.bounding_box(), m.count(), class_id};
}

PairDecision decide(const Blob& a, const Blob& b, const FusionConfig& cfg, std::span<const int> ra,
                    std::span<const int> rb) {
  if (a.class_id != b.class_id) return {};
  const PixelBox overlap = a.box.intersected(b.box);
  const std::size_t inter = overlap.empty() ? 0 : intersect_count(*a.mask, *b.mask, overlap);
  if (inter > 0) {
    const double uni = static_cast<double>(a.area + b.area - inter);
    if (static_cast<double>(inter) / uni >= cfg.iou_threshold) return {true, MergeReason::Iou};
    const double in_a = static_cast<double>(inter) / static_cast<double>(b.area);
    const double in_b = static_cast<double>(inter) / static_cast<double>(a.area);
    if (in_a >= cfg.containment_threshold || in_b >= cfg.containment_threshold) {
      return {true, MergeReason::Containment};
    }
  }
  // Both lists are sorted.
  auto i = ra.begin();
  auto j = rb.begin();
  while (i != ra.end() && j != rb.end()) {
    if (*i == *j) return {true, MergeReason::SharedRegion};
    if (*i < *j) {
      ++i;
    } else {
      ++j;
    }
  }
  return {};
}

std::vector<int> regions_of(const Blob& blob, const ComponentLabeling& labeling,
                            const std::vector<std::size_t>& component_areas, const FusionConfig& cfg) {
  std::map<int, std::size_t> overlap;
  if (!blob.box.empty()) {
    for (int y = blob.box.y0; y <= blob.box.y1; ++y) {
      for (int x = blob.box.x0; x <= blob.box.x1; ++x) {
        if (!blob.mask->at(x, y)) continue;
        const int label = labeling.grid.at(x, y);
        if (label != 0) ++overlap[label];
      }
    }
  }
  std::vector<int> out;
  for (const auto& [label, inter] : overlap) {
    const double comp = static_cast<double>(component_areas[static_cast<std::size_t>(label)]);
    const double contained = static_cast<double>(inter) / static_cast<double>(blob.area);
    const double iou = static_cast<double>(inter) / (comp + static_cast<double>(blob.area) - static_cast<double>(inter));
    if (contained >= cfg.containment_threshold || iou >= cfg.iou_threshold) out.push_back(label);
  }
  return out;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // The smaller index becomes the root, so roots do not depend on call order.
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

struct Unit {
  std::vector<std::size_t> members;  // indices into the sorted input
  BinaryMask mask;
  std::vector<int> regions;
  std::set<MergeReason> reasons;
};

}  // namespace

PairDecision merge_pair_decision(const Instance& a, const Instance& b, const FusionConfig& cfg,
                                 std::span<const int> regions_a, std::span<const int> regions_b) {
  check_same_size(a.mask.width(), a.mask.height(), b.mask.width(), b.mask.height(),
                  "merge_pair_decision");
  if (a.mask.none() || b.mask.none()) throw InputError("merge_pair_decision: empty instance mask");
  return decide(make_blob(a.mask, a.class_id), make_blob(b.mask, b.class_id), cfg, regions_a, regions_b);
}

std::map<int, std::vector<int>> assign_to_regions(const InstanceSet& instances,
                                                  const ComponentLabeling& labeling,
                                                  const FusionConfig& cfg) {
  const auto areas = labeling.areas();
  std::map<int, std::vector<int>> out;
  for (const auto& inst : instances.instances) {
    check_same_size(inst.mask.width(), inst.mask.height(), labeling.grid.width, labeling.grid.height,
                    "assign_to_regions");
    const Blob blob = make_blob(inst.mask, inst.class_id);
    out[inst.id] = blob.area == 0 ? std::vector<int>{} : regions_of(blob, labeling, areas, cfg);
  }
  return out;
}

FusionResult fuse(const InstanceSet& input, const BinaryMask& semantic, const FusionConfig& cfg) {
  cfg.validate();
  input.validate();
  check_same_size(input.width, input.height, semantic.width(), semantic.height(), "semantic mask");

  // Work in id order so every later choice is independent of input order.
  std::vector<const Instance*> sorted;
  for (const auto& inst : input.instances) sorted.push_back(&inst);
  std::sort(sorted.begin(), sorted.end(), [](const Instance* a, const Instance* b) { return a->id < b->id; });

  const ComponentLabeling labeling = connected_components(semantic, cfg.connectivity);
  const auto component_areas = labeling.areas();
  const bool has_semantic = labeling.count > 0;

  FusionReport report;
  report.config = cfg;
  report.input_count = sorted.size();
  report.semantic_components = static_cast<std::size_t>(labeling.count);

  std::vector<Unit> units;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (has_semantic && intersect_count(sorted[i]->mask, semantic) == 0) {
      report.orphans.push_back(sorted[i]->id);
      continue;
    }
    units.push_back({{i}, sorted[i]->mask, {}, {}});
  }

  for (;;) {
    std::vector<Blob> blobs;
    blobs.reserve(units.size());
    for (auto& u : units) {
      blobs.push_back(make_blob(u.mask, sorted[u.members.front()]->class_id));
      u.regions = regions_of(blobs.back(), labeling, component_areas, cfg);
    }

    DisjointSets sets(units.size());
    std::vector<std::pair<std::size_t, MergeReason>> links;  // (unit index, reason)
    bool linked = false;
    for (std::size_t i = 0; i < units.size(); ++i) {
      for (std::size_t j = i + 1; j < units.size(); ++j) {
        const PairDecision d = decide(blobs[i], blobs[j], cfg, units[i].regions, units[j].regions);
        if (!d.merge) continue;
        sets.unite(i, j);
        links.emplace_back(i, d.reason);
        linked = true;
      }
    }
    if (!linked) break;

    std::map<std::size_t, Unit> grouped;
    for (std::size_t i = 0; i < units.size(); ++i) {
      Unit& g = grouped[sets.find(i)];
      g.members.insert(g.members.end(), units[i].members.begin(), units[i].members.end());
      g.regions.insert(g.regions.end(), units[i].regions.begin(), units[i].regions.end());
      g.reasons.insert(units[i].reasons.begin(), units[i].reasons.end());
    }
    for (const auto& [unit, reason] : links) grouped[sets.find(unit)].reasons.insert(reason);

    std::vector<Unit> next;
    for (auto& [root, g] : grouped) {
      std::sort(g.members.begin(), g.members.end());
      g.mask = sorted[g.members.front()]->mask;
      for (std::size_t k = 1; k < g.members.size(); ++k) g.mask |= sorted[g.members[k]]->mask;
      if (cfg.semantic_fill == SemanticFill::FillBridge && g.members.size() > 1 && !g.regions.empty()) {
        const auto hull = pixel_convex_hull(g.mask);
        BinaryMask reach = dilate(rasterize(Polygon(hull), input.width, input.height), kBridgeMargin);
        std::sort(g.regions.begin(), g.regions.end());
        g.regions.erase(std::unique(g.regions.begin(), g.regions.end()), g.regions.end());
        auto& bits = reach.bits();
        for (std::size_t p = 0; p < bits.size(); ++p) {
          if (!bits[p]) continue;
          const int label = labeling.grid.labels[p];
          bits[p] = (label != 0 && std::binary_search(g.regions.begin(), g.regions.end(), label)) ? 1 : 0;
        }
        g.mask |= reach;
      }
      next.push_back(std::move(g));
    }
    units = std::move(next);
  }

  struct Output {
    int min_id;
    Instance instance;
  };
  std::vector<Output> outputs;
  auto best_score = [&](const std::vector<std::size_t>& members) {
    std::optional<double> s;
    for (auto m : members) {
      if (sorted[m]->score) s = std::max(s.value_or(0.0), *sorted[m]->score);
    }
    return s;
  };
  for (auto& u : units) {
    const Instance& first = *sorted[u.members.front()];
    Instance inst{0, first.class_id, best_score(u.members), std::move(u.mask), std::nullopt};
    if (u.members.size() == 1) inst.polygon = first.polygon;
    outputs.push_back({first.id, std::move(inst)});
  }
  if (cfg.orphan_policy == OrphanPolicy::Keep) {
    for (int id : report.orphans) {
      const Instance& src = *input.find(id);
      outputs.push_back({id, Instance{0, src.class_id, src.score, src.mask, src.polygon}});
    }
  }
  std::sort(outputs.begin(), outputs.end(), [](const Output& a, const Output& b) { return a.min_id < b.min_id; });

  std::map<int, int> output_id_of;
  FusionResult result;
  result.instances.width = input.width;
  result.instances.height = input.height;
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    outputs[k].instance.id = static_cast<int>(k) + 1;
    output_id_of[outputs[k].min_id] = outputs[k].instance.id;
    result.instances.instances.push_back(std::move(outputs[k].instance));
  }

  for (const auto& u : units) {
    const int survivor = sorted[u.members.front()]->id;
    report.survivors.push_back(survivor);
    if (u.members.size() < 2) continue;
    MergeRecord rec;
    rec.survivor = survivor;
    rec.output_id = output_id_of.at(survivor);
    for (std::size_t k = 1; k < u.members.size(); ++k) rec.absorbed.push_back(sorted[u.members[k]]->id);
    rec.reasons.assign(u.reasons.begin(), u.reasons.end());
    report.merges.push_back(std::move(rec));
  }
  std::sort(report.survivors.begin(), report.survivors.end());
  std::sort(report.merges.begin(), report.merges.end(),
            [](const MergeRecord& a, const MergeRecord& b) { return a.survivor < b.survivor; });
  report.output_count = result.instances.instances.size();
  result.report = std::move(report);
  return result;
}

nlohmann::json to_json(const FusionConfig& cfg) {
  return {{"iou_threshold", cfg.iou_threshold},
          {"containment_threshold", cfg.containment_threshold},
          {"connectivity", static_cast<int>(cfg.connectivity)},
          {"orphan_policy", to_string(cfg.orphan_policy)},
          {"semantic_fill", to_string(cfg.semantic_fill)}};
}

nlohmann::json to_json(const FusionReport& report) {
  nlohmann::json merges = nlohmann::json::array();
  for (const auto& m : report.merges) {
    nlohmann::json reasons = nlohmann::json::array();
    for (auto r : m.reasons) reasons.push_back(to_string(r));
    merges.push_back({{"output_id", m.output_id},
                      {"survivor", m.survivor},
                      {"absorbed", m.absorbed},
                      {"reasons", std::move(reasons)}});
  }
  return {{"config", to_json(report.config)},
          {"input_count", report.input_count},
          {"output_count", report.output_count},
          {"semantic_components", report.semantic_components},
          {"merges", std::move(merges)},
          {"survivors", report.survivors},
          {"orphans", report.orphans}};
}

}  // namespace fiberfuse
