#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "fiberfuse/raster.hpp"

namespace fiberfuse {

struct Instance {
  int id = 0;
  int class_id = 1;
  std::optional<double> score;
  BinaryMask mask;
  /// Outline the mask was rasterized from, when it came in as a polygon.
  std::optional<Polygon> polygon;
};

struct InstanceSet {
  int width = 0;
  int height = 0;
  std::vector<Instance> instances;

  /// Throws DimensionError for a mask off the canvas size, InputError for
  /// duplicate ids, empty masks or scores outside [0, 1].
  void validate() const;
  const Instance* find(int id) const;
};

/// Per-pixel class id (0 = background); overlapping instances resolve to the
/// largest class id.
LabelGrid class_map(const InstanceSet& set);

enum class OrphanPolicy { Keep, Drop };
enum class SemanticFill { UnionOnly, FillBridge };
enum class MergeReason { Iou, Containment, SharedRegion };

std::string to_string(OrphanPolicy p);
std::string to_string(SemanticFill f);
std::string to_string(MergeReason r);
OrphanPolicy orphan_policy_from_string(const std::string& s);
SemanticFill semantic_fill_from_string(const std::string& s);

struct FusionConfig {
  double iou_threshold = 0.05;
  double containment_threshold = 0.8;
  Connectivity connectivity = Connectivity::Eight;
  OrphanPolicy orphan_policy = OrphanPolicy::Keep;
  SemanticFill semantic_fill = SemanticFill::UnionOnly;

  void validate() const;
};

struct PairDecision {
  bool merge = false;
  MergeReason reason = MergeReason::Iou;
};

/// Whether two instances belong to the same object. Checked in order: IoU at
/// or above the IoU threshold, either mask contained in the other at or above
/// the containment threshold, a shared semantic region. Every test needs a
/// nonzero overlap; instances of different classes never merge.
/// `regions_a` / `regions_b` are sorted semantic component labels.
PairDecision merge_pair_decision(const Instance& a, const Instance& b, const FusionConfig& cfg,
                                 std::span<const int> regions_a = {},
                                 std::span<const int> regions_b = {});

/// Semantic components each instance belongs to: overlapping components whose
/// containment of the instance reaches the containment threshold or whose IoU
/// with it reaches the IoU threshold. Keyed by instance id, labels ascending.
std::map<int, std::vector<int>> assign_to_regions(const InstanceSet& instances,
                                                  const ComponentLabeling& labeling,
                                                  const FusionConfig& cfg);

struct MergeRecord {
  int output_id = 0;
  int survivor = 0;
  std::vector<int> absorbed;
  std::vector<MergeReason> reasons;
};

struct FusionReport {
  FusionConfig config;
  std::size_t input_count = 0;
  std::size_t output_count = 0;
  std::size_t semantic_components = 0;
  /// Groups with more than one member.
  std::vector<MergeRecord> merges;
  /// Smallest input id of every non-orphan output, merged or not.
  std::vector<int> survivors;
  /// Instances with no semantic overlap; they never merge.
  std::vector<int> orphans;
};

struct FusionResult {
  InstanceSet instances;
  FusionReport report;
};

/// Merges fragmented instances that lie on the same semantic object.
///
/// Semantic foreground is split into connected components and every instance
/// is assigned to the components it belongs to (see assign_to_regions).
/// Instances are linked pairwise by merge_pair_decision, linked groups are
/// closed transitively, and each group becomes one instance whose mask is the
/// union of its members. With SemanticFill::FillBridge a multi-member group
/// also receives the semantic pixels of its components that lie within two
/// pixels of the group's convex hull. The pairwise test is repeated on the
/// merged masks until no further links appear, so fusing the output again is
/// a no-op.
///
/// When the semantic mask has foreground, instances that do not overlap it are
/// orphans: kept unchanged or dropped per the orphan policy. Output ids are
/// 1..n ordered by each output's smallest input id.
FusionResult fuse(const InstanceSet& instances, const BinaryMask& semantic, const FusionConfig& cfg = {});

nlohmann::json to_json(const FusionConfig& cfg);
nlohmann::json to_json(const FusionReport& report);

}  // namespace fiberfuse
