#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "lmnne/embeddings.h"
#include "lmnne/eval/link_prediction.h"
#include "lmnne/kg_data.h"

namespace lmnne {

/// Entities observed in the head and tail slot, per relation and overall.
class PositionIndex {
 public:
  explicit PositionIndex(const TripleSet& triples);

  std::span<const EntityId> heads(RelationId r) const;
  std::span<const EntityId> tails(RelationId r) const;
  std::span<const EntityId> all_heads() const noexcept { return all_heads_; }
  std::span<const EntityId> all_tails() const noexcept { return all_tails_; }

 private:
  std::map<RelationId, std::vector<EntityId>> heads_;
  std::map<RelationId, std::vector<EntityId>> tails_;
  std::vector<EntityId> all_heads_;
  std::vector<EntityId> all_tails_;
};

struct NegativeSamplingStats {
  std::size_t other_side = 0;     ///< chosen slot had no per-relation candidate
  std::size_t global_slot = 0;    ///< fell back to slot occupancy across relations
  std::size_t any_entity = 0;     ///< fell back to an arbitrary entity
};

/// One negative per positive. The corrupted slot is chosen by coin flip;
/// the replacement comes from entities seen in that slot for the same
/// relation, then the other slot, then the slot across all relations, then
/// any entity. Replacements forming a triple in `known` are never used.
/// Output alternates positive, negative.
std::vector<LabeledTriple> make_tc_negatives(std::span<const Triple> positives,
                                             const PositionIndex& positions,
                                             const TripleSet& known, std::size_t num_entities,
                                             Rng& rng, NegativeSamplingStats* stats = nullptr);

inline constexpr double kThresholdAcceptAll = std::numeric_limits<double>::infinity();
inline constexpr double kThresholdRejectAll = -std::numeric_limits<double>::infinity();

/// Threshold maximizing accuracy of `score < threshold` over (score,
/// is_positive) pairs. Candidates are -inf, midpoints of consecutive
/// distinct scores, and +inf; ties go to the smallest candidate.
double search_threshold(std::vector<std::pair<double, bool>> scored);

struct TcThresholds {
  std::map<RelationId, double> per_relation;
  double global = kThresholdAcceptAll;

  double for_relation(RelationId r) const {
    auto it = per_relation.find(r);
    return it == per_relation.end() ? global : it->second;
  }
};

TcThresholds tc_threshold_search(std::span<const LabeledTriple> valid, const ScoringModel& model);

/// Positive iff score is strictly below `threshold`.
inline bool tc_classify(const Triple& triple, double threshold, const ScoringModel& model) {
  return model.score(triple) < threshold;
}

struct RelationAccuracy {
  std::size_t correct = 0;
  std::size_t total = 0;
  double accuracy() const { return total ? static_cast<double>(correct) / total : 0.0; }
};

struct TcMetrics {
  TcThresholds thresholds;
  std::map<RelationId, RelationAccuracy> per_relation;
  std::size_t correct = 0;
  std::size_t total = 0;
  /// Test relations that had no validation triples and used the global threshold.
  std::vector<RelationId> fallback_relations;

  double accuracy() const { return total ? static_cast<double>(correct) / total : 0.0; }
};

TcMetrics tc_evaluate(std::span<const LabeledTriple> valid, std::span<const LabeledTriple> test,
                      const ScoringModel& model);

}  // namespace lmnne
