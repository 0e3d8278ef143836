#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "lmnne/embeddings.h"
#include "lmnne/kg_data.h"
#include "lmnne/model.h"

namespace lmnne {

/// Read-only view of a trained translational model.
struct ScoringModel {
  const EmbeddingTable& entities;
  const EmbeddingTable& relations;
  NormKind norm;

  double score(const Triple& t) const {
    return lmnne::score(entities.row(t.head), relations.row(t.relation), entities.row(t.tail),
                        norm);
  }
};

enum class Side { kHead, kTail };

std::string_view to_string(Side side);

struct RankResult {
  Triple triple;
  Side side = Side::kTail;
  std::size_t raw_rank = 0;
  std::size_t filtered_rank = 0;
};

/// Entities that occur (as head or tail) in `train`, ascending by id.
std::vector<EntityId> candidate_entities(const TripleSet& train);

/// Ranks the ground truth among `candidates` substituted into `side`.
/// Ties with non-truth candidates count against the truth. The filtered
/// rank drops candidates whose substituted triple is in `known`.
RankResult rank_triple(const Triple& triple, Side side, const ScoringModel& model,
                       const TripleSet& known, std::span<const EntityId> candidates);

/// Ranks every test triple on both sides, in test order (head then tail).
/// Work is split across `threads` workers; output order does not depend on it.
std::vector<RankResult> rank_all(const TripleSet& test, const ScoringModel& model,
                                 const TripleSet& known, std::span<const EntityId> candidates,
                                 std::size_t threads = 1);

struct LinkPredMetrics {
  std::size_t count = 0;  ///< number of rank results (2 * |test|)
  double mean_rank_raw = 0.0;
  double mean_rank_filtered = 0.0;
  double hits10_raw = 0.0;
  double hits10_filtered = 0.0;
};

LinkPredMetrics summarize_ranks(std::span<const RankResult> ranks);

/// Fraction of results ranked <= k.
double hits_at(std::span<const RankResult> ranks, std::size_t k, bool filtered);

LinkPredMetrics link_prediction_eval(const TripleSet& test, const ScoringModel& model,
                                     const TripleSet& known,
                                     std::span<const EntityId> candidates,
                                     std::size_t threads = 1);

struct CategoryCell {
  std::size_t count = 0;
  std::size_t hits = 0;
  double rate() const { return count ? static_cast<double>(hits) / count : 0.0; }
};

/// Filtered hits@10 per (side, mapping category). Index with
/// `cell(side, category)`.
struct CategoryBreakdown {
  std::array<std::array<CategoryCell, 4>, 2> cells{};
  std::size_t uncategorized = 0;

  const CategoryCell& cell(Side side, RelationCategory c) const {
    return cells[static_cast<std::size_t>(side)][static_cast<std::size_t>(c)];
  }
  CategoryCell& cell(Side side, RelationCategory c) {
    return cells[static_cast<std::size_t>(side)][static_cast<std::size_t>(c)];
  }
  std::size_t population() const;
};

CategoryBreakdown category_breakdown(std::span<const RankResult> ranks,
                                     const std::map<RelationId, RelationCategory>& categories);

}  // namespace lmnne
