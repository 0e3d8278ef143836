#include "lmnne/eval/triplet_classification.h"

#include <algorithm>
#include <optional>
#include <set>
#include <string>

#include "lmnne/errors.h"

namespace lmnne {
namespace {

constexpr std::size_t kRandomTries = 32;

std::span<const EntityId> lookup(const std::map<RelationId, std::vector<EntityId>>& m,
                                 RelationId r) {
  auto it = m.find(r);
  if (it == m.end()) return {};
  return it->second;
}

Triple substitute(Triple t, Side side, EntityId e) {
  (side == Side::kHead ? t.head : t.tail) = e;
  return t;
}

// Uniform valid replacement from `pool`, or nullopt when none exists.
// A few random probes first; on failure the pool is filtered exhaustively.
std::optional<Triple> draw_from(std::span<const EntityId> pool, const Triple& pos, Side side,
                                const TripleSet& known, Rng& rng) {
  if (pool.empty()) return std::nullopt;
  const EntityId current = side == Side::kHead ? pos.head : pos.tail;
  auto valid = [&](EntityId e) { return e != current && !known.contains(substitute(pos, side, e)); };
  for (std::size_t i = 0; i < kRandomTries; ++i) {
    const EntityId e = pool[rng.below(pool.size())];
    if (valid(e)) return substitute(pos, side, e);
  }
  std::vector<EntityId> ok;
  for (EntityId e : pool) {
    if (valid(e)) ok.push_back(e);
  }
  if (ok.empty()) return std::nullopt;
  return substitute(pos, side, ok[rng.below(ok.size())]);
}

std::vector<EntityId> sorted_unique(std::set<EntityId> s) { return {s.begin(), s.end()}; }

}  // namespace

PositionIndex::PositionIndex(const TripleSet& triples) {
  std::map<RelationId, std::set<EntityId>> heads, tails;
  std::set<EntityId> all_heads, all_tails;
  for (const Triple& t : triples.triples()) {
    heads[t.relation].insert(t.head);
    tails[t.relation].insert(t.tail);
    all_heads.insert(t.head);
    all_tails.insert(t.tail);
  }
  for (auto& [r, s] : heads) heads_[r] = sorted_unique(std::move(s));
  for (auto& [r, s] : tails) tails_[r] = sorted_unique(std::move(s));
  all_heads_ = sorted_unique(std::move(all_heads));
  all_tails_ = sorted_unique(std::move(all_tails));
}

std::span<const EntityId> PositionIndex::heads(RelationId r) const { return lookup(heads_, r); }
std::span<const EntityId> PositionIndex::tails(RelationId r) const { return lookup(tails_, r); }

std::vector<LabeledTriple> make_tc_negatives(std::span<const Triple> positives,
                                             const PositionIndex& positions,
                                             const TripleSet& known, std::size_t num_entities,
                                             Rng& rng, NegativeSamplingStats* stats) {
  NegativeSamplingStats local;
  std::vector<EntityId> everyone(num_entities);
  for (std::size_t i = 0; i < num_entities; ++i) everyone[i] = static_cast<EntityId>(i);

  std::vector<LabeledTriple> out;
  out.reserve(2 * positives.size());
  for (const Triple& pos : positives) {
    const Side first = rng.coin() ? Side::kHead : Side::kTail;
    const Side second = first == Side::kHead ? Side::kTail : Side::kHead;
    auto slot_pool = [&](Side s) {
      return s == Side::kHead ? positions.heads(pos.relation) : positions.tails(pos.relation);
    };
    auto global_pool = [&](Side s) {
      return s == Side::kHead ? positions.all_heads() : positions.all_tails();
    };

    std::optional<Triple> neg = draw_from(slot_pool(first), pos, first, known, rng);
    if (!neg) {
      neg = draw_from(slot_pool(second), pos, second, known, rng);
      if (neg) ++local.other_side;
    }
    if (!neg) {
      neg = draw_from(global_pool(first), pos, first, known, rng);
      if (!neg) neg = draw_from(global_pool(second), pos, second, known, rng);
      if (neg) ++local.global_slot;
    }
    if (!neg) {
      neg = draw_from(everyone, pos, first, known, rng);
      if (!neg) neg = draw_from(everyone, pos, second, known, rng);
      if (neg) ++local.any_entity;
    }
    if (!neg) {
      throw DataError("no negative replacement exists for a triple of relation " +
                      std::to_string(pos.relation));
    }
    out.push_back({pos, true});
    out.push_back({*neg, false});
  }
  if (stats) *stats = local;
  return out;
}

double search_threshold(std::vector<std::pair<double, bool>> scored) {
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  // Threshold -inf: everything predicted negative.
  std::ptrdiff_t correct = 0;
  for (const auto& [s, positive] : scored) correct += !positive;

  std::ptrdiff_t best = correct;
  double best_threshold = kThresholdRejectAll;
  std::size_t i = 0;
  while (i < scored.size()) {
    const double value = scored[i].first;
    std::size_t j = i;
    for (; j < scored.size() && scored[j].first == value; ++j) {
      correct += scored[j].second ? 1 : -1;
    }
    double threshold = kThresholdAcceptAll;
    if (j < scored.size()) {
      const double next = scored[j].first;
      threshold = value + (next - value) / 2.0;
      // Any threshold in (value, next] separates the two groups.
      if (!(threshold > value)) threshold = next;
    }
    if (correct > best) {
      best = correct;
      best_threshold = threshold;
    }
    i = j;
  }
  return best_threshold;
}

TcThresholds tc_threshold_search(std::span<const LabeledTriple> valid, const ScoringModel& model) {
  std::map<RelationId, std::vector<std::pair<double, bool>>> by_relation;
  std::vector<std::pair<double, bool>> all;
  all.reserve(valid.size());
  for (const auto& item : valid) {
    const double s = model.score(item.triple);
    by_relation[item.triple.relation].emplace_back(s, item.positive);
    all.emplace_back(s, item.positive);
  }
  TcThresholds out;
  out.global = search_threshold(std::move(all));
  for (auto& [r, scored] : by_relation) out.per_relation[r] = search_threshold(std::move(scored));
  return out;
}

TcMetrics tc_evaluate(std::span<const LabeledTriple> valid, std::span<const LabeledTriple> test,
                      const ScoringModel& model) {
  TcMetrics m;
  m.thresholds = tc_threshold_search(valid, model);
  std::set<RelationId> fallback;
  for (const auto& item : test) {
    const RelationId r = item.triple.relation;
    if (!m.thresholds.per_relation.contains(r)) fallback.insert(r);
    const bool predicted = tc_classify(item.triple, m.thresholds.for_relation(r), model);
    auto& acc = m.per_relation[r];
    ++acc.total;
    ++m.total;
    if (predicted == item.positive) {
      ++acc.correct;
      ++m.correct;
    }
  }
  m.fallback_relations.assign(fallback.begin(), fallback.end());
  return m;
}

}  // namespace lmnne
