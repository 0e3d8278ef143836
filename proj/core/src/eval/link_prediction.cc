#include "lmnne/eval/link_prediction.h"

#include <algorithm>
#include <cmath>
#include <thread>

namespace lmnne {
namespace {

// Same arithmetic as lmnne::score, specialised to avoid span checks in the
// candidate loop. Must stay bit-identical with it.
inline double translation_distance(const double* h, const double* r, const double* t,
                                   std::size_t d, NormKind norm) {
  double acc = 0.0;
  if (norm == NormKind::kL1) {
    for (std::size_t i = 0; i < d; ++i) acc += std::abs(h[i] + r[i] - t[i]);
    return acc;
  }
  for (std::size_t i = 0; i < d; ++i) {
    const double x = h[i] + r[i] - t[i];
    acc += x * x;
  }
  return std::sqrt(acc);
}

}  // namespace

std::string_view to_string(Side side) { return side == Side::kHead ? "head" : "tail"; }

std::vector<EntityId> candidate_entities(const TripleSet& train) {
  std::vector<EntityId> out;
  out.reserve(2 * train.num_unique());
  for (const Triple& t : train.triples()) {
    out.push_back(t.head);
    out.push_back(t.tail);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RankResult rank_triple(const Triple& triple, Side side, const ScoringModel& model,
                       const TripleSet& known, std::span<const EntityId> candidates) {
  const std::size_t d = model.entities.dim();
  const double* h = model.entities.row(triple.head).data();
  const double* r = model.relations.row(triple.relation).data();
  const double* t = model.entities.row(triple.tail).data();
  const double truth = translation_distance(h, r, t, d, model.norm);
  const EntityId truth_id = side == Side::kHead ? triple.head : triple.tail;

  std::size_t raw_ahead = 0;
  std::size_t filtered_ahead = 0;
  for (EntityId c : candidates) {
    if (c == truth_id) continue;
    const double* e = model.entities.row(c).data();
    const double s = side == Side::kHead ? translation_distance(e, r, t, d, model.norm)
                                         : translation_distance(h, r, e, d, model.norm);
    if (!(s <= truth)) continue;
    ++raw_ahead;
    Triple replaced = triple;
    (side == Side::kHead ? replaced.head : replaced.tail) = c;
    if (!known.contains(replaced)) ++filtered_ahead;
  }
  return {triple, side, raw_ahead + 1, filtered_ahead + 1};
}

std::vector<RankResult> rank_all(const TripleSet& test, const ScoringModel& model,
                                 const TripleSet& known, std::span<const EntityId> candidates,
                                 std::size_t threads) {
  const auto& triples = test.triples();
  std::vector<RankResult> out(2 * triples.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      out[2 * i] = rank_triple(triples[i], Side::kHead, model, known, candidates);
      out[2 * i + 1] = rank_triple(triples[i], Side::kTail, model, known, candidates);
    }
  };
  threads = std::max<std::size_t>(1, std::min(threads, triples.size()));
  if (threads == 1) {
    work(0, triples.size());
    return out;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (triples.size() + threads - 1) / threads;
  for (std::size_t begin = 0; begin < triples.size(); begin += chunk) {
    pool.emplace_back(work, begin, std::min(triples.size(), begin + chunk));
  }
  pool.clear();  // joins
  return out;
}

double hits_at(std::span<const RankResult> ranks, std::size_t k, bool filtered) {
  if (ranks.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& r : ranks) hits += (filtered ? r.filtered_rank : r.raw_rank) <= k;
  return static_cast<double>(hits) / ranks.size();
}

LinkPredMetrics summarize_ranks(std::span<const RankResult> ranks) {
  LinkPredMetrics m;
  m.count = ranks.size();
  if (ranks.empty()) return m;
  double raw = 0.0;
  double filtered = 0.0;
  for (const auto& r : ranks) {
    raw += static_cast<double>(r.raw_rank);
    filtered += static_cast<double>(r.filtered_rank);
  }
  m.mean_rank_raw = raw / ranks.size();
  m.mean_rank_filtered = filtered / ranks.size();
  m.hits10_raw = hits_at(ranks, 10, false);
  m.hits10_filtered = hits_at(ranks, 10, true);
  return m;
}

LinkPredMetrics link_prediction_eval(const TripleSet& test, const ScoringModel& model,
                                     const TripleSet& known,
                                     std::span<const EntityId> candidates, std::size_t threads) {
  const auto ranks = rank_all(test, model, known, candidates, threads);
  return summarize_ranks(ranks);
}

std::size_t CategoryBreakdown::population() const {
  std::size_t n = 0;
  for (const auto& side : cells) {
    for (const auto& c : side) n += c.count;
  }
  return n;
}

CategoryBreakdown category_breakdown(std::span<const RankResult> ranks,
                                     const std::map<RelationId, RelationCategory>& categories) {
  CategoryBreakdown out;
  for (const auto& r : ranks) {
    auto it = categories.find(r.triple.relation);
    if (it == categories.end()) {
      ++out.uncategorized;
      continue;
    }
    auto& cell = out.cell(r.side, it->second);
    ++cell.count;
    cell.hits += r.filtered_rank <= 10;
  }
  return out;
}

}  // namespace lmnne
