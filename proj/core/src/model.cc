#include "lmnne/model.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lmnne/errors.h"

namespace lmnne {
namespace {

void require_same_dim(std::initializer_list<std::size_t> dims) {
  const std::size_t first = *dims.begin();
  for (std::size_t d : dims) {
    if (d != first) throw std::invalid_argument("embedding dimension mismatch");
  }
}

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Thread-local residual buffers for the accumulate_* hot path.
std::vector<double>& scratch(int which) {
  thread_local std::vector<double> buffers[2];
  return buffers[which];
}

void translation_residual(std::span<const double> h, std::span<const double> r,
                          std::span<const double> t, std::vector<double>& out) {
  out.resize(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) out[i] = h[i] + r[i] - t[i];
}

void difference(std::span<const double> a, std::span<const double> b, std::vector<double>& out) {
  out.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
}

}  // namespace

std::optional<NormKind> parse_norm(std::string_view text) {
  if (text == "L1" || text == "l1") return NormKind::kL1;
  if (text == "L2" || text == "l2") return NormKind::kL2;
  return std::nullopt;
}

std::string_view to_string(NormKind norm) { return norm == NormKind::kL1 ? "L1" : "L2"; }

void ModelConfig::validate() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ConfigError("gamma", "must be >= 0");
  if (!(mu >= 0.0 && mu <= 1.0)) throw ConfigError("mu", "must be in [0, 1]");
}

double norm(std::span<const double> v, NormKind kind) {
  double acc = 0.0;
  if (kind == NormKind::kL1) {
    for (double x : v) acc += std::abs(x);
    return acc;
  }
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

double score(std::span<const double> h, std::span<const double> r, std::span<const double> t,
             NormKind kind) {
  require_same_dim({h.size(), r.size(), t.size()});
  double acc = 0.0;
  if (kind == NormKind::kL1) {
    for (std::size_t i = 0; i < h.size(); ++i) acc += std::abs(h[i] + r[i] - t[i]);
    return acc;
  }
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = h[i] + r[i] - t[i];
    acc += x * x;
  }
  return std::sqrt(acc);
}

double pull_loss(std::span<const double> h, std::span<const double> t,
                 std::span<const double> h_pos, std::span<const double> t_pos, NormKind kind) {
  require_same_dim({h.size(), t.size(), h_pos.size(), t_pos.size()});
  std::vector<double> diff;
  difference(h, h_pos, diff);
  double loss = norm(diff, kind);
  difference(t, t_pos, diff);
  loss += norm(diff, kind);
  return loss;
}

double push_loss(const TripleVectors& pos, const TripleVectors& neg, double gamma, NormKind kind) {
  require_same_dim({pos.h.size(), neg.h.size()});
  return margin_hinge(gamma, score(pos.h, pos.r, pos.t, kind), score(neg.h, neg.r, neg.t, kind));
}

double transe_margin_loss(const TripleVectors& pos, const TripleVectors& neg, double gamma,
                          NormKind kind) {
  return push_loss(pos, neg, gamma, kind);
}

double total_loss(double pull_sum, double push_sum, double mu) {
  return mu * pull_sum + (1.0 - mu) * push_sum;
}

void add_norm_gradient(std::span<const double> v, NormKind kind, double scale,
                       std::span<double> out) {
  if (kind == NormKind::kL1) {
    for (std::size_t i = 0; i < v.size(); ++i) out[i] += scale * sign(v[i]);
    return;
  }
  const double n = l2_norm(v);
  if (n == 0.0) return;
  const double s = scale / n;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] += s * v[i];
}

PullGradients pull_gradients(std::span<const double> h, std::span<const double> t,
                             std::span<const double> h_pos, std::span<const double> t_pos,
                             NormKind kind) {
  require_same_dim({h.size(), t.size(), h_pos.size(), t_pos.size()});
  const std::size_t d = h.size();
  PullGradients g{std::vector<double>(d), std::vector<double>(d), std::vector<double>(d),
                  std::vector<double>(d)};
  std::vector<double> diff;
  difference(h, h_pos, diff);
  add_norm_gradient(diff, kind, 1.0, g.h);
  add_norm_gradient(diff, kind, -1.0, g.h_pos);
  difference(t, t_pos, diff);
  add_norm_gradient(diff, kind, 1.0, g.t);
  add_norm_gradient(diff, kind, -1.0, g.t_pos);
  return g;
}

PushGradients push_gradients(std::span<const double> h, std::span<const double> r,
                             std::span<const double> t, std::span<const double> h_neg,
                             std::span<const double> t_neg, double gamma, NormKind kind) {
  require_same_dim({h.size(), r.size(), t.size(), h_neg.size(), t_neg.size()});
  const std::size_t d = h.size();
  PushGradients g{std::vector<double>(d), std::vector<double>(d), std::vector<double>(d),
                  std::vector<double>(d), std::vector<double>(d)};
  std::vector<double> pos, neg;
  translation_residual(h, r, t, pos);
  translation_residual(h_neg, r, t_neg, neg);
  if (gamma + norm(pos, kind) - norm(neg, kind) <= 0.0) return g;

  add_norm_gradient(pos, kind, 1.0, g.h);
  add_norm_gradient(pos, kind, 1.0, g.r);
  add_norm_gradient(pos, kind, -1.0, g.t);
  add_norm_gradient(neg, kind, -1.0, g.h_neg);
  add_norm_gradient(neg, kind, -1.0, g.r);
  add_norm_gradient(neg, kind, 1.0, g.t_neg);
  return g;
}

void GradientUpdate::reset(std::size_t dim) {
  dim_ = dim;
  slots_.clear();
  data_.clear();
  data_.reserve(6 * dim);
}

std::span<double> GradientUpdate::slot(TableKind kind, std::size_t row) {
  for (const Slot& s : slots_) {
    if (s.kind == kind && s.row == row) return {data_.data() + s.offset, dim_};
  }
  const std::size_t offset = data_.size();
  data_.resize(offset + dim_, 0.0);
  slots_.push_back({kind, row, offset});
  return {data_.data() + offset, dim_};
}

GradientUpdate::Entry GradientUpdate::entry(std::size_t i) const {
  const Slot& s = slots_.at(i);
  return {s.kind, s.row, {data_.data() + s.offset, dim_}};
}

std::optional<GradientUpdate::Entry> GradientUpdate::find(TableKind kind, std::size_t row) const {
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i].kind == kind && slots_[i].row == row) return entry(i);
  }
  return std::nullopt;
}

bool GradientUpdate::is_zero() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return x == 0.0; });
}

bool GradientUpdate::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

void GradientUpdate::apply(EmbeddingTable& entities, EmbeddingTable& relations,
                           double step) const {
  for (const Slot& s : slots_) {
    auto target = (s.kind == TableKind::kEntity ? entities : relations).row(s.row);
    const double* delta = data_.data() + s.offset;
    for (std::size_t i = 0; i < dim_; ++i) target[i] -= step * delta[i];
  }
}

double accumulate_pull(const Triple& pos, const Triple& sample, const EmbeddingTable& entities,
                       NormKind kind, GradientUpdate& out) {
  auto& diff = scratch(0);
  double loss = 0.0;
  auto term = [&](EntityId a, EntityId b) {
    if (a == b) return;
    difference(entities.row(a), entities.row(b), diff);
    const double n = norm(diff, kind);
    if (n == 0.0) return;
    loss += n;
    add_norm_gradient(diff, kind, 1.0, out.slot(TableKind::kEntity, a));
    add_norm_gradient(diff, kind, -1.0, out.slot(TableKind::kEntity, b));
  };
  term(pos.head, sample.head);
  term(pos.tail, sample.tail);
  return loss;
}

double accumulate_push(const Triple& pos, const Triple& neg, const EmbeddingTable& entities,
                       const EmbeddingTable& relations, double gamma, NormKind kind,
                       GradientUpdate& out) {
  auto& pos_res = scratch(0);
  auto& neg_res = scratch(1);
  const auto r = relations.row(pos.relation);
  translation_residual(entities.row(pos.head), r, entities.row(pos.tail), pos_res);
  translation_residual(entities.row(neg.head), r, entities.row(neg.tail), neg_res);
  const double loss = margin_hinge(gamma, norm(pos_res, kind), norm(neg_res, kind));
  if (loss <= 0.0) return 0.0;

  add_norm_gradient(pos_res, kind, 1.0, out.slot(TableKind::kEntity, pos.head));
  add_norm_gradient(pos_res, kind, -1.0, out.slot(TableKind::kEntity, pos.tail));
  add_norm_gradient(neg_res, kind, -1.0, out.slot(TableKind::kEntity, neg.head));
  add_norm_gradient(neg_res, kind, 1.0, out.slot(TableKind::kEntity, neg.tail));
  auto r_slot = out.slot(TableKind::kRelation, pos.relation);
  add_norm_gradient(pos_res, kind, 1.0, r_slot);
  add_norm_gradient(neg_res, kind, -1.0, r_slot);
  return loss;
}

}  // namespace lmnne
