#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <optional>
#include <vector>

#include "lmnne/embeddings.h"
#include "lmnne/kg_data.h"

namespace lmnne {

enum class NormKind { kL1, kL2 };

std::optional<NormKind> parse_norm(std::string_view text);
std::string_view to_string(NormKind norm);

/// Loss hyperparameters. Defaults: L2 for the pull distance, L1 for the
/// push/scoring distance, margin 2.0, trade-off 0.6.
struct ModelConfig {
  NormKind pull_norm = NormKind::kL2;
  NormKind push_norm = NormKind::kL1;
  double gamma = 2.0;
  double mu = 0.6;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

double norm(std::span<const double> v, NormKind kind);

/// Dissimilarity ||h + r - t||; lower is more plausible. Throws
/// std::invalid_argument on dimension mismatch.
double score(std::span<const double> h, std::span<const double> r, std::span<const double> t,
             NormKind kind);

/// ||h - h_pos|| + ||t - t_pos||.
double pull_loss(std::span<const double> h, std::span<const double> t,
                 std::span<const double> h_pos, std::span<const double> t_pos, NormKind kind);

/// [gamma + pos_score - neg_score]_+
inline double margin_hinge(double gamma, double pos_score, double neg_score) {
  const double v = gamma + pos_score - neg_score;
  return v > 0.0 ? v : 0.0;
}

/// Views of the three vectors of one scored triple.
struct TripleVectors {
  std::span<const double> h;
  std::span<const double> r;
  std::span<const double> t;
};

double push_loss(const TripleVectors& pos, const TripleVectors& neg, double gamma, NormKind kind);

/// Margin ranking loss of the TransE baseline. Same value as push_loss.
double transe_margin_loss(const TripleVectors& pos, const TripleVectors& neg, double gamma,
                          NormKind kind);

/// mu * pull_sum + (1 - mu) * push_sum
double total_loss(double pull_sum, double push_sum, double mu);

/// Adds `scale * d||v||/dv` to `out`. L2 uses v/||v|| (zero at v = 0);
/// L1 uses the componentwise sign with sign(0) = 0.
void add_norm_gradient(std::span<const double> v, NormKind kind, double scale,
                       std::span<double> out);

/// Gradient of pull_loss with respect to each argument.
struct PullGradients {
  std::vector<double> h, t, h_pos, t_pos;
};

PullGradients pull_gradients(std::span<const double> h, std::span<const double> t,
                             std::span<const double> h_pos, std::span<const double> t_pos,
                             NormKind kind);

/// Subgradient of push_loss with respect to each argument. All zero when
/// the margin is satisfied (hinge argument <= 0).
struct PushGradients {
  std::vector<double> h, r, t, h_neg, t_neg;
};

PushGradients push_gradients(std::span<const double> h, std::span<const double> r,
                             std::span<const double> t, std::span<const double> h_neg,
                             std::span<const double> t_neg, double gamma, NormKind kind);

/// Sparse update over embedding rows. Deltas for the same (table, row) are
/// merged into one entry.
class GradientUpdate {
 public:
  struct Entry {
    TableKind kind;
    std::size_t row;
    std::span<const double> delta;
  };

  explicit GradientUpdate(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return slots_.size(); }
  bool empty() const noexcept { return slots_.empty(); }

  /// Clears entries and sets the dimension; keeps allocated storage.
  void reset(std::size_t dim);

  /// Delta buffer for (kind, row), created zeroed on first use.
  std::span<double> slot(TableKind kind, std::size_t row);

  Entry entry(std::size_t i) const;
  std::optional<Entry> find(TableKind kind, std::size_t row) const;

  /// True when every delta component is exactly zero.
  bool is_zero() const noexcept;
  bool all_finite() const noexcept;

  /// row -= step * delta for every entry.
  void apply(EmbeddingTable& entities, EmbeddingTable& relations, double step) const;

 private:
  struct Slot {
    TableKind kind;
    std::size_t row;
    std::size_t offset;
  };
  std::size_t dim_;
  std::vector<Slot> slots_;
  std::vector<double> data_;
};

/// Adds the pull gradient for the pair (pos, sample) to `out`, keyed by
/// entity row. Returns the pull loss.
double accumulate_pull(const Triple& pos, const Triple& sample, const EmbeddingTable& entities,
                       NormKind kind, GradientUpdate& out);

/// Adds the push subgradient for (pos, neg) to `out` when the hinge is
/// active. Returns the hinge loss.
double accumulate_push(const Triple& pos, const Triple& neg, const EmbeddingTable& entities,
                       const EmbeddingTable& relations, double gamma, NormKind kind,
                       GradientUpdate& out);

}  // namespace lmnne
