#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace lmnne {

/// Seeded random stream. Identical seeds give identical draws on one
/// platform/standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::mt19937_64& engine() noexcept { return engine_; }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  /// Uniform integer in [0, n). n must be positive.
  std::size_t below(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }
  bool coin() { return below(2) == 0; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

enum class TableKind { kEntity, kRelation };

std::string_view to_string(TableKind kind);

/// Dense row-major n x d table of embedding vectors.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(TableKind kind, std::size_t rows, std::size_t dim);

  TableKind kind() const noexcept { return kind_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t dim() const noexcept { return dim_; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * dim_, dim_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * dim_, dim_};
  }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  // Provenance carried into the persisted file.
  std::uint64_t seed = 0;
  std::uint64_t vocab_fingerprint = 0;

  friend bool operator==(const EmbeddingTable&, const EmbeddingTable&) = default;

 private:
  TableKind kind_ = TableKind::kEntity;
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// Bound of the initial uniform draw: 6 / sqrt(d).
double init_bound(std::size_t dim);

/// Draws every value uniformly from [-bound, bound).
void fill_uniform(std::span<double> values, double bound, Rng& rng);

/// Samples each component uniformly in [-6/sqrt(d), 6/sqrt(d)] and scales
/// every row to unit L2 norm. Throws std::invalid_argument for d == 0.
EmbeddingTable init_table(TableKind kind, std::size_t rows, std::size_t dim, Rng& rng);

double l2_norm(std::span<const double> v);

/// Scales every row to unit L2 norm in place. A zero or non-finite row is
/// a TrainingError naming the row.
void normalize_rows(EmbeddingTable& table);
void normalize_row(std::span<double> row);

/// Persists a table in the lossless text format described in README.md.
void save_table(const EmbeddingTable& table, const std::filesystem::path& path);

/// Reads a table written by save_table. Header/body mismatches and
/// truncation are ParseErrors.
EmbeddingTable load_table(const std::filesystem::path& path);

}  // namespace lmnne
