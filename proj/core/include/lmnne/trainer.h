#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "lmnne/embeddings.h"
#include "lmnne/kg_data.h"
#include "lmnne/model.h"

namespace lmnne {

/// Hyperparameters of the SGD learner.
struct TrainConfig {
  std::size_t dim = 20;
  ModelConfig model;
  double alpha = 0.02;  ///< pull learning rate
  double beta = 0.02;   ///< push learning rate
  /// Stop once |L_i - L_{i-1}| / max(L_{i-1}, 1e-12) <= epsilon.
  double epsilon = 0.0;
  std::size_t max_epochs = 1000;
  std::uint64_t seed = 1;
  /// TransE baseline: every sample is a verified negative, push updates
  /// scaled by beta alone, no pull term.
  bool baseline = false;

  void validate() const;
};

inline constexpr double kRelativeLossFloor = 1e-12;
inline constexpr std::size_t kMaxNegativeResamples = 1000;

struct EpochRecord {
  std::size_t epoch = 0;
  double loss = 0.0;
  std::size_t pull_updates = 0;
  std::size_t push_updates = 0;
  double seconds = 0.0;
};

struct TrainTrace {
  std::vector<EpochRecord> epochs;
  bool converged = false;
};

/// Tab-separated `epoch loss pull push seconds` line.
void write_epoch_line(std::ostream& out, const EpochRecord& rec);

/// Replaces the head (probability 1/2) or the tail with a different entity
/// drawn uniformly from [0, num_entities). Requires num_entities >= 2.
Triple sample_corruption(const Triple& triple, std::size_t num_entities, Rng& rng);

enum class SampleClass { kPositive, kNegative };

inline SampleClass classify_sample(const Triple& sample, const TripleSet& train) {
  return train.contains(sample) ? SampleClass::kPositive : SampleClass::kNegative;
}

/// Relative loss change used by the convergence test; +inf before the
/// second epoch.
double relative_loss_change(double previous, double current);

/// Sequential SGD over a fixed training set. Relations are initialised
/// once; entities are initialised once and re-normalised at the start of
/// every epoch.
class Trainer {
 public:
  Trainer(TrainConfig config, const TripleSet& train, std::size_t num_entities,
          std::size_t num_relations);

  /// Starts from caller-provided tables instead of a fresh initialisation.
  Trainer(TrainConfig config, const TripleSet& train, EmbeddingTable entities,
          EmbeddingTable relations);

  EpochRecord train_epoch();

  /// Runs epochs until convergence or max_epochs; each record is written
  /// to `log` as it completes.
  TrainTrace run(std::ostream* log = nullptr);

  const TrainConfig& config() const noexcept { return config_; }
  const EmbeddingTable& entities() const noexcept { return entities_; }
  const EmbeddingTable& relations() const noexcept { return relations_; }
  EmbeddingTable& entities() noexcept { return entities_; }
  EmbeddingTable& relations() noexcept { return relations_; }
  std::size_t epochs_run() const noexcept { return epoch_; }

 private:
  Triple draw_negative(const Triple& triple);
  void check_relations_finite() const;

  TrainConfig config_;
  const TripleSet* train_;
  Rng rng_;
  EmbeddingTable entities_;
  EmbeddingTable relations_;
  std::vector<std::size_t> order_;
  GradientUpdate update_;
  std::size_t epoch_ = 0;
};

struct TrainResult {
  EmbeddingTable entities;
  EmbeddingTable relations;
  TrainTrace trace;
};

/// Convenience wrapper: initialise, run, and stamp the vocabulary
/// fingerprint on both tables.
TrainResult train(const TrainConfig& config, const TripleSet& train, const Vocab& vocab,
                  std::ostream* log = nullptr);

}  // namespace lmnne
