#include "lmnne/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "lmnne/errors.h"

namespace lmnne {

void TrainConfig::validate() const {
  if (dim < 1) throw ConfigError("dim", "must be >= 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha", "must be > 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("beta", "must be > 0");
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon", "must be >= 0");
  if (max_epochs < 1) throw ConfigError("max_epochs", "must be >= 1");
  model.validate();
}

void write_epoch_line(std::ostream& out, const EpochRecord& rec) {
  out << rec.epoch << '\t' << rec.loss << '\t' << rec.pull_updates << '\t' << rec.push_updates
      << '\t' << rec.seconds << '\n';
}

Triple sample_corruption(const Triple& triple, std::size_t num_entities, Rng& rng) {
  if (num_entities < 2) throw DataError("corruption sampling needs at least 2 entities");
  Triple out = triple;
  const bool replace_head = rng.coin();
  EntityId& slot = replace_head ? out.head : out.tail;
  // Uniform over the n-1 entities other than the current occupant.
  auto pick = static_cast<EntityId>(rng.below(num_entities - 1));
  if (pick >= slot) ++pick;
  slot = pick;
  return out;
}

double relative_loss_change(double previous, double current) {
  return std::abs(current - previous) / std::max(previous, kRelativeLossFloor);
}

Trainer::Trainer(TrainConfig config, const TripleSet& train, std::size_t num_entities,
                 std::size_t num_relations)
    : config_(config), train_(&train), rng_(config.seed) {
  config_.validate();
  relations_ = init_table(TableKind::kRelation, num_relations, config_.dim, rng_);
  entities_ = init_table(TableKind::kEntity, num_entities, config_.dim, rng_);
  update_.reset(config_.dim);
}

Trainer::Trainer(TrainConfig config, const TripleSet& train, EmbeddingTable entities,
                 EmbeddingTable relations)
    : config_(config),
      train_(&train),
      rng_(config.seed),
      entities_(std::move(entities)),
      relations_(std::move(relations)) {
  config_.validate();
  if (entities_.dim() != config_.dim || relations_.dim() != config_.dim) {
    throw ConfigError("dim", "does not match the provided embedding tables");
  }
  update_.reset(config_.dim);
}

Triple Trainer::draw_negative(const Triple& triple) {
  for (std::size_t attempt = 0; attempt < kMaxNegativeResamples; ++attempt) {
    Triple sample = sample_corruption(triple, entities_.rows(), rng_);
    if (!train_->contains(sample)) return sample;
  }
  throw TrainingError("no negative corruption found after " +
                      std::to_string(kMaxNegativeResamples) + " draws");
}

void Trainer::check_relations_finite() const {
  for (double x : relations_.values()) {
    if (!std::isfinite(x)) throw TrainingError("non-finite relation embedding; training diverged");
  }
}

EpochRecord Trainer::train_epoch() {
  const auto started = std::chrono::steady_clock::now();
  const auto& triples = train_->triples();
  for (const Triple& t : triples) {
    if (t.head >= entities_.rows() || t.tail >= entities_.rows() ||
        t.relation >= relations_.rows()) {
      throw DataError("training triple references an id outside the embedding tables");
    }
  }

  normalize_rows(entities_);

  order_.resize(triples.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::shuffle(order_.begin(), order_.end(), rng_.engine());

  const ModelConfig& m = config_.model;
  const double pull_step = config_.alpha * m.mu;
  const double push_step = config_.baseline ? config_.beta : config_.beta * (1.0 - m.mu);
  const double push_weight = config_.baseline ? 1.0 : 1.0 - m.mu;

  EpochRecord rec;
  rec.epoch = ++epoch_;
  double pull_sum = 0.0;
  double push_sum = 0.0;
  for (std::size_t idx : order_) {
    const Triple& pos = triples[idx];
    update_.reset(config_.dim);
    if (config_.baseline) {
      const Triple neg = draw_negative(pos);
      push_sum += accumulate_push(pos, neg, entities_, relations_, m.gamma, m.push_norm, update_);
      ++rec.push_updates;
      if (!update_.empty()) update_.apply(entities_, relations_, push_step);
    } else {
      const Triple sample = sample_corruption(pos, entities_.rows(), rng_);
      if (classify_sample(sample, *train_) == SampleClass::kPositive) {
        pull_sum += accumulate_pull(pos, sample, entities_, m.pull_norm, update_);
        ++rec.pull_updates;
        if (!update_.empty() && pull_step > 0.0) update_.apply(entities_, relations_, pull_step);
      } else {
        push_sum +=
            accumulate_push(pos, sample, entities_, relations_, m.gamma, m.push_norm, update_);
        ++rec.push_updates;
        if (!update_.empty() && push_step > 0.0) update_.apply(entities_, relations_, push_step);
      }
    }
    if (!update_.all_finite()) {
      throw TrainingError("non-finite gradient at epoch " + std::to_string(rec.epoch));
    }
  }

  rec.loss = config_.baseline ? push_sum : m.mu * pull_sum + push_weight * push_sum;
  if (!std::isfinite(rec.loss)) {
    throw TrainingError("non-finite loss at epoch " + std::to_string(rec.epoch));
  }
  check_relations_finite();
  rec.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return rec;
}

TrainTrace Trainer::run(std::ostream* log) {
  TrainTrace trace;
  double previous = 0.0;
  for (std::size_t i = 0; i < config_.max_epochs; ++i) {
    const EpochRecord rec = train_epoch();
    trace.epochs.push_back(rec);
    if (log) write_epoch_line(*log, rec);
    const double change = i == 0 ? std::numeric_limits<double>::infinity()
                                  : relative_loss_change(previous, rec.loss);
    if (change <= config_.epsilon) {
      trace.converged = true;
      break;
    }
    previous = rec.loss;
  }
  return trace;
}

TrainResult train(const TrainConfig& config, const TripleSet& train_set, const Vocab& vocab,
                  std::ostream* log) {
  if (train_set.empty()) throw DataError("training set is empty");
  Trainer trainer(config, train_set, vocab.num_entities(), vocab.num_relations());
  TrainTrace trace = trainer.run(log);
  TrainResult result{std::move(trainer.entities()), std::move(trainer.relations()),
                     std::move(trace)};
  result.entities.vocab_fingerprint = vocab.fingerprint();
  result.relations.vocab_fingerprint = vocab.fingerprint();
  return result;
}

}  // namespace lmnne
