#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lmnne/eval.h"
#include "lmnne/kg_data.h"
#include "lmnne/model.h"

namespace lmnne::cli {

inline constexpr std::string_view kToolVersion = "0.3.0";
inline constexpr std::string_view kEntityFile = "entity.emb";
inline constexpr std::string_view kRelationFile = "relation.emb";
inline constexpr std::string_view kManifestFile = "manifest.json";

void cmd_stats(const std::filesystem::path& dataset, FieldOrder order, std::ostream& out);

struct TrainOptions {
  std::optional<std::filesystem::path> config;
  std::vector<std::pair<std::string, std::string>> overrides;
  std::optional<std::uint64_t> seed;
  std::filesystem::path dataset;
  std::filesystem::path out;
  FieldOrder order = FieldOrder::kHeadRelationTail;
};

/// Trains and writes entity.emb, relation.emb, trace.tsv and manifest.json
/// into `out`. Per-epoch lines go to `log`.
void cmd_train(const TrainOptions& options, std::ostream& out, std::ostream& log);

struct EvalOptions {
  std::filesystem::path embeddings;
  std::filesystem::path dataset;
  std::filesystem::path out;
  FieldOrder order = FieldOrder::kHeadRelationTail;
  std::size_t threads = 1;
  /// Scoring norm; defaults to push_norm from the training manifest, else L1.
  std::optional<NormKind> norm;
  bool generate_negatives = false;
  std::uint64_t seed = 1;
};

/// Writes lp_report.json and manifest.json into `out`.
void cmd_eval_lp(const EvalOptions& options, std::ostream& out, std::ostream& diag);

/// Writes tc_report.json and manifest.json into `out`.
void cmd_eval_tc(const EvalOptions& options, std::ostream& out, std::ostream& diag);

/// Writes valid_labeled.txt and test_labeled.txt (1:1 balanced) into `out`.
void cmd_make_tc_negatives(const std::filesystem::path& dataset, const std::filesystem::path& out,
                           FieldOrder order, std::uint64_t seed, std::ostream& diag);

void cmd_complexity(const ComplexityInput& input, const std::optional<std::filesystem::path>& out,
                    std::ostream& stdout_stream);

/// Full command-line entry point. Returns the process exit status; on
/// failure writes one `lmnne: error[<class>]: <message>` line to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Exit status used for each error class.
int exit_code_for(std::string_view error_class);

}  // namespace lmnne::cli
