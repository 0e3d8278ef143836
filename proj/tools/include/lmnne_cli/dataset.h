#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lmnne/kg_data.h"

namespace lmnne::cli {

struct SplitFile {
  std::filesystem::path path;
  std::uint64_t digest = 0;  ///< FNV-1a of the file bytes
  bool labeled = false;      ///< carries a fourth 1/-1 column
};

/// A benchmark directory: train plus valid (or dev) and test splits.
/// Labeled splits also keep their (triple, label) list; the TripleSet of
/// a labeled split holds only its positives.
struct Dataset {
  std::filesystem::path dir;
  FieldOrder order = FieldOrder::kHeadRelationTail;
  Vocab vocab;
  SplitFile train_file, valid_file, test_file;
  TripleSet train, valid, test;
  std::optional<std::vector<LabeledTriple>> valid_labeled, test_labeled;

  /// train ∪ valid ∪ test (positives only).
  TripleSet all_known() const;
};

/// Locates split files in `dir`. Accepted names: `<split>.txt`, `<split>.tsv`,
/// or any file whose stem ends in `-<split>` / `_<split>`; `dev` is an
/// alias for `valid`. Throws DataError listing the expectations when a
/// split is missing.
std::filesystem::path find_split(const std::filesystem::path& dir, std::string_view split);

Dataset load_dataset(const std::filesystem::path& dir, FieldOrder order,
                     std::ostream* diagnostics = nullptr);

std::uint64_t file_digest(const std::filesystem::path& path);
std::string hex_digest(std::uint64_t v);

}  // namespace lmnne::cli
