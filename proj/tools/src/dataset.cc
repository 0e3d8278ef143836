#include "lmnne_cli/dataset.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <ostream>

#include "lmnne/errors.h"

namespace lmnne::cli {
namespace {

std::vector<std::string> aliases(std::string_view split) {
  if (split == "valid") return {"valid", "dev"};
  return {std::string(split)};
}

bool matches(const std::filesystem::path& file, const std::string& split) {
  const std::string stem = file.stem().string();
  const std::string ext = file.extension().string();
  if (ext != ".txt" && ext != ".tsv") return false;
  if (stem == split) return true;
  for (char sep : {'-', '_'}) {
    const std::string suffix = std::string(1, sep) + split;
    if (stem.size() > suffix.size() &&
        stem.compare(stem.size() - suffix.size(), suffix.size(), suffix) == 0) {
      return true;
    }
  }
  return false;
}

// Field count of the first data line; 0 for an empty file.
std::size_t first_line_fields(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    return static_cast<std::size_t>(std::count(line.begin(), line.end(), '\t')) + 1;
  }
  return 0;
}

}  // namespace

std::uint64_t file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[static_cast<std::size_t>(i)]);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::string hex_digest(std::uint64_t v) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) out[static_cast<std::size_t>(i)] = kHex[v & 0xf];
  return out;
}

std::filesystem::path find_split(const std::filesystem::path& dir, std::string_view split) {
  if (!std::filesystem::is_directory(dir)) {
    throw DataError("dataset directory " + dir.string() + " does not exist");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& name : aliases(split)) {
    for (const auto& f : files) {
      if (matches(f, name)) return f;
    }
  }
  throw DataError("no " + std::string(split) + " split in " + dir.string() +
                  " (expected train/valid|dev/test as <split>.txt, <split>.tsv or *-<split>.txt)");
}

TripleSet Dataset::all_known() const {
  const TripleSet* parts[] = {&train, &valid, &test};
  return TripleSet::merge(parts);
}

Dataset load_dataset(const std::filesystem::path& dir, FieldOrder order,
                     std::ostream* diagnostics) {
  Dataset ds;
  ds.dir = dir;
  ds.order = order;
  ds.train_file.path = find_split(dir, "train");
  ds.valid_file.path = find_split(dir, "valid");
  ds.test_file.path = find_split(dir, "test");
  for (SplitFile* f : {&ds.train_file, &ds.valid_file, &ds.test_file}) {
    f->digest = file_digest(f->path);
    f->labeled = first_line_fields(f->path) == 4;
  }
  if (ds.train_file.labeled) {
    throw DataError(ds.train_file.path.string() + ": training split must not carry labels");
  }

  const std::filesystem::path files[] = {ds.train_file.path, ds.valid_file.path,
                                         ds.test_file.path};
  ds.vocab = build_vocab(files, order);
  ds.train = load_triples(ds.train_file.path, ds.vocab, true, order, diagnostics).triples;

  auto load_eval_split = [&](const SplitFile& f, TripleSet& positives,
                             std::optional<std::vector<LabeledTriple>>& labeled) {
    if (!f.labeled) {
      positives = load_triples(f.path, ds.vocab, true, order, diagnostics).triples;
      return;
    }
    labeled = load_labeled_triples(f.path, ds.vocab, true, order, diagnostics).triples;
    std::vector<Triple> pos;
    for (const auto& item : *labeled) {
      if (item.positive) pos.push_back(item.triple);
    }
    positives = TripleSet(std::move(pos));
  };
  load_eval_split(ds.valid_file, ds.valid, ds.valid_labeled);
  load_eval_split(ds.test_file, ds.test, ds.test_labeled);
  return ds;
}

}  // namespace lmnne::cli
