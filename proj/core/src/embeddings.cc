#include "lmnne/embeddings.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "lmnne/errors.h"

namespace lmnne {
namespace {

constexpr std::string_view kMagic = "lmnne-embeddings v1";

std::string hex64(std::uint64_t v) {
  char buf[17];
  auto [end, ec] = std::to_chars(buf, buf + 16, v, 16);
  return std::string(16 - static_cast<std::size_t>(end - buf), '0') + std::string(buf, end);
}

}  // namespace

std::string_view to_string(TableKind kind) {
  return kind == TableKind::kEntity ? "entity" : "relation";
}

EmbeddingTable::EmbeddingTable(TableKind kind, std::size_t rows, std::size_t dim)
    : kind_(kind), rows_(rows), dim_(dim), data_(rows * dim, 0.0) {}

double init_bound(std::size_t dim) { return 6.0 / std::sqrt(static_cast<double>(dim)); }

double l2_norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

void normalize_row(std::span<double> row) {
  const double norm = l2_norm(row);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw TrainingError("cannot normalize a zero or non-finite row");
  }
  for (double& x : row) x /= norm;
}

void normalize_rows(EmbeddingTable& table) {
  for (std::size_t i = 0; i < table.rows(); ++i) {
    try {
      normalize_row(table.row(i));
    } catch (const TrainingError&) {
      throw TrainingError(std::string(to_string(table.kind())) + " row " + std::to_string(i) +
                          " is zero or non-finite; training has diverged");
    }
  }
}

void fill_uniform(std::span<double> values, double bound, Rng& rng) {
  for (double& x : values) x = rng.uniform(-bound, bound);
}

EmbeddingTable init_table(TableKind kind, std::size_t rows, std::size_t dim, Rng& rng) {
  if (dim == 0) throw std::invalid_argument("embedding dimension must be at least 1");
  EmbeddingTable table(kind, rows, dim);
  table.seed = rng.seed();
  const double bound = init_bound(dim);
  for (std::size_t i = 0; i < rows; ++i) {
    auto row = table.row(i);
    do {
      fill_uniform(row, bound, rng);
    } while (l2_norm(row) == 0.0);
    normalize_row(row);
  }
  return table;
}

void save_table(const EmbeddingTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << kMagic << '\n'
      << "kind " << to_string(table.kind()) << '\n'
      << "rows " << table.rows() << '\n'
      << "dim " << table.dim() << '\n'
      << "seed " << table.seed << '\n'
      << "vocab " << hex64(table.vocab_fingerprint) << '\n'
      << "data\n";
  char buf[64];
  for (std::size_t i = 0; i < table.rows(); ++i) {
    auto row = table.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, row[j], std::chars_format::hex);
      if (j) out.put(' ');
      out.write(buf, end - buf);
    }
    out.put('\n');
  }
  out << "end\n";
  if (!out) throw IoError("write failure on " + path.string());
}

EmbeddingTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string where = path.string();
  std::string line;

  auto expect_field = [&](std::string_view name) -> std::string {
    if (!std::getline(in, line) || line.rfind(std::string(name) + ' ', 0) != 0) {
      throw ParseError(where + ": expected header field '" + std::string(name) + "'");
    }
    return line.substr(name.size() + 1);
  };
  auto parse_u64 = [&](const std::string& text, int base, std::string_view name) {
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v, base);
    if (ec != std::errc() || end != text.data() + text.size()) {
      throw ParseError(where + ": bad value for '" + std::string(name) + "'");
    }
    return v;
  };

  if (!std::getline(in, line) || line != kMagic) throw ParseError(where + ": not an embedding file");
  const std::string kind_text = expect_field("kind");
  TableKind kind;
  if (kind_text == "entity") kind = TableKind::kEntity;
  else if (kind_text == "relation") kind = TableKind::kRelation;
  else throw ParseError(where + ": unknown table kind '" + kind_text + "'");
  const auto rows = parse_u64(expect_field("rows"), 10, "rows");
  const auto dim = parse_u64(expect_field("dim"), 10, "dim");
  const auto seed = parse_u64(expect_field("seed"), 10, "seed");
  const auto vocab = parse_u64(expect_field("vocab"), 16, "vocab");
  if (dim == 0) throw ParseError(where + ": dim must be positive");
  if (!std::getline(in, line) || line != "data") throw ParseError(where + ": missing data marker");

  EmbeddingTable table(kind, rows, dim);
  table.seed = seed;
  table.vocab_fingerprint = vocab;
  for (std::size_t i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) {
      throw ParseError(where + ": truncated, expected " + std::to_string(rows) + " rows, got " +
                       std::to_string(i));
    }
    const char* p = line.data();
    const char* end = line.data() + line.size();
    auto row = table.row(i);
    for (std::size_t j = 0; j < dim; ++j) {
      if (j) {
        if (p == end || *p != ' ') {
          throw ParseError(where + ": row " + std::to_string(i) + " has fewer than " +
                           std::to_string(dim) + " values");
        }
        ++p;
      }
      auto [next, ec] = std::from_chars(p, end, row[j], std::chars_format::hex);
      if (ec != std::errc() || !std::isfinite(row[j])) {
        throw ParseError(where + ": bad value in row " + std::to_string(i));
      }
      p = next;
    }
    if (p != end) {
      throw ParseError(where + ": row " + std::to_string(i) + " has more than " +
                       std::to_string(dim) + " values");
    }
  }
  if (!std::getline(in, line) || line != "end") {
    throw ParseError(where + ": missing end marker (extra rows or truncated file)");
  }
  return table;
}

}  // namespace lmnne
