#include "lmnne/kg_data.h"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>

#include "lmnne/errors.h"

namespace lmnne {
namespace {

struct RawRecord {
  std::string_view head;
  std::string_view relation;
  std::string_view tail;
  std::optional<bool> label;
};

std::string location(const std::filesystem::path& path, std::size_t line_no) {
  return path.string() + ":" + std::to_string(line_no);
}

std::optional<bool> parse_label(std::string_view field) {
  if (field == "1" || field == "+1") return true;
  if (field == "-1") return false;
  return std::nullopt;
}

// Splits one tab-separated line. Returns nullopt for blank/comment lines.
std::optional<RawRecord> split_record(std::string_view line, FieldOrder order,
                                      const std::filesystem::path& path, std::size_t line_no) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  if (line.empty() || line.front() == '#') return std::nullopt;

  const auto tabs = static_cast<std::size_t>(std::count(line.begin(), line.end(), '\t'));
  const std::size_t count = tabs + 1;
  if (count != 3 && count != 4) {
    throw ParseError(location(path, line_no) + ": expected 3 or 4 tab-separated fields, got " +
                     std::to_string(count));
  }
  std::string_view fields[4];
  std::size_t start = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t tab = line.find('\t', start);
    fields[i] = line.substr(start, tab == std::string_view::npos ? tab : tab - start);
    start = tab + 1;
  }
  for (std::size_t i = 0; i < 3; ++i) {
    if (fields[i].empty()) throw ParseError(location(path, line_no) + ": empty field");
  }
  RawRecord rec;
  rec.head = fields[0];
  if (order == FieldOrder::kHeadRelationTail) {
    rec.relation = fields[1];
    rec.tail = fields[2];
  } else {
    rec.tail = fields[1];
    rec.relation = fields[2];
  }
  if (count == 4) {
    rec.label = parse_label(fields[3]);
    if (!rec.label) {
      throw ParseError(location(path, line_no) + ": label column must be 1 or -1, got '" +
                       std::string(fields[3]) + "'");
    }
  }
  return rec;
}

template <typename Fn>
void for_each_record(const std::filesystem::path& path, FieldOrder order, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto rec = split_record(line, order, path, line_no)) fn(*rec, line_no);
  }
  if (in.bad()) throw IoError("read failure on " + path.string());
}

// Resolves labels; nullopt and a diagnostic when a label is unknown.
std::optional<Triple> resolve(const RawRecord& rec, const Vocab& vocab, bool strict,
                              const std::filesystem::path& path, std::size_t line_no,
                              std::ostream* diagnostics) {
  auto h = vocab.find_entity(rec.head);
  auto r = vocab.find_relation(rec.relation);
  auto t = vocab.find_entity(rec.tail);
  if (h && r && t) return Triple{*h, *r, *t};

  std::string what;
  if (!h) what = "entity '" + std::string(rec.head) + "'";
  else if (!r) what = "relation '" + std::string(rec.relation) + "'";
  else what = "entity '" + std::string(rec.tail) + "'";
  if (strict) throw DataError(location(path, line_no) + ": unknown " + what);
  if (diagnostics) *diagnostics << "skip " << location(path, line_no) << ": unknown " << what << '\n';
  return std::nullopt;
}

}  // namespace

std::optional<FieldOrder> parse_field_order(std::string_view text) {
  if (text == "hrt") return FieldOrder::kHeadRelationTail;
  if (text == "htr") return FieldOrder::kHeadTailRelation;
  return std::nullopt;
}

std::string_view to_string(FieldOrder order) {
  return order == FieldOrder::kHeadRelationTail ? "hrt" : "htr";
}

EntityId Vocab::add_entity(std::string_view label) {
  if (auto it = entity_index_.find(label); it != entity_index_.end()) return it->second;
  const auto id = static_cast<EntityId>(entities_.size());
  entities_.emplace_back(label);
  entity_index_.emplace(entities_.back(), id);
  return id;
}

RelationId Vocab::add_relation(std::string_view label) {
  if (auto it = relation_index_.find(label); it != relation_index_.end()) return it->second;
  const auto id = static_cast<RelationId>(relations_.size());
  relations_.emplace_back(label);
  relation_index_.emplace(relations_.back(), id);
  return id;
}

std::optional<EntityId> Vocab::find_entity(std::string_view label) const {
  auto it = entity_index_.find(label);
  if (it == entity_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<RelationId> Vocab::find_relation(std::string_view label) const {
  auto it = relation_index_.find(label);
  if (it == relation_index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t Vocab::fingerprint() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    // 0xff never occurs in UTF-8, so it separates labels unambiguously.
    h ^= 0xff;
    h *= 0x100000001b3ULL;
  };
  for (const auto& e : entities_) mix(e);
  mix("\xfe");
  for (const auto& r : relations_) mix(r);
  return h;
}

TripleSet::TripleSet(std::vector<Triple> triples) : triples_(std::move(triples)) {
  members_.reserve(triples_.size());
  for (const Triple& t : triples_) {
    if (!members_.insert(t).second) continue;
    tails_[key(t.head, t.relation)].push_back(t.tail);
    heads_[key(t.relation, t.tail)].push_back(t.head);
  }
}

TripleSet TripleSet::merge(std::span<const TripleSet* const> parts) {
  std::size_t total = 0;
  for (const TripleSet* p : parts) total += p->size();
  std::vector<Triple> all;
  all.reserve(total);
  for (const TripleSet* p : parts) all.insert(all.end(), p->triples().begin(), p->triples().end());
  return TripleSet(std::move(all));
}

std::span<const EntityId> TripleSet::tails_of(EntityId head, RelationId relation) const {
  auto it = tails_.find(key(head, relation));
  if (it == tails_.end()) return {};
  return it->second;
}

std::span<const EntityId> TripleSet::heads_of(RelationId relation, EntityId tail) const {
  auto it = heads_.find(key(relation, tail));
  if (it == heads_.end()) return {};
  return it->second;
}

std::string_view to_string(RelationCategory c) {
  switch (c) {
    case RelationCategory::kOneToOne: return "1-TO-1";
    case RelationCategory::kOneToMany: return "1-TO-M";
    case RelationCategory::kManyToOne: return "M-TO-1";
    case RelationCategory::kManyToMany: return "M-TO-M";
  }
  return "?";
}

Vocab build_vocab(std::span<const std::filesystem::path> files, FieldOrder order) {
  Vocab vocab;
  for (const auto& path : files) {
    for_each_record(path, order, [&](const RawRecord& rec, std::size_t) {
      vocab.add_entity(rec.head);
      vocab.add_relation(rec.relation);
      vocab.add_entity(rec.tail);
    });
  }
  return vocab;
}

LoadedTriples load_triples(const std::filesystem::path& path, const Vocab& vocab, bool strict,
                           FieldOrder order, std::ostream* diagnostics) {
  std::vector<Triple> triples;
  std::size_t skipped = 0;
  for_each_record(path, order, [&](const RawRecord& rec, std::size_t line_no) {
    if (auto t = resolve(rec, vocab, strict, path, line_no, diagnostics)) {
      triples.push_back(*t);
    } else {
      ++skipped;
    }
  });
  if (diagnostics && skipped > 0) {
    *diagnostics << path.string() << ": skipped " << skipped << " line(s) with unknown labels\n";
  }
  return {TripleSet(std::move(triples)), skipped};
}

LoadedLabeledTriples load_labeled_triples(const std::filesystem::path& path, const Vocab& vocab,
                                          bool strict, FieldOrder order,
                                          std::ostream* diagnostics) {
  LoadedLabeledTriples out;
  for_each_record(path, order, [&](const RawRecord& rec, std::size_t line_no) {
    if (!rec.label) {
      throw ParseError(location(path, line_no) + ": missing label column (expected 1 or -1)");
    }
    if (auto t = resolve(rec, vocab, strict, path, line_no, diagnostics)) {
      out.triples.push_back({*t, *rec.label});
    } else {
      ++out.skipped;
    }
  });
  if (diagnostics && out.skipped > 0) {
    *diagnostics << path.string() << ": skipped " << out.skipped
                 << " line(s) with unknown labels\n";
  }
  return out;
}

void write_labeled_triples(const std::filesystem::path& path, std::span<const LabeledTriple> items,
                           const Vocab& vocab) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& item : items) {
    out << vocab.entity_label(item.triple.head) << '\t' << vocab.relation_label(item.triple.relation)
        << '\t' << vocab.entity_label(item.triple.tail) << '\t' << (item.positive ? "1" : "-1")
        << '\n';
  }
  if (!out) throw IoError("write failure on " + path.string());
}

std::map<RelationId, RelationCategory> classify_relations(const TripleSet& train) {
  struct Counts {
    std::size_t triples = 0;
    std::set<EntityId> heads;
    std::set<EntityId> tails;
  };
  std::map<RelationId, Counts> per_relation;
  for (const Triple& t : train.members()) {
    auto& c = per_relation[t.relation];
    ++c.triples;
    c.heads.insert(t.head);
    c.tails.insert(t.tail);
  }

  std::map<RelationId, RelationCategory> out;
  for (const auto& [rel, c] : per_relation) {
    const double tails_per_head = static_cast<double>(c.triples) / c.heads.size();
    const double heads_per_tail = static_cast<double>(c.triples) / c.tails.size();
    const bool many_tails = tails_per_head > kManyThreshold;
    const bool many_heads = heads_per_tail > kManyThreshold;
    RelationCategory cat;
    if (many_heads && many_tails) cat = RelationCategory::kManyToMany;
    else if (many_heads) cat = RelationCategory::kManyToOne;
    else if (many_tails) cat = RelationCategory::kOneToMany;
    else cat = RelationCategory::kOneToOne;
    out.emplace(rel, cat);
  }
  return out;
}

}  // namespace lmnne
