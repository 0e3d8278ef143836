#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace lmnne {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;

struct Triple {
  EntityId head = 0;
  RelationId relation = 0;
  EntityId tail = 0;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept {
    std::uint64_t x = (std::uint64_t{t.head} << 32) ^ t.tail;
    x ^= std::uint64_t{t.relation} * 0x9E3779B97F4A7C15ULL;
    x ^= x >> 31;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 29;
    return static_cast<std::size_t>(x);
  }
};

/// Column order of a triple file. Most releases use head, relation, tail;
/// some (e.g. the original WN18/FB15K dumps) use head, tail, relation.
enum class FieldOrder { kHeadRelationTail, kHeadTailRelation };

std::optional<FieldOrder> parse_field_order(std::string_view text);
std::string_view to_string(FieldOrder order);

/// Bidirectional label <-> dense id map for entities and relations.
class Vocab {
 public:
  EntityId add_entity(std::string_view label);
  RelationId add_relation(std::string_view label);

  std::optional<EntityId> find_entity(std::string_view label) const;
  std::optional<RelationId> find_relation(std::string_view label) const;

  const std::string& entity_label(EntityId id) const { return entities_.at(id); }
  const std::string& relation_label(RelationId id) const { return relations_.at(id); }

  std::size_t num_entities() const noexcept { return entities_.size(); }
  std::size_t num_relations() const noexcept { return relations_.size(); }

  /// 64-bit FNV-1a digest over all labels in id order. Two vocabularies
  /// with the same labels in the same order share a fingerprint.
  std::uint64_t fingerprint() const noexcept;

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  using Index = std::unordered_map<std::string, std::uint32_t, StringHash, std::equal_to<>>;

  std::vector<std::string> entities_;
  std::vector<std::string> relations_;
  Index entity_index_;
  Index relation_index_;
};

/// Ordered list of triples plus set-semantics membership and the per-(h,r)
/// tail / per-(r,t) head indices. Immutable once built.
class TripleSet {
 public:
  TripleSet() = default;
  explicit TripleSet(std::vector<Triple> triples);

  /// Union of several sets; list order is the concatenation.
  static TripleSet merge(std::span<const TripleSet* const> parts);

  bool contains(const Triple& t) const { return members_.contains(t); }

  const std::vector<Triple>& triples() const noexcept { return triples_; }
  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }
  std::size_t num_unique() const noexcept { return members_.size(); }

  /// Distinct tails observed with (head, relation); empty span if none.
  std::span<const EntityId> tails_of(EntityId head, RelationId relation) const;
  /// Distinct heads observed with (relation, tail); empty span if none.
  std::span<const EntityId> heads_of(RelationId relation, EntityId tail) const;

  const std::unordered_set<Triple, TripleHash>& members() const noexcept { return members_; }

 private:
  static std::uint64_t key(std::uint32_t a, std::uint32_t b) noexcept {
    return (std::uint64_t{a} << 32) | b;
  }

  std::vector<Triple> triples_;
  std::unordered_set<Triple, TripleHash> members_;
  std::unordered_map<std::uint64_t, std::vector<EntityId>> tails_;
  std::unordered_map<std::uint64_t, std::vector<EntityId>> heads_;
};

enum class RelationCategory { kOneToOne, kOneToMany, kManyToOne, kManyToMany };

inline constexpr double kManyThreshold = 1.5;
inline constexpr RelationCategory kAllCategories[] = {
    RelationCategory::kOneToOne, RelationCategory::kOneToMany,
    RelationCategory::kManyToOne, RelationCategory::kManyToMany};

std::string_view to_string(RelationCategory c);

/// Builds a vocabulary from triple files in the given order; ids follow
/// first appearance. Lines may carry a fourth label column (1 / -1), which
/// is ignored here. Blank lines and lines starting with '#' are skipped.
Vocab build_vocab(std::span<const std::filesystem::path> files,
                  FieldOrder order = FieldOrder::kHeadRelationTail);

struct LoadedTriples {
  TripleSet triples;
  std::size_t skipped = 0;
};

/// Loads a triple file against `vocab`. With `strict` an unknown label is a
/// DataError; otherwise the line is skipped and counted (and reported on
/// `diagnostics` when given).
LoadedTriples load_triples(const std::filesystem::path& path, const Vocab& vocab, bool strict,
                           FieldOrder order = FieldOrder::kHeadRelationTail,
                           std::ostream* diagnostics = nullptr);

struct LabeledTriple {
  Triple triple;
  bool positive = true;

  friend bool operator==(const LabeledTriple&, const LabeledTriple&) = default;
};

struct LoadedLabeledTriples {
  std::vector<LabeledTriple> triples;
  std::size_t skipped = 0;
};

/// Loads a four-column classification file (label column 1 or -1).
LoadedLabeledTriples load_labeled_triples(const std::filesystem::path& path, const Vocab& vocab,
                                          bool strict,
                                          FieldOrder order = FieldOrder::kHeadRelationTail,
                                          std::ostream* diagnostics = nullptr);

void write_labeled_triples(const std::filesystem::path& path, std::span<const LabeledTriple> items,
                           const Vocab& vocab);

/// Mapping category per relation, from average tails-per-head and
/// heads-per-tail over the distinct triples of `train` (MANY iff > 1.5).
std::map<RelationId, RelationCategory> classify_relations(const TripleSet& train);

}  // namespace lmnne
