#include "lmnne/kg_data.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "lmnne/embeddings.h"
#include "lmnne/errors.h"
#include "temp_dir.h"
#include "toy_kg.h"

namespace lmnne {
namespace {

using testing::TempDir;

TEST(Vocab, AssignsIdsInFirstAppearanceOrder) {
  Vocab v;
  EXPECT_EQ(v.add_entity("b"), 0u);
  EXPECT_EQ(v.add_entity("a"), 1u);
  EXPECT_EQ(v.add_entity("b"), 0u);
  EXPECT_EQ(v.add_relation("r"), 0u);
  EXPECT_EQ(v.num_entities(), 2u);
  EXPECT_EQ(v.num_relations(), 1u);
  EXPECT_EQ(v.find_entity("a"), 1u);
  EXPECT_FALSE(v.find_entity("zz").has_value());
}

TEST(Vocab, LabelIdRoundTrip) {
  Vocab v;
  for (int i = 0; i < 500; ++i) v.add_entity("ent_" + std::to_string(i * 7919 % 1000));
  for (EntityId id = 0; id < v.num_entities(); ++id) {
    EXPECT_EQ(v.find_entity(v.entity_label(id)), id);
  }
}

TEST(Vocab, FingerprintSeparatesEntitiesFromRelations) {
  Vocab a, b, c;
  a.add_entity("x");
  a.add_relation("y");
  b.add_entity("x");
  b.add_entity("y");
  c.add_entity("x");
  c.add_relation("y");
  EXPECT_NE(a.fingerprint(), b.fingerprint());
  EXPECT_EQ(a.fingerprint(), c.fingerprint());
}

TEST(TripleSet, ContainsIsOrderSensitive) {
  TripleSet s({{0, 0, 1}});
  EXPECT_TRUE(s.contains({0, 0, 1}));
  EXPECT_FALSE(s.contains({1, 0, 0}));
  EXPECT_FALSE(TripleSet().contains({0, 0, 1}));
}

TEST(TripleSet, DuplicatesKeptInListStoredOnceInIndex) {
  TripleSet s({{0, 0, 1}, {0, 0, 1}, {0, 0, 2}});
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s.num_unique(), 2u);
  auto tails = s.tails_of(0, 0);
  EXPECT_EQ(std::vector<EntityId>(tails.begin(), tails.end()), (std::vector<EntityId>{1, 2}));
  EXPECT_EQ(s.heads_of(0, 2).size(), 1u);
  EXPECT_TRUE(s.heads_of(3, 3).empty());
}

TEST(TripleSet, ContainsMatchesLinearScan) {
  Rng rng(11);
  for (int round = 0; round < 20; ++round) {
    const std::size_t count = 1 + rng.below(10000);
    auto triples = testing::random_triples(30, 4, count, rng);
    TripleSet s(triples);
    for (int q = 0; q < 500; ++q) {
      Triple t{static_cast<EntityId>(rng.below(30)), static_cast<RelationId>(rng.below(4)),
               static_cast<EntityId>(rng.below(30))};
      const bool linear = std::find(triples.begin(), triples.end(), t) != triples.end();
      ASSERT_EQ(s.contains(t), linear);
    }
  }
}

TEST(TripleSet, MergeConcatenatesAndUnions) {
  TripleSet a({{0, 0, 1}}), b({{0, 0, 1}, {1, 0, 2}});
  const TripleSet* parts[] = {&a, &b};
  TripleSet m = TripleSet::merge(parts);
  EXPECT_EQ(m.size(), 3u);
  EXPECT_EQ(m.num_unique(), 2u);
  EXPECT_TRUE(m.contains({1, 0, 2}));
}

TEST(ClassifyRelations, WorkedExamples) {
  // r0: all distinct pairs. r1: one head, three tails. r2: 4 triples, 3
  // heads, 2 tails.
  TripleSet train({{0, 0, 10},
                   {1, 0, 11},
                   {0, 1, 10},
                   {0, 1, 11},
                   {0, 1, 12},
                   {0, 2, 10},
                   {1, 2, 10},
                   {2, 2, 10},
                   {0, 2, 11}});
  auto cats = classify_relations(train);
  ASSERT_EQ(cats.size(), 3u);
  EXPECT_EQ(cats[0], RelationCategory::kOneToOne);
  EXPECT_EQ(cats[1], RelationCategory::kOneToMany);
  EXPECT_EQ(cats[2], RelationCategory::kManyToOne);
}

TEST(ClassifyRelations, ExactlyOnePointFiveIsOne) {
  // 3 triples over 2 heads: tails-per-head = 1.5.
  TripleSet train({{0, 0, 10}, {0, 0, 11}, {1, 0, 12}});
  EXPECT_EQ(classify_relations(train)[0], RelationCategory::kOneToOne);
  // 6 triples, 2 heads, 4 tails: tails-per-head 3, heads-per-tail 1.5.
  TripleSet wide({{0, 0, 10}, {0, 0, 11}, {1, 0, 12}, {1, 0, 13}, {0, 0, 12}, {1, 0, 10}});
  EXPECT_EQ(classify_relations(wide)[0], RelationCategory::kOneToMany);
  TripleSet many({{0, 0, 10}, {0, 0, 11}, {1, 0, 10}, {1, 0, 11}});
  EXPECT_EQ(classify_relations(many)[0], RelationCategory::kManyToMany);
}

TEST(ClassifyRelations, DuplicateLinesDoNotInflateAverages) {
  TripleSet train({{0, 0, 1}, {0, 0, 1}, {0, 0, 1}, {2, 0, 3}});
  EXPECT_EQ(classify_relations(train)[0], RelationCategory::kOneToOne);
}

TEST(ClassifyRelations, PermutationInvariantAndPartitionsRelations) {
  std::mt19937_64 gen(5);
  Rng rng(5);
  for (int round = 0; round < 30; ++round) {
    auto triples = testing::random_triples(12, 6, 1 + rng.below(80), rng);
    auto base = classify_relations(TripleSet(triples));
    std::shuffle(triples.begin(), triples.end(), gen);
    EXPECT_EQ(classify_relations(TripleSet(triples)), base);
    std::set<RelationId> used;
    for (const Triple& t : triples) used.insert(t.relation);
    std::size_t counts[4] = {};
    for (const auto& [r, c] : base) ++counts[static_cast<int>(c)];
    EXPECT_EQ(counts[0] + counts[1] + counts[2] + counts[3], used.size());
  }
}

class TripleFiles : public ::testing::Test {
 protected:
  TempDir dir;
};

TEST_F(TripleFiles, BuildVocabAndLoad) {
  auto train = dir.write("train.txt", "# comment\nA\tr\tB\r\n\nB\ts\tC\n");
  auto test = dir.write("test.txt", "C\tr\tA\n");
  const std::filesystem::path files[] = {train, test};
  Vocab v = build_vocab(files);
  EXPECT_EQ(v.num_entities(), 3u);
  EXPECT_EQ(v.num_relations(), 2u);
  EXPECT_EQ(v.entity_label(2), "C");
  auto loaded = load_triples(train, v, true);
  ASSERT_EQ(loaded.triples.size(), 2u);
  EXPECT_EQ(loaded.triples.triples()[0], (Triple{0, 0, 1}));
  EXPECT_EQ(loaded.skipped, 0u);
}

TEST_F(TripleFiles, HeadTailRelationOrder) {
  auto f = dir.write("train.txt", "A\tB\tr\n");
  const std::filesystem::path files[] = {f};
  Vocab v = build_vocab(files, FieldOrder::kHeadTailRelation);
  EXPECT_EQ(v.num_entities(), 2u);
  EXPECT_EQ(v.relation_label(0), "r");
  auto loaded = load_triples(f, v, true, FieldOrder::kHeadTailRelation);
  EXPECT_EQ(loaded.triples.triples()[0], (Triple{0, 0, 1}));
}

TEST_F(TripleFiles, UnknownLabelStrictNamesItNonStrictSkips) {
  auto train = dir.write("train.txt", "A\tr\tB\n");
  auto test = dir.write("test.txt", "A\tr\tB\nA\tr\tGhost\n");
  const std::filesystem::path files[] = {train};
  Vocab v = build_vocab(files);
  try {
    load_triples(test, v, true);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("Ghost"), std::string::npos);
  }
  std::ostringstream diag;
  auto loaded = load_triples(test, v, false, FieldOrder::kHeadRelationTail, &diag);
  EXPECT_EQ(loaded.triples.size(), 1u);
  EXPECT_EQ(loaded.skipped, 1u);
  EXPECT_NE(diag.str().find("skipped 1"), std::string::npos);
}

TEST_F(TripleFiles, MalformedLinesAreParseErrors) {
  auto two = dir.write("a.txt", "A\tr\n");
  auto bad_label = dir.write("b.txt", "A\tr\tB\t0\n");
  auto empty_field = dir.write("c.txt", "A\t\tB\n");
  for (const auto& p : {two, bad_label, empty_field}) {
    const std::filesystem::path files[] = {p};
    EXPECT_THROW(build_vocab(files), ParseError) << p;
  }
  const std::filesystem::path missing[] = {dir / "nope.txt"};
  EXPECT_THROW(build_vocab(missing), IoError);
}

TEST_F(TripleFiles, LabeledRoundTrip) {
  auto f = dir.write("valid.txt", "A\tr\tB\t1\nB\tr\tA\t-1\n");
  const std::filesystem::path files[] = {f};
  Vocab v = build_vocab(files);
  auto loaded = load_labeled_triples(f, v, true);
  ASSERT_EQ(loaded.triples.size(), 2u);
  EXPECT_TRUE(loaded.triples[0].positive);
  EXPECT_FALSE(loaded.triples[1].positive);
  write_labeled_triples(dir / "out.txt", loaded.triples, v);
  EXPECT_EQ(testing::read_file(dir / "out.txt"), testing::read_file(f));

  auto unlabeled = dir.write("plain.txt", "A\tr\tB\n");
  EXPECT_THROW(load_labeled_triples(unlabeled, v, true), ParseError);
}

TEST(FieldOrder, ParsesBothSpellings) {
  EXPECT_EQ(parse_field_order("hrt"), FieldOrder::kHeadRelationTail);
  EXPECT_EQ(parse_field_order("htr"), FieldOrder::kHeadTailRelation);
  EXPECT_FALSE(parse_field_order("rht").has_value());
  EXPECT_EQ(to_string(FieldOrder::kHeadTailRelation), "htr");
}

}  // namespace
}  // namespace lmnne
