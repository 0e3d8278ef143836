#include "lmnne/embeddings.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <vector>

#include "lmnne/errors.h"
#include "temp_dir.h"

namespace lmnne {
namespace {

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.below(1000);
    EXPECT_EQ(x, b.below(1000));
    differs |= x != c.below(1000);
  }
  EXPECT_TRUE(differs);
}

TEST(InitTable, BoundIsSixOverRootD) {
  EXPECT_DOUBLE_EQ(init_bound(1), 6.0);
  EXPECT_DOUBLE_EQ(init_bound(4), 3.0);
  EXPECT_DOUBLE_EQ(init_bound(100), 0.6);
}

class InitTableDims : public ::testing::TestWithParam<std::size_t> {};

TEST_P(InitTableDims, EveryRowHasUnitNorm) {
  const std::size_t d = GetParam();
  for (std::uint64_t seed : {1u, 2u, 3u, 99u}) {
    Rng rng(seed);
    auto t = init_table(TableKind::kEntity, 200, d, rng);
    EXPECT_EQ(t.rows(), 200u);
    EXPECT_EQ(t.dim(), d);
    EXPECT_EQ(t.seed, seed);
    for (std::size_t i = 0; i < t.rows(); ++i) {
      ASSERT_NEAR(l2_norm(t.row(i)), 1.0, 1e-12) << "seed " << seed << " row " << i;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Dims, InitTableDims, ::testing::Values(1, 2, 20, 50, 100));

TEST(InitTable, SameSeedIsBitIdentical) {
  Rng a(7), b(7);
  EXPECT_EQ(init_table(TableKind::kRelation, 10, 20, a), init_table(TableKind::kRelation, 10, 20, b));
}

TEST(InitTable, ZeroDimensionRejected) {
  Rng rng(1);
  EXPECT_THROW(init_table(TableKind::kEntity, 3, 0, rng), std::invalid_argument);
}

TEST(FillUniform, RangeStaysInsideAndApproachesBounds) {
  for (std::size_t d : {1u, 20u, 100u}) {
    Rng rng(d);
    const double bound = init_bound(d);
    std::vector<double> v(100000);
    fill_uniform(v, bound, rng);
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    EXPECT_GE(*lo, -bound);
    EXPECT_LE(*hi, bound);
    // Missing the outer 0.1% of the range in 1e5 draws has probability
    // about exp(-50) per side.
    EXPECT_LT(*lo, -bound * 0.999);
    EXPECT_GT(*hi, bound * 0.999);
  }
}

TEST(NormalizeRow, ThreeFourFive) {
  std::vector<double> v{3.0, 4.0};
  normalize_row(v);
  EXPECT_DOUBLE_EQ(v[0], 0.6);
  EXPECT_DOUBLE_EQ(v[1], 0.8);
}

TEST(NormalizeRow, IdempotentOnUnitRows) {
  Rng rng(3);
  auto t = init_table(TableKind::kEntity, 50, 20, rng);
  auto before = t;
  normalize_rows(t);
  for (std::size_t i = 0; i < t.values().size(); ++i) {
    EXPECT_NEAR(t.values()[i], before.values()[i], 1e-12);
  }
}

TEST(NormalizeRow, ZeroAndNonFiniteRowsAreErrors) {
  std::vector<double> zero{0.0, 0.0};
  EXPECT_THROW(normalize_row(zero), TrainingError);
  std::vector<double> nan{std::numeric_limits<double>::quiet_NaN(), 1.0};
  EXPECT_THROW(normalize_row(nan), TrainingError);

  EmbeddingTable t(TableKind::kEntity, 3, 2);
  t.row(0)[0] = 1.0;
  t.row(2)[1] = 1.0;
  try {
    normalize_rows(t);
    FAIL() << "expected TrainingError";
  } catch (const TrainingError& e) {
    EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos);
  }
}

TEST(NormalizeRows, RestoresUnitNormAfterScaling) {
  Rng rng(5);
  auto t = init_table(TableKind::kEntity, 30, 7, rng);
  for (double& x : t.values()) x *= 3.5;
  normalize_rows(t);
  for (std::size_t i = 0; i < t.rows(); ++i) EXPECT_NEAR(l2_norm(t.row(i)), 1.0, 1e-12);
}

class TableFile : public ::testing::Test {
 protected:
  testing::TempDir dir;

  EmbeddingTable sample() {
    Rng rng(17);
    auto t = init_table(TableKind::kRelation, 3, 4, rng);
    t.row(1)[2] = -0.0;
    t.row(2)[0] = 1e-300;
    t.vocab_fingerprint = 0x0123456789abcdefULL;
    return t;
  }
};

TEST_F(TableFile, RoundTripIsExact) {
  const auto t = sample();
  save_table(t, dir / "r.emb");
  const auto back = load_table(dir / "r.emb");
  EXPECT_EQ(back, t);
  EXPECT_EQ(back.kind(), TableKind::kRelation);
  EXPECT_EQ(back.seed, 17u);
  EXPECT_EQ(back.vocab_fingerprint, 0x0123456789abcdefULL);
  EXPECT_TRUE(std::signbit(back.row(1)[2]));
}

TEST_F(TableFile, WrongDimInHeaderIsError) {
  save_table(sample(), dir / "r.emb");
  std::string text = testing::read_file(dir / "r.emb");
  text.replace(text.find("dim 4"), 5, "dim 5");
  dir.write("bad.emb", text);
  EXPECT_THROW(load_table(dir / "bad.emb"), ParseError);
  text.replace(text.find("dim 5"), 5, "dim 3");
  dir.write("bad2.emb", text);
  EXPECT_THROW(load_table(dir / "bad2.emb"), ParseError);
}

TEST_F(TableFile, TruncatedFileIsError) {
  save_table(sample(), dir / "r.emb");
  const std::string text = testing::read_file(dir / "r.emb");
  for (std::size_t cut : {text.size() - 4, text.size() / 2, std::size_t{10}}) {
    dir.write("cut.emb", text.substr(0, cut));
    EXPECT_THROW(load_table(dir / "cut.emb"), ParseError) << "cut at " << cut;
  }
}

TEST_F(TableFile, MissingFileIsIoError) {
  EXPECT_THROW(load_table(dir / "absent.emb"), IoError);
}

}  // namespace
}  // namespace lmnne
