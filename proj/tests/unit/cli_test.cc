#include "lmnne_cli/commands.h"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lmnne/errors.h"
#include "lmnne_cli/config.h"
#include "lmnne_cli/dataset.h"
#include "temp_dir.h"
#include "toy_kg.h"

namespace lmnne::cli {
namespace {

using lmnne::testing::read_file;
using lmnne::testing::TempDir;
namespace fs = std::filesystem;

struct CliRun {
  int status = 0;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "lmnne");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.status = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

class CliTest : public ::testing::Test {
 protected:
  TempDir tmp;
  fs::path data = tmp / "toy";

  void SetUp() override {
    fs::create_directories(data);
    const auto all = lmnne::testing::cube_cluster_triples();
    lmnne::testing::write_tsv(data / "train.txt", all);
    lmnne::testing::write_tsv(data / "valid.txt", {all.begin(), all.begin() + 10});
    lmnne::testing::write_tsv(data / "test.txt", {all.begin() + 100, all.begin() + 120});
  }

  fs::path train_quick(const std::string& name, std::vector<std::string> extra = {}) {
    const fs::path out = tmp / name;
    std::vector<std::string> args{"train", data.string(), "--out", out.string(),
                                  "--set", "max_epochs=5", "--set", "dim=8"};
    args.insert(args.end(), extra.begin(), extra.end());
    const CliRun r = run(args);
    EXPECT_EQ(r.status, 0) << r.err;
    return out;
  }
};

TEST_F(CliTest, StatsReportsCountsAndCategories) {
  const CliRun r = run({"stats", data.string()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("#(ENTITIES)"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("200"), std::string::npos);
  EXPECT_NE(r.out.find("M-TO-M 4"), std::string::npos) << r.out;
}

TEST_F(CliTest, EmptyDatasetDirIsDataError) {
  fs::create_directories(tmp / "empty");
  const CliRun r = run({"stats", (tmp / "empty").string()});
  EXPECT_EQ(r.status, exit_code_for("data"));
  EXPECT_EQ(r.err.rfind("lmnne: error[data]:", 0), 0u) << r.err;
  EXPECT_EQ(count_lines(r.err), 1u);
}

TEST_F(CliTest, TrainWritesEmbeddingsTraceAndManifest) {
  const fs::path out = train_quick("run");
  for (const char* f : {"entity.emb", "relation.emb", "trace.tsv", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  EXPECT_EQ(count_lines(read_file(out / "trace.tsv")), 6u);
  const auto manifest = nlohmann::json::parse(read_file(out / "manifest.json"));
  EXPECT_EQ(manifest["command"], "train");
  EXPECT_EQ(manifest["config"]["dim"], "8");
  EXPECT_EQ(manifest["epochs"], 5);
  EXPECT_TRUE(manifest["dataset"].contains("train"));
  EXPECT_TRUE(manifest.contains("started_at"));
}

TEST_F(CliTest, TrainIsDeterministicForASeed) {
  const fs::path a = train_quick("a", {"--seed", "9"});
  const fs::path b = train_quick("b", {"--seed", "9"});
  EXPECT_EQ(read_file(a / "entity.emb"), read_file(b / "entity.emb"));
  EXPECT_EQ(read_file(a / "relation.emb"), read_file(b / "relation.emb"));
}

TEST_F(CliTest, PaperStyleConfigsRun) {
  const auto wn = tmp.write("wn18.cfg",
                            "# link prediction settings\n"
                            "dim = 20\ngamma = 2.0\nalpha = 0.02\nbeta = 0.02\nmu = 0.6\n"
                            "max_epochs = 3\n");
  const auto fb = tmp.write("fb15k.cfg",
                            "dim = 50\ngamma = 1.0\nalpha = 0.02\nbeta = 0.02\nmu = 0.6\n"
                            "max_epochs = 3\n");
  for (const auto& cfg : {wn, fb}) {
    const fs::path out = tmp.path() / cfg.stem();
    const CliRun r = run({"train", data.string(), "--config", cfg.string(), "--out", out.string()});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_TRUE(fs::exists(out / "entity.emb"));
  }
  const auto dim = load_table(tmp / "fb15k" / "entity.emb").dim();
  EXPECT_EQ(dim, 50u);
}

TEST_F(CliTest, InvalidConfigNamesTheKey) {
  const auto cfg = tmp.write("bad.cfg", "mu = 1.3\n");
  CliRun r = run({"train", data.string(), "--config", cfg.string(), "--out", (tmp / "x").string()});
  EXPECT_EQ(r.status, exit_code_for("config"));
  EXPECT_NE(r.err.find("error[config]: mu"), std::string::npos) << r.err;

  const auto unknown = tmp.write("unknown.cfg", "learning_rate = 0.1\n");
  r = run({"train", data.string(), "--config", unknown.string(), "--out", (tmp / "x").string()});
  EXPECT_EQ(r.status, exit_code_for("config"));
  EXPECT_NE(r.err.find("learning_rate"), std::string::npos) << r.err;

  r = run({"train", data.string(), "--set", "alpha=0", "--out", (tmp / "x").string()});
  EXPECT_EQ(r.status, exit_code_for("config"));
  EXPECT_NE(r.err.find("alpha"), std::string::npos);
}

TEST_F(CliTest, EvalLpReportsAreByteIdentical) {
  const fs::path emb = train_quick("run");
  const fs::path r1 = tmp / "lp1", r2 = tmp / "lp2";
  CliRun a = run({"eval-lp", emb.string(), data.string(), "--out", r1.string()});
  ASSERT_EQ(a.status, 0) << a.err;
  CliRun b = run({"eval-lp", emb.string(), data.string(), "--out", r2.string(), "--threads", "3"});
  ASSERT_EQ(b.status, 0) << b.err;
  EXPECT_EQ(read_file(r1 / "lp_report.json"), read_file(r2 / "lp_report.json"));
  EXPECT_TRUE(fs::exists(r1 / "manifest.json"));
  EXPECT_EQ(a.out, b.out);

  const auto report = nlohmann::json::parse(read_file(r1 / "lp_report.json"));
  EXPECT_EQ(report["norm"], "L1");
  EXPECT_EQ(report["candidates"], 40);
}

TEST_F(CliTest, FingerprintMismatchIsRejected) {
  const fs::path emb = train_quick("run");
  const fs::path other = tmp / "other";
  fs::create_directories(other);
  lmnne::testing::write_tsv(other / "train.txt", {{1, 0, 0}, {0, 0, 1}});
  lmnne::testing::write_tsv(other / "valid.txt", {{1, 0, 0}});
  lmnne::testing::write_tsv(other / "test.txt", {{0, 0, 1}});
  const CliRun r = run({"eval-lp", emb.string(), other.string(), "--out", (tmp / "lp").string()});
  EXPECT_EQ(r.status, exit_code_for("fingerprint"));
  EXPECT_EQ(r.status, 7);
  EXPECT_NE(r.err.find("error[fingerprint]"), std::string::npos) << r.err;
}

TEST_F(CliTest, EvalTcNeedsLabelsOrGeneration) {
  const fs::path emb = train_quick("run");
  CliRun r = run({"eval-tc", emb.string(), data.string(), "--out", (tmp / "tc").string()});
  EXPECT_EQ(r.status, exit_code_for("data"));
  EXPECT_NE(r.err.find("--generate-negatives"), std::string::npos);

  r = run({"eval-tc", emb.string(), data.string(), "--out", (tmp / "tc").string(),
           "--generate-negatives"});
  ASSERT_EQ(r.status, 0) << r.err;
  const std::string valid = read_file(tmp / "tc" / "valid_labeled.txt");
  EXPECT_EQ(count_lines(valid), 20u);
  const auto report = nlohmann::json::parse(read_file(tmp / "tc" / "tc_report.json"));
  EXPECT_GE(report["accuracy"].get<double>(), 0.0);
  EXPECT_LE(report["accuracy"].get<double>(), 1.0);
}

TEST_F(CliTest, LabeledDatasetEvaluatesDirectly) {
  const fs::path emb = train_quick("run");
  CliRun r = run({"make-tc-negatives", data.string(), "--out", (tmp / "neg").string()});
  ASSERT_EQ(r.status, 0) << r.err;
  const std::string test = read_file(tmp / "neg" / "test_labeled.txt");
  EXPECT_EQ(count_lines(test), 40u);
  std::size_t pos = 0, neg = 0;
  std::istringstream lines(test);
  for (std::string line; std::getline(lines, line);) {
    (line.ends_with("\t-1") ? neg : pos)++;
  }
  EXPECT_EQ(pos, neg);

  const fs::path labeled = tmp / "labeled";
  fs::create_directories(labeled);
  fs::copy_file(data / "train.txt", labeled / "train.txt");
  fs::copy_file(tmp / "neg" / "valid_labeled.txt", labeled / "valid.txt");
  fs::copy_file(tmp / "neg" / "test_labeled.txt", labeled / "test.txt");
  r = run({"eval-tc", emb.string(), labeled.string(), "--out", (tmp / "tc").string()});
  ASSERT_EQ(r.status, 0) << r.err;
  // Test triples are all relation r2, which has no validation triples.
  EXPECT_NE(r.out.find("r2"), std::string::npos) << r.out;
  EXPECT_NE(r.err.find("global threshold"), std::string::npos) << r.err;
}

TEST(Cli, ComplexityTable) {
  const CliRun r =
      run({"complexity", "--entities", "14951", "--relations", "1345", "--dim", "50"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(count_lines(r.out), 7u);
  EXPECT_NE(r.out.find("814800"), std::string::npos) << r.out;

  const CliRun zero = run({"complexity", "--entities", "0", "--relations", "1", "--dim", "5"});
  EXPECT_EQ(zero.status, exit_code_for("usage"));
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).status, 2);
  EXPECT_EQ(run({"frobnicate"}).status, 2);
  EXPECT_EQ(run({"stats", "x", "--field-order", "rth"}).status, 2);
}

TEST(ExitCodes, DistinctPerClass) {
  std::set<int> codes;
  for (const char* c : {"usage", "parse", "data", "io", "config", "fingerprint", "training"}) {
    codes.insert(exit_code_for(c));
  }
  EXPECT_EQ(codes.size(), 7u);
  EXPECT_FALSE(codes.contains(0));
}

TEST(Config, ParseAndRoundTrip) {
  std::istringstream in("dim = 12   # comment\nmu=0.25\npush_norm = L2\nepsilon = inf\n");
  const TrainConfig c = parse_train_config(in, "test");
  EXPECT_EQ(c.dim, 12u);
  EXPECT_EQ(c.model.mu, 0.25);
  EXPECT_EQ(c.model.push_norm, NormKind::kL2);
  EXPECT_TRUE(std::isinf(c.epsilon));
  std::istringstream again(format_train_config(c));
  const TrainConfig back = parse_train_config(again, "again");
  EXPECT_EQ(config_entries(back), config_entries(c));
}

TEST(Config, RepeatedKeyAndMalformedLine) {
  std::istringstream twice("dim = 3\ndim = 4\n");
  EXPECT_THROW(parse_train_config(twice, "t"), ConfigError);
  std::istringstream no_eq("dim 3\n");
  EXPECT_THROW(parse_train_config(no_eq, "t"), Error);
  TrainConfig c;
  EXPECT_THROW(set_config_value(c, "gamma", "abc"), ConfigError);
}

TEST(Dataset, SplitNamingVariants) {
  TempDir tmp;
  tmp.write("wordnet-mlj12-train.txt", "a\tr\tb\n");
  tmp.write("dev.txt", "a\tr\tb\n");
  tmp.write("test.tsv", "b\tr\ta\n");
  EXPECT_EQ(find_split(tmp.path(), "train").filename(), "wordnet-mlj12-train.txt");
  EXPECT_EQ(find_split(tmp.path(), "valid").filename(), "dev.txt");
  EXPECT_EQ(find_split(tmp.path(), "test").filename(), "test.tsv");
  const Dataset ds = load_dataset(tmp.path(), FieldOrder::kHeadRelationTail);
  EXPECT_EQ(ds.vocab.num_entities(), 2u);
  EXPECT_FALSE(ds.test_labeled.has_value());
}

TEST(Dataset, LabeledTrainSplitRejected) {
  TempDir tmp;
  tmp.write("train.txt", "a\tr\tb\t1\n");
  tmp.write("valid.txt", "a\tr\tb\n");
  tmp.write("test.txt", "a\tr\tb\n");
  EXPECT_THROW(load_dataset(tmp.path(), FieldOrder::kHeadRelationTail), Error);
}

}  // namespace
}  // namespace lmnne::cli
