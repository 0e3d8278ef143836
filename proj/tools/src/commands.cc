#include "lmnne_cli/commands.h"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lmnne/embeddings.h"
#include "lmnne/errors.h"
#include "lmnne/trainer.h"
#include "lmnne_cli/config.h"
#include "lmnne_cli/dataset.h"
#include "lmnne_cli/report.h"

namespace lmnne::cli {
namespace fs = std::filesystem;

namespace {

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json split_json(const SplitFile& f, std::size_t triples) {
  return {{"path", f.path.string()},
          {"fnv1a64", hex_digest(f.digest)},
          {"labeled", f.labeled},
          {"triples", triples}};
}

json dataset_json(const Dataset& ds) {
  return {{"dir", ds.dir.string()},
          {"field_order", std::string(to_string(ds.order))},
          {"vocab_fingerprint", hex_digest(ds.vocab.fingerprint())},
          {"entities", ds.vocab.num_entities()},
          {"relations", ds.vocab.num_relations()},
          {"train", split_json(ds.train_file, ds.train.size())},
          {"valid", split_json(ds.valid_file, ds.valid_labeled ? ds.valid_labeled->size()
                                                               : ds.valid.size())},
          {"test", split_json(ds.test_file, ds.test_labeled ? ds.test_labeled->size()
                                                            : ds.test.size())}};
}

class Manifest {
 public:
  explicit Manifest(std::string command) : started_(utc_now()) {
    doc_["tool"] = "lmnne";
    doc_["version"] = std::string(kToolVersion);
    doc_["command"] = std::move(command);
  }
  json& operator[](const char* key) { return doc_[key]; }
  void write(const fs::path& dir) {
    doc_["started_at"] = started_;
    doc_["finished_at"] = utc_now();
    write_json(dir / kManifestFile, doc_);
  }

 private:
  std::string started_;
  json doc_;
};

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

struct LoadedModel {
  EmbeddingTable entities;
  EmbeddingTable relations;
  NormKind norm = NormKind::kL1;
};

LoadedModel load_model(const EvalOptions& o, const Vocab& vocab) {
  LoadedModel m;
  m.entities = load_table(o.embeddings / kEntityFile);
  m.relations = load_table(o.embeddings / kRelationFile);
  if (m.entities.kind() != TableKind::kEntity || m.relations.kind() != TableKind::kRelation) {
    throw DataError("embedding files have the wrong table kind");
  }
  const std::uint64_t fp = vocab.fingerprint();
  if (m.entities.vocab_fingerprint != fp || m.relations.vocab_fingerprint != fp) {
    throw FingerprintError("embeddings in " + o.embeddings.string() +
                           " were trained against a different vocabulary (dataset " +
                           hex_digest(fp) + ", embeddings " +
                           hex_digest(m.entities.vocab_fingerprint) + ")");
  }
  if (m.entities.rows() != vocab.num_entities() || m.relations.rows() != vocab.num_relations() ||
      m.entities.dim() != m.relations.dim()) {
    throw DataError("embedding table shapes do not match the dataset vocabulary");
  }
  if (o.norm) {
    m.norm = *o.norm;
  } else if (std::ifstream in(o.embeddings / kManifestFile); in) {
    const json manifest = json::parse(in, nullptr, false);
    if (!manifest.is_discarded() && manifest.contains("config") &&
        manifest["config"].contains("push_norm")) {
      if (auto n = parse_norm(manifest["config"]["push_norm"].get<std::string>())) m.norm = *n;
    }
  }
  return m;
}

}  // namespace

void cmd_stats(const fs::path& dataset, FieldOrder order, std::ostream& out) {
  const Dataset ds = load_dataset(dataset, order, nullptr);
  const auto categories = classify_relations(ds.train);
  out << "DATASET " << ds.dir.string() << '\n'
      << "  #(ENTITIES)        " << ds.vocab.num_entities() << '\n'
      << "  #(RELATIONS)       " << ds.vocab.num_relations() << '\n'
      << "  #(TRAINING EX.)    " << ds.train.size() << '\n';
  auto split_line = [&](const char* name, const TripleSet& positives,
                        const std::optional<std::vector<LabeledTriple>>& labeled) {
    out << name;
    if (labeled) {
      out << labeled->size() << "  (" << positives.size() << " positive, "
          << labeled->size() - positives.size() << " negative)\n";
    } else {
      out << positives.size() << '\n';
    }
  };
  split_line("  #(VALIDATING EX.)  ", ds.valid, ds.valid_labeled);
  split_line("  #(TESTING EX.)     ", ds.test, ds.test_labeled);
  out << "  relation categories (train, threshold " << kManyThreshold << "):";
  for (const auto& [c, n] : category_histogram(categories)) out << "  " << to_string(c) << ' ' << n;
  out << '\n';
}

void cmd_train(const TrainOptions& o, std::ostream& out, std::ostream& log) {
  TrainConfig config;
  if (o.config) config = load_train_config(*o.config);
  for (const auto& [key, value] : o.overrides) set_config_value(config, key, value);
  if (o.seed) config.seed = *o.seed;
  config.validate();

  Manifest manifest("train");
  const Dataset ds = load_dataset(o.dataset, o.order, &log);
  if (ds.train.empty()) throw DataError("training split is empty");
  ensure_dir(o.out);

  std::ofstream trace_file(o.out / "trace.tsv");
  if (!trace_file) throw IoError("cannot write " + (o.out / "trace.tsv").string());
  trace_file << "epoch\tloss\tpull_updates\tpush_updates\tseconds\n";

  // Both sinks get every epoch line as it completes.
  struct Tee : std::streambuf {
    std::streambuf* a;
    std::streambuf* b;
    int overflow(int c) override {
      if (traits_type::eq_int_type(c, traits_type::eof())) return traits_type::not_eof(c);
      a->sputc(static_cast<char>(c));
      b->sputc(static_cast<char>(c));
      return c;
    }
    int sync() override { return a->pubsync() | b->pubsync(); }
  } tee;
  tee.a = log.rdbuf();
  tee.b = trace_file.rdbuf();
  std::ostream both(&tee);

  TrainResult result = train(config, ds.train, ds.vocab, &both);
  both.flush();
  save_table(result.entities, o.out / kEntityFile);
  save_table(result.relations, o.out / kRelationFile);

  json cfg;
  for (const auto& [k, v] : config_entries(config)) cfg[k] = v;
  manifest["config"] = cfg;
  manifest["seed"] = config.seed;
  manifest["dataset"] = dataset_json(ds);
  manifest["epochs"] = result.trace.epochs.size();
  manifest["converged"] = result.trace.converged;
  manifest["final_loss"] = result.trace.epochs.empty() ? 0.0 : result.trace.epochs.back().loss;
  manifest["outputs"] = {std::string(kEntityFile), std::string(kRelationFile), "trace.tsv"};
  manifest.write(o.out);

  out << "trained " << result.trace.epochs.size() << " epoch(s)"
      << (result.trace.converged ? " (converged)" : "") << "; embeddings written to "
      << o.out.string() << '\n';
}

void cmd_eval_lp(const EvalOptions& o, std::ostream& out, std::ostream& diag) {
  Manifest manifest("eval-lp");
  const Dataset ds = load_dataset(o.dataset, o.order, &diag);
  if (ds.test.empty()) throw DataError("test split is empty");
  const LoadedModel model = load_model(o, ds.vocab);
  ensure_dir(o.out);

  const ScoringModel scorer{model.entities, model.relations, model.norm};
  const TripleSet known = ds.all_known();
  const auto candidates = candidate_entities(ds.train);
  const auto ranks = rank_all(ds.test, scorer, known, candidates, o.threads);
  const LinkPredMetrics metrics = summarize_ranks(ranks);
  const CategoryBreakdown breakdown = category_breakdown(ranks, classify_relations(ds.train));

  json report = link_prediction_json(metrics, breakdown);
  report["norm"] = std::string(to_string(model.norm));
  report["candidates"] = candidates.size();
  write_json(o.out / "lp_report.json", report);
  print_link_prediction(out, metrics, breakdown);

  manifest["embeddings"] = o.embeddings.string();
  manifest["dataset"] = dataset_json(ds);
  manifest["threads"] = o.threads;
  manifest["outputs"] = {"lp_report.json"};
  manifest.write(o.out);
}

namespace {

std::vector<LabeledTriple> generate_labeled(const TripleSet& positives, const PositionIndex& index,
                                            const TripleSet& known, std::size_t n_entities,
                                            Rng& rng, std::ostream& diag, const char* split) {
  NegativeSamplingStats stats;
  auto out = make_tc_negatives(positives.triples(), index, known, n_entities, rng, &stats);
  if (stats.other_side || stats.global_slot || stats.any_entity) {
    diag << split << ": negatives from other slot " << stats.other_side << ", global slot "
         << stats.global_slot << ", any entity " << stats.any_entity << '\n';
  }
  return out;
}

}  // namespace

void cmd_make_tc_negatives(const fs::path& dataset, const fs::path& out, FieldOrder order,
                           std::uint64_t seed, std::ostream& diag) {
  Manifest manifest("make-tc-negatives");
  const Dataset ds = load_dataset(dataset, order, &diag);
  if (ds.valid_labeled || ds.test_labeled) {
    throw DataError("dataset already carries labeled valid/test splits");
  }
  ensure_dir(out);
  const TripleSet known = ds.all_known();
  const PositionIndex index(known);
  Rng rng(seed);
  const auto valid = generate_labeled(ds.valid, index, known, ds.vocab.num_entities(), rng, diag, "valid");
  const auto test = generate_labeled(ds.test, index, known, ds.vocab.num_entities(), rng, diag, "test");
  write_labeled_triples(out / "valid_labeled.txt", valid, ds.vocab);
  write_labeled_triples(out / "test_labeled.txt", test, ds.vocab);

  manifest["seed"] = seed;
  manifest["dataset"] = dataset_json(ds);
  manifest["outputs"] = {"valid_labeled.txt", "test_labeled.txt"};
  manifest.write(out);
}

void cmd_eval_tc(const EvalOptions& o, std::ostream& out, std::ostream& diag) {
  Manifest manifest("eval-tc");
  const Dataset ds = load_dataset(o.dataset, o.order, &diag);
  const LoadedModel model = load_model(o, ds.vocab);

  std::vector<LabeledTriple> valid, test;
  if (ds.valid_labeled && ds.test_labeled) {
    valid = *ds.valid_labeled;
    test = *ds.test_labeled;
  } else if (o.generate_negatives) {
    const TripleSet known = ds.all_known();
    const PositionIndex index(known);
    Rng rng(o.seed);
    valid = generate_labeled(ds.valid, index, known, ds.vocab.num_entities(), rng, diag, "valid");
    test = generate_labeled(ds.test, index, known, ds.vocab.num_entities(), rng, diag, "test");
  } else {
    throw DataError("valid/test splits carry no labels; pass --generate-negatives");
  }
  ensure_dir(o.out);
  if (o.generate_negatives && !ds.test_labeled) {
    write_labeled_triples(o.out / "valid_labeled.txt", valid, ds.vocab);
    write_labeled_triples(o.out / "test_labeled.txt", test, ds.vocab);
  }

  const ScoringModel scorer{model.entities, model.relations, model.norm};
  const TcMetrics metrics = tc_evaluate(valid, test, scorer);
  for (RelationId r : metrics.fallback_relations) {
    diag << "relation " << ds.vocab.relation_label(r)
         << " has no validation triples; using the global threshold\n";
  }
  json report = triplet_classification_json(metrics, ds.vocab);
  report["norm"] = std::string(to_string(model.norm));
  write_json(o.out / "tc_report.json", report);
  print_triplet_classification(out, metrics, ds.vocab);

  manifest["embeddings"] = o.embeddings.string();
  manifest["dataset"] = dataset_json(ds);
  manifest["seed"] = o.seed;
  manifest["generated_negatives"] = o.generate_negatives && !ds.test_labeled;
  manifest["outputs"] = {"tc_report.json"};
  manifest.write(o.out);
}

void cmd_complexity(const ComplexityInput& input, const std::optional<fs::path>& out,
                    std::ostream& stdout_stream) {
  const json doc = complexity_json(input);  // validates inputs
  print_complexity(stdout_stream, input);
  if (out) {
    ensure_dir(*out);
    write_json(*out / "complexity.json", doc);
    Manifest manifest("complexity");
    manifest["outputs"] = {"complexity.json"};
    manifest.write(*out);
  }
}

int exit_code_for(std::string_view error_class) {
  if (error_class == "usage") return 2;
  if (error_class == "parse") return 3;
  if (error_class == "data") return 4;
  if (error_class == "io") return 5;
  if (error_class == "config") return 6;
  if (error_class == "fingerprint") return 7;
  if (error_class == "training") return 8;
  return 1;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Knowledge-graph embeddings: LMNNE / TransE training and evaluation", "lmnne"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  std::string field_order = "hrt";
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::size_t threads = 1;
  std::string out_dir;
  std::string dataset;
  std::string embeddings;
  std::string config_path;
  std::vector<std::string> sets;
  std::string norm_text;
  bool generate = false;
  ComplexityInput cx;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--field-order", field_order, "Column order of triple files")
        ->check(CLI::IsMember({"hrt", "htr"}));
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& v) { seed = v; seed_given = true; }, "Random seed");
    sub->add_option("--threads", threads, "Evaluation worker threads")
        ->check(CLI::PositiveNumber);
  };

  auto* stats = app.add_subcommand("stats", "Dataset statistics and relation categories");
  stats->add_option("dataset", dataset, "Dataset directory")->required();
  add_common(stats);

  auto* train_cmd = app.add_subcommand("train", "Train embeddings");
  train_cmd->add_option("dataset", dataset, "Dataset directory")->required();
  train_cmd->add_option("--config", config_path, "key = value config file");
  train_cmd->add_option("--set", sets, "Override a config key (key=value)");
  train_cmd->add_option("--out", out_dir, "Output directory")->required();
  add_common(train_cmd);

  auto* eval_lp = app.add_subcommand("eval-lp", "Link prediction (raw/filtered rank, hits@10)");
  eval_lp->add_option("embeddings", embeddings, "Directory written by `train`")->required();
  eval_lp->add_option("dataset", dataset, "Dataset directory")->required();
  eval_lp->add_option("--out", out_dir, "Report directory")->required();
  eval_lp->add_option("--norm", norm_text, "Scoring norm (L1 or L2)");
  add_common(eval_lp);

  auto* eval_tc = app.add_subcommand("eval-tc", "Triplet classification");
  eval_tc->add_option("embeddings", embeddings, "Directory written by `train`")->required();
  eval_tc->add_option("dataset", dataset, "Dataset directory")->required();
  eval_tc->add_option("--out", out_dir, "Report directory")->required();
  eval_tc->add_option("--norm", norm_text, "Scoring norm (L1 or L2)");
  eval_tc->add_flag("--generate-negatives", generate,
                    "Build negatives for unlabeled valid/test splits");
  add_common(eval_tc);

  auto* make_neg = app.add_subcommand("make-tc-negatives", "Write labeled classification splits");
  make_neg->add_option("dataset", dataset, "Dataset directory")->required();
  make_neg->add_option("--out", out_dir, "Output directory")->required();
  add_common(make_neg);

  auto* complexity = app.add_subcommand("complexity", "Parameter counts per model family");
  complexity->add_option("--entities", cx.entities, "n_e")->required();
  complexity->add_option("--relations", cx.relations, "n_r")->required();
  complexity->add_option("--dim", cx.dim, "d")->required();
  complexity->add_option("--slices", cx.slices, "s (tensor models)");
  complexity->add_option("--out", out_dir, "Optional report directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "lmnne: error[usage]: " << e.what() << '\n';
    return exit_code_for("usage");
  }

  const FieldOrder order = *parse_field_order(field_order);
  try {
    if (*stats) {
      cmd_stats(dataset, order, out);
    } else if (*train_cmd) {
      TrainOptions o;
      if (!config_path.empty()) o.config = config_path;
      for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(s, "--set expects key=value");
        o.overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
      }
      if (seed_given) o.seed = seed;
      o.dataset = dataset;
      o.out = out_dir;
      o.order = order;
      cmd_train(o, out, err);
    } else if (*eval_lp || *eval_tc) {
      EvalOptions o;
      o.embeddings = embeddings;
      o.dataset = dataset;
      o.out = out_dir;
      o.order = order;
      o.threads = threads;
      o.seed = seed;
      o.generate_negatives = generate;
      if (!norm_text.empty()) {
        o.norm = parse_norm(norm_text);
        if (!o.norm) throw ConfigError("norm", "expected L1 or L2");
      }
      if (*eval_lp) cmd_eval_lp(o, out, err);
      else cmd_eval_tc(o, out, err);
    } else if (*make_neg) {
      cmd_make_tc_negatives(dataset, out_dir, order, seed, err);
    } else if (*complexity) {
      std::optional<fs::path> dir;
      if (!out_dir.empty()) dir = out_dir;
      try {
        cmd_complexity(cx, dir, out);
      } catch (const std::invalid_argument& e) {
        err << "lmnne: error[usage]: " << e.what() << '\n';
        return exit_code_for("usage");
      }
    }
  } catch (const Error& e) {
    err << "lmnne: error[" << e.error_class() << "]: " << e.what() << '\n';
    return exit_code_for(e.error_class());
  } catch (const std::exception& e) {
    err << "lmnne: error[internal]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace lmnne::cli
