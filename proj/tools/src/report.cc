#include "lmnne_cli/report.h"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include "lmnne/errors.h"

namespace lmnne::cli {
namespace {

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * fraction);
  return buf;
}

std::string fixed(double v, int digits = 1) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

std::string threshold_text(double t) {
  if (t == kThresholdAcceptAll) return "+inf";
  if (t == kThresholdRejectAll) return "-inf";
  return fixed(t, 6);
}

json threshold_json(double t) {
  if (t == kThresholdAcceptAll) return "+inf";
  if (t == kThresholdRejectAll) return "-inf";
  return t;
}

}  // namespace

json link_prediction_json(const LinkPredMetrics& m, const CategoryBreakdown& categories) {
  json doc;
  doc["rank_results"] = m.count;
  doc["mean_rank"] = {{"raw", m.mean_rank_raw}, {"filter", m.mean_rank_filtered}};
  doc["hits_at_10"] = {{"raw", m.hits10_raw}, {"filter", m.hits10_filtered}};
  json cats;
  for (Side side : {Side::kHead, Side::kTail}) {
    json row;
    for (RelationCategory c : kAllCategories) {
      const auto& cell = categories.cell(side, c);
      row[std::string(to_string(c))] = {{"count", cell.count},
                                        {"filter_hits_at_10", cell.count ? json(cell.rate()) : json()}};
    }
    cats[side == Side::kHead ? "predicting_head" : "predicting_tail"] = row;
  }
  doc["by_category"] = cats;
  doc["uncategorized"] = categories.uncategorized;
  return doc;
}

void print_link_prediction(std::ostream& out, const LinkPredMetrics& m,
                           const CategoryBreakdown& categories) {
  out << "LINK PREDICTION (" << m.count << " rank results)\n"
      << "              MEAN RANK          MEAN HIT@10\n"
      << "            Raw     Filter      Raw     Filter\n"
      << "       " << pad(fixed(m.mean_rank_raw), 8) << pad(fixed(m.mean_rank_filtered), 11)
      << pad(percent(m.hits10_raw), 9) << pad(percent(m.hits10_filtered), 11) << "\n\n";

  out << "FILTER HIT@10 BY MAPPING CATEGORY\n"
      << "               1-TO-1   1-TO-M   M-TO-1   M-TO-M\n";
  for (Side side : {Side::kHead, Side::kTail}) {
    out << (side == Side::kHead ? "  head       " : "  tail       ");
    for (RelationCategory c : kAllCategories) {
      const auto& cell = categories.cell(side, c);
      out << pad(cell.count ? percent(cell.rate()) : std::string("-"), 9);
    }
    out << '\n';
  }
  if (categories.uncategorized) {
    out << "  (" << categories.uncategorized << " rank results with uncategorized relations)\n";
  }
}

json triplet_classification_json(const TcMetrics& m, const Vocab& vocab) {
  json doc;
  doc["accuracy"] = m.accuracy();
  doc["correct"] = m.correct;
  doc["total"] = m.total;
  doc["global_threshold"] = threshold_json(m.thresholds.global);
  json rels = json::object();
  for (const auto& [r, acc] : m.per_relation) {
    rels[vocab.relation_label(r)] = {{"threshold", threshold_json(m.thresholds.for_relation(r))},
                                     {"accuracy", acc.accuracy()},
                                     {"correct", acc.correct},
                                     {"total", acc.total}};
  }
  doc["relations"] = rels;
  json fallback = json::array();
  for (RelationId r : m.fallback_relations) fallback.push_back(vocab.relation_label(r));
  doc["global_threshold_relations"] = fallback;
  return doc;
}

void print_triplet_classification(std::ostream& out, const TcMetrics& m, const Vocab& vocab) {
  out << "TRIPLET CLASSIFICATION\n";
  std::size_t width = 8;
  for (const auto& [r, acc] : m.per_relation) width = std::max(width, vocab.relation_label(r).size());
  for (const auto& [r, acc] : m.per_relation) {
    std::string label = vocab.relation_label(r);
    label.resize(width, ' ');
    out << "  " << label << pad(threshold_text(m.thresholds.for_relation(r)), 12)
        << pad(percent(acc.accuracy()), 9) << "  (" << acc.correct << "/" << acc.total << ")\n";
  }
  out << "  overall accuracy " << percent(m.accuracy()) << " (" << m.correct << "/" << m.total
      << ")\n";
}

json complexity_json(const ComplexityInput& in) {
  json rows = json::array();
  for (ComplexityModel model : kAllComplexityModels) {
    rows.push_back({{"model", to_string(model)},
                    {"formula", formula(model)},
                    {"parameters", param_complexity(model, in)}});
  }
  return {{"n_e", in.entities}, {"n_r", in.relations}, {"d", in.dim}, {"s", in.slices},
          {"models", rows}};
}

void print_complexity(std::ostream& out, const ComplexityInput& in) {
  out << "PARAMETER COMPLEXITY (n_e=" << in.entities << ", n_r=" << in.relations
      << ", d=" << in.dim << ", s=" << in.slices << ")\n";
  for (ComplexityModel model : kAllComplexityModels) {
    std::string name(to_string(model));
    std::string f(formula(model));
    name.resize(28, ' ');
    f.resize(36, ' ');
    out << "  " << name << f << pad(std::to_string(param_complexity(model, in)), 16) << '\n';
  }
}

std::map<RelationCategory, std::size_t> category_histogram(
    const std::map<RelationId, RelationCategory>& categories) {
  std::map<RelationCategory, std::size_t> out;
  for (RelationCategory c : kAllCategories) out[c] = 0;
  for (const auto& [r, c] : categories) ++out[c];
  return out;
}

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write failure on " + path.string());
}

}  // namespace lmnne::cli
