#pragma once

#include <iosfwd>
#include <map>

#include <nlohmann/json.hpp>

#include "lmnne/eval.h"
#include "lmnne/kg_data.h"

namespace lmnne::cli {

using nlohmann::json;

json link_prediction_json(const LinkPredMetrics& m, const CategoryBreakdown& categories);
void print_link_prediction(std::ostream& out, const LinkPredMetrics& m,
                           const CategoryBreakdown& categories);

json triplet_classification_json(const TcMetrics& m, const Vocab& vocab);
void print_triplet_classification(std::ostream& out, const TcMetrics& m, const Vocab& vocab);

json complexity_json(const ComplexityInput& in);
void print_complexity(std::ostream& out, const ComplexityInput& in);

std::map<RelationCategory, std::size_t> category_histogram(
    const std::map<RelationId, RelationCategory>& categories);

/// Writes `doc` with two-space indentation and a trailing newline.
void write_json(const std::filesystem::path& path, const json& doc);

}  // namespace lmnne::cli
