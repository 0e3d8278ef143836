#include "lmnne/eval/complexity.h"

#include <stdexcept>

namespace lmnne {
namespace {

std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("parameter count overflows");
  return out;
}

std::uint64_t add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("parameter count overflows");
  return out;
}

}  // namespace

std::string_view to_string(ComplexityModel model) {
  switch (model) {
    case ComplexityModel::kUnstructured: return "Unstructured";
    case ComplexityModel::kDistanceModel: return "Distance Model (SE)";
    case ComplexityModel::kSingleLayer: return "Single Layer Model";
    case ComplexityModel::kBilinear: return "Bilinear Model";
    case ComplexityModel::kNeuralTensor: return "Neural Tensor Network (NTN)";
    case ComplexityModel::kTranslational: return "TransE and LMNNE";
  }
  return "?";
}

std::string_view formula(ComplexityModel model) {
  switch (model) {
    case ComplexityModel::kUnstructured: return "n_e*d";
    case ComplexityModel::kDistanceModel: return "n_e*d + 2*n_r*d^2";
    case ComplexityModel::kSingleLayer: return "n_e*d + 2*n_r*(s*d + s)";
    case ComplexityModel::kBilinear: return "n_e*d + n_r*d^2";
    case ComplexityModel::kNeuralTensor: return "n_e*d + n_r*(s*d^2 + 2*s*d + 2*s)";
    case ComplexityModel::kTranslational: return "n_e*d + n_r*d";
  }
  return "?";
}

std::uint64_t param_complexity(ComplexityModel model, const ComplexityInput& in) {
  if (in.entities == 0 || in.relations == 0 || in.dim == 0 || in.slices == 0) {
    throw std::invalid_argument("n_e, n_r, d and s must all be positive");
  }
  const std::uint64_t d = in.dim;
  const std::uint64_t s = in.slices;
  const std::uint64_t nr = in.relations;
  const std::uint64_t entity_part = mul(in.entities, d);
  switch (model) {
    case ComplexityModel::kUnstructured:
      return entity_part;
    case ComplexityModel::kDistanceModel:
      return add(entity_part, mul(mul(2, nr), mul(d, d)));
    case ComplexityModel::kSingleLayer:
      return add(entity_part, mul(mul(2, nr), add(mul(s, d), s)));
    case ComplexityModel::kBilinear:
      return add(entity_part, mul(nr, mul(d, d)));
    case ComplexityModel::kNeuralTensor: {
      const std::uint64_t per_relation = add(add(mul(s, mul(d, d)), mul(mul(2, s), d)), mul(2, s));
      return add(entity_part, mul(nr, per_relation));
    }
    case ComplexityModel::kTranslational:
      return add(entity_part, mul(nr, d));
  }
  throw std::invalid_argument("unknown model");
}

}  // namespace lmnne
