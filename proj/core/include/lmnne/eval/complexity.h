#pragma once

#include <cstdint>
#include <string_view>

namespace lmnne {

/// Model families in the parameter-count comparison. TransE and LMNNE
/// share the translational row.
enum class ComplexityModel {
  kUnstructured,
  kDistanceModel,
  kSingleLayer,
  kBilinear,
  kNeuralTensor,
  kTranslational,
};

inline constexpr ComplexityModel kAllComplexityModels[] = {
    ComplexityModel::kUnstructured, ComplexityModel::kDistanceModel,
    ComplexityModel::kSingleLayer,  ComplexityModel::kBilinear,
    ComplexityModel::kNeuralTensor, ComplexityModel::kTranslational};

struct ComplexityInput {
  std::uint64_t entities = 0;   // n_e
  std::uint64_t relations = 0;  // n_r
  std::uint64_t dim = 0;        // d
  std::uint64_t slices = 1;     // s, tensor models only
};

std::string_view to_string(ComplexityModel model);
std::string_view formula(ComplexityModel model);

/// Number of free parameters. Throws std::invalid_argument on a zero
/// input and std::overflow_error if the count does not fit in 64 bits.
std::uint64_t param_complexity(ComplexityModel model, const ComplexityInput& in);

}  // namespace lmnne
