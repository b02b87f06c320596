#pragma once

#include <string>

namespace gapkit {

// Validity cases for the relaxation triple (alpha, alpha1, alpha2):
//   B1: alpha in (0,1], alpha1, alpha2 in (0,2)
//   B2: alpha in (0,1), alpha1, alpha2 in (0,2] with alpha1 != 2 or alpha2 != 2
//   B3: alpha in (0,1), alpha1 = alpha2 = 2
// Anything else is Invalid and is rejected by the iteration driver (spectral
// routines still accept Invalid triples; eigenvalues exist regardless).
enum class ParamCase { B1, B2, B3, Invalid };

struct GapParams {
  double alpha = 1.0;
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  ParamCase param_case = ParamCase::B1;

  bool valid() const { return param_case != ParamCase::Invalid; }
};

GapParams classify_params(double alpha, double alpha1, double alpha2);

std::string to_string(ParamCase c);

}  // namespace gapkit
