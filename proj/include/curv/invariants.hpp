#pragma once

#include <string>
#include <vector>

#include "curv/curvature.hpp"

namespace curv {

struct ToleranceConfig {
  double tol_abs = 1e-10;
  double tol_rel = 1e-8;
};

// |value| <= tol_abs + tol_rel * scale, with scale = product of the
// max-magnitudes of the factors entering the contraction.
bool zero_test(double value, double scale, const ToleranceConfig& tol = {});

// The Riemann tensor acting on 2-forms.  Basis: index pairs (a, b) with
// a < b in lexicographic order; entry (I, J) = R^{a_I b_I}_{c_J d_J}, the
// half weight absorbed by summing ordered pairs only.
struct CurvatureOperator {
  int pair_dim = 0;  // n(n-1)/2
  std::vector<double> matrix;  // row-major pair_dim x pair_dim
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  bool generic = false;  // sigma_min > 1e-7 sigma_max and sigma_max > 1e-10 scale
};

CurvatureOperator curvature_operator(const MetricFrame& frame, const CurvatureData& data);

// One named invariant with 0, 1 or 2 free indices; values holds 1, n or n^2
// numbers.  zero is the zero_test verdict on max_abs at the recorded scale.
struct InvariantEntry {
  std::string name;
  int rank = 0;
  int order = 0;  // covariant derivatives per factor chain
  std::vector<double> values;
  double max_abs = 0.0;
  double scale = 0.0;
  bool zero = true;
};

struct InvariantReport {
  std::vector<InvariantEntry> entries;
};

// Order-0 curvature scalars, the gradient of the scalar curvature, and the
// independent quadratic first-order scalar/1-form/rank-2 invariants.
// Requires data with at least one covariant derivative of Riemann.
InvariantReport scalar_invariants(const MetricFrame& frame, const CurvatureData& data,
                                  const ToleranceConfig& tol = {});

}  // namespace curv
