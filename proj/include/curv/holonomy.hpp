#pragma once

#include <string>
#include <vector>

#include "curv/curvature.hpp"
#include "curv/invariants.hpp"

namespace curv {

enum class CausalCharacter { Null, Timelike, Spacelike, Zero };

const char* causal_character_name(CausalCharacter c);

// Common-kernel data for the curvature endomorphisms R(e_a, e_b) and their
// first and second covariant derivatives.  Kernel vectors are necessary
// conditions for parallel fields, certified at this point only.
struct HolonomyReport {
  int generator_count = 0;   // nonzero endomorphisms fed to the closure
  int algebra_dim = 0;       // span dimension after commutator closure
  int tangent_kernel_dim = 0;
  std::vector<std::vector<double>> kernel_basis;  // unit Euclidean length
  std::vector<CausalCharacter> characters;
  bool kernel_contains_null = false;  // some nonzero kernel vector with g(v,v) = 0
  int sym2_kernel_dim_mod_g = 0;      // symmetric 2-tensor kernel modulo span{g}
};

// Requires grad and second-grad Riemann data (depth >= 2).
HolonomyReport holonomy_kernel(const MetricFrame& frame, const CurvatureData& data);

}  // namespace curv
