#pragma once

#include <string>
#include <utility>
#include <vector>

#include "curv/curvature.hpp"
#include "curv/holonomy.hpp"
#include "curv/invariants.hpp"
#include "curv/metric.hpp"

namespace curv {

// One tested condition: residual against the scale it is zero_tested with.
// available = false when the jet order cannot support the test.
struct ResidualVerdict {
  double residual = 0.0;
  double scale = 0.0;
  bool verdict = false;
  bool available = true;
};

// Gradient of the curvature scalar plus the data needed to decide whether a
// nonzero gradient is null and parallel.
struct ScalarGradientData {
  std::vector<double> values;  // partial derivatives at the point
  double max_abs = 0.0;
  bool nonzero = false;         // fails the zero test against the frame scale
  double null_abs = 0.0;        // |g^{ab} d_a R d_b R|
  double null_scale = 0.0;      // termwise absolute sum of that contraction
  double hessian_max = 0.0;     // max |second covariant derivative of R|
  double hessian_scale = 0.0;
  bool hessian_available = false;
};

// Hierarchy verdicts at one point.  k_symmetric[k] tests max |grad^k Riemann|;
// entries are ordered by k and include k = 1, 2 mirroring symmetric and
// two_symmetric.  Monotonicity across the hierarchy is checked downstream as a
// named consistency finding, never assumed.
struct PointClassification {
  Point point;
  ResidualVerdict constant_curvature;  // 1-jet of Riemann - K (g o g), K frozen
  ResidualVerdict symmetric;           // grad Riemann = 0
  ResidualVerdict two_symmetric;       // grad grad Riemann = 0
  ResidualVerdict semisymmetric;       // curvature commutator acting on Riemann
  ResidualVerdict ricci_flat;
  std::vector<std::pair<int, ResidualVerdict>> k_symmetric;
  bool generic = false;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  ScalarGradientData grad_scalar;
};

PointClassification classify_point(const MetricFrame& frame, const CurvatureData& data,
                                   const ToleranceConfig& tol = {});

// One quadratic identity evaluated at a point: max residual over all free
// indices against the product scale of its factors.
struct IdentityResult {
  std::string id;
  double residual = 0.0;
  double scale = 0.0;
  bool pass = false;
};

// The fifteen curvature identities that hold in two-symmetric (a few already
// in semisymmetric) spaces, evaluated value-level.  Needs one covariant
// derivative of Riemann.
std::vector<IdentityResult> identity_suite(const MetricFrame& frame,
                                           const CurvatureData& data,
                                           const ToleranceConfig& tol = {});

struct SampleConfig {
  int points = 20;
  unsigned long long seed = 42;
  int order = 4;        // metric jet order K
  int k_max = -1;       // highest grad^k Riemann tested; -1 means order - 2
  double tol_abs = 1e-10;
  double tol_rel = 1e-8;
  bool force_identities = false;  // run the suite at non-two-symmetric points
  bool with_identities = true;
  bool with_holonomy = true;
  bool with_invariants = true;
  int threads = 1;
};

// Everything computed at one sample point.
struct PointRecord {
  PointClassification cls;
  CurvatureOperator op;
  InvariantReport invariants;
  bool invariants_available = false;
  HolonomyReport holonomy;
  bool holonomy_available = false;
  std::vector<IdentityResult> identities;
  bool identities_ran = false;
};

// Conjunction of the per-point verdicts.
struct AggregateVerdicts {
  bool constant_curvature = true;
  bool symmetric = true;
  bool two_symmetric = true;
  bool semisymmetric = true;
  bool ricci_flat = true;
  bool generic = true;
  std::vector<std::pair<int, bool>> k_symmetric;
  bool two_symmetric_available = true;
  bool identities_pass = true;
  int identity_points = 0;  // points where the suite ran
};

enum class FindingStatus { Pass, Fail, NotApplicable };

const char* finding_status_name(FindingStatus s);

struct ConsistencyFinding {
  std::string id;
  FindingStatus status = FindingStatus::NotApplicable;
  int applicable_points = 0;
  int witness_index = -1;  // first failing point, -1 when none
  Point witness;
  std::string detail;
};

struct ClassificationReport {
  MetricSpec spec;
  std::string spec_name;
  int dim = 0;
  SampleConfig config;
  std::vector<Point> skipped;  // degenerate-metric draws
  std::vector<PointRecord> points;
  AggregateVerdicts aggregate;
  std::vector<ConsistencyFinding> findings;
};

// Re-derives the named cross-checks from the stored per-point data:
//   hierarchy monotonicity, null kernel direction for proper two-symmetric
//   points, genericity forcing constant curvature, invariant vanishing without
//   a null kernel direction, and nullity of a nonzero scalar gradient.
std::vector<ConsistencyFinding> theorem_consistency(const ClassificationReport& report);

// Samples config.points draws from the coordinate domain with one seeded
// generator, classifies each non-degenerate point, and conjoins verdicts.
ClassificationReport aggregate(const MetricSpec& spec, const SampleConfig& config);

}  // namespace curv
