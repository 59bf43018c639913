#pragma once

#include <utility>
#include <vector>

#include "curv/metric.hpp"
#include "curv/tensor.hpp"

namespace curv {

// Metric, inverse and connection jets anchored at one point.  The metric
// carries jet order K; the connection K-1; curvature built from it K-2.
struct MetricFrame {
  const MetricSpec* spec = nullptr;
  Point point;
  int order = 0;  // K
  TensorJet g;      // (down, down), order K
  TensorJet g_inv;  // (up, up), order K
  TensorJet gamma;  // (up, down, down), order K-1
  double g_scale = 0.0;
  bool lorentzian = false;
  int negative_eigenvalues = 0;
};

MetricFrame make_frame(const MetricSpec& spec, const Point& p, int order);

// Series inverse by Newton iteration seeded with the value-matrix inverse;
// exact through the jet order after ceil(log2(order+1)) sweeps.
TensorJet inverse_metric_jets(const TensorJet& g);

// Gamma^a_{bc} = g^{ar} (d_b g_{rc} + d_c g_{rb} - d_r g_{bc}) / 2.
TensorJet christoffel(const TensorJet& g, const TensorJet& g_inv);

// R^a_{bcd} = d_c Gamma^a_{db} - d_d Gamma^a_{cb}
//             + Gamma^a_{cr} Gamma^r_{db} - Gamma^a_{dr} Gamma^r_{cb}.
TensorJet riemann(const MetricFrame& frame);

TensorJet raise_index(const TensorJet& t, int slot, const MetricFrame& frame);
TensorJet lower_index(const TensorJet& t, int slot, const MetricFrame& frame);

// Ricci_{bd} = R^r_{brd} and the scalar g^{bd} Ricci_{bd}.
std::pair<TensorJet, Jet> ricci_and_scalar(const MetricFrame& frame,
                                           const TensorJet& riemann_ud);

// Trace-free part of the all-down Riemann tensor; identically zero for
// dim < 4.
TensorJet weyl(const MetricFrame& frame, const TensorJet& riemann_down,
               const TensorJet& ricci, const Jet& scalar);

// Rebuild the all-down Riemann tensor from its Weyl/Ricci/scalar parts.
TensorJet riemann_from_parts(const MetricFrame& frame, const TensorJet& weyl_down,
                             const TensorJet& ricci, const Jet& scalar);

// Covariant derivative; the new Down slot comes first and one jet order is
// consumed.  Throws JetBudgetError once the tower is exhausted.
TensorJet cov_derivative(const TensorJet& t, const MetricFrame& frame);

// Everything the classifier consumes at one point.  grad_riemann_down[m-1]
// holds the m-th covariant derivative of the all-down Riemann tensor
// (jet order K-2-m); the mixed-index gradients feed the holonomy generators.
struct CurvatureData {
  TensorJet riemann_ud;    // R^a_{bcd}, order K-2
  TensorJet riemann_down;  // order K-2
  TensorJet ricci;         // (down, down)
  Jet scalar;
  TensorJet weyl_down;
  std::vector<TensorJet> grad_riemann_down;
  TensorJet grad_riemann_ud;   // set when depth >= 1
  TensorJet grad2_riemann_ud;  // set when depth >= 2
  double scale = 0.0;          // max(|g| values, |Riemann| values)
};

// depth = how many covariant derivatives of Riemann to materialize;
// feasible exactly for depth <= order - 2.
CurvatureData compute_curvature(const MetricFrame& frame, int depth);

}  // namespace curv
