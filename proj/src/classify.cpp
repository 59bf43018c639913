#include "curv/classify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "curv/errors.hpp"

namespace curv {

namespace {

// Value-level component grid of a tensor jet.
struct Vals {
  int n = 0;
  int rank = 0;
  std::vector<double> v;

  double at(std::initializer_list<int> idx) const {
    size_t p = 0;
    for (int i : idx) p = p * size_t(n) + size_t(i);
    return v[p];
  }
  double max_abs() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
};

Vals values_of(const TensorJet& t) {
  Vals out;
  out.n = t.dim();
  out.rank = t.rank();
  out.v.resize(size_t(t.component_count()));
  for (int p = 0; p < t.component_count(); ++p) out.v[size_t(p)] = t.flat(p).value();
  return out;
}

// max over free indices of |sum_rho R^rho_{a lm} T_{rho bcd} + three more
// slot insertions|; the curvature commutator acting on a rank-4 tensor.
double four_term_residual(const Vals& rud, const Vals& t) {
  const int n = rud.n;
  double worst = 0.0;
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d) {
              double s = 0.0;
              for (int r = 0; r < n; ++r)
                s += rud.at({r, a, l, m}) * t.at({r, b, c, d}) +
                     rud.at({r, b, l, m}) * t.at({a, r, c, d}) +
                     rud.at({r, c, l, m}) * t.at({a, b, r, d}) +
                     rud.at({r, d, l, m}) * t.at({a, b, c, r});
              worst = std::max(worst, std::abs(s));
            }
  return worst;
}

}  // namespace

PointClassification classify_point(const MetricFrame& frame, const CurvatureData& data,
                                   const ToleranceConfig& tol) {
  const int n = frame.g.dim();
  PointClassification out;
  out.point = frame.point;

  // Constant curvature: the 1-jet of Riemann-down must match
  // K (g_ac g_bd - g_ad g_bc) with K frozen at the point; freezing K makes a
  // varying-curvature surface fail even though the value-level relation is an
  // identity in dimension 2.
  {
    const double k_const = data.scalar.value() / (double(n) * double(n - 1));
    const int jet_order = std::min(1, data.riemann_down.order());
    const TensorJet g1 = truncate(frame.g, jet_order);
    double resid = 0.0;
    double scale = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            Jet model = jet_scale(
                jet_sub(jet_mul(g1(a, c), g1(b, d)), jet_mul(g1(a, d), g1(b, c))),
                k_const);
            Jet rd = truncate(data.riemann_down(a, b, c, d), jet_order);
            resid = std::max(resid, jet_sub(rd, model).max_abs_coeff());
            scale = std::max({scale, model.max_abs_coeff(), rd.max_abs_coeff()});
          }
    out.constant_curvature = {resid, scale, zero_test(resid, scale, tol), true};
  }

  // grad^k Riemann tower.
  for (size_t m = 0; m < data.grad_riemann_down.size(); ++m) {
    const double resid = data.grad_riemann_down[m].max_abs_value();
    ResidualVerdict rv{resid, data.scale, zero_test(resid, data.scale, tol), true};
    out.k_symmetric.emplace_back(int(m) + 1, rv);
  }
  auto tower = [&](int k) -> ResidualVerdict {
    for (const auto& [kk, rv] : out.k_symmetric)
      if (kk == k) return rv;
    ResidualVerdict rv;
    rv.available = false;
    return rv;
  };
  out.symmetric = tower(1);
  out.two_symmetric = tower(2);

  // Semisymmetric: curvature commutator annihilates Riemann.
  {
    const Vals rud = values_of(data.riemann_ud);
    const Vals rdn = values_of(data.riemann_down);
    const double resid = four_term_residual(rud, rdn);
    const double scale = rud.max_abs() * rdn.max_abs();
    out.semisymmetric = {resid, scale, zero_test(resid, scale, tol), true};
  }

  {
    const double resid = data.ricci.max_abs_value();
    out.ricci_flat = {resid, data.scale, zero_test(resid, data.scale, tol), true};
  }

  {
    CurvatureOperator op = curvature_operator(frame, data);
    out.generic = op.generic;
    out.sigma_min = op.sigma_min;
    out.sigma_max = op.sigma_max;
  }

  // Scalar curvature gradient: values, null contraction, covariant Hessian.
  {
    ScalarGradientData& gs = out.grad_scalar;
    gs.values.resize(size_t(n));
    std::vector<int> e(size_t(n), 0);
    for (int a = 0; a < n; ++a) {
      e[size_t(a)] = 1;
      gs.values[size_t(a)] = data.scalar.derivative(e);
      e[size_t(a)] = 0;
    }
    for (double x : gs.values) gs.max_abs = std::max(gs.max_abs, std::abs(x));
    gs.nonzero = !zero_test(gs.max_abs, data.scale, tol);
    double q = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const double term =
            frame.g_inv(a, b).value() * gs.values[size_t(a)] * gs.values[size_t(b)];
        q += term;
        gs.null_scale += std::abs(term);
      }
    gs.null_abs = std::abs(q);
    if (data.scalar.order() >= 2) {
      TensorJet grad(n, {IndexPos::Down}, data.scalar.order() - 1);
      for (int a = 0; a < n; ++a) grad.flat(a) = jet_partial(data.scalar, a);
      TensorJet hess = cov_derivative(grad, frame);
      gs.hessian_max = hess.max_abs_value();
      double dd_max = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          std::vector<int> ee(size_t(n), 0);
          ee[size_t(a)] += 1;
          ee[size_t(b)] += 1;
          dd_max = std::max(dd_max, std::abs(data.scalar.derivative(ee)));
        }
      gs.hessian_scale =
          std::max(dd_max, frame.gamma.max_abs_value() * gs.max_abs);
      gs.hessian_available = true;
    }
  }

  return out;
}

std::vector<IdentityResult> identity_suite(const MetricFrame& frame,
                                           const CurvatureData& data,
                                           const ToleranceConfig& tol) {
  const int n = frame.g.dim();
  if (data.grad_riemann_down.empty() || !data.grad_riemann_ud.valid())
    throw JetBudgetError();

  const Vals rud = values_of(data.riemann_ud);
  const Vals rdn = values_of(data.riemann_down);
  const Vals grud = values_of(data.grad_riemann_ud);      // (nu, r, a, l, m)
  const Vals grdn = values_of(data.grad_riemann_down[0]); // (r, a, b, c, d)
  const Vals ric = values_of(data.ricci);
  const Vals ginv = values_of(frame.g_inv);
  const Vals ricm = values_of(raise_index(data.ricci, 0, frame));  // R^r_m
  const Vals gric = values_of(cov_derivative(data.ricci, frame));  // (a, m, k)
  const Vals cdn = values_of(data.weyl_down);
  const Vals cud = values_of(raise_index(data.weyl_down, 0, frame));
  const Vals gcdn = values_of(cov_derivative(data.weyl_down, frame));
  const Vals cll_uu = values_of(
      raise_index(raise_index(data.weyl_down, 2, frame), 3, frame));
  const double scalar = data.scalar.value();

  // grad_nu R^r_m and grad^r R_{mn}.
  Vals gricm{n, 3, std::vector<double>(size_t(n) * n * n, 0.0)};
  Vals gric_up{n, 3, std::vector<double>(size_t(n) * n * n, 0.0)};
  for (int a = 0; a < n; ++a)
    for (int r = 0; r < n; ++r)
      for (int m = 0; m < n; ++m) {
        double s1 = 0.0, s2 = 0.0;
        for (int t = 0; t < n; ++t) {
          s1 += ginv.at({r, t}) * gric.at({a, t, m});
          s2 += ginv.at({r, t}) * gric.at({t, a, m});
        }
        gricm.v[(size_t(a) * n + r) * n + m] = s1;   // grad_a R^r_m
        gric_up.v[(size_t(r) * n + a) * n + m] = s2; // grad^r R_{am}
      }

  // sum_r R_r{}^lam C^r_{bcd}, used twice in the Weyl-Weyl identity.
  Vals ric_dot_cud{n, 4, std::vector<double>(size_t(n) * n * n * n, 0.0)};
  for (int l = 0; l < n; ++l)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = 0.0;
          for (int r = 0; r < n; ++r) s += ricm.at({l, r}) * cud.at({r, b, c, d});
          ric_dot_cud.v[((size_t(l) * n + b) * n + c) * n + d] = s;
        }

  std::vector<IdentityResult> out;
  auto push = [&](const char* id, double resid, double scale) {
    out.push_back({id, resid, scale, zero_test(resid, scale, tol)});
  };

  // Commutator of second derivatives applied to Riemann itself: the
  // derivative lands on the curvature factors, not on the transported tensor.
  {
    double worst = 0.0;
    for (int nu = 0; nu < n; ++nu)
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m)
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                  double s = 0.0;
                  for (int r = 0; r < n; ++r)
                    s += grud.at({nu, r, a, l, m}) * rdn.at({r, b, c, d}) +
                         grud.at({nu, r, b, l, m}) * rdn.at({a, r, c, d}) +
                         grud.at({nu, r, c, l, m}) * rdn.at({a, b, r, d}) +
                         grud.at({nu, r, d, l, m}) * rdn.at({a, b, c, r}) -
                         rud.at({r, nu, l, m}) * grdn.at({r, a, b, c, d});
                  worst = std::max(worst, std::abs(s));
                }
    push("transport_commutator", worst,
         std::max(grud.max_abs() * rdn.max_abs(), rud.max_abs() * grdn.max_abs()));
  }

  // (grad_nu R^r_{tau lm} + grad_tau R^r_{nu lm}) grad_r Riemann = 0.
  {
    double worst = 0.0;
    for (int nu = 0; nu < n; ++nu)
      for (int ta = 0; ta < n; ++ta)
        for (int l = 0; l < n; ++l)
          for (int m = 0; m < n; ++m)
            for (int a = 0; a < n; ++a)
              for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                  for (int d = 0; d < n; ++d) {
                    double s = 0.0;
                    for (int r = 0; r < n; ++r)
                      s += (grud.at({nu, r, ta, l, m}) + grud.at({ta, r, nu, l, m})) *
                           grdn.at({r, a, b, c, d});
                    worst = std::max(worst, std::abs(s));
                  }
    push("grad_pair_symmetric", worst, grud.max_abs() * grdn.max_abs());
  }

  // (grad_nu R^r_m - grad_m R^r_nu) grad_r Riemann = 0.
  {
    double worst = 0.0;
    for (int nu = 0; nu < n; ++nu)
      for (int m = 0; m < n; ++m)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
              for (int d = 0; d < n; ++d) {
                double s = 0.0;
                for (int r = 0; r < n; ++r)
                  s += (gricm.at({nu, r, m}) - gricm.at({m, r, nu})) *
                       grdn.at({r, a, b, c, d});
                worst = std::max(worst, std::abs(s));
              }
    push("ricci_grad_antisym", worst, gricm.max_abs() * grdn.max_abs());
  }

  // (grad^r R_{m nu} - 2 grad_nu R^r_m) grad_r Riemann = 0.
  {
    double worst = 0.0;
    for (int m = 0; m < n; ++m)
      for (int nu = 0; nu < n; ++nu)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
              for (int d = 0; d < n; ++d) {
                double s = 0.0;
                for (int r = 0; r < n; ++r)
                  s += (gric_up.at({r, m, nu}) - 2.0 * gricm.at({nu, r, m})) *
                       grdn.at({r, a, b, c, d});
                worst = std::max(worst, std::abs(s));
              }
    push("ricci_div_combo", worst,
         std::max(gric_up.max_abs(), gricm.max_abs()) * grdn.max_abs());
  }

  push("riemann_commutator", four_term_residual(rud, rdn),
       rud.max_abs() * rdn.max_abs());

  // Same commutator applied to grad Riemann, derivative slot included.
  {
    double worst = 0.0;
    for (int nu = 0; nu < n; ++nu)
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m)
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                  double s = 0.0;
                  for (int r = 0; r < n; ++r)
                    s += rud.at({r, nu, l, m}) * grdn.at({r, a, b, c, d}) +
                         rud.at({r, a, l, m}) * grdn.at({nu, r, b, c, d}) +
                         rud.at({r, b, l, m}) * grdn.at({nu, a, r, c, d}) +
                         rud.at({r, c, l, m}) * grdn.at({nu, a, b, r, d}) +
                         rud.at({r, d, l, m}) * grdn.at({nu, a, b, c, r});
                  worst = std::max(worst, std::abs(s));
                }
    push("riemann_grad_commutator", worst, rud.max_abs() * grdn.max_abs());
  }

  // Symmetrized curvature gradient contracted into grad of Riemann, Weyl and
  // Ricci in turn.
  {
    double wr = 0.0, wc = 0.0;
    for (int ta = 0; ta < n; ++ta)
      for (int nu = 0; nu < n; ++nu)
        for (int l = 0; l < n; ++l)
          for (int m = 0; m < n; ++m)
            for (int a = 0; a < n; ++a)
              for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                  for (int d = 0; d < n; ++d) {
                    double sr = 0.0, sc = 0.0;
                    for (int r = 0; r < n; ++r) {
                      const double sym = 0.5 * (grud.at({ta, r, nu, l, m}) +
                                                grud.at({nu, r, ta, l, m}));
                      sr += sym * grdn.at({r, a, b, c, d});
                      sc += sym * gcdn.at({r, a, b, c, d});
                    }
                    wr = std::max(wr, std::abs(sr));
                    wc = std::max(wc, std::abs(sc));
                  }
    push("sym_grad_dot_riemann", wr, grud.max_abs() * grdn.max_abs());
    push("sym_grad_dot_weyl", wc, grud.max_abs() * gcdn.max_abs());
  }
  {
    double worst = 0.0;
    for (int ta = 0; ta < n; ++ta)
      for (int nu = 0; nu < n; ++nu)
        for (int l = 0; l < n; ++l)
          for (int m = 0; m < n; ++m)
            for (int a = 0; a < n; ++a)
              for (int b = 0; b < n; ++b) {
                double s = 0.0;
                for (int r = 0; r < n; ++r)
                  s += 0.5 *
                       (grud.at({ta, r, nu, l, m}) + grud.at({nu, r, ta, l, m})) *
                       gric.at({r, a, b});
                worst = std::max(worst, std::abs(s));
              }
    push("sym_grad_dot_ricci", worst, grud.max_abs() * gric.max_abs());
  }

  // R_{r(m} R^r_{n)ab} = 0.
  {
    double worst = 0.0;
    for (int m = 0; m < n; ++m)
      for (int nu = 0; nu < n; ++nu)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            double s = 0.0;
            for (int r = 0; r < n; ++r)
              s += 0.5 * (ric.at({r, m}) * rud.at({r, nu, a, b}) +
                          ric.at({r, nu}) * rud.at({r, m, a, b}));
            worst = std::max(worst, std::abs(s));
          }
    push("ricci_riemann_sym_pair", worst, ric.max_abs() * rud.max_abs());
  }

  // Cyclic Ricci contraction with Riemann and with Weyl.
  auto ricci_cycle = [&](const Vals& up) {
    double worst = 0.0;
    for (int m = 0; m < n; ++m)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) {
            double s = 0.0;
            for (int r = 0; r < n; ++r)
              s += up.at({r, m, a, b}) * ric.at({c, r}) +
                   up.at({r, m, b, c}) * ric.at({a, r}) +
                   up.at({r, m, c, a}) * ric.at({b, r}) -
                   up.at({r, m, b, a}) * ric.at({c, r}) -
                   up.at({r, m, a, c}) * ric.at({b, r}) -
                   up.at({r, m, c, b}) * ric.at({a, r});
            worst = std::max(worst, std::abs(s) / 6.0);
          }
    return worst;
  };
  push("riemann_ricci_cycle", ricci_cycle(rud), rud.max_abs() * ric.max_abs());
  push("weyl_ricci_cycle", ricci_cycle(cud), cud.max_abs() * ric.max_abs());

  // R^{rs} R_{r m s n} = R_m{}^r R_{rn}.
  {
    Vals ric_up{n, 2, std::vector<double>(size_t(n) * n, 0.0)};
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s) {
        double x = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            x += ginv.at({r, a}) * ginv.at({s, b}) * ric.at({a, b});
        ric_up.v[size_t(r) * n + s] = x;
      }
    double worst = 0.0;
    for (int m = 0; m < n; ++m)
      for (int nu = 0; nu < n; ++nu) {
        double t1 = 0.0, t2 = 0.0;
        for (int r = 0; r < n; ++r) {
          for (int s = 0; s < n; ++s) t1 += ric_up.at({r, s}) * rdn.at({r, m, s, nu});
          t2 += ricm.at({r, m}) * ric.at({r, nu});
        }
        worst = std::max(worst, std::abs(t1 - t2));
      }
    push("ricci_sandwich", worst,
         std::max(ric_up.max_abs() * rdn.max_abs(), ricm.max_abs() * ric.max_abs()));
  }

  push("weyl_commutator", four_term_residual(rud, cdn),
       rud.max_abs() * cdn.max_abs());

  // The quadratic Weyl-Weyl relation: traced commutator terms rebuilt from
  // Weyl, Ricci and the scalar.  Single brackets average two terms, nested
  // double brackets average four.
  {
    // One ordered term C_{r a}{}^{l m} C^r{}_{b g d}; callers antisymmetrize.
    auto dot2 = [&](int ra, int l, int m, int b, int g2, int d2) {
      double s = 0.0;
      for (int r = 0; r < n; ++r)
        s += cll_uu.at({r, ra, l, m}) * cud.at({r, b, g2, d2});
      return s;
    };
    const double f_cc = double(n - 2);
    const double f_r = 2.0 * scalar / double(n - 1);
    double worst = 0.0;
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int g2 = 0; g2 < n; ++g2)
              for (int d2 = 0; d2 < n; ++d2) {
                const double cc1 =
                    0.5 * (dot2(a, l, m, b, g2, d2) - dot2(b, l, m, a, g2, d2));
                const double cc2 =
                    0.5 * (dot2(g2, l, m, d2, a, b) - dot2(d2, l, m, g2, a, b));
                const double rc1 =
                    0.25 * (ricm.at({l, a}) * cud.at({m, b, g2, d2}) -
                            ricm.at({m, a}) * cud.at({l, b, g2, d2}) -
                            ricm.at({l, b}) * cud.at({m, a, g2, d2}) +
                            ricm.at({m, b}) * cud.at({l, a, g2, d2}));
                const double rc2 =
                    0.25 * (ricm.at({l, g2}) * cud.at({m, d2, a, b}) -
                            ricm.at({m, g2}) * cud.at({l, d2, a, b}) -
                            ricm.at({l, d2}) * cud.at({m, g2, a, b}) +
                            ricm.at({m, d2}) * cud.at({l, g2, a, b}));
                const double dl1 =
                    0.25 * ((m == a ? ric_dot_cud.at({l, b, g2, d2}) : 0.0) -
                            (l == a ? ric_dot_cud.at({m, b, g2, d2}) : 0.0) -
                            (m == b ? ric_dot_cud.at({l, a, g2, d2}) : 0.0) +
                            (l == b ? ric_dot_cud.at({m, a, g2, d2}) : 0.0));
                const double dl2 =
                    0.25 * ((m == g2 ? ric_dot_cud.at({l, d2, a, b}) : 0.0) -
                            (l == g2 ? ric_dot_cud.at({m, d2, a, b}) : 0.0) -
                            (m == d2 ? ric_dot_cud.at({l, g2, a, b}) : 0.0) +
                            (l == d2 ? ric_dot_cud.at({m, g2, a, b}) : 0.0));
                const double tr1 =
                    0.25 * ((l == a ? cud.at({m, b, g2, d2}) : 0.0) -
                            (m == a ? cud.at({l, b, g2, d2}) : 0.0) -
                            (l == b ? cud.at({m, a, g2, d2}) : 0.0) +
                            (m == b ? cud.at({l, a, g2, d2}) : 0.0));
                const double tr2 =
                    0.25 * ((l == g2 ? cud.at({m, d2, a, b}) : 0.0) -
                            (m == g2 ? cud.at({l, d2, a, b}) : 0.0) -
                            (l == d2 ? cud.at({m, g2, a, b}) : 0.0) +
                            (m == d2 ? cud.at({l, g2, a, b}) : 0.0));
                const double s = f_cc * (cc1 + cc2) - 2.0 * (rc1 + rc2) +
                                 2.0 * (dl1 + dl2) + f_r * (tr1 + tr2);
                worst = std::max(worst, std::abs(s));
              }
    const double cu_max = cud.max_abs();
    const double scale = std::max({f_cc * cll_uu.max_abs() * cu_max,
                                   2.0 * ricm.max_abs() * cu_max,
                                   2.0 * ric_dot_cud.max_abs(),
                                   std::abs(f_r) * cu_max});
    push("weyl_weyl_commutator", worst, scale);
  }

  return out;
}

const char* finding_status_name(FindingStatus s) {
  switch (s) {
    case FindingStatus::Pass: return "pass";
    case FindingStatus::Fail: return "fail";
    case FindingStatus::NotApplicable: return "not_applicable";
  }
  return "not_applicable";
}

namespace {

void finding_fail(ConsistencyFinding& f, const ClassificationReport& report, size_t i,
                  const std::string& detail) {
  if (f.witness_index >= 0) return;
  f.witness_index = int(i);
  f.witness = report.points[i].cls.point;
  f.detail = detail;
}

void finding_close(ConsistencyFinding& f) {
  if (f.witness_index >= 0)
    f.status = FindingStatus::Fail;
  else if (f.applicable_points > 0)
    f.status = FindingStatus::Pass;
  else
    f.status = FindingStatus::NotApplicable;
}

}  // namespace

std::vector<ConsistencyFinding> theorem_consistency(const ClassificationReport& report) {
  ConsistencyFinding a, b, c, d, e;
  a.id = "null_kernel_for_proper_two_symmetric";
  b.id = "generic_semisymmetric_constant_curvature";
  c.id = "invariants_vanish_without_null_kernel";
  d.id = "scalar_gradient_null_and_parallel";
  e.id = "hierarchy_monotonicity";
  const ToleranceConfig tol{report.config.tol_abs, report.config.tol_rel};

  for (size_t i = 0; i < report.points.size(); ++i) {
    const PointRecord& rec = report.points[i];
    const PointClassification& cls = rec.cls;
    const bool two_sym = cls.two_symmetric.available && cls.two_symmetric.verdict;

    if (two_sym && !cls.symmetric.verdict && rec.holonomy_available) {
      ++a.applicable_points;
      if (!rec.holonomy.kernel_contains_null)
        finding_fail(a, report, i,
                     "two-symmetric non-symmetric point whose tangent kernel has "
                     "no null direction");
    }

    if (cls.semisymmetric.verdict && cls.generic) {
      ++b.applicable_points;
      if (!cls.constant_curvature.verdict)
        finding_fail(b, report, i,
                     "generic semisymmetric point that is not of constant curvature");
    }

    if (two_sym && rec.holonomy_available && !rec.holonomy.kernel_contains_null &&
        rec.invariants_available) {
      ++c.applicable_points;
      for (const InvariantEntry& entry : rec.invariants.entries)
        if (entry.order >= 1 && !entry.zero) {
          finding_fail(c, report, i, "nonzero first-order invariant " + entry.name);
          break;
        }
    }

    if (cls.grad_scalar.nonzero) {
      ++d.applicable_points;
      const ScalarGradientData& gs = cls.grad_scalar;
      if (!zero_test(gs.null_abs, gs.null_scale, tol))
        finding_fail(d, report, i, "scalar curvature gradient is not null");
      else if (gs.hessian_available &&
               !zero_test(gs.hessian_max, gs.hessian_scale, tol))
        finding_fail(d, report, i, "scalar curvature gradient is not parallel");
    }

    ++e.applicable_points;
    if (cls.constant_curvature.verdict && !cls.symmetric.verdict)
      finding_fail(e, report, i, "constant curvature without symmetric");
    else if (cls.symmetric.verdict && cls.two_symmetric.available &&
             !cls.two_symmetric.verdict)
      finding_fail(e, report, i, "symmetric without two-symmetric");
    else if (two_sym && !cls.semisymmetric.verdict)
      finding_fail(e, report, i, "two-symmetric without semisymmetric");
  }

  for (ConsistencyFinding* f : {&a, &b, &c, &d, &e}) finding_close(*f);
  return {a, b, c, d, e};
}

ClassificationReport aggregate(const MetricSpec& spec, const SampleConfig& config) {
  if (config.points < 1) throw DomainError("no valid sample points requested");
  if (config.order < 2 || config.order > kMaxJetOrder)
    throw DomainError("jet order out of range");
  const int max_depth = config.order - 2;
  const int k_max = config.k_max >= 1 ? config.k_max : std::max(1, max_depth);
  if (k_max > max_depth) throw JetBudgetError();
  const int depth = std::max(k_max, std::min(2, max_depth));
  const ToleranceConfig tol{config.tol_abs, config.tol_rel};

  ClassificationReport report;
  report.spec = spec;
  report.spec_name = spec.name;
  report.dim = spec.dim;
  report.config = config;
  report.config.k_max = k_max;

  // One generator stream; every coordinate of every draw consumes one value.
  std::mt19937_64 rng(config.seed);
  auto draw01 = [&rng] { return double(rng() >> 11) * 0x1p-53; };
  std::vector<Point> pts(size_t(config.points));
  for (auto& p : pts) {
    p.resize(size_t(spec.dim));
    for (int c = 0; c < spec.dim; ++c) {
      const auto& dom = spec.domain[size_t(c)];
      p[size_t(c)] = dom[0] + draw01() * (dom[1] - dom[0]);
    }
  }

  struct Slot {
    bool skipped = false;
    PointRecord rec;
  };
  std::vector<Slot> slots(pts.size());
  std::atomic<size_t> cursor{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto work = [&] {
    for (;;) {
      const size_t i = cursor.fetch_add(1);
      if (i >= pts.size()) return;
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error) return;
      }
      try {
        MetricFrame frame = make_frame(spec, pts[i], config.order);
        CurvatureData data = compute_curvature(frame, depth);
        PointRecord rec;
        rec.cls = classify_point(frame, data, tol);
        rec.op = curvature_operator(frame, data);
        if (config.with_invariants && depth >= 1) {
          rec.invariants = scalar_invariants(frame, data, tol);
          rec.invariants_available = true;
        }
        if (config.with_holonomy && depth >= 2) {
          rec.holonomy = holonomy_kernel(frame, data);
          rec.holonomy_available = true;
        }
        if (config.with_identities && depth >= 1 &&
            (config.force_identities ||
             (rec.cls.two_symmetric.available && rec.cls.two_symmetric.verdict))) {
          rec.identities = identity_suite(frame, data, tol);
          rec.identities_ran = true;
        }
        slots[i].rec = std::move(rec);
      } catch (const DegenerateMetricError&) {
        slots[i].skipped = true;
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  const int threads = std::min<int>(std::max(1, config.threads), int(pts.size()));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(size_t(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  for (size_t i = 0; i < pts.size(); ++i) {
    if (slots[i].skipped)
      report.skipped.push_back(pts[i]);
    else
      report.points.push_back(std::move(slots[i].rec));
  }
  if (report.points.empty()) throw NumericError("no valid sample points");

  AggregateVerdicts& agg = report.aggregate;
  std::vector<std::pair<int, bool>>& ks = agg.k_symmetric;
  for (const PointRecord& rec : report.points) {
    const PointClassification& cls = rec.cls;
    agg.constant_curvature &= cls.constant_curvature.verdict;
    agg.symmetric &= cls.symmetric.verdict;
    agg.two_symmetric_available &= cls.two_symmetric.available;
    agg.two_symmetric &= cls.two_symmetric.available && cls.two_symmetric.verdict;
    agg.semisymmetric &= cls.semisymmetric.verdict;
    agg.ricci_flat &= cls.ricci_flat.verdict;
    agg.generic &= cls.generic;
    for (const auto& [k, rv] : cls.k_symmetric) {
      auto it = std::find_if(ks.begin(), ks.end(),
                             [k](const auto& kv) { return kv.first == k; });
      if (it == ks.end())
        ks.emplace_back(k, rv.verdict);
      else
        it->second = it->second && rv.verdict;
    }
    if (rec.identities_ran) {
      ++agg.identity_points;
      for (const IdentityResult& idr : rec.identities)
        agg.identities_pass &= idr.pass;
    }
  }
  std::sort(ks.begin(), ks.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });

  report.findings = theorem_consistency(report);
  return report;
}

}  // namespace curv
