#include "curv/invariants.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace curv {

bool zero_test(double value, double scale, const ToleranceConfig& tol) {
  return std::abs(value) <= tol.tol_abs + tol.tol_rel * scale;
}

namespace {

// Plain value arrays for the contraction loops; row-major like TensorJet.
struct Vals {
  int n = 0;
  int rank = 0;
  std::vector<double> v;

  Vals() = default;
  Vals(int n_, int rank_) : n(n_), rank(rank_) {
    size_t sz = 1;
    for (int i = 0; i < rank_; ++i) sz *= size_t(n_);
    v.assign(sz, 0.0);
  }
  explicit Vals(const TensorJet& t) : n(t.dim()), rank(t.rank()), v(t.value_array()) {}

  double& at(std::initializer_list<int> idx) {
    int p = 0;
    for (int i : idx) p = p * n + i;
    return v[p];
  }
  double at(std::initializer_list<int> idx) const {
    int p = 0;
    for (int i : idx) p = p * n + i;
    return v[p];
  }
  double max_abs() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
};

// Contract one slot with the inverse-metric value matrix.
Vals raise_slot(const Vals& t, int slot, const Vals& ginv) {
  Vals out(t.n, t.rank);
  const int n = t.n;
  size_t stride = 1;
  for (int s = t.rank - 1; s > slot; --s) stride *= size_t(n);
  for (size_t p = 0; p < t.v.size(); ++p) {
    const int a = int(p / stride) % n;
    const size_t base = p - size_t(a) * stride;
    double s = 0.0;
    for (int r = 0; r < n; ++r) s += ginv.at({a, r}) * t.v[base + size_t(r) * stride];
    out.v[p] = s;
  }
  return out;
}

InvariantEntry make_entry(std::string name, int rank, int order, Vals vals, double scale,
                          const ToleranceConfig& tol) {
  InvariantEntry e;
  e.name = std::move(name);
  e.rank = rank;
  e.order = order;
  e.values = std::move(vals.v);
  for (double x : e.values) e.max_abs = std::max(e.max_abs, std::abs(x));
  e.scale = scale;
  e.zero = zero_test(e.max_abs, scale, tol);
  return e;
}

}  // namespace

CurvatureOperator curvature_operator(const MetricFrame& frame, const CurvatureData& data) {
  const int n = frame.g.dim();
  const int N = n * (n - 1) / 2;
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(N);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) pairs.push_back({a, b});

  // R with the first two indices raised.
  TensorJet up = raise_index(data.riemann_down, 0, frame);
  up = raise_index(up, 1, frame);
  Vals ruu(up);

  CurvatureOperator op;
  op.pair_dim = N;
  op.matrix.assign(size_t(N) * N, 0.0);
  Eigen::MatrixXd m(N, N);
  for (int I = 0; I < N; ++I)
    for (int J = 0; J < N; ++J) {
      const double x =
          ruu.at({pairs[I].first, pairs[I].second, pairs[J].first, pairs[J].second});
      op.matrix[size_t(I) * N + J] = x;
      m(I, J) = x;
    }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  op.sigma_max = svd.singularValues()(0);
  op.sigma_min = svd.singularValues()(N - 1);
  op.generic = op.sigma_min > 1e-7 * op.sigma_max && op.sigma_max > 1e-10 * data.scale;
  return op;
}

InvariantReport scalar_invariants(const MetricFrame& frame, const CurvatureData& data,
                                  const ToleranceConfig& tol) {
  const int n = frame.g.dim();
  if (data.grad_riemann_down.empty()) throw JetBudgetError();

  Vals ginv(frame.g_inv);
  Vals rdn(data.riemann_down);
  Vals ric(data.ricci);
  Vals weyl(data.weyl_down);
  Vals gr(data.grad_riemann_down[0]);  // (a, m, k, r, t) = grad_a R_mkrt

  Vals ric_up = raise_slot(raise_slot(ric, 0, ginv), 1, ginv);
  Vals r_up = rdn;
  for (int s = 0; s < 4; ++s) r_up = raise_slot(r_up, s, ginv);
  Vals w_up = weyl;
  for (int s = 0; s < 4; ++s) w_up = raise_slot(w_up, s, ginv);

  TensorJet grad_ricci_t = cov_derivative(data.ricci, frame);
  Vals gric(grad_ricci_t);                                       // grad_a R_mk
  Vals gric_up12 = raise_slot(raise_slot(gric, 1, ginv), 2, ginv);  // grad_a R^mk
  Vals gric_mixed = raise_slot(raise_slot(gric, 0, ginv), 1, ginv);  // grad^a R^m_k
  Vals gric_allup = raise_slot(gric_mixed, 2, ginv);             // grad^a R^{mk}
  Vals gr_up = gr;
  for (int s = 1; s < 5; ++s) gr_up = raise_slot(gr_up, s, ginv);  // grad_a R^{mkrt}
  Vals gr_allup = raise_slot(gr_up, 0, ginv);                      // grad^a R^{mkrt}

  const double m_rdn = rdn.max_abs();
  const double m_rup = r_up.max_abs();
  const double m_ric = ric.max_abs();
  const double m_ricup = ric_up.max_abs();
  const double m_w = weyl.max_abs();
  const double m_wup = w_up.max_abs();
  const double m_gr = gr.max_abs();
  const double m_grup = gr_up.max_abs();
  const double m_gric = gric.max_abs();
  const double m_gricup = gric_up12.max_abs();

  InvariantReport rep;
  auto push = [&](std::string name, int rank, int order, Vals vals, double scale) {
    rep.entries.push_back(
        make_entry(std::move(name), rank, order, std::move(vals), scale, tol));
  };

  // Order-0 scalars.
  {
    Vals v(n, 0);
    v.v[0] = data.scalar.value();
    push("scalar_curvature", 0, 0, std::move(v), data.scale);
  }
  {
    Vals v(n, 0);
    double s = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) s += ric.at({a, b}) * ric_up.at({a, b});
    v.v[0] = s;
    push("ricci_sq", 0, 0, std::move(v), m_ric * m_ricup);
  }
  {
    Vals v(n, 0);
    double s = 0.0;
    for (size_t p = 0; p < rdn.v.size(); ++p) s += rdn.v[p] * r_up.v[p];
    v.v[0] = s;
    push("kretschmann", 0, 0, std::move(v), m_rdn * m_rup);
  }
  {
    Vals v(n, 0);
    double s = 0.0;
    for (size_t p = 0; p < weyl.v.size(); ++p) s += weyl.v[p] * w_up.v[p];
    v.v[0] = s;
    push("weyl_sq", 0, 0, std::move(v), m_w * m_wup);
  }

  // Gradient of the scalar curvature, reported on its own.
  {
    Vals v(n, 1);
    for (int a = 0; a < n; ++a) {
      std::vector<int> e(size_t(n), 0);
      e[a] = 1;
      v.v[a] = data.scalar.derivative(e);
    }
    push("grad_scalar", 1, 1, std::move(v), data.scale);
  }

  // 1-form invariants.
  {
    Vals v(n, 1);  // R^mk grad_a R_mk
    for (int a = 0; a < n; ++a) {
      double s = 0.0;
      for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k) s += ric_up.at({m, k}) * gric.at({a, m, k});
      v.v[a] = s;
    }
    push("ricci_dot_grad_ricci", 1, 1, std::move(v), m_ricup * m_gric);
  }
  {
    Vals v(n, 1);  // R^mk grad_m R_ka
    for (int a = 0; a < n; ++a) {
      double s = 0.0;
      for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k) s += ric_up.at({m, k}) * gric.at({m, k, a});
      v.v[a] = s;
    }
    push("ricci_div_ricci", 1, 1, std::move(v), m_ricup * m_gric);
  }
  {
    Vals v(n, 1);  // R^{mkra} grad_m R_kr
    for (int a = 0; a < n; ++a) {
      double s = 0.0;
      for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k)
          for (int r = 0; r < n; ++r) s += r_up.at({m, k, r, a}) * gric.at({m, k, r});
      v.v[a] = s;
    }
    push("riemann_grad_ricci", 1, 1, std::move(v), m_rup * m_gric);
  }
  {
    Vals v(n, 1);  // R^{mkrt} grad_m R_krta
    for (int a = 0; a < n; ++a) {
      double s = 0.0;
      for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k)
          for (int r = 0; r < n; ++r)
            for (int t = 0; t < n; ++t)
              s += r_up.at({m, k, r, t}) * gr.at({m, k, r, t, a});
      v.v[a] = s;
    }
    push("riemann_div_riemann", 1, 1, std::move(v), m_rup * m_gr);
  }
  {
    Vals v(n, 1);  // R^{mkrt} grad_a R_mkrt
    for (int a = 0; a < n; ++a) {
      double s = 0.0;
      for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k)
          for (int r = 0; r < n; ++r)
            for (int t = 0; t < n; ++t)
              s += r_up.at({m, k, r, t}) * gr.at({a, m, k, r, t});
      v.v[a] = s;
    }
    push("riemann_grad_riemann", 1, 1, std::move(v), m_rup * m_gr);
  }

  // Rank-2 invariants.
  {
    Vals v(n, 2);  // grad_a R^mk grad_b R_mk
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int m = 0; m < n; ++m)
          for (int k = 0; k < n; ++k) s += gric_up12.at({a, m, k}) * gric.at({b, m, k});
        v.at({a, b}) = s;
      }
    push("grad_ricci_sq", 2, 1, std::move(v), m_gricup * m_gric);
  }
  {
    Vals v(n, 2);  // grad_m R_kb grad_a R^mk
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int m = 0; m < n; ++m)
          for (int k = 0; k < n; ++k) s += gric.at({m, k, b}) * gric_up12.at({a, m, k});
        v.at({a, b}) = s;
      }
    push("grad_ricci_cross", 2, 1, std::move(v), m_gric * m_gricup);
  }
  {
    Vals v(n, 2);  // grad_m R_ka grad^m R^k_b
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int m = 0; m < n; ++m)
          for (int k = 0; k < n; ++k) s += gric.at({m, k, a}) * gric_mixed.at({m, k, b});
        v.at({a, b}) = s;
      }
    push("grad_ricci_contracted", 2, 1, std::move(v), m_gric * gric_mixed.max_abs());
  }
  {
    Vals v(n, 2);  // grad_m R_ka grad^k R^m_b
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int m = 0; m < n; ++m)
          for (int k = 0; k < n; ++k) s += gric.at({m, k, a}) * gric_mixed.at({k, m, b});
        v.at({a, b}) = s;
      }
    push("grad_ricci_transposed", 2, 1, std::move(v), m_gric * gric_mixed.max_abs());
  }
  {
    Vals v(n, 2);  // grad^m R^{kr} grad_a R_brmk
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int m = 0; m < n; ++m)
          for (int k = 0; k < n; ++k)
            for (int r = 0; r < n; ++r)
              s += gric_allup.at({m, k, r}) * gr.at({a, b, r, m, k});
        v.at({a, b}) = s;
      }
    push("div_ricci_grad_riemann", 2, 1, std::move(v), gric_allup.max_abs() * m_gr);
  }
  {
    Vals v(n, 2);  // grad^m R^{kr} grad_m R_akbr
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int m = 0; m < n; ++m)
          for (int k = 0; k < n; ++k)
            for (int r = 0; r < n; ++r)
              s += gric_allup.at({m, k, r}) * gr.at({m, a, k, b, r});
        v.at({a, b}) = s;
      }
    push("div_ricci_riemann_contracted", 2, 1, std::move(v), gric_allup.max_abs() * m_gr);
  }
  {
    Vals v(n, 2);  // grad_a R^{mkrt} grad_b R_mkrt
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int m = 0; m < n; ++m)
          for (int k = 0; k < n; ++k)
            for (int r = 0; r < n; ++r)
              for (int t = 0; t < n; ++t)
                s += gr_up.at({a, m, k, r, t}) * gr.at({b, m, k, r, t});
        v.at({a, b}) = s;
      }
    push("grad_riemann_sq", 2, 1, std::move(v), m_grup * m_gr);
  }
  {
    Vals v(n, 2);  // grad^s R^{mkra} grad_s R_mkrb  (a up, b down)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int t = 0; t < n; ++t)
          for (int m = 0; m < n; ++m)
            for (int k = 0; k < n; ++k)
              for (int r = 0; r < n; ++r)
                s += gr_allup.at({t, m, k, r, a}) * gr.at({t, m, k, r, b});
        v.at({a, b}) = s;
      }
    push("div_riemann_contracted", 2, 1, std::move(v), gr_allup.max_abs() * m_gr);
  }

  return rep;
}

}  // namespace curv
