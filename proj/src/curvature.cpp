#include "curv/curvature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace curv {

namespace {

TensorJet mat_mul(const TensorJet& a, const TensorJet& b, std::vector<IndexPos> valence) {
  const int n = a.dim();
  TensorJet out(n, std::move(valence), a.order());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet s = Jet::constant(0.0, n, a.order());
      for (int r = 0; r < n; ++r) s = s + jet_mul(a(i, r), b(r, j));
      out(i, j) = s;
    }
  return out;
}

}  // namespace

TensorJet inverse_metric_jets(const TensorJet& g) {
  const int n = g.dim();
  const int order = g.order();

  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(i, j).value();
  const double scale = m.cwiseAbs().maxCoeff();
  const double det = m.determinant();
  if (!(std::abs(det) >= kMetricDetFloor * std::pow(scale, n)))
    throw DegenerateMetricError("degenerate metric value matrix");
  const Eigen::MatrixXd inv0 = m.inverse();

  TensorJet x(n, {IndexPos::Up, IndexPos::Up}, order);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) x(i, j) = Jet::constant(inv0(i, j), n, order);

  // X <- X (2I - G X); error degree doubles each sweep.
  for (int step = 1; step <= order; step <<= 1) {
    TensorJet gx = mat_mul(g, x, {IndexPos::Down, IndexPos::Up});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Jet t = jet_scale(gx(i, j), -1.0);
        if (i == j) t.raw(0) += 2.0;
        gx(i, j) = t;
      }
    x = mat_mul(x, gx, {IndexPos::Up, IndexPos::Up});
  }
  return x;
}

TensorJet christoffel(const TensorJet& g, const TensorJet& g_inv) {
  const int n = g.dim();
  if (g.order() < 1) throw JetBudgetError();
  const int order = g.order() - 1;
  const TensorJet gi = truncate(g_inv, order);

  // dg(b, r, c) = d_b g_{rc}
  TensorJet dg(n, {IndexPos::Down, IndexPos::Down, IndexPos::Down}, order);
  for (int b = 0; b < n; ++b)
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) dg(b, r, c) = jet_partial(g(r, c), b);

  TensorJet gamma(n, {IndexPos::Up, IndexPos::Down, IndexPos::Down}, order);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = b; c < n; ++c) {
        Jet s = Jet::constant(0.0, n, order);
        for (int r = 0; r < n; ++r) {
          Jet term = jet_add(dg(b, r, c), dg(c, r, b));
          term = jet_sub(term, dg(r, b, c));
          s = jet_add(s, jet_mul(gi(a, r), term));
        }
        s = jet_scale(s, 0.5);
        gamma(a, b, c) = s;
        if (b != c) gamma(a, c, b) = s;
      }
  return gamma;
}

MetricFrame make_frame(const MetricSpec& spec, const Point& p, int order) {
  MetricEvaluation ev = evaluate_metric(spec, p, order);
  MetricFrame f;
  f.spec = &spec;
  f.point = p;
  f.order = order;
  f.g = std::move(ev.g);
  f.g_inv = inverse_metric_jets(f.g);
  f.gamma = christoffel(f.g, f.g_inv);
  f.g_scale = ev.scale;
  f.lorentzian = ev.lorentzian;
  f.negative_eigenvalues = ev.negative_eigenvalues;
  return f;
}

TensorJet riemann(const MetricFrame& frame) {
  const int n = frame.g.dim();
  if (frame.order < 2) throw JetBudgetError();
  const int order = frame.order - 2;
  const TensorJet gm = truncate(frame.gamma, order);

  // dgamma(c, a, d, b) = d_c Gamma^a_{db}
  TensorJet dgamma(n, {IndexPos::Down, IndexPos::Up, IndexPos::Down, IndexPos::Down}, order);
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int d = 0; d < n; ++d)
        for (int b = 0; b < n; ++b) dgamma(c, a, d, b) = jet_partial(frame.gamma(a, d, b), c);

  TensorJet r(n, {IndexPos::Up, IndexPos::Down, IndexPos::Down, IndexPos::Down}, order);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          Jet s = jet_sub(dgamma(c, a, d, b), dgamma(d, a, c, b));
          for (int rho = 0; rho < n; ++rho) {
            s = jet_add(s, jet_mul(gm(a, c, rho), gm(rho, d, b)));
            s = jet_sub(s, jet_mul(gm(a, d, rho), gm(rho, c, b)));
          }
          r(a, b, c, d) = s;
          r(a, b, d, c) = jet_scale(s, -1.0);
        }
  return r;
}

TensorJet raise_index(const TensorJet& t, int slot, const MetricFrame& frame) {
  if (slot < 0 || slot >= t.rank()) throw ShapeError("raise_index slot outside rank");
  if (t.valence()[slot] != IndexPos::Down) throw ShapeError("raise_index on an up slot");
  const int n = t.dim();
  const TensorJet gi = truncate(frame.g_inv, t.order());
  std::vector<IndexPos> valence = t.valence();
  valence[slot] = IndexPos::Up;
  TensorJet out(n, valence, t.order());
  std::vector<int> idx(t.rank());
  for (int p = 0; p < out.component_count(); ++p) {
    out.unflatten(p, idx);
    const int a = idx[slot];
    Jet s = Jet::constant(0.0, n, t.order());
    for (int r = 0; r < n; ++r) {
      idx[slot] = r;
      s = jet_add(s, jet_mul(gi(a, r), t.at(idx)));
    }
    idx[slot] = a;
    out.flat(p) = s;
  }
  return out;
}

TensorJet lower_index(const TensorJet& t, int slot, const MetricFrame& frame) {
  if (slot < 0 || slot >= t.rank()) throw ShapeError("lower_index slot outside rank");
  if (t.valence()[slot] != IndexPos::Up) throw ShapeError("lower_index on a down slot");
  const int n = t.dim();
  const TensorJet gm = truncate(frame.g, t.order());
  std::vector<IndexPos> valence = t.valence();
  valence[slot] = IndexPos::Down;
  TensorJet out(n, valence, t.order());
  std::vector<int> idx(t.rank());
  for (int p = 0; p < out.component_count(); ++p) {
    out.unflatten(p, idx);
    const int a = idx[slot];
    Jet s = Jet::constant(0.0, n, t.order());
    for (int r = 0; r < n; ++r) {
      idx[slot] = r;
      s = jet_add(s, jet_mul(gm(a, r), t.at(idx)));
    }
    idx[slot] = a;
    out.flat(p) = s;
  }
  return out;
}

std::pair<TensorJet, Jet> ricci_and_scalar(const MetricFrame& frame,
                                           const TensorJet& riemann_ud) {
  const int n = riemann_ud.dim();
  const int order = riemann_ud.order();
  TensorJet ricci(n, {IndexPos::Down, IndexPos::Down}, order);
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) {
      Jet s = Jet::constant(0.0, n, order);
      for (int r = 0; r < n; ++r) s = jet_add(s, riemann_ud(r, b, r, d));
      ricci(b, d) = s;
    }
  const TensorJet gi = truncate(frame.g_inv, order);
  Jet scalar = Jet::constant(0.0, n, order);
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) scalar = jet_add(scalar, jet_mul(gi(b, d), ricci(b, d)));
  return {std::move(ricci), std::move(scalar)};
}

namespace {

// The Ricci/scalar block of the curvature decomposition:
//   (1/(n-2)) (Ric_{al} g_{mb} - Ric_{am} g_{lb} - Ric_{bl} g_{ma} + Ric_{bm} g_{la})
// - (R/((n-1)(n-2))) (g_{al} g_{bm} - g_{am} g_{bl}).
TensorJet ricci_block(const MetricFrame& frame, const TensorJet& ricci, const Jet& scalar) {
  const int n = frame.g.dim();
  const int order = ricci.order();
  const TensorJet gm = truncate(frame.g, order);
  const double c2 = 1.0 / (n - 2);
  const double c3 = 1.0 / ((n - 1) * (n - 2));
  TensorJet out(n, {IndexPos::Down, IndexPos::Down, IndexPos::Down, IndexPos::Down}, order);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) {
          Jet s = jet_mul(ricci(a, l), gm(m, b));
          s = jet_sub(s, jet_mul(ricci(a, m), gm(l, b)));
          s = jet_sub(s, jet_mul(ricci(b, l), gm(m, a)));
          s = jet_add(s, jet_mul(ricci(b, m), gm(l, a)));
          s = jet_scale(s, c2);
          Jet t = jet_sub(jet_mul(gm(a, l), gm(b, m)), jet_mul(gm(a, m), gm(b, l)));
          s = jet_sub(s, jet_scale(jet_mul(scalar, t), c3));
          out(a, b, l, m) = s;
        }
  return out;
}

}  // namespace

TensorJet weyl(const MetricFrame& frame, const TensorJet& riemann_down,
               const TensorJet& ricci, const Jet& scalar) {
  const int n = frame.g.dim();
  const int order = riemann_down.order();
  if (n < 4)
    return TensorJet(n, {IndexPos::Down, IndexPos::Down, IndexPos::Down, IndexPos::Down},
                     order);
  TensorJet block = ricci_block(frame, ricci, scalar);
  TensorJet c = riemann_down;
  for (int p = 0; p < c.component_count(); ++p)
    c.flat(p) = jet_sub(c.flat(p), block.flat(p));
  return c;
}

TensorJet riemann_from_parts(const MetricFrame& frame, const TensorJet& weyl_down,
                             const TensorJet& ricci, const Jet& scalar) {
  const int n = frame.g.dim();
  const int order = ricci.order();
  if (n == 2) {
    // Curvature is pure scalar: R_{ablm} = (R/2)(g_{al} g_{bm} - g_{am} g_{bl}).
    const TensorJet gm = truncate(frame.g, order);
    TensorJet out(n, {IndexPos::Down, IndexPos::Down, IndexPos::Down, IndexPos::Down}, order);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int l = 0; l < n; ++l)
          for (int m = 0; m < n; ++m) {
            Jet t = jet_sub(jet_mul(gm(a, l), gm(b, m)), jet_mul(gm(a, m), gm(b, l)));
            out(a, b, l, m) = jet_scale(jet_mul(scalar, t), 0.5);
          }
    return out;
  }
  TensorJet out = ricci_block(frame, ricci, scalar);
  for (int p = 0; p < out.component_count(); ++p)
    out.flat(p) = jet_add(out.flat(p), weyl_down.flat(p));
  return out;
}

TensorJet cov_derivative(const TensorJet& t, const MetricFrame& frame) {
  if (t.order() < 1) throw JetBudgetError();
  const int n = t.dim();
  const int order = t.order() - 1;
  const TensorJet gm = truncate(frame.gamma, order);
  const TensorJet tt = truncate(t, order);

  std::vector<IndexPos> valence;
  valence.reserve(t.rank() + 1);
  valence.push_back(IndexPos::Down);
  for (IndexPos ip : t.valence()) valence.push_back(ip);
  TensorJet out(n, valence, order);

  const int rank = t.rank();
  std::vector<int> idx(rank);
  for (int p = 0; p < t.component_count(); ++p) {
    t.unflatten(p, idx);
    for (int mu = 0; mu < n; ++mu) {
      Jet s = jet_partial(t.flat(p), mu);
      for (int slot = 0; slot < rank; ++slot) {
        const int held = idx[slot];
        for (int r = 0; r < n; ++r) {
          idx[slot] = r;
          const Jet& comp = tt.at(idx);
          if (t.valence()[slot] == IndexPos::Up)
            s = jet_add(s, jet_mul(gm(held, mu, r), comp));
          else
            s = jet_sub(s, jet_mul(gm(r, mu, held), comp));
        }
        idx[slot] = held;
      }
      std::vector<int> oidx(rank + 1);
      oidx[0] = mu;
      std::copy(idx.begin(), idx.end(), oidx.begin() + 1);
      out.at(oidx) = s;
    }
  }
  return out;
}

CurvatureData compute_curvature(const MetricFrame& frame, int depth) {
  if (depth < 0) depth = 0;
  if (depth > frame.order - 2) throw JetBudgetError();
  CurvatureData d;
  d.riemann_ud = riemann(frame);
  d.riemann_down = lower_index(d.riemann_ud, 0, frame);
  auto [ric, sc] = ricci_and_scalar(frame, d.riemann_ud);
  d.ricci = std::move(ric);
  d.scalar = std::move(sc);
  d.weyl_down = weyl(frame, d.riemann_down, d.ricci, d.scalar);
  d.scale = std::max(frame.g_scale, d.riemann_down.max_abs_value());

  const TensorJet* prev = &d.riemann_down;
  for (int m = 1; m <= depth; ++m) {
    d.grad_riemann_down.push_back(cov_derivative(*prev, frame));
    prev = &d.grad_riemann_down.back();
  }
  if (depth >= 1) d.grad_riemann_ud = cov_derivative(d.riemann_ud, frame);
  if (depth >= 2) d.grad2_riemann_ud = cov_derivative(d.grad_riemann_ud, frame);
  return d;
}

}  // namespace curv
