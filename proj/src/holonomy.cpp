#include "curv/holonomy.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace curv {

const char* causal_character_name(CausalCharacter c) {
  switch (c) {
    case CausalCharacter::Null: return "null";
    case CausalCharacter::Timelike: return "timelike";
    case CausalCharacter::Spacelike: return "spacelike";
    case CausalCharacter::Zero: return "zero";
  }
  return "zero";
}

namespace {

constexpr double kRankRel = 1e-7;

// Orthonormal basis of the row space; rows of the result span the input rows.
Eigen::MatrixXd row_basis(const Eigen::MatrixXd& rows) {
  if (rows.rows() == 0) return Eigen::MatrixXd(0, rows.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cut = kRankRel * sv(0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cut && sv(i) > 0.0) ++rank;
  return svd.matrixV().leftCols(rank).transpose();
}

}  // namespace

HolonomyReport holonomy_kernel(const MetricFrame& frame, const CurvatureData& data) {
  const int n = frame.g.dim();
  if (!data.grad2_riemann_ud.valid()) throw JetBudgetError();

  // Value matrices M^m_k = T(..., m, k, a, b) for every pair a < b and every
  // derivative-index prefix.
  std::vector<Eigen::MatrixXd> gens;
  double gen_scale = 0.0;
  auto add_generator = [&](const Eigen::MatrixXd& m) {
    const double norm = m.cwiseAbs().maxCoeff();
    gen_scale = std::max(gen_scale, norm);
    if (norm > 1e-12 * std::max(1.0, data.scale)) gens.push_back(m);
  };
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      Eigen::MatrixXd m0(n, n);
      for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu) m0(mu, nu) = data.riemann_ud(mu, nu, a, b).value();
      add_generator(m0);
      for (int c = 0; c < n; ++c) {
        Eigen::MatrixXd m1(n, n);
        for (int mu = 0; mu < n; ++mu)
          for (int nu = 0; nu < n; ++nu)
            m1(mu, nu) = data.grad_riemann_ud(c, mu, nu, a, b).value();
        add_generator(m1);
      }
      for (int d = 0; d < n; ++d)
        for (int c = 0; c < n; ++c) {
          Eigen::MatrixXd m2(n, n);
          for (int mu = 0; mu < n; ++mu)
            for (int nu = 0; nu < n; ++nu)
              m2(mu, nu) = data.grad2_riemann_ud(d, c, mu, nu, a, b).value();
          add_generator(m2);
        }
    }

  HolonomyReport rep;
  rep.generator_count = static_cast<int>(gens.size());

  // Commutator closure on the flattened span, capped at n(n-1)/2 sweeps.
  Eigen::MatrixXd flat(gens.size(), n * n);
  for (size_t i = 0; i < gens.size(); ++i)
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) flat(static_cast<int>(i), r * n + c) = gens[i](r, c);
  Eigen::MatrixXd basis = row_basis(flat);
  for (int sweep = 0; sweep < n * (n - 1) / 2; ++sweep) {
    const int d = static_cast<int>(basis.rows());
    if (d == 0) break;
    std::vector<Eigen::MatrixXd> mats(d);
    for (int i = 0; i < d; ++i) {
      mats[i].resize(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) mats[i](r, c) = basis(i, r * n + c);
    }
    Eigen::MatrixXd grown(d + d * (d - 1) / 2, n * n);
    grown.topRows(d) = basis;
    int row = d;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        const Eigen::MatrixXd comm = mats[i] * mats[j] - mats[j] * mats[i];
        for (int r = 0; r < n; ++r)
          for (int c = 0; c < n; ++c) grown(row, r * n + c) = comm(r, c);
        ++row;
      }
    Eigen::MatrixXd next = row_basis(grown);
    if (next.rows() == basis.rows()) {
      basis = next;
      break;
    }
    basis = next;
  }
  rep.algebra_dim = static_cast<int>(basis.rows());

  // Tangent kernel: common nullspace of all generators via one stacked SVD.
  Eigen::MatrixXd g_val(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g_val(i, j) = frame.g(i, j).value();

  Eigen::MatrixXd kernel;  // columns = kernel basis vectors
  if (gens.empty()) {
    kernel = Eigen::MatrixXd::Identity(n, n);
  } else {
    Eigen::MatrixXd stacked(static_cast<int>(gens.size()) * n, n);
    for (size_t i = 0; i < gens.size(); ++i)
      stacked.middleRows(static_cast<int>(i) * n, n) = gens[i];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = sv.size() ? kRankRel * sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > cut && sv(i) > 0.0) ++rank;
    kernel = svd.matrixV().rightCols(n - rank);
  }
  rep.tangent_kernel_dim = static_cast<int>(kernel.cols());
  for (int c = 0; c < kernel.cols(); ++c) {
    Eigen::VectorXd v = kernel.col(c);
    v.normalize();
    // Fixed sign: first nonzero component positive, for reproducible output.
    for (int i = 0; i < n; ++i) {
      if (std::abs(v(i)) > 1e-9) {
        if (v(i) < 0.0) v = -v;
        break;
      }
    }
    const double q = v.dot(g_val * v);
    CausalCharacter ch = CausalCharacter::Spacelike;
    if (std::abs(q) <= 1e-7)
      ch = CausalCharacter::Null;
    else if (q < 0.0)
      ch = CausalCharacter::Timelike;
    rep.kernel_basis.emplace_back(v.data(), v.data() + n);
    rep.characters.push_back(ch);
  }

  // A null direction exists inside the kernel subspace iff the restricted
  // metric Gram form is singular or indefinite.
  if (kernel.cols() > 0) {
    Eigen::MatrixXd gram = kernel.transpose() * g_val * kernel;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram,
                                                      Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double lam_scale = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    const double eps = 1e-7 * std::max(1.0, lam_scale);
    rep.kernel_contains_null = ev(0) <= eps && ev(ev.size() - 1) >= -eps;
  }

  // Induced action on symmetric 2-tensors: (M h)_{mk} = -M^r_m h_{rk}
  //                                                    -M^r_k h_{mr}.
  const int N2 = n * (n + 1) / 2;
  std::vector<std::pair<int, int>> spairs;
  spairs.reserve(N2);
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q) spairs.push_back({p, q});
  auto spair_pos = [&](int p, int q) {
    if (p > q) std::swap(p, q);
    return p * n + q - p * (p + 1) / 2;
  };
  int srank = 0;
  if (!gens.empty()) {
    Eigen::MatrixXd sstack(static_cast<int>(gens.size()) * N2, N2);
    for (size_t gi = 0; gi < gens.size(); ++gi) {
      const Eigen::MatrixXd& M = gens[gi];
      Eigen::MatrixXd act = Eigen::MatrixXd::Zero(N2, N2);
      for (int col = 0; col < N2; ++col) {
        const auto [p, q] = spairs[col];
        // Basis element h = e_p (x) e_q + e_q (x) e_p.
        for (int m = 0; m < n; ++m)
          for (int k = m; k < n; ++k) {
            double x = 0.0;
            auto h = [&](int i, int j) {
              return ((i == p && j == q) || (i == q && j == p)) ? 1.0 : 0.0;
            };
            for (int r = 0; r < n; ++r) x += -M(r, m) * h(r, k) - M(r, k) * h(m, r);
            act(spair_pos(m, k), col) = x;
          }
      }
      sstack.middleRows(static_cast<int>(gi) * N2, N2) = act;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sstack);
    const auto& sv = svd.singularValues();
    const double cut = sv.size() ? kRankRel * sv(0) : 0.0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > cut && sv(i) > 0.0) ++srank;
  }
  const int sym2_kernel = N2 - srank;
  // The metric itself always sits in this kernel by antisymmetry of the
  // lowered generators; report the quotient.
  rep.sym2_kernel_dim_mod_g = std::max(0, sym2_kernel - 1);
  return rep;
}

}  // namespace curv
