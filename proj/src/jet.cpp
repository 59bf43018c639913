#include "curv/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

namespace curv {

namespace {

constexpr double kFactorial[] = {1, 1, 2, 6, 24, 120, 720};

// Exponent tuples of fixed total degree, leading exponent decreasing.
void emit_tuples(int dim, int remaining, int slot, MultiIndex& cur,
                 std::vector<MultiIndex>& out) {
  if (slot == dim - 1) {
    cur.exponents[slot] = static_cast<std::uint8_t>(remaining);
    out.push_back(cur);
    cur.exponents[slot] = 0;
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur.exponents[slot] = static_cast<std::uint8_t>(e);
    emit_tuples(dim, remaining - e, slot + 1, cur, out);
  }
  cur.exponents[slot] = 0;
}

const JetSpace& same_space(const Jet& a, const Jet& b) {
  const JetSpace& s = a.space();
  if (&s != &b.space()) throw ShapeError("jet dim/order mismatch");
  return s;
}

}  // namespace

JetSpace::JetSpace(int dim, int order) : dim_(dim), order_(order) {
  for (int d = 0; d <= order; ++d) {
    degree_offset_.push_back(static_cast<int>(indices_.size()));
    MultiIndex cur{};
    cur.degree = d;
    emit_tuples(dim, d, 0, cur, indices_);
  }
  degree_offset_.push_back(static_cast<int>(indices_.size()));

  const int n = size();
  std::vector<std::pair<std::uint64_t, int>> keyed(n);
  for (int p = 0; p < n; ++p) keyed[p] = {indices_[p].packed(), p};
  std::sort(keyed.begin(), keyed.end());
  lookup_keys_.resize(n);
  lookup_pos_.resize(n);
  for (int p = 0; p < n; ++p) {
    lookup_keys_[p] = keyed[p].first;
    lookup_pos_[p] = keyed[p].second;
  }

  mul_.assign(static_cast<std::size_t>(n) * n, -1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (indices_[i].degree + indices_[j].degree > order) continue;
      MultiIndex sum{};
      sum.degree = indices_[i].degree + indices_[j].degree;
      for (int k = 0; k < dim_; ++k)
        sum.exponents[k] =
            static_cast<std::uint8_t>(indices_[i].exponents[k] + indices_[j].exponents[k]);
      mul_[static_cast<std::size_t>(i) * n + j] = position(sum);
    }
  }
}

int JetSpace::position(const MultiIndex& mi) const {
  const std::uint64_t key = mi.packed();
  auto it = std::lower_bound(lookup_keys_.begin(), lookup_keys_.end(), key);
  if (it == lookup_keys_.end() || *it != key) return -1;
  return lookup_pos_[it - lookup_keys_.begin()];
}

const JetSpace& JetSpace::get(int dim, int order) {
  if (dim < 1 || dim > kMaxJetDim)
    throw ShapeError("jet dim " + std::to_string(dim) + " outside [1, " +
                     std::to_string(kMaxJetDim) + "]");
  if (order < 0 || order > kMaxJetOrder)
    throw ShapeError("jet order " + std::to_string(order) + " outside [0, " +
                     std::to_string(kMaxJetOrder) + "]");
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<JetSpace>> registry;
  std::scoped_lock lock(mu);
  auto& slot = registry[{dim, order}];
  if (!slot) slot.reset(new JetSpace(dim, order));
  return *slot;
}

Jet Jet::constant(double value, int dim, int order) {
  Jet r(&JetSpace::get(dim, order));
  r.c_[0] = value;
  return r;
}

Jet Jet::variable(int i, double value, int dim, int order) {
  if (i < 0 || i >= dim)
    throw ShapeError("jet variable index " + std::to_string(i) + " outside dim " +
                     std::to_string(dim));
  Jet r(&JetSpace::get(dim, order));
  r.c_[0] = value;
  if (order >= 1) r.c_[1 + i] = 1.0;  // degree-1 block is e_0 .. e_{dim-1}
  return r;
}

namespace {

MultiIndex make_index(const JetSpace& s, std::span<const int> exponents) {
  if (static_cast<int>(exponents.size()) != s.dim())
    throw ShapeError("exponent tuple length != jet dim");
  MultiIndex mi{};
  for (int k = 0; k < s.dim(); ++k) {
    if (exponents[k] < 0) throw ShapeError("negative exponent");
    mi.exponents[k] = static_cast<std::uint8_t>(exponents[k]);
    mi.degree += exponents[k];
  }
  if (mi.degree > s.order()) throw ShapeError("exponent degree exceeds jet order");
  return mi;
}

}  // namespace

double Jet::coeff(std::span<const int> exponents) const {
  const JetSpace& s = space();
  return c_[s.position(make_index(s, exponents))];
}

double Jet::derivative(std::span<const int> exponents) const {
  const JetSpace& s = space();
  const MultiIndex mi = make_index(s, exponents);
  double fact = 1.0;
  for (int k = 0; k < s.dim(); ++k) fact *= kFactorial[mi.exponents[k]];
  return c_[s.position(mi)] * fact;
}

double Jet::max_abs_coeff(int max_degree) const {
  const JetSpace& s = space();
  const int cap = (max_degree < 0 || max_degree > s.order()) ? s.order() : max_degree;
  double worst = 0.0;
  for (int p = 0; p < s.degree_end(cap); ++p) worst = std::max(worst, std::abs(c_[p]));
  return worst;
}

Jet jet_add(const Jet& a, const Jet& b) {
  same_space(a, b);
  Jet r = a;
  for (int p = 0; p < r.size(); ++p) r.c_[p] += b.c_[p];
  return r;
}

Jet jet_sub(const Jet& a, const Jet& b) {
  same_space(a, b);
  Jet r = a;
  for (int p = 0; p < r.size(); ++p) r.c_[p] -= b.c_[p];
  return r;
}

Jet jet_scale(const Jet& a, double s) {
  Jet r = a;
  for (double& c : r.c_) c *= s;
  return r;
}

Jet jet_mul(const Jet& a, const Jet& b) {
  const JetSpace& s = same_space(a, b);
  Jet out(&s);
  const int order = s.order();
  for (int i = 0; i < s.size(); ++i) {
    const double ai = a.c_[i];
    if (ai == 0.0) continue;
    const int jmax = s.degree_end(order - s.index(i).degree);
    for (int j = 0; j < jmax; ++j) out.c_[s.mul_dest(i, j)] += ai * b.c_[j];
  }
  return out;
}

Jet jet_recip(const Jet& a) {
  const JetSpace& s = a.space();
  if (std::abs(a.value()) < kReciprocalFloor)
    throw DomainError("division by near-zero germ");
  Jet r = Jet::constant(1.0 / a.value(), s.dim(), s.order());
  // Newton doubling: after m steps the series is exact through degree 2^m - 1.
  for (int m = 1; m <= s.order(); m <<= 1) {
    Jet t = jet_mul(a, r);
    for (double& c : t.c_) c = -c;
    t.c_[0] += 2.0;
    r = jet_mul(r, t);
  }
  return r;
}

Jet jet_partial(const Jet& a, int i) {
  const JetSpace& s = a.space();
  if (i < 0 || i >= s.dim()) throw ShapeError("partial index outside dim");
  if (s.order() < 1) throw JetBudgetError();
  const JetSpace& t = JetSpace::get(s.dim(), s.order() - 1);
  Jet out(&t);
  for (int p = 0; p < t.size(); ++p) {
    MultiIndex mi = t.index(p);
    const int ei = mi.exponents[i];
    mi.exponents[i] = static_cast<std::uint8_t>(ei + 1);
    mi.degree += 1;
    out.c_[p] = (ei + 1) * a.c_[s.position(mi)];
  }
  return out;
}

Jet truncate(const Jet& a, int new_order) {
  const JetSpace& s = a.space();
  if (new_order > s.order()) throw ShapeError("cannot truncate a jet upward");
  if (new_order == s.order()) return a;
  const JetSpace& t = JetSpace::get(s.dim(), new_order);
  Jet out(&t);
  std::copy_n(a.c_.begin(), t.size(), out.c_.begin());
  return out;
}

namespace {

// Taylor coefficients f^(k)(v)/k! of the library functions, k <= order.
std::array<double, kMaxJetOrder + 1> series_coeffs(UnivariateFn f, double v, int order) {
  std::array<double, kMaxJetOrder + 1> c{};
  switch (f) {
    case UnivariateFn::Sin: {
      const double cyc[4] = {std::sin(v), std::cos(v), -std::sin(v), -std::cos(v)};
      for (int k = 0; k <= order; ++k) c[k] = cyc[k % 4] / kFactorial[k];
      break;
    }
    case UnivariateFn::Cos: {
      const double cyc[4] = {std::cos(v), -std::sin(v), -std::cos(v), std::sin(v)};
      for (int k = 0; k <= order; ++k) c[k] = cyc[k % 4] / kFactorial[k];
      break;
    }
    case UnivariateFn::Exp: {
      const double e = std::exp(v);
      for (int k = 0; k <= order; ++k) c[k] = e / kFactorial[k];
      break;
    }
    case UnivariateFn::Log: {
      if (v <= 0.0) throw DomainError("log of non-positive germ");
      c[0] = std::log(v);
      double p = 1.0;
      for (int k = 1; k <= order; ++k) {
        p /= v;
        c[k] = ((k % 2 != 0) ? 1.0 : -1.0) * p / k;
      }
      break;
    }
    case UnivariateFn::Sqrt: {
      if (v <= 0.0) throw DomainError("sqrt of non-positive germ");
      double b = std::sqrt(v);  // binom(1/2, k) v^(1/2 - k), built up iteratively
      c[0] = b;
      for (int k = 1; k <= order; ++k) {
        b *= (0.5 - (k - 1)) / (k * v);
        c[k] = b;
      }
      break;
    }
    case UnivariateFn::Sinh: {
      const double cyc[2] = {std::sinh(v), std::cosh(v)};
      for (int k = 0; k <= order; ++k) c[k] = cyc[k % 2] / kFactorial[k];
      break;
    }
    case UnivariateFn::Cosh: {
      const double cyc[2] = {std::cosh(v), std::sinh(v)};
      for (int k = 0; k <= order; ++k) c[k] = cyc[k % 2] / kFactorial[k];
      break;
    }
    case UnivariateFn::Tan: {
      // t' = 1 + t^2 turned into a coefficient recurrence.
      c[0] = std::tan(v);
      if (order >= 1) c[1] = 1.0 + c[0] * c[0];
      for (int k = 1; k + 1 <= order; ++k) {
        double s = 0.0;
        for (int i = 0; i <= k; ++i) s += c[i] * c[k - i];
        c[k + 1] = s / (k + 1);
      }
      break;
    }
    case UnivariateFn::Tanh: {
      // t' = 1 - t^2.
      c[0] = std::tanh(v);
      if (order >= 1) c[1] = 1.0 - c[0] * c[0];
      for (int k = 1; k + 1 <= order; ++k) {
        double s = 0.0;
        for (int i = 0; i <= k; ++i) s += c[i] * c[k - i];
        c[k + 1] = -s / (k + 1);
      }
      break;
    }
  }
  return c;
}

}  // namespace

Jet jet_apply_univariate(UnivariateFn f, const Jet& a) {
  const JetSpace& s = a.space();
  const int order = s.order();
  const auto c = series_coeffs(f, a.value(), order);
  if (order == 0) return Jet::constant(c[0], s.dim(), 0);
  Jet delta = a;
  delta.raw(0) = 0.0;  // (a - a0) is nilpotent, so Horner in it is exact
  Jet r = Jet::constant(c[order], s.dim(), order);
  for (int k = order - 1; k >= 0; --k) {
    r = jet_mul(r, delta);
    r.raw(0) += c[k];
  }
  return r;
}

Jet jet_pow_int(const Jet& a, int n) {
  if (n < 0) return jet_recip(jet_pow_int(a, -n));
  const JetSpace& s = a.space();
  Jet r = Jet::constant(1.0, s.dim(), s.order());
  Jet base = a;
  while (n > 0) {
    if (n & 1) r = jet_mul(r, base);
    n >>= 1;
    if (n) base = jet_mul(base, base);
  }
  return r;
}

}  // namespace curv
