#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "curv/errors.hpp"

namespace curv {

inline constexpr int kMaxJetDim = 8;
inline constexpr int kMaxJetOrder = 6;

// Near-zero guard for dividing by a jet's constant part.
inline constexpr double kReciprocalFloor = 1e-12;

// One partial-derivative slot: exponent alpha_i per coordinate.
struct MultiIndex {
  std::array<std::uint8_t, kMaxJetDim> exponents{};
  int degree = 0;

  std::uint64_t packed() const {
    std::uint64_t p = 0;
    for (int i = kMaxJetDim - 1; i >= 0; --i) p = (p << 8) | exponents[i];
    return p;
  }
};

// Shared layout tables for all jets of one (dim, order): the multi-index
// enumeration, its inverse lookup, and the truncated-product destination
// table.  Enumeration is graded: ascending total degree; within a degree,
// exponent tuples ordered with the leading exponent decreasing, so the
// degree-1 block lists e_0 .. e_{dim-1} in coordinate order.  Truncation to a
// lower order is then a prefix copy.
class JetSpace {
 public:
  static const JetSpace& get(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(indices_.size()); }
  const MultiIndex& index(int pos) const { return indices_[pos]; }
  int position(const MultiIndex& mi) const;  // -1 when absent
  // First enumeration slot of the given total degree.
  int degree_begin(int degree) const { return degree_offset_[degree]; }
  int degree_end(int degree) const { return degree_offset_[degree + 1]; }
  // Destination slot of index(i) + index(j); only valid when the combined
  // degree fits, which callers ensure via degree_end().
  int mul_dest(int i, int j) const { return mul_[i * size() + j]; }

  JetSpace(const JetSpace&) = delete;
  JetSpace& operator=(const JetSpace&) = delete;

 private:
  JetSpace(int dim, int order);

  int dim_;
  int order_;
  std::vector<MultiIndex> indices_;
  std::vector<int> degree_offset_;
  std::vector<int> mul_;
  std::vector<std::uint64_t> lookup_keys_;  // sorted packed keys
  std::vector<int> lookup_pos_;
};

// Truncated multivariate Taylor expansion of one scalar quantity.  The
// coefficient stored for alpha is d^alpha f / alpha!, so arithmetic on jets
// is plain truncated power-series arithmetic.
class Jet {
 public:
  Jet() = default;  // empty placeholder; any use throws

  static Jet constant(double value, int dim, int order);
  static Jet variable(int i, double value, int dim, int order);

  bool valid() const { return space_ != nullptr; }
  int dim() const { return space().dim(); }
  int order() const { return space().order(); }
  int size() const { return static_cast<int>(c_.size()); }
  double value() const { return c_.empty() ? 0.0 : c_[0]; }

  // Taylor coefficient d^alpha f / alpha! for the given exponent tuple.
  double coeff(std::span<const int> exponents) const;
  double coeff(std::initializer_list<int> exponents) const {
    return coeff(std::span<const int>(exponents.begin(), exponents.size()));
  }
  // Plain partial derivative d^alpha f (coefficient times alpha!).
  double derivative(std::span<const int> exponents) const;
  double derivative(std::initializer_list<int> exponents) const {
    return derivative(std::span<const int>(exponents.begin(), exponents.size()));
  }

  std::span<const double> coeffs() const { return c_; }
  double raw(int pos) const { return c_[pos]; }
  double& raw(int pos) { return c_[pos]; }
  double max_abs_coeff(int max_degree = -1) const;

  const JetSpace& space() const {
    if (!space_) throw ShapeError("use of an empty jet");
    return *space_;
  }

 private:
  explicit Jet(const JetSpace* s) : space_(s), c_(s->size(), 0.0) {}

  const JetSpace* space_ = nullptr;
  std::vector<double> c_;

  friend Jet jet_add(const Jet&, const Jet&);
  friend Jet jet_sub(const Jet&, const Jet&);
  friend Jet jet_scale(const Jet&, double);
  friend Jet jet_mul(const Jet&, const Jet&);
  friend Jet jet_recip(const Jet&);
  friend Jet jet_partial(const Jet&, int);
  friend Jet truncate(const Jet&, int);
};

enum class UnivariateFn { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh };

Jet jet_add(const Jet& a, const Jet& b);
Jet jet_sub(const Jet& a, const Jet& b);
Jet jet_scale(const Jet& a, double s);
Jet jet_mul(const Jet& a, const Jet& b);
Jet jet_recip(const Jet& a);
Jet jet_partial(const Jet& a, int i);
Jet jet_apply_univariate(UnivariateFn f, const Jet& a);
Jet jet_pow_int(const Jet& a, int n);
Jet truncate(const Jet& a, int new_order);

inline Jet operator+(const Jet& a, const Jet& b) { return jet_add(a, b); }
inline Jet operator-(const Jet& a, const Jet& b) { return jet_sub(a, b); }
inline Jet operator*(const Jet& a, const Jet& b) { return jet_mul(a, b); }
inline Jet operator*(const Jet& a, double s) { return jet_scale(a, s); }
inline Jet operator*(double s, const Jet& a) { return jet_scale(a, s); }
inline Jet operator/(const Jet& a, const Jet& b) { return jet_mul(a, jet_recip(b)); }
inline Jet operator/(double s, const Jet& b) { return jet_scale(jet_recip(b), s); }
inline Jet operator/(const Jet& a, double s) { return jet_scale(a, 1.0 / s); }
inline Jet operator-(const Jet& a) { return jet_scale(a, -1.0); }
inline Jet operator+(const Jet& a, double s) {
  Jet r = a;
  r.raw(0) += s;
  return r;
}
inline Jet operator+(double s, const Jet& a) { return a + s; }
inline Jet operator-(const Jet& a, double s) { return a + (-s); }
inline Jet operator-(double s, const Jet& a) { return jet_scale(a, -1.0) + s; }

inline Jet sin(const Jet& a) { return jet_apply_univariate(UnivariateFn::Sin, a); }
inline Jet cos(const Jet& a) { return jet_apply_univariate(UnivariateFn::Cos, a); }
inline Jet tan(const Jet& a) { return jet_apply_univariate(UnivariateFn::Tan, a); }
inline Jet exp(const Jet& a) { return jet_apply_univariate(UnivariateFn::Exp, a); }
inline Jet log(const Jet& a) { return jet_apply_univariate(UnivariateFn::Log, a); }
inline Jet sqrt(const Jet& a) { return jet_apply_univariate(UnivariateFn::Sqrt, a); }
inline Jet sinh(const Jet& a) { return jet_apply_univariate(UnivariateFn::Sinh, a); }
inline Jet cosh(const Jet& a) { return jet_apply_univariate(UnivariateFn::Cosh, a); }
inline Jet tanh(const Jet& a) { return jet_apply_univariate(UnivariateFn::Tanh, a); }
inline Jet pow(const Jet& a, int n) { return jet_pow_int(a, n); }

}  // namespace curv
