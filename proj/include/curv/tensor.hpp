#pragma once

#include <array>
#include <span>
#include <vector>

#include "curv/jet.hpp"

namespace curv {

enum class IndexPos { Up, Down };

// Dense component grid of jets with a fixed valence.  Component (i0,..,ik)
// lives at the row-major flat slot ((i0*n + i1)*n + ...).
class TensorJet {
 public:
  TensorJet() = default;
  TensorJet(int dim, std::vector<IndexPos> valence, int order);

  bool valid() const { return dim_ > 0; }
  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(valence_.size()); }
  int order() const { return order_; }
  const std::vector<IndexPos>& valence() const { return valence_; }
  int component_count() const { return static_cast<int>(comps_.size()); }

  Jet& flat(int p) { return comps_[p]; }
  const Jet& flat(int p) const { return comps_[p]; }

  Jet& at(std::span<const int> idx) { return comps_[offset(idx)]; }
  const Jet& at(std::span<const int> idx) const { return comps_[offset(idx)]; }

  template <class... I>
  Jet& operator()(I... i) {
    const std::array<int, sizeof...(I)> idx{static_cast<int>(i)...};
    return at(idx);
  }
  template <class... I>
  const Jet& operator()(I... i) const {
    const std::array<int, sizeof...(I)> idx{static_cast<int>(i)...};
    return at(idx);
  }

  double value(std::span<const int> idx) const { return at(idx).value(); }

  // Decompose a flat slot into its index tuple (most significant first).
  void unflatten(int p, std::span<int> idx) const;

  double max_abs_value() const;
  double max_abs_coeff(int max_degree = -1) const;
  std::vector<double> value_array() const;

 private:
  int offset(std::span<const int> idx) const;

  int dim_ = 0;
  int order_ = 0;
  std::vector<IndexPos> valence_;
  std::vector<Jet> comps_;
};

TensorJet truncate(const TensorJet& t, int new_order);

}  // namespace curv
