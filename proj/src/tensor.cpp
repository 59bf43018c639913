#include "curv/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace curv {

TensorJet::TensorJet(int dim, std::vector<IndexPos> valence, int order)
    : dim_(dim), order_(order), valence_(std::move(valence)) {
  if (dim < 1 || dim > kMaxJetDim) throw ShapeError("tensor dim outside [1, 8]");
  std::size_t count = 1;
  for (std::size_t k = 0; k < valence_.size(); ++k) count *= dim_;
  comps_.assign(count, Jet::constant(0.0, dim_, order_));
}

int TensorJet::offset(std::span<const int> idx) const {
  if (static_cast<int>(idx.size()) != rank())
    throw ShapeError("tensor index tuple length != rank");
  int p = 0;
  for (int k = 0; k < rank(); ++k) {
    if (idx[k] < 0 || idx[k] >= dim_)
      throw ShapeError("tensor index " + std::to_string(idx[k]) + " outside dim");
    p = p * dim_ + idx[k];
  }
  return p;
}

void TensorJet::unflatten(int p, std::span<int> idx) const {
  for (int k = rank() - 1; k >= 0; --k) {
    idx[k] = p % dim_;
    p /= dim_;
  }
}

double TensorJet::max_abs_value() const {
  double worst = 0.0;
  for (const Jet& j : comps_) worst = std::max(worst, std::abs(j.value()));
  return worst;
}

double TensorJet::max_abs_coeff(int max_degree) const {
  double worst = 0.0;
  for (const Jet& j : comps_) worst = std::max(worst, j.max_abs_coeff(max_degree));
  return worst;
}

std::vector<double> TensorJet::value_array() const {
  std::vector<double> v(comps_.size());
  for (std::size_t p = 0; p < comps_.size(); ++p) v[p] = comps_[p].value();
  return v;
}

TensorJet truncate(const TensorJet& t, int new_order) {
  TensorJet out(t.dim(), t.valence(), new_order);
  for (int p = 0; p < t.component_count(); ++p) out.flat(p) = truncate(t.flat(p), new_order);
  return out;
}

}  // namespace curv
