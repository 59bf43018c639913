#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "curv/metric.hpp"

namespace curv {

// Ground-truth classification recorded with a catalog entry.  verified = false
// marks exploratory entries whose values are reported but not asserted by the
// regression tests.  min_k_symmetric is the smallest k with grad^k Riemann = 0
// on the whole domain; 0 means no such k.
struct CatalogExpectation {
  bool verified = true;
  bool constant_curvature = false;
  bool symmetric = false;
  bool two_symmetric = false;
  bool semisymmetric = false;
  bool ricci_flat = false;
  bool generic = false;
  int min_k_symmetric = 0;
};

struct CatalogEntry {
  std::string name;
  std::string summary;
  MetricSpec spec;
  CatalogExpectation expect;
};

// Double-null wave-type ansatz: ds2 = -2 du (dv + H du + W_i dx^i) + g_ij
// dx^i dx^j with everything independent of v.  Coordinates come out ordered
// (u, v, x...); transverse component keys are 0-based with i <= j and an empty
// map means the flat identity block.  Expressions reference coordinates by
// their final indices (u = 0, v = 1, x_i = 2 + i).
struct BrinkmannParams {
  std::string name = "brinkmann";
  int transverse_dim = 2;
  std::vector<std::string> transverse_coords;  // default x, y, z, ...
  ExprPtr h;                                   // g_uu = -2H; null means H = 0
  std::vector<ExprPtr> w;                      // g_{u x_i} = -W_i; null entries = 0
  std::map<std::pair<int, int>, ExprPtr> transverse;
  std::vector<std::array<double, 2>> domain;   // full-spec domains; empty = [-1,1]
};

// Throws DomainError when any expression references v.
MetricSpec brinkmann_build(const BrinkmannParams& p);

// Symmetric profile matrix A_ij(u) as polynomial coefficient lists, constant
// term first; keys have i <= j.
struct PlaneWaveProfile {
  int transverse_dim = 2;
  std::map<std::pair<int, int>, std::vector<double>> entries;
};

// Plane wave with H = (1/2) A_ij(u) x^i x^j, W = 0 and flat transverse block.
// The recorded expectation follows deg A: symmetric iff deg 0, two-symmetric
// iff deg <= 1, k-symmetric from k = deg + 1.  Throws JetBudgetError when the
// profile degree exceeds what the jet order budget can classify.
CatalogEntry plane_wave(const PlaneWaveProfile& profile,
                        const std::string& name = "plane-wave");

// Block-diagonal combination; colliding coordinate or parameter names in
// block k are renamed with suffix _b<k>.
MetricSpec direct_product(const std::vector<MetricSpec>& blocks,
                          const std::string& name = "");

struct FlatDim {
  std::string coord;
  int sign = 1;  // +1 spacelike, -1 timelike
  std::array<double, 2> domain{-1.0, 1.0};
};

// Direct product with a flat block in the leading coordinates.  Throws
// DomainError when the combined signature would carry more than one minus.
MetricSpec flat_extension(const MetricSpec& base, const std::vector<FlatDim>& dims);

const std::vector<CatalogEntry>& builtin_metrics();
const CatalogEntry* find_catalog(const std::string& name);  // null when absent

}  // namespace curv
