#include "curv/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "curv/errors.hpp"
#include "curv/jet.hpp"

namespace curv {

namespace {

bool references_coord(const ExprPtr& e, int index) {
  if (!e) return false;
  if (e->kind == ExprKind::Coord) return e->coord == index;
  return references_coord(e->a, index) || references_coord(e->b, index);
}

// Term with its sign kept separate so sums can print as subtractions.
struct SignedExpr {
  ExprPtr e;
  bool negative = false;
};

ExprPtr signed_sum(const std::vector<SignedExpr>& terms) {
  ExprPtr acc;
  for (const SignedExpr& t : terms) {
    if (!t.e) continue;
    if (!acc)
      acc = t.negative ? ast::neg(t.e) : t.e;
    else
      acc = t.negative ? ast::sub(acc, t.e) : ast::add(acc, t.e);
  }
  return acc;
}

// c u^k with |c| in the expression and the sign reported separately.
SignedExpr monomial_in(double c, int k, int coord_index, const std::string& coord_name) {
  SignedExpr out;
  out.negative = c < 0.0;
  const double mag = std::abs(c);
  ExprPtr factor;
  if (k == 1)
    factor = ast::coord(coord_index, coord_name);
  else if (k > 1)
    factor = ast::pow(ast::coord(coord_index, coord_name), k);
  if (!factor)
    out.e = ast::number(mag);
  else
    out.e = mag == 1.0 ? factor : ast::mul(ast::number(mag), factor);
  return out;
}

SignedExpr poly_in(const std::vector<double>& coeffs, int coord_index,
                   const std::string& coord_name) {
  std::vector<SignedExpr> terms;
  for (size_t k = 0; k < coeffs.size(); ++k)
    if (coeffs[k] != 0.0)
      terms.push_back(monomial_in(coeffs[k], int(k), coord_index, coord_name));
  if (terms.empty()) return {};
  if (terms.size() == 1) return terms.front();
  return {signed_sum(terms), false};
}

// -2H with the trivial 1/2 factor folded away so emitted files stay readable.
ExprPtr minus_two_h(const ExprPtr& h) {
  if (!h) return nullptr;
  if (h->kind == ExprKind::Mul && h->a && h->a->kind == ExprKind::Number &&
      h->a->number == 0.5)
    return ast::neg(h->b);
  if (h->kind == ExprKind::Div && h->b && h->b->kind == ExprKind::Number &&
      h->b->number == 2.0)
    return ast::neg(h->a);
  return ast::neg(ast::mul(ast::number(2.0), h));
}

std::string default_transverse_name(int i) {
  static const char* names[] = {"x", "y", "z", "w", "p", "q"};
  if (i < int(sizeof(names) / sizeof(names[0]))) return names[i];
  return "x" + std::to_string(i);
}

}  // namespace

MetricSpec brinkmann_build(const BrinkmannParams& p) {
  if (p.transverse_dim < 0 || p.transverse_dim > kMaxJetDim - 2)
    throw DomainError("transverse dimension out of range");
  const int nt = p.transverse_dim;

  MetricSpec spec;
  spec.name = p.name;
  spec.dim = nt + 2;
  spec.coords = {"u", "v"};
  for (int i = 0; i < nt; ++i)
    spec.coords.push_back(i < int(p.transverse_coords.size())
                              ? p.transverse_coords[size_t(i)]
                              : default_transverse_name(i));
  spec.domain.assign(size_t(spec.dim), {-1.0, 1.0});
  if (!p.domain.empty()) {
    if (int(p.domain.size()) != spec.dim)
      throw DomainError("domain list does not match dimension");
    spec.domain = p.domain;
  }

  auto check_v = [](const ExprPtr& e) {
    if (references_coord(e, 1))
      throw DomainError("wave data must not depend on v");
  };
  check_v(p.h);
  for (const ExprPtr& e : p.w) check_v(e);
  for (const auto& [ij, e] : p.transverse) check_v(e);

  spec.components[{0, 1}] = ast::neg(ast::number(1.0));
  if (ExprPtr guu = minus_two_h(p.h)) spec.components[{0, 0}] = guu;
  for (size_t i = 0; i < p.w.size(); ++i)
    if (p.w[i]) spec.components[{0, 2 + int(i)}] = ast::neg(p.w[i]);
  if (p.transverse.empty()) {
    for (int i = 0; i < nt; ++i)
      spec.components[{2 + i, 2 + i}] = ast::number(1.0);
  } else {
    for (const auto& [ij, e] : p.transverse) {
      if (ij.first > ij.second || ij.first < 0 || ij.second >= nt)
        throw DomainError("transverse component index out of range");
      spec.components[{2 + ij.first, 2 + ij.second}] = e;
    }
  }
  return spec;
}

CatalogEntry plane_wave(const PlaneWaveProfile& profile, const std::string& name) {
  const int nt = profile.transverse_dim;
  int deg = -1;  // -1 encodes A identically zero
  bool trace_zero = true;
  std::vector<double> trace;
  for (const auto& [ij, coeffs] : profile.entries) {
    if (ij.first > ij.second || ij.first < 0 || ij.second >= nt)
      throw DomainError("profile index out of range");
    for (size_t k = 0; k < coeffs.size(); ++k) {
      if (coeffs[k] == 0.0) continue;
      deg = std::max(deg, int(k));
      if (ij.first == ij.second) {
        if (trace.size() <= k) trace.resize(k + 1, 0.0);
        trace[k] += coeffs[k];
      }
    }
  }
  for (double c : trace) trace_zero = trace_zero && c == 0.0;
  if (deg > kMaxJetOrder - 2) throw JetBudgetError();

  BrinkmannParams params;
  params.name = name;
  params.transverse_dim = nt;
  std::vector<SignedExpr> terms;
  for (const auto& [ij, coeffs] : profile.entries) {
    SignedExpr poly = poly_in(coeffs, 0, "u");
    if (!poly.e) continue;
    const auto [i, j] = ij;
    ExprPtr t = poly.e;
    if (i != j) t = ast::mul(ast::number(2.0), t);
    t = ast::mul(t, ast::coord(2 + i, default_transverse_name(i)));
    t = ast::mul(t, ast::coord(2 + j, default_transverse_name(j)));
    terms.push_back({t, poly.negative});
  }
  if (ExprPtr s = signed_sum(terms)) params.h = ast::mul(ast::number(0.5), s);

  CatalogEntry entry;
  entry.name = name;
  entry.spec = brinkmann_build(params);
  CatalogExpectation& x = entry.expect;
  x.constant_curvature = deg < 0;
  x.symmetric = deg <= 0;
  x.two_symmetric = deg <= 1;
  x.semisymmetric = true;
  x.ricci_flat = trace_zero;
  x.generic = false;
  x.min_k_symmetric = deg >= 0 ? deg + 1 : 1;
  return entry;
}

MetricSpec direct_product(const std::vector<MetricSpec>& blocks, const std::string& name) {
  if (blocks.empty()) throw DomainError("direct product of zero blocks");
  if (blocks.size() == 1) {
    MetricSpec out = blocks.front();
    if (!name.empty()) out.name = name;
    return out;
  }

  MetricSpec out;
  out.dim = 0;
  for (const MetricSpec& b : blocks) out.dim += b.dim;
  if (out.dim > kMaxJetDim) throw DomainError("product dimension out of range");

  if (!name.empty()) {
    out.name = name;
  } else {
    for (size_t k = 0; k < blocks.size(); ++k)
      out.name += (k ? "-x-" : "") + blocks[k].name;
  }

  // First assemble the full coordinate list, then remap block expressions
  // against it.
  std::set<std::string> used;
  std::vector<std::vector<int>> index_maps(blocks.size());
  std::vector<std::map<std::string, std::string>> param_renames(blocks.size());
  int offset = 0;
  for (size_t k = 0; k < blocks.size(); ++k) {
    const MetricSpec& b = blocks[k];
    index_maps[k].resize(size_t(b.dim));
    for (int c = 0; c < b.dim; ++c) {
      std::string nn = b.coords[size_t(c)];
      if (used.count(nn)) nn += "_b" + std::to_string(k);
      if (used.count(nn)) throw DomainError("coordinate rename collision: " + nn);
      used.insert(nn);
      index_maps[k][size_t(c)] = offset + c;
      out.coords.push_back(nn);
      out.domain.push_back(b.domain[size_t(c)]);
    }
    for (const auto& [pname, value] : b.params) {
      std::string nn = pname;
      auto it = out.params.find(nn);
      if (it != out.params.end() && it->second != value) {
        nn += "_b" + std::to_string(k);
        if (out.params.count(nn)) throw DomainError("parameter rename collision: " + nn);
        param_renames[k][pname] = nn;
      }
      out.params[nn] = value;
    }
    offset += b.dim;
  }

  offset = 0;
  for (size_t k = 0; k < blocks.size(); ++k) {
    const MetricSpec& b = blocks[k];
    for (const auto& [ij, e] : b.components) {
      ExprPtr moved = remap_coords(e, index_maps[k], out.coords);
      if (!param_renames[k].empty()) moved = remap_params(moved, param_renames[k]);
      out.components[{ij.first + offset, ij.second + offset}] = moved;
    }
    offset += b.dim;
  }
  return out;
}

MetricSpec flat_extension(const MetricSpec& base, const std::vector<FlatDim>& dims) {
  if (dims.empty()) return base;

  int minus = 0;
  for (const FlatDim& d : dims) {
    if (d.sign != 1 && d.sign != -1) throw DomainError("flat extension sign must be +-1");
    if (d.sign < 0) ++minus;
  }
  Point mid(size_t(base.dim));
  for (int c = 0; c < base.dim; ++c)
    mid[size_t(c)] = 0.5 * (base.domain[size_t(c)][0] + base.domain[size_t(c)][1]);
  const MetricEvaluation eval = evaluate_metric(base, mid, 0);
  if (eval.negative_eigenvalues + minus > 1)
    throw DomainError("flat extension would leave more than one timelike direction");

  MetricSpec flat;
  flat.name = "flat";
  flat.dim = int(dims.size());
  for (const FlatDim& d : dims) {
    flat.coords.push_back(d.coord);
    flat.domain.push_back(d.domain);
  }
  for (size_t i = 0; i < dims.size(); ++i)
    flat.components[{int(i), int(i)}] = dims[i].sign < 0
                                            ? ast::neg(ast::number(1.0))
                                            : ast::number(1.0);
  MetricSpec out = direct_product({flat, base}, base.name + "-ext");
  return out;
}

namespace {

MetricSpec minkowski(int dim) {
  MetricSpec spec;
  spec.name = "minkowski" + std::to_string(dim);
  spec.dim = dim;
  spec.coords = {"t"};
  for (int i = 1; i < dim; ++i) spec.coords.push_back(default_transverse_name(i - 1));
  spec.domain.assign(size_t(dim), {-1.0, 1.0});
  spec.components[{0, 0}] = ast::neg(ast::number(1.0));
  for (int i = 1; i < dim; ++i) spec.components[{i, i}] = ast::number(1.0);
  return spec;
}

MetricSpec sphere2(double radius2, const std::string& name) {
  MetricSpec spec;
  spec.name = name;
  spec.dim = 2;
  spec.coords = {"th", "ph"};
  spec.domain = {{0.4, 2.7416}, {-1.0, 1.0}};
  ExprPtr sin2 = ast::pow(ast::call(UnivariateFn::Sin, ast::coord(0, "th")), 2);
  if (radius2 == 1.0) {
    spec.components[{0, 0}] = ast::number(1.0);
    spec.components[{1, 1}] = sin2;
  } else {
    spec.components[{0, 0}] = ast::number(radius2);
    spec.components[{1, 1}] = ast::mul(ast::number(radius2), sin2);
  }
  return spec;
}

MetricSpec hyperbolic2() {
  MetricSpec spec;
  spec.name = "hyperbolic2";
  spec.dim = 2;
  spec.coords = {"x", "y"};
  spec.domain = {{-1.0, 1.0}, {0.5, 2.0}};
  ExprPtr wt = ast::div(ast::number(1.0), ast::pow(ast::coord(1, "y"), 2));
  spec.components[{0, 0}] = wt;
  spec.components[{1, 1}] = wt;
  return spec;
}

MetricSpec de_sitter4() {
  MetricSpec spec;
  spec.name = "de-sitter4";
  spec.dim = 4;
  spec.coords = {"t", "x", "y", "z"};
  spec.domain.assign(4, {-1.0, 1.0});
  spec.components[{0, 0}] = ast::neg(ast::number(1.0));
  ExprPtr warp = ast::call(UnivariateFn::Exp, ast::mul(ast::number(2.0), ast::coord(0, "t")));
  for (int i = 1; i < 4; ++i) spec.components[{i, i}] = warp;
  return spec;
}

MetricSpec schwarzschild() {
  MetricSpec spec;
  spec.name = "schwarzschild";
  spec.dim = 4;
  spec.coords = {"t", "r", "th", "ph"};
  spec.params["m"] = 1.0;
  spec.domain = {{-1.0, 1.0}, {3.0, 10.0}, {0.4, 2.7416}, {-1.0, 1.0}};
  ExprPtr lapse = ast::sub(ast::number(1.0),
                           ast::div(ast::mul(ast::number(2.0), ast::param("m")),
                                    ast::coord(1, "r")));
  spec.components[{0, 0}] = ast::neg(lapse);
  spec.components[{1, 1}] = ast::div(ast::number(1.0), lapse);
  spec.components[{2, 2}] = ast::pow(ast::coord(1, "r"), 2);
  spec.components[{3, 3}] =
      ast::mul(ast::pow(ast::coord(1, "r"), 2),
               ast::pow(ast::call(UnivariateFn::Sin, ast::coord(2, "th")), 2));
  return spec;
}

MetricSpec curved_transverse_brinkmann() {
  BrinkmannParams p;
  p.name = "brinkmann-curved-transverse";
  p.transverse_dim = 2;
  p.transverse_coords = {"th", "ph"};
  ExprPtr shrink = ast::div(ast::number(2.0),
                            ast::add(ast::coord(0, "u"), ast::number(3.0)));
  p.transverse[{0, 0}] = shrink;
  p.transverse[{1, 1}] =
      ast::div(ast::mul(ast::number(2.0),
                        ast::pow(ast::call(UnivariateFn::Sin, ast::coord(2, "th")), 2)),
               ast::add(ast::coord(0, "u"), ast::number(3.0)));
  p.domain = {{-1.0, 1.0}, {-1.0, 1.0}, {0.4, 2.7416}, {-1.0, 1.0}};
  return brinkmann_build(p);
}

CatalogExpectation expect(bool cc, bool sym, bool two_sym, bool semi, bool rf,
                          bool gen, int min_k, bool verified = true) {
  CatalogExpectation x;
  x.verified = verified;
  x.constant_curvature = cc;
  x.symmetric = sym;
  x.two_symmetric = two_sym;
  x.semisymmetric = semi;
  x.ricci_flat = rf;
  x.generic = gen;
  x.min_k_symmetric = min_k;
  return x;
}

std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> cat;
  auto push = [&](std::string summary, MetricSpec spec, CatalogExpectation x) {
    CatalogEntry e;
    e.name = spec.name;
    e.summary = std::move(summary);
    e.spec = std::move(spec);
    e.expect = x;
    cat.push_back(std::move(e));
  };

  for (int d = 2; d <= 5; ++d)
    push("flat spacetime, dimension " + std::to_string(d), minkowski(d),
         expect(true, true, true, true, true, false, 1));
  push("unit round sphere", sphere2(1.0, "sphere2"),
       expect(true, true, true, true, false, true, 1));
  push("round sphere of radius 2", sphere2(4.0, "sphere2-r2"),
       expect(true, true, true, true, false, true, 1));
  push("hyperbolic upper half-plane", hyperbolic2(),
       expect(true, true, true, true, false, true, 1));
  push("exponentially expanding constant-curvature spacetime", de_sitter4(),
       expect(true, true, true, true, false, true, 1));
  {
    MetricSpec es = flat_extension(sphere2(1.0, "sphere2"),
                                   {{"t", -1, {-1.0, 1.0}}});
    es.name = "einstein-static";
    push("product of a timelike line with the unit sphere", std::move(es),
         expect(false, true, true, true, false, false, 1));
  }
  push("vacuum black hole exterior", schwarzschild(),
       expect(false, false, false, false, true, true, 0));

  {
    PlaneWaveProfile a;
    a.entries[{0, 0}] = {1.0};
    a.entries[{1, 1}] = {-1.0};
    CatalogEntry e = plane_wave(a, "plane-wave-constant");
    e.summary = "plane wave with constant traceless profile";
    cat.push_back(std::move(e));
  }
  {
    PlaneWaveProfile a;
    a.entries[{0, 0}] = {0.0, 1.0};
    a.entries[{1, 1}] = {0.0, -1.0};
    CatalogEntry e = plane_wave(a, "plane-wave-linear");
    e.summary = "plane wave with linear profile, the proper two-symmetric exemplar";
    cat.push_back(std::move(e));
  }
  {
    PlaneWaveProfile a;
    a.entries[{0, 0}] = {0.0, 0.0, 1.0};
    a.entries[{1, 1}] = {0.0, 0.0, -1.0};
    CatalogEntry e = plane_wave(a, "plane-wave-quadratic");
    e.summary = "plane wave with quadratic profile, three-symmetric only";
    cat.push_back(std::move(e));
  }

  push("product of a flat Lorentzian plane with the unit sphere",
       direct_product({minkowski(2), sphere2(1.0, "sphere2")}, "mink2-x-sphere2"),
       expect(false, true, true, true, false, false, 1));
  {
    PlaneWaveProfile a;
    a.transverse_dim = 1;
    a.entries[{0, 0}] = {0.0, 1.0};
    MetricSpec pw3 = plane_wave(a, "pw3").spec;
    push("product of a linear-profile wave with the unit sphere",
         direct_product({std::move(pw3), sphere2(1.0, "sphere2")}, "pw3-x-sphere2"),
         expect(false, false, true, true, false, false, 2));
  }

  push("wave ansatz with u-shrinking spherical transverse geometry",
       curved_transverse_brinkmann(),
       expect(false, false, false, false, false, false, 0, false));

  return cat;
}

}  // namespace

const std::vector<CatalogEntry>& builtin_metrics() {
  static const std::vector<CatalogEntry> cat = build_catalog();
  return cat;
}

const CatalogEntry* find_catalog(const std::string& name) {
  for (const CatalogEntry& e : builtin_metrics())
    if (e.name == name) return &e;
  return nullptr;
}

}  // namespace curv
