#include <cmath>
#include <set>
#include <vector>

#include "curv/catalog.hpp"
#include "curv/invariants.hpp"
#include "doctest.h"

using namespace curv;

namespace {

Point domain_mid(const MetricSpec& spec) {
  Point p(spec.dim);
  for (int i = 0; i < spec.dim; ++i)
    p[i] = 0.5 * (spec.domain[i][0] + spec.domain[i][1]);
  return p;
}

struct Setup {
  MetricFrame frame;
  CurvatureData data;
};

Setup at_mid(const std::string& name, int order = 4, int depth = 1) {
  const CatalogEntry* e = find_catalog(name);
  REQUIRE(e != nullptr);
  Setup s;
  s.frame = make_frame(e->spec, domain_mid(e->spec), order);
  s.data = compute_curvature(s.frame, depth);
  return s;
}

const InvariantEntry& entry(const InvariantReport& rep, const std::string& name) {
  for (const InvariantEntry& e : rep.entries)
    if (e.name == name) return e;
  REQUIRE_MESSAGE(false, "missing invariant ", name);
  static InvariantEntry dummy;
  return dummy;
}

}  // namespace

TEST_CASE("zero test combines absolute and relative tolerance") {
  ToleranceConfig tol;  // 1e-10 abs, 1e-8 rel
  CHECK(zero_test(0.0, 1.0, tol));
  CHECK(zero_test(5e-11, 0.0, tol));
  CHECK(!zero_test(2e-10, 0.0, tol));
  CHECK(zero_test(5e-7, 100.0, tol));   // inside 1e-8 * 100 + 1e-10
  CHECK(!zero_test(2e-6, 100.0, tol));
  ToleranceConfig loose{1e-3, 1e-2};
  CHECK(zero_test(5e-3, 0.4, loose));
}

TEST_CASE("report lists each invariant once in a fixed order") {
  Setup s = at_mid("schwarzschild");
  InvariantReport rep = scalar_invariants(s.frame, s.data);
  CHECK(rep.entries.size() == 18);
  std::set<std::string> names;
  for (const InvariantEntry& e : rep.entries) names.insert(e.name);
  CHECK(names.size() == rep.entries.size());
  CHECK(rep.entries.front().name == "scalar_curvature");
  // Rank bookkeeping: scalars carry one value, 1-forms n, rank-2 n^2.
  for (const InvariantEntry& e : rep.entries) {
    const size_t expected = e.rank == 0   ? 1u
                            : e.rank == 1 ? size_t(s.frame.g.dim())
                                          : size_t(s.frame.g.dim()) *
                                                size_t(s.frame.g.dim());
    CHECK(e.values.size() == expected);
  }
}

TEST_CASE("black hole control values at a pinned point") {
  const CatalogEntry* e = find_catalog("schwarzschild");
  REQUIRE(e != nullptr);
  const double r = 4.0;
  MetricFrame frame = make_frame(e->spec, {0.1, r, 1.0, 0.5}, 4);
  CurvatureData data = compute_curvature(frame, 1);
  InvariantReport rep = scalar_invariants(frame, data);

  const InvariantEntry& kre = entry(rep, "kretschmann");
  CHECK(kre.values[0] == doctest::Approx(48.0 / std::pow(r, 6)).epsilon(1e-11));
  CHECK(!kre.zero);

  // The metric trace of the rank-2 gradient square recovers the scalar
  // grad_e R_abcd grad^e R^abcd = 720 (r - 2) / r^9 for m = 1.
  const InvariantEntry& gsq = entry(rep, "grad_riemann_sq");
  CHECK(!gsq.zero);
  const int n = frame.g.dim();
  double trace = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      trace += frame.g_inv.value(std::array{a, b}) * gsq.values[a * n + b];
  CHECK(trace ==
        doctest::Approx(720.0 * (r - 2.0) / std::pow(r, 9)).epsilon(1e-11));

  CHECK(entry(rep, "scalar_curvature").zero);
  CHECK(entry(rep, "ricci_sq").zero);
  CHECK(entry(rep, "weyl_sq").values[0] ==
        doctest::Approx(48.0 / std::pow(r, 6)).epsilon(1e-11));
}

TEST_CASE("round spheres have curvature but no curvature gradients") {
  Setup s = at_mid("sphere2");
  InvariantReport rep = scalar_invariants(s.frame, s.data);
  CHECK(entry(rep, "scalar_curvature").values[0] == doctest::Approx(2.0));
  CHECK(entry(rep, "ricci_sq").values[0] == doctest::Approx(2.0));
  CHECK(entry(rep, "kretschmann").values[0] == doctest::Approx(4.0));
  for (const InvariantEntry& e : rep.entries)
    if (e.order >= 1) CHECK(e.zero);
}

TEST_CASE("every invariant vanishes on plane waves") {
  for (const char* name :
       {"plane-wave-constant", "plane-wave-linear", "plane-wave-quadratic"}) {
    Setup s = at_mid(name);
    InvariantReport rep = scalar_invariants(s.frame, s.data);
    for (const InvariantEntry& e : rep.entries) {
      CAPTURE(name);
      CAPTURE(e.name);
      CHECK(e.zero);
      CHECK(e.max_abs <= 1e-10 * std::max(1.0, e.scale));
    }
  }
}

TEST_CASE("constant-curvature kretschmann closed form") {
  // 2 K^2 n (n-1) with curvature constant K; unit sphere K = 1, radius-2
  // sphere K = 1/4, de Sitter K = 1.
  Setup s1 = at_mid("sphere2");
  CHECK(entry(scalar_invariants(s1.frame, s1.data), "kretschmann").values[0] ==
        doctest::Approx(4.0).epsilon(1e-11));
  Setup s2 = at_mid("sphere2-r2");
  CHECK(entry(scalar_invariants(s2.frame, s2.data), "kretschmann").values[0] ==
        doctest::Approx(2.0 * (1.0 / 16.0) * 2.0).epsilon(1e-11));
  Setup s4 = at_mid("de-sitter4");
  CHECK(entry(scalar_invariants(s4.frame, s4.data), "kretschmann").values[0] ==
        doctest::Approx(24.0).epsilon(1e-11));
}

TEST_CASE("curvature operator spectrum flags generic points") {
  Setup sphere = at_mid("sphere2");
  CurvatureOperator op = curvature_operator(sphere.frame, sphere.data);
  CHECK(op.pair_dim == 1);
  CHECK(op.generic);
  CHECK(op.sigma_min == doctest::Approx(op.sigma_max));

  Setup flat = at_mid("minkowski4");
  CurvatureOperator none = curvature_operator(flat.frame, flat.data);
  CHECK(none.pair_dim == 6);
  CHECK(!none.generic);
  CHECK(none.sigma_max <= 1e-14);

  Setup wave = at_mid("plane-wave-linear");
  CHECK(!curvature_operator(wave.frame, wave.data).generic);

  Setup hole = at_mid("schwarzschild");
  CurvatureOperator full = curvature_operator(hole.frame, hole.data);
  CHECK(full.pair_dim == 6);
  CHECK(full.generic);
  CHECK(full.sigma_min > 0.0);
  CHECK(full.matrix.size() == 36);
}

TEST_CASE("first-order invariants need the gradient tower") {
  const CatalogEntry* e = find_catalog("sphere2");
  REQUIRE(e != nullptr);
  MetricFrame frame = make_frame(e->spec, domain_mid(e->spec), 2);
  CurvatureData data = compute_curvature(frame, 0);
  CHECK_THROWS_AS(scalar_invariants(frame, data), JetBudgetError);
}
