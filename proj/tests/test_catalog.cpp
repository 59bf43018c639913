#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "curv/catalog.hpp"
#include "curv/classify.hpp"
#include "curv/errors.hpp"
#include "doctest.h"

using namespace curv;

TEST_CASE("catalog is populated, unique and findable") {
  const std::vector<CatalogEntry>& all = builtin_metrics();
  CHECK(all.size() >= 12);
  std::set<std::string> names;
  for (const CatalogEntry& e : all) {
    names.insert(e.name);
    CHECK(!e.summary.empty());
    CHECK(e.spec.dim >= 2);
    CHECK(find_catalog(e.name) == &e);
  }
  CHECK(names.size() == all.size());
  CHECK(find_catalog("no-such-metric") == nullptr);
  // The one construction whose ground truth is exploratory.
  for (const CatalogEntry& e : all)
    CHECK(e.expect.verified == (e.name != "brinkmann-curved-transverse"));
}

TEST_CASE("every entry survives the text round trip") {
  for (const CatalogEntry& e : builtin_metrics()) {
    CAPTURE(e.name);
    MetricSpec again = parse_metric(emit_metric(e.spec));
    CHECK(spec_equal(e.spec, again));
    CHECK(emit_metric(e.spec) == emit_metric(again));
  }
}

TEST_CASE("every entry is non-degenerate at its domain midpoint") {
  for (const CatalogEntry& e : builtin_metrics()) {
    CAPTURE(e.name);
    Point mid(e.spec.dim);
    for (int i = 0; i < e.spec.dim; ++i)
      mid[i] = 0.5 * (e.spec.domain[i][0] + e.spec.domain[i][1]);
    MetricEvaluation ev = evaluate_metric(e.spec, mid, 0);
    CHECK(ev.negative_eigenvalues <= 1);
    CHECK(std::abs(ev.det) > 0.0);
  }
}

TEST_CASE("black hole chart stays regular across its box") {
  const CatalogEntry* e = find_catalog("schwarzschild");
  REQUIRE(e != nullptr);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    Point p(e->spec.dim);
    for (int i = 0; i < e->spec.dim; ++i) {
      const double u = double(rng() >> 11) * 0x1p-53;
      p[i] = e->spec.domain[i][0] +
             u * (e->spec.domain[i][1] - e->spec.domain[i][0]);
    }
    MetricEvaluation ev = evaluate_metric(e->spec, p, 0);
    CHECK(ev.lorentzian);
  }
}

TEST_CASE("plane wave builder lays out the double-null chart") {
  PlaneWaveProfile profile;
  profile.entries[{0, 0}] = {0.0, 1.0};
  profile.entries[{1, 1}] = {0.0, -1.0};
  CatalogEntry e = plane_wave(profile, "pw-test");
  CHECK(e.spec.dim == 4);
  REQUIRE(e.spec.coords.size() == 4);
  CHECK(e.spec.coords[0] == "u");
  CHECK(e.spec.coords[1] == "v");
  CHECK(e.spec.components.count({0, 1}) == 1);
  CHECK(print_expr(e.spec.components.at({0, 1})) == "-1");
  CHECK(e.spec.components.count({2, 2}) == 1);
  CHECK(e.spec.components.count({1, 1}) == 0);  // no dv^2 term
  // Traceless linear profile: proper second order of the hierarchy.
  CHECK(!e.expect.symmetric);
  CHECK(e.expect.two_symmetric);
  CHECK(e.expect.semisymmetric);
  CHECK(e.expect.ricci_flat);
  CHECK(e.expect.min_k_symmetric == 2);

  PlaneWaveProfile constant;
  constant.entries[{0, 0}] = {2.0};
  CatalogEntry c = plane_wave(constant, "pw-const");
  CHECK(c.expect.symmetric);
  CHECK(c.expect.min_k_symmetric == 1);
  CHECK(!c.expect.ricci_flat);  // trace A = 2

  PlaneWaveProfile deep;
  deep.entries[{0, 0}] = {0.0, 0.0, 0.0, 0.0, 0.0, 1.0};
  CHECK_THROWS_AS(plane_wave(deep, "pw-deep"), JetBudgetError);
}

TEST_CASE("wave ansatz rejects dependence on the parallel direction") {
  BrinkmannParams p;
  p.h = ast::coord(1, "v");
  CHECK_THROWS_AS(brinkmann_build(p), DomainError);

  BrinkmannParams ok;
  ok.transverse_dim = 3;
  ok.h = ast::coord(0, "u");
  MetricSpec spec = brinkmann_build(ok);
  CHECK(spec.dim == 5);
  REQUIRE(spec.coords.size() == 5);
  CHECK(spec.coords[2] == "x");
  CHECK(spec.coords[4] == "z");
  // g_uu = -2H with H = u.
  Jet guu = eval_expression(spec.components.at({0, 0}), spec,
                            {0.7, 0.0, 0.0, 0.0, 0.0}, 0);
  CHECK(guu.value() == doctest::Approx(-1.4));
}

TEST_CASE("direct product of one block is the identity") {
  const CatalogEntry* s = find_catalog("sphere2");
  REQUIRE(s != nullptr);
  MetricSpec one = direct_product({s->spec});
  CHECK(spec_equal(one, s->spec));
}

TEST_CASE("direct product renames colliding names per block") {
  const CatalogEntry* s = find_catalog("sphere2");
  REQUIRE(s != nullptr);
  MetricSpec prod = direct_product({s->spec, s->spec}, "two-spheres");
  CHECK(prod.dim == 4);
  REQUIRE(prod.coords.size() == 4);
  CHECK(prod.coords[0] == "th");
  CHECK(prod.coords[1] == "ph");
  CHECK(prod.coords[2] == "th_b1");
  CHECK(prod.coords[3] == "ph_b1");
  CHECK(prod.domain[2][0] == s->spec.domain[0][0]);
  // Block expressions now reference the renamed coordinate.
  CHECK(print_expr(prod.components.at({3, 3})) == "sin(th_b1)^2");
  CHECK(prod.components.count({1, 2}) == 0);  // off-block stays zero

  // Parameters with the same name and value are shared between blocks.
  const CatalogEntry* schw = find_catalog("schwarzschild");
  REQUIRE(schw != nullptr);
  MetricSpec same = direct_product({schw->spec, schw->spec});
  CHECK(same.params.count("m") == 1);
  CHECK(same.params.count("m_b1") == 0);

  // A value conflict forces the per-block rename.
  MetricSpec heavier = schw->spec;
  heavier.params["m"] = 2.0;
  MetricSpec mixed = direct_product({schw->spec, heavier});
  REQUIRE(mixed.params.count("m") == 1);
  REQUIRE(mixed.params.count("m_b1") == 1);
  CHECK(mixed.params.at("m") == 1.0);
  CHECK(mixed.params.at("m_b1") == 2.0);
  CHECK(emit_metric(mixed).find("m_b1") != std::string::npos);
}

TEST_CASE("direct product enforces the jet dimension cap") {
  const CatalogEntry* m5 = find_catalog("minkowski5");
  REQUIRE(m5 != nullptr);
  CHECK_THROWS_AS(direct_product({m5->spec, m5->spec}), DomainError);
}

TEST_CASE("flat extension guards the lorentzian signature") {
  const CatalogEntry* s = find_catalog("sphere2");
  REQUIRE(s != nullptr);
  MetricSpec line = flat_extension(s->spec, {{"t", -1, {-2.0, 2.0}}});
  CHECK(line.dim == 3);
  CHECK(line.coords[0] == "t");
  MetricEvaluation ev = evaluate_metric(line, {0.0, 1.0, 0.3}, 0);
  CHECK(ev.lorentzian);

  CHECK(spec_equal(flat_extension(s->spec, {}), s->spec));

  const CatalogEntry* schw = find_catalog("schwarzschild");
  REQUIRE(schw != nullptr);
  CHECK_THROWS_AS(flat_extension(schw->spec, {{"w", -1, {-1.0, 1.0}}}),
                  DomainError);
  CHECK_THROWS_AS(flat_extension(s->spec, {{"t", -1, {-1.0, 1.0}},
                                           {"t2", -1, {-1.0, 1.0}}}),
                  DomainError);
  CHECK_THROWS_AS(flat_extension(s->spec, {{"t", 0, {-1.0, 1.0}}}),
                  DomainError);
}

TEST_CASE("recorded expectations match the classifier on quick samples") {
  // The full 20-point regression runs in the acceptance binary; here a
  // 3-point spot check across the whole catalog.
  for (const CatalogEntry& e : builtin_metrics()) {
    if (!e.expect.verified) continue;
    CAPTURE(e.name);
    SampleConfig config;
    config.points = 3;
    config.order = e.expect.min_k_symmetric >= 3 ? 5 : 4;
    config.with_holonomy = false;
    config.with_invariants = false;
    config.with_identities = false;
    ClassificationReport rep = aggregate(e.spec, config);
    CHECK(rep.aggregate.constant_curvature == e.expect.constant_curvature);
    CHECK(rep.aggregate.symmetric == e.expect.symmetric);
    CHECK(rep.aggregate.two_symmetric == e.expect.two_symmetric);
    CHECK(rep.aggregate.semisymmetric == e.expect.semisymmetric);
    CHECK(rep.aggregate.ricci_flat == e.expect.ricci_flat);
    CHECK(rep.aggregate.generic == e.expect.generic);
    if (e.expect.min_k_symmetric >= 1) {
      bool found = false;
      for (const auto& [k, v] : rep.aggregate.k_symmetric) {
        if (k == e.expect.min_k_symmetric) {
          found = true;
          CHECK(v);
        }
        if (k < e.expect.min_k_symmetric) CHECK(!v);
      }
      CHECK(found);
    }
  }
}

TEST_CASE("product blocks compose hierarchy verdicts") {
  const CatalogEntry* prod = find_catalog("mink2-x-sphere2");
  REQUIRE(prod != nullptr);
  CHECK(prod->expect.symmetric);
  CHECK(!prod->expect.constant_curvature);

  const CatalogEntry* mixed = find_catalog("pw3-x-sphere2");
  REQUIRE(mixed != nullptr);
  CHECK(!mixed->expect.symmetric);
  CHECK(mixed->expect.two_symmetric);
  CHECK(mixed->expect.min_k_symmetric == 2);
}
