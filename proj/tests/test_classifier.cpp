#include <cmath>
#include <string>
#include <vector>

#include "curv/catalog.hpp"
#include "curv/classify.hpp"
#include "curv/errors.hpp"
#include "curv/metric.hpp"
#include "doctest.h"

using namespace curv;

namespace {

Point domain_mid(const MetricSpec& spec) {
  Point p(spec.dim);
  for (int i = 0; i < spec.dim; ++i)
    p[i] = 0.5 * (spec.domain[i][0] + spec.domain[i][1]);
  return p;
}

PointClassification classify_mid(const std::string& name, int order = 4) {
  const CatalogEntry* e = find_catalog(name);
  REQUIRE(e != nullptr);
  MetricFrame frame = make_frame(e->spec, domain_mid(e->spec), order);
  CurvatureData data = compute_curvature(frame, order - 2);
  return classify_point(frame, data);
}

const ConsistencyFinding& finding(const ClassificationReport& rep,
                                  const std::string& id) {
  for (const ConsistencyFinding& f : rep.findings)
    if (f.id == id) return f;
  REQUIRE_MESSAGE(false, "missing finding ", id);
  static ConsistencyFinding dummy;
  return dummy;
}

ClassificationReport run(const std::string& name, int points = 6,
                         int order = 4) {
  const CatalogEntry* e = find_catalog(name);
  REQUIRE(e != nullptr);
  SampleConfig config;
  config.points = points;
  config.order = order;
  return aggregate(e->spec, config);
}

}  // namespace

TEST_CASE("constant-curvature spaces sit at the top of the hierarchy") {
  for (const char* name : {"sphere2", "hyperbolic2", "de-sitter4"}) {
    CAPTURE(name);
    PointClassification cls = classify_mid(name);
    CHECK(cls.constant_curvature.verdict);
    CHECK(cls.symmetric.verdict);
    CHECK(cls.two_symmetric.verdict);
    CHECK(cls.semisymmetric.verdict);
    CHECK(!cls.ricci_flat.verdict);
    CHECK(cls.generic);
  }
}

TEST_CASE("vacuum black hole fails every symmetry class") {
  PointClassification cls = classify_mid("schwarzschild");
  CHECK(!cls.constant_curvature.verdict);
  CHECK(!cls.symmetric.verdict);
  CHECK(!cls.two_symmetric.verdict);
  CHECK(!cls.semisymmetric.verdict);
  CHECK(cls.ricci_flat.verdict);
  CHECK(cls.generic);
  REQUIRE(cls.k_symmetric.size() == 2);
  CHECK(cls.k_symmetric[0].first == 1);
  CHECK(!cls.k_symmetric[0].second.verdict);
  CHECK(!cls.k_symmetric[1].second.verdict);
}

TEST_CASE("linear wave is two-symmetric but not symmetric") {
  PointClassification cls = classify_mid("plane-wave-linear");
  CHECK(!cls.constant_curvature.verdict);
  CHECK(!cls.symmetric.verdict);
  CHECK(cls.two_symmetric.verdict);
  CHECK(cls.semisymmetric.verdict);
  CHECK(cls.ricci_flat.verdict);
  CHECK(!cls.generic);
}

TEST_CASE("k-symmetry tower of the quadratic wave") {
  // Away from u = 0, where the u^2 profile makes curvature vanish pointwise.
  const CatalogEntry* e = find_catalog("plane-wave-quadratic");
  REQUIRE(e != nullptr);
  MetricFrame frame = make_frame(e->spec, {0.5, 0.1, 0.3, -0.2}, 5);
  CurvatureData data = compute_curvature(frame, 3);
  PointClassification cls = classify_point(frame, data);
  REQUIRE(cls.k_symmetric.size() == 3);
  CHECK(!cls.k_symmetric[0].second.verdict);  // grad R != 0
  CHECK(!cls.k_symmetric[1].second.verdict);  // grad^2 R != 0
  CHECK(cls.k_symmetric[2].second.verdict);   // grad^3 R == 0
  CHECK(cls.two_symmetric.available);
  CHECK(!cls.two_symmetric.verdict);
}

TEST_CASE("verdicts degrade to unavailable when the order is shallow") {
  const CatalogEntry* e = find_catalog("plane-wave-linear");
  REQUIRE(e != nullptr);
  MetricFrame frame = make_frame(e->spec, domain_mid(e->spec), 3);
  CurvatureData data = compute_curvature(frame, 1);
  PointClassification cls = classify_point(frame, data);
  CHECK(cls.symmetric.available);
  CHECK(!cls.two_symmetric.available);
  CHECK(cls.semisymmetric.available);
}

TEST_CASE("identity suite ids are stable and pass on the exemplar") {
  const std::vector<std::string> expected = {
      "transport_commutator",    "grad_pair_symmetric",
      "ricci_grad_antisym",      "ricci_div_combo",
      "riemann_commutator",      "riemann_grad_commutator",
      "sym_grad_dot_riemann",    "sym_grad_dot_weyl",
      "sym_grad_dot_ricci",      "ricci_riemann_sym_pair",
      "riemann_ricci_cycle",     "weyl_ricci_cycle",
      "ricci_sandwich",          "weyl_commutator",
      "weyl_weyl_commutator"};

  const CatalogEntry* e = find_catalog("plane-wave-linear");
  REQUIRE(e != nullptr);
  MetricFrame frame = make_frame(e->spec, domain_mid(e->spec), 4);
  CurvatureData data = compute_curvature(frame, 2);
  std::vector<IdentityResult> results = identity_suite(frame, data);
  REQUIRE(results.size() == expected.size());
  for (size_t i = 0; i < results.size(); ++i) {
    CHECK(results[i].id == expected[i]);
    CHECK(results[i].pass);
    CHECK(results[i].residual <= 1e-12 * std::max(1.0, results[i].scale));
  }
}

TEST_CASE("identity suite flags the non-semisymmetric control") {
  const CatalogEntry* e = find_catalog("schwarzschild");
  REQUIRE(e != nullptr);
  MetricFrame frame = make_frame(e->spec, {0.1, 4.0, 1.0, 0.5}, 4);
  CurvatureData data = compute_curvature(frame, 2);
  std::vector<IdentityResult> results = identity_suite(frame, data);
  bool saw_commutator = false;
  for (const IdentityResult& r : results) {
    if (r.id == "riemann_commutator") {
      saw_commutator = true;
      CHECK(!r.pass);
      // Closed-form residual magnitude at r = 4, th = 1.
      CHECK(r.residual / r.scale == doctest::Approx(0.09375).epsilon(1e-9));
    }
    if (r.id == "ricci_sandwich") CHECK(r.pass);  // trivial in vacuum
  }
  CHECK(saw_commutator);
}

TEST_CASE("identity suite needs the gradient tower") {
  const CatalogEntry* e = find_catalog("sphere2");
  REQUIRE(e != nullptr);
  MetricFrame frame = make_frame(e->spec, domain_mid(e->spec), 2);
  CurvatureData data = compute_curvature(frame, 0);
  CHECK_THROWS_AS(identity_suite(frame, data), JetBudgetError);
}

TEST_CASE("scalar gradient diagnostics on the curved-transverse wave") {
  PointClassification cls = classify_mid("brinkmann-curved-transverse");
  // R = u + const: the gradient is the exactly-null du direction.
  CHECK(cls.grad_scalar.nonzero);
  CHECK(cls.grad_scalar.max_abs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(cls.grad_scalar.null_abs) <=
        1e-12 * std::max(1.0, cls.grad_scalar.null_scale));
  CHECK(cls.grad_scalar.hessian_available);
  CHECK(cls.grad_scalar.hessian_max <=
        1e-10 * std::max(1.0, cls.grad_scalar.hessian_scale));
}

TEST_CASE("aggregate rejects bad sampling configs") {
  const CatalogEntry* e = find_catalog("sphere2");
  REQUIRE(e != nullptr);
  SampleConfig config;
  config.points = 0;
  CHECK_THROWS_AS(aggregate(e->spec, config), DomainError);
  config.points = 2;
  config.order = 7;
  CHECK_THROWS_AS(aggregate(e->spec, config), DomainError);
  config.order = 1;
  CHECK_THROWS_AS(aggregate(e->spec, config), DomainError);
  config.order = 4;
  config.k_max = 3;
  CHECK_THROWS_AS(aggregate(e->spec, config), JetBudgetError);
}

TEST_CASE("aggregate refuses metrics that are degenerate everywhere") {
  MetricSpec thin = parse_metric(R"(version = 1
name = thin
dim = 2
coords = a b
g 0 0 = "1"
)");
  SampleConfig config;
  config.points = 3;
  CHECK_THROWS_AS(aggregate(thin, config), NumericError);
}

TEST_CASE("aggregate is deterministic in the seed") {
  ClassificationReport r1 = run("schwarzschild", 4);
  ClassificationReport r2 = run("schwarzschild", 4);
  REQUIRE(r1.points.size() == r2.points.size());
  for (size_t i = 0; i < r1.points.size(); ++i)
    CHECK(r1.points[i].cls.point == r2.points[i].cls.point);

  const CatalogEntry* e = find_catalog("schwarzschild");
  SampleConfig other;
  other.points = 4;
  other.seed = 7;
  ClassificationReport r3 = aggregate(e->spec, other);
  CHECK(r3.points[0].cls.point != r1.points[0].cls.point);
  // Draws stay inside the declared domain box.
  for (const PointRecord& rec : r3.points)
    for (int i = 0; i < e->spec.dim; ++i) {
      CHECK(rec.cls.point[i] >= e->spec.domain[i][0]);
      CHECK(rec.cls.point[i] <= e->spec.domain[i][1]);
    }
}

TEST_CASE("threaded sampling matches the serial result") {
  const CatalogEntry* e = find_catalog("pw3-x-sphere2");
  REQUIRE(e != nullptr);
  SampleConfig serial;
  serial.points = 6;
  SampleConfig fanned = serial;
  fanned.threads = 3;
  ClassificationReport a = aggregate(e->spec, serial);
  ClassificationReport b = aggregate(e->spec, fanned);
  REQUIRE(a.points.size() == b.points.size());
  for (size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].cls.point == b.points[i].cls.point);
    CHECK(a.points[i].cls.semisymmetric.residual ==
          b.points[i].cls.semisymmetric.residual);
  }
  CHECK(a.aggregate.two_symmetric == b.aggregate.two_symmetric);
}

TEST_CASE("null kernel finding passes on the proper two-symmetric wave") {
  ClassificationReport rep = run("plane-wave-linear");
  const ConsistencyFinding& f =
      finding(rep, "null_kernel_for_proper_two_symmetric");
  CHECK(f.status == FindingStatus::Pass);
  CHECK(f.applicable_points == 6);
  CHECK(finding(rep, "hierarchy_monotonicity").status == FindingStatus::Pass);
  CHECK(finding(rep, "generic_semisymmetric_constant_curvature").status ==
        FindingStatus::NotApplicable);
}

TEST_CASE("generic semisymmetric finding bites on constant curvature") {
  ClassificationReport rep = run("de-sitter4");
  const ConsistencyFinding& f =
      finding(rep, "generic_semisymmetric_constant_curvature");
  CHECK(f.status == FindingStatus::Pass);
  CHECK(f.applicable_points == 6);
}

TEST_CASE("invariant vanishing finding applies off the null-kernel branch") {
  ClassificationReport rep = run("einstein-static");
  CHECK(rep.aggregate.symmetric);
  CHECK(!rep.aggregate.constant_curvature);
  const ConsistencyFinding& f =
      finding(rep, "invariants_vanish_without_null_kernel");
  CHECK(f.status == FindingStatus::Pass);
  CHECK(f.applicable_points > 0);
}

TEST_CASE("scalar gradient finding applies on the curved-transverse wave") {
  ClassificationReport rep = run("brinkmann-curved-transverse");
  const ConsistencyFinding& f = finding(rep, "scalar_gradient_null_and_parallel");
  CHECK(f.status == FindingStatus::Pass);
  CHECK(f.applicable_points == 6);

  ClassificationReport flat = run("minkowski3");
  CHECK(finding(flat, "scalar_gradient_null_and_parallel").status ==
        FindingStatus::NotApplicable);
}

TEST_CASE("aggregate verdicts are conjunctions over the sample") {
  ClassificationReport rep = run("einstein-static");
  CHECK(rep.aggregate.two_symmetric);
  CHECK(rep.aggregate.two_symmetric_available);
  CHECK(rep.aggregate.semisymmetric);
  CHECK(!rep.aggregate.ricci_flat);
  CHECK(!rep.aggregate.generic);
  CHECK(rep.points.size() == 6);
  CHECK(rep.skipped.empty());
  REQUIRE(!rep.aggregate.k_symmetric.empty());
  CHECK(rep.aggregate.k_symmetric[0].first == 1);
  CHECK(rep.aggregate.k_symmetric[0].second);  // locally symmetric
  // The suite ran everywhere because the metric is two-symmetric.
  CHECK(rep.aggregate.identity_points == 6);
  CHECK(rep.aggregate.identities_pass);
}
