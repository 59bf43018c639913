#include <cmath>
#include <vector>

#include "curv/catalog.hpp"
#include "curv/curvature.hpp"
#include "curv/errors.hpp"
#include "doctest.h"

using namespace curv;

namespace {

const MetricSpec& catalog_spec(const std::string& name) {
  const CatalogEntry* e = find_catalog(name);
  REQUIRE(e != nullptr);
  return e->spec;
}

Point domain_mid(const MetricSpec& spec) {
  Point p(spec.dim);
  for (int i = 0; i < spec.dim; ++i)
    p[i] = 0.5 * (spec.domain[i][0] + spec.domain[i][1]);
  return p;
}

double riemann_down_sym_residual(const TensorJet& rd) {
  const int n = rd.dim();
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const double v = rd.value(std::array{a, b, c, d});
          worst = std::max(worst,
                           std::abs(v + rd.value(std::array{b, a, c, d})));
          worst = std::max(worst,
                           std::abs(v + rd.value(std::array{a, b, d, c})));
          worst = std::max(worst,
                           std::abs(v - rd.value(std::array{c, d, a, b})));
          // First Bianchi: cyclic sum over the last three slots.
          const double cyc = v + rd.value(std::array{a, c, d, b}) +
                             rd.value(std::array{a, d, b, c});
          worst = std::max(worst, std::abs(cyc));
        }
  return worst;
}

}  // namespace

TEST_CASE("round sphere connection and curvature components") {
  const double th = 1.0;
  MetricFrame frame = make_frame(catalog_spec("sphere2"), {th, 0.3}, 4);
  CHECK(frame.g.value(std::array{0, 0}) == doctest::Approx(1.0));
  CHECK(frame.g.value(std::array{1, 1}) ==
        doctest::Approx(std::sin(th) * std::sin(th)));
  CHECK(!frame.lorentzian);
  CHECK(frame.negative_eigenvalues == 0);

  // Gamma^th_phph = -sin th cos th, Gamma^ph_thph = cot th.
  CHECK(frame.gamma.value(std::array{0, 1, 1}) ==
        doctest::Approx(-std::sin(th) * std::cos(th)).epsilon(1e-12));
  CHECK(frame.gamma.value(std::array{1, 0, 1}) ==
        doctest::Approx(std::cos(th) / std::sin(th)).epsilon(1e-12));
  CHECK(frame.gamma.value(std::array{1, 1, 0}) ==
        doctest::Approx(std::cos(th) / std::sin(th)).epsilon(1e-12));

  CurvatureData data = compute_curvature(frame, 1);
  CHECK(data.riemann_ud.value(std::array{0, 1, 0, 1}) ==
        doctest::Approx(std::sin(th) * std::sin(th)).epsilon(1e-12));
  CHECK(data.scalar.value() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(data.ricci.value(std::array{0, 0}) == doctest::Approx(1.0));
  // Locally symmetric: the covariant gradient of Riemann vanishes.
  CHECK(data.grad_riemann_down[0].max_abs_value() <= 1e-12);
}

TEST_CASE("constant-curvature scalars across the catalog") {
  MetricFrame h = make_frame(catalog_spec("hyperbolic2"), {0.2, 1.1}, 3);
  CHECK(compute_curvature(h, 0).scalar.value() ==
        doctest::Approx(-2.0).epsilon(1e-11));

  MetricFrame ds =
      make_frame(catalog_spec("de-sitter4"), {0.1, 0.2, -0.3, 0.4}, 3);
  CHECK(compute_curvature(ds, 0).scalar.value() ==
        doctest::Approx(12.0).epsilon(1e-11));

  MetricFrame r2 = make_frame(catalog_spec("sphere2-r2"), {1.0, 0.5}, 3);
  CHECK(compute_curvature(r2, 0).scalar.value() ==
        doctest::Approx(0.5).epsilon(1e-11));
}

TEST_CASE("flat space curves nowhere") {
  MetricFrame frame =
      make_frame(catalog_spec("minkowski4"), {0.1, -0.4, 0.7, 0.0}, 4);
  CurvatureData data = compute_curvature(frame, 2);
  CHECK(frame.gamma.max_abs_value() == 0.0);
  CHECK(data.riemann_ud.max_abs_value() == 0.0);
  CHECK(data.scalar.value() == 0.0);
  CHECK(frame.lorentzian);
}

TEST_CASE("vacuum black hole oracles at a pinned radius") {
  const double r = 4.0, th = 1.0;
  MetricFrame frame =
      make_frame(catalog_spec("schwarzschild"), {0.1, r, th, 0.5}, 4);
  // Gamma^r_tt = m (r - 2m) / r^3 with m = 1.
  CHECK(frame.gamma.value(std::array{1, 0, 0}) ==
        doctest::Approx((r - 2.0) / (r * r * r)).epsilon(1e-12));

  CurvatureData data = compute_curvature(frame, 2);
  CHECK(data.ricci.max_abs_value() <= 1e-12 * data.scale);
  CHECK(std::abs(data.scalar.value()) <= 1e-12 * data.scale);

  // Independently derived component magnitudes of grad Riemann and its
  // second gradient at (r, th) = (4, 1).
  CHECK(data.grad_riemann_down[0].max_abs_value() ==
        doctest::Approx(4.24844050964).epsilon(1e-9));
  CHECK(data.grad_riemann_down[1].max_abs_value() ==
        doctest::Approx(16.9937620386).epsilon(1e-9));
}

TEST_CASE("all-down riemann has pair and cyclic symmetries") {
  for (const char* name : {"schwarzschild", "de-sitter4", "plane-wave-linear",
                           "brinkmann-curved-transverse"}) {
    MetricFrame frame = make_frame(catalog_spec(name),
                                   domain_mid(catalog_spec(name)), 4);
    CurvatureData data = compute_curvature(frame, 0);
    CHECK(riemann_down_sym_residual(data.riemann_down) <=
          1e-12 * std::max(1.0, data.scale));
  }
}

TEST_CASE("weyl vanishes below dimension four and for conformally flat") {
  MetricFrame s2 = make_frame(catalog_spec("sphere2"), {1.0, 0.3}, 3);
  CHECK(compute_curvature(s2, 0).weyl_down.max_abs_value() == 0.0);

  MetricFrame ds =
      make_frame(catalog_spec("de-sitter4"), {0.1, 0.2, -0.3, 0.4}, 3);
  CurvatureData data = compute_curvature(ds, 0);
  CHECK(data.weyl_down.max_abs_value() <= 1e-11 * data.scale);
}

TEST_CASE("ricci-flat curvature is pure weyl") {
  MetricFrame frame =
      make_frame(catalog_spec("schwarzschild"), {0.0, 5.0, 1.2, 0.0}, 3);
  CurvatureData data = compute_curvature(frame, 0);
  double worst = 0.0;
  for (int p = 0; p < data.weyl_down.component_count(); ++p)
    worst = std::max(worst, std::abs(data.weyl_down.flat(p).value() -
                                     data.riemann_down.flat(p).value()));
  CHECK(worst <= 1e-12 * data.scale);
}

TEST_CASE("riemann recomposes from weyl, ricci and scalar") {
  for (const char* name :
       {"sphere2", "hyperbolic2", "de-sitter4", "schwarzschild",
        "plane-wave-quadratic", "einstein-static", "pw3-x-sphere2"}) {
    const MetricSpec& spec = catalog_spec(name);
    MetricFrame frame = make_frame(spec, domain_mid(spec), 4);
    CurvatureData data = compute_curvature(frame, 0);
    TensorJet rebuilt = riemann_from_parts(frame, data.weyl_down, data.ricci,
                                           data.scalar);
    double worst = 0.0;
    for (int p = 0; p < rebuilt.component_count(); ++p)
      worst = std::max(worst, std::abs(rebuilt.flat(p).value() -
                                       data.riemann_down.flat(p).value()));
    CHECK(worst <= 1e-12 * std::max(1.0, data.scale));
  }
}

TEST_CASE("covariant derivative annihilates the metric") {
  const MetricSpec& spec = catalog_spec("schwarzschild");
  MetricFrame frame = make_frame(spec, {0.0, 4.5, 0.9, 0.2}, 3);
  TensorJet grad_g = cov_derivative(frame.g, frame);
  CHECK(grad_g.max_abs_value() <= 1e-13 * frame.g_scale);
  CHECK(grad_g.rank() == 3);
  CHECK(grad_g.valence()[0] == IndexPos::Down);
  CHECK(grad_g.order() == frame.order - 1);
}

TEST_CASE("second bianchi identity holds value-level") {
  for (const char* name : {"schwarzschild", "de-sitter4", "pw3-x-sphere2"}) {
    const MetricSpec& spec = catalog_spec(name);
    MetricFrame frame = make_frame(spec, domain_mid(spec), 4);
    CurvatureData data = compute_curvature(frame, 1);
    const TensorJet& gr = data.grad_riemann_down[0];
    const int n = gr.dim();
    const double scale = std::max(gr.max_abs_value(), 1e-300);
    double worst = 0.0;
    for (int e = 0; e < n; ++e)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d) {
              const double cyc = gr.value(std::array{e, a, b, c, d}) +
                                 gr.value(std::array{a, b, e, c, d}) +
                                 gr.value(std::array{b, e, a, c, d});
              worst = std::max(worst, std::abs(cyc));
            }
    CHECK(worst <= 1e-10 * std::max(1.0, scale));
  }
}

TEST_CASE("derivative depth is capped by the jet order") {
  const MetricSpec& spec = catalog_spec("sphere2");
  MetricFrame frame = make_frame(spec, {1.0, 0.3}, 4);
  CurvatureData data = compute_curvature(frame, 2);
  CHECK(data.grad_riemann_down.size() == 2);
  CHECK(data.grad_riemann_ud.valid());
  CHECK(data.grad2_riemann_ud.valid());
  CHECK_THROWS_AS(compute_curvature(frame, 3), JetBudgetError);

  MetricFrame shallow = make_frame(spec, {1.0, 0.3}, 2);
  CurvatureData flat0 = compute_curvature(shallow, 0);
  CHECK(!flat0.grad_riemann_ud.valid());
  CHECK_THROWS_AS(compute_curvature(shallow, 1), JetBudgetError);
}

TEST_CASE("raise and lower indices are inverse maps") {
  const MetricSpec& spec = catalog_spec("schwarzschild");
  MetricFrame frame = make_frame(spec, {0.0, 6.0, 1.4, 0.1}, 4);
  CurvatureData data = compute_curvature(frame, 0);
  TensorJet up = raise_index(data.ricci, 0, frame);
  CHECK(up.valence()[0] == IndexPos::Up);
  TensorJet back = lower_index(up, 0, frame);
  double worst = 0.0;
  for (int p = 0; p < back.component_count(); ++p)
    worst = std::max(worst, std::abs(back.flat(p).value() -
                                     data.ricci.flat(p).value()));
  CHECK(worst <= 1e-13 * std::max(1.0, data.scale));
}
