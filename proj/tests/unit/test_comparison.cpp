#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles/oracle_values.hpp"
#include "sphoep/comparison.hpp"
#include "sphoep/error.hpp"
#include "sphoep/model.hpp"

using namespace sphoep;

namespace {

ScalarField model_field(double R, int n_r, int n_theta) {
  const ModelSolution m = model(R);
  return sample_model(m, model_grid(m, n_r, n_theta));
}

ScalarField hemisphere(int n_r, int n_theta) {
  return sample(Grid::cap(0.0, n_r, n_theta), [](double r, double) { return r; });
}

const Region& upper_region(const NwssReport& rep) {
  for (const Region& g : rep.regions) {
    if (g.branch == Branch::Plus) return g;
  }
  return rep.regions.front();
}

}  // namespace

TEST_CASE("refined maximum of a model field") {
  for (double R : {0.0, 0.3}) {
    const ScalarField f = model_field(R, 64, 4);
    CHECK(refined_max(f) == doctest::Approx(model(R).xi_max).epsilon(1e-4));
    CHECK(refined_max(f) >= f.max() - 1e-15);
  }
}

TEST_CASE("statistic of the symmetric model") {
  const NwssReport rep = nwss(model_field(0.0, 256, 8));
  REQUIRE(rep.regions.size() == 2);
  for (const Region& g : rep.regions) {
    CHECK(g.tau == doctest::Approx(oracle::kTau0).epsilon(1e-4));
    CHECK(std::abs(g.expected_height) < 1e-3);
    CHECK(g.boundary_components.size() == 1);
  }
  REQUIRE(rep.max_components.size() == 1);
  CHECK(rep.max_components[0].wraps);
  CHECK(rep.max_components[0].curve_like);
  CHECK(rep.max_components[0].adjacent_regions.size() == 2);
}

TEST_CASE("statistic of the R = 0.5 model") {
  const NwssReport rep = nwss(model_field(0.5, 512, 8));
  const Region& up = upper_region(rep);
  CHECK(up.branch == Branch::Plus);
  CHECK(std::abs(up.expected_height - 0.5) < 1e-3);
  for (const Region& g : rep.regions) CHECK(std::abs(g.expected_height - 0.5) < 1e-3);
  CHECK(rep.per_component_tau.size() == 2);
}

TEST_CASE("statistic of the hemisphere") {
  const NwssReport rep = nwss(hemisphere(128, 16));
  REQUIRE(rep.regions.size() == 1);
  CHECK(rep.regions[0].tau == doctest::Approx(1.0));
  CHECK(rep.regions[0].expected_height == 1.0);
  CHECK(rep.max_at_pole);
}

TEST_CASE("branch selection by statistic") {
  CHECK(branch_for_tau(oracle::kTau0) == Branch::Plus);
  CHECK(branch_for_tau(oracle::kTau0 * 1.1) == Branch::Plus);
  CHECK(branch_for_tau(1.5) == Branch::Minus);
}

TEST_CASE("pseudo-radial function inverts the model profile") {
  const double R = 0.25;
  const ScalarField f = model_field(R, 128, 4);
  const NwssReport rep = nwss(f);
  CHECK_THROWS_AS(pseudo_radial(f, R, rep, 0), Error);
  const ScalarField fn = normalize_to_model(f, R);
  const Region& up = upper_region(rep);
  const ModelSolution m = model(R);
  const ScalarField psi = pseudo_radial(fn, R, rep, up.id);
  const Grid& g = f.grid();
  double err = 0.0;
  for (int node : up.nodes) {
    const int i = node / g.cols(), j = node % g.cols();
    err = std::max(err, std::abs(psi.at(i, j) - g.r(i, j)));
  }
  CHECK(err < 1e-5);
  CHECK(psi.at(g.rows() - 1, 0) == doctest::Approx(m.r_plus).epsilon(1e-12));
  for (int i = 0; i < g.rows(); ++i) {
    if (rep.node_region[g.index(i, 0)] == -1) CHECK(psi.at(i, 0) == R);
  }
}

TEST_CASE("comparison equality on model fields") {
  for (double R : {0.0, 0.5}) {
    const ScalarField f = normalize_to_model(model_field(R, 256, 4), R);
    const NwssReport rep = nwss(f);
    for (const Region& g : rep.regions) {
      const ComparisonReport c = compare_W(f, pseudo_radial(f, R, rep, g.id), R);
      CHECK(c.equality_case);
      CHECK(c.max_violation <= c.compare_tol);
      CHECK(c.violation_nodes.empty());
      const double h = f.grid().h_r();
      CHECK(c.compare_tol == doctest::Approx(kCompareTolC * h * h));
    }
  }
}

TEST_CASE("gradient vanishes quadratically next to the maximum") {
  const double R = 0.25;
  double last = 1e9;
  for (int n : {128, 256, 512}) {
    const ScalarField f = normalize_to_model(model_field(R, n, 4), R);
    const NwssReport rep = nwss(f);
    const Region& g = upper_region(rep);
    const double ratio = compare_W(f, pseudo_radial(f, R, rep, g.id), R).near_max_ratio;
    CHECK(ratio < last);
    last = ratio;
  }
}

TEST_CASE("limit ratio below the maximum") {
  const double R = 0.25;
  const ScalarField f = normalize_to_model(model_field(R, 512, 4), R);
  const NwssReport rep = nwss(f);
  for (const Region& g : rep.regions) {
    const ComparisonReport c = compare_W(f, pseudo_radial(f, R, rep, g.id), R, -1.0, 1e-3);
    CHECK(c.lemma_nodes > 0);
    CHECK(c.lemma_max_deviation < 1e-2);
  }
}

TEST_CASE("P-function") {
  const PFunctionResult hemi = p_function_check(hemisphere(64, 16));
  CHECK(std::abs(hemi.min_laplacian) < 1e-3);
  CHECK(std::abs(hemi.max_laplacian) < 1e-3);
  const ScalarField c = sample(Grid::annulus({-0.5, {}}, {0.5, {}}, 32, 8), [](double, double) { return 1.0; });
  CHECK(std::abs(p_function_check(c).min_laplacian) < 1e-12);
  CHECK(p_function_check(model_field(0.0, 512, 64)).min_laplacian >= -1e-3);
}

TEST_CASE("zero level of the height field is the equator") {
  const ScalarField f = sample(Grid::annulus({-0.5, {}}, {0.5, {}}, 33, 256), [](double r, double) { return r; });
  const LevelCurve lc = level_extract(f, 0.0);
  REQUIRE(lc.polylines.size() == 1);
  CHECK(lc.polylines[0].closed);
  CHECK(lc.metric_length == doctest::Approx(kTwoPi).epsilon(1e-4));
  CHECK_THROWS_AS(level_extract(f, 0.9), Error);
}

TEST_CASE("zero level of the symmetric model") {
  const ScalarField f = model_field(0.0, 64, 256);
  const LevelCurve lc = level_extract(f, 0.0, nwss(f).node_region);
  REQUIRE(lc.polylines.size() == 2);
  const double each = kTwoPi * std::sqrt(1 - oracle::kRBar * oracle::kRBar);
  for (const Polyline& p : lc.polylines) CHECK(p.length == doctest::Approx(each).epsilon(1e-4));
}

TEST_CASE("levels near the maximum approach the critical parallel") {
  const double R = 0.3;
  const ModelSolution m = model(R);
  const ScalarField f = model_field(R, 512, 256);
  const LevelCurve lc = level_extract(f, m.xi_max * (1 - 1e-4));
  REQUIRE(lc.polylines.size() == 2);
  for (const Polyline& p : lc.polylines) CHECK(p.length == doctest::Approx(kTwoPi * std::sqrt(1 - R * R)).epsilon(1e-2));
}

TEST_CASE("level curvature of model fields") {
  const double R = 0.5;
  const ModelSolution m = model(R);
  const ScalarField f = model_field(R, 256, 64);
  const double t = 0.5 * m.xi_max;
  const LevelCurve lc = level_extract(f, t);
  REQUIRE(lc.polylines.size() == 2);
  const double r_up = chi_branch(m, t, Branch::Plus), r_lo = chi_branch(m, t, Branch::Minus);
  for (const Polyline& p : lc.polylines) {
    const double r = p.points[0].r;
    const double expect = (std::abs(r - r_up) < std::abs(r - r_lo) ? r_up : r_lo);
    double worst = 0.0;
    for (double k : p.kappa) worst = std::max(worst, std::abs(std::abs(k) - std::abs(expect) / std::sqrt(1 - expect * expect)));
    CHECK(worst < 1e-2);
  }
}

TEST_CASE("hemisphere energy is constant") {
  const ScalarField f = hemisphere(128, 128);
  const NwssReport rep = nwss(f);
  const EnergyProfile e = energy_profile(f, rep, 0, {0.0, 0.3, 0.6, 0.9}, 0.05);
  CHECK(e.monotone_asserted);
  CHECK(e.monotone_holds);
  for (const EnergyRow& row : e.rows) {
    REQUIRE_FALSE(row.skipped);
    CHECK(row.E == doctest::Approx(kTwoPi).epsilon(1e-3));
  }
}

TEST_CASE("model energy is reported, not asserted") {
  const ScalarField f = model_field(0.5, 128, 64);
  const NwssReport rep = nwss(f);
  const Region& g = upper_region(rep);
  const EnergyProfile e = energy_profile(f, rep, g.id, {0.0, 0.1, 0.2, rep.xi_max});
  CHECK_FALSE(e.monotone_asserted);
  for (const EnergyRow& row : e.rows) {
    if (!row.skipped) {
      CHECK(row.E > 0.0);
      CHECK(std::isfinite(row.E));
    }
  }
  CHECK(e.rows.back().skipped);
  CHECK(e.rows.back().reason == "CriticalLevelSkipped");
}

TEST_CASE("curvature bounds on model fields") {
  const double R = 0.5;
  const ModelSolution m = model(R);
  const ScalarField f = model_field(R, 512, 8);
  const CurvatureReport c = curvature_bound_report(f, nwss(f), 1e-2);
  REQUIRE(c.regions.size() == 2);
  for (const CurvatureRegionReport& g : c.regions) {
    CHECK(g.boundary_holds);
    CHECK(g.has_top_curve);
    CHECK(g.top_holds);
    if (g.branch == Branch::Plus) {
      CHECK(g.boundary_bound == doctest::Approx(-m.r_plus / std::sqrt(1 - m.r_plus * m.r_plus)));
      CHECK(std::abs(g.boundary_kappa - g.boundary_bound) < 1e-3);
    }
    CHECK(std::abs(g.top_kappa - g.top_bound) < 1e-2);
  }
  REQUIRE(c.orderings.size() == 1);
  CHECK(std::abs(c.orderings[0].R1 - R) < 1e-3);
  CHECK(std::abs(c.orderings[0].R2 - R) < 1e-3);
  CHECK(c.orderings[0].equality);
}

TEST_CASE("top curve of the symmetric model is a geodesic") {
  const ScalarField f = model_field(0.0, 256, 8);
  const CurvatureReport c = curvature_bound_report(f, nwss(f), 1e-2);
  for (const CurvatureRegionReport& g : c.regions) CHECK(std::abs(g.top_kappa) < 1e-3);
  REQUIRE(c.orderings.size() == 1);
  CHECK(std::abs(c.orderings[0].kappa) < 1e-3);
}

TEST_CASE("sphere directions") {
  const auto a = sphere_directions(1000, 3), b = sphere_directions(1000, 3), c = sphere_directions(1000, 4);
  REQUIRE(a.size() == 1000u);
  CHECK(a == b);
  CHECK(a != c);
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const auto& v : a) {
    CHECK(v.norm() == doctest::Approx(1.0));
    mean += v / 1000.0;
  }
  CHECK(mean.norm() < 1e-2);
}

TEST_CASE("Crofton lengths of circles") {
  std::vector<SphericalPoint> equator, parallel;
  for (int k = 0; k < 512; ++k) {
    equator.emplace_back(0.0, kTwoPi * k / 512);
    parallel.emplace_back(oracle::kRBar, kTwoPi * k / 512);
  }
  CHECK(crofton_length(equator, 1, 0) == doctest::Approx(kTwoPi));
  CHECK(crofton_length(equator, 777, 9) == doctest::Approx(kTwoPi));
  const double exact = kTwoPi * std::sqrt(1 - oracle::kRBar * oracle::kRBar);
  CHECK(std::abs(crofton_length(parallel, 100000, 1) - exact) / exact < 1e-2);
  CHECK(polyline_length(equator, true) == doctest::Approx(kTwoPi).epsilon(1e-4));
  CHECK_THROWS_AS(crofton_length(std::vector<SphericalPoint>{{0.0, 0.0}, {0.0, 1.0}}, 10, 0), Error);
}

TEST_CASE("length bounds hold with equality on model fields") {
  for (double R : {0.0, 0.5}) {
    const ScalarField f = model_field(R, 128, 512);
    const NwssReport rep = nwss(f);
    for (const Region& g : rep.regions) {
      const LengthBoundResult l = length_bound_check(f, rep, g.id, 1e-3, 20000, 0);
      CHECK(l.holds);
      CHECK(l.zero_set_holds);
      CHECK(l.lhs == doctest::Approx(l.rhs).epsilon(1e-3));
      CHECK(l.boundary_length == doctest::Approx(l.zero_set_bound).epsilon(1e-3));
      if (R == 0.0) CHECK(l.lhs == doctest::Approx(kTwoPi).epsilon(1e-3));
    }
  }
}

TEST_CASE("disk case has no top curve") {
  const ScalarField f = hemisphere(64, 16);
  const NwssReport rep = nwss(f);
  try {
    length_bound_check(f, rep, 0);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TopCurveNotFound);
  }
}
