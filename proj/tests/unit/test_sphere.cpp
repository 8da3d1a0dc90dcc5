#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sphoep/error.hpp"
#include "sphoep/sphere.hpp"

using namespace sphoep;

TEST_CASE("embedding of reference points") {
  const Eigen::Vector3d n = embed({1.0, 0.0});
  CHECK(n.isApprox(Eigen::Vector3d(0, 0, 1)));
  const Eigen::Vector3d e = embed({0.0, 0.0});
  CHECK(e.isApprox(Eigen::Vector3d(1, 0, 0)));
  const Eigen::Vector3d p = embed({0.5, kPi / 2});
  CHECK(p.x() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(p.y() == doctest::Approx(std::sqrt(0.75)));
  CHECK(p.z() == doctest::Approx(0.5));
  for (double r : {-0.9, -0.1, 0.3, 0.99}) CHECK(embed({r, 1.7}).norm() == doctest::Approx(1.0));
}

TEST_CASE("points outside the sphere are rejected") {
  CHECK_THROWS_AS(SphericalPoint(1.5, 0.0), Error);
  try {
    SphericalPoint(-1.01, 0.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfDomain);
  }
  CHECK(SphericalPoint(0.0, -kPi / 2).theta == doctest::Approx(1.5 * kPi));
}

TEST_CASE("geodesic distance") {
  const SphericalPoint p(0.3, 1.0);
  CHECK(geodesic_distance(p, p) == doctest::Approx(0.0));
  CHECK(geodesic_distance({1.0, 0.0}, {-1.0, 0.0}) == doctest::Approx(kPi));
  CHECK(geodesic_distance({0.0, 0.0}, {0.0, kPi / 2}) == doctest::Approx(kPi / 2));
  // along a meridian the distance is the latitude difference
  CHECK(geodesic_distance({0.2, 0.5}, {0.7, 0.5}) == doctest::Approx(std::asin(0.7) - std::asin(0.2)));
}

TEST_CASE("frame vectors are orthonormal and tangent") {
  const SphericalPoint p(0.4, 2.2);
  const Eigen::Vector3d x = embed(p), n = frame_n(p), t = frame_t(p);
  CHECK(n.norm() == doctest::Approx(1.0));
  CHECK(t.norm() == doctest::Approx(1.0));
  CHECK(std::abs(n.dot(t)) < 1e-14);
  CHECK(std::abs(n.dot(x)) < 1e-14);
  CHECK(std::abs(t.dot(x)) < 1e-14);
  CHECK(n.z() > 0.0);
}

TEST_CASE("metric coefficients") {
  const MetricCoeffs g = metric(0.6);
  CHECK(g.g_rr == doctest::Approx(1.0 / 0.64));
  CHECK(g.g_tt == doctest::Approx(0.64));
}

TEST_CASE("latitude rows of a rotational annulus") {
  const Grid g = Grid::annulus({-0.5, {}}, {0.9, {}}, 16, 8);
  CHECK(g.spacing() == Spacing::Latitude);
  CHECK(g.rows() == 17);
  CHECK(g.cols() == 8);
  CHECK(g.r(0, 0) == -0.5);
  CHECK(g.r(16, 3) == 0.9);
  const double b0 = std::asin(-0.5), b1 = std::asin(0.9);
  for (int i = 0; i <= 16; ++i) CHECK(g.r(i, 0) == doctest::Approx(std::sin(b0 + i * (b1 - b0) / 16)));
  CHECK(g.h_r() == doctest::Approx((b1 - b0) / 16));
}

TEST_CASE("height rows for a perturbed boundary") {
  const Grid g = Grid::annulus({-0.5, {}}, {0.5, {{2, 0.05}}}, 10, 16);
  CHECK(g.spacing() == Spacing::Height);
  CHECK(g.r(10, 0) == doctest::Approx(0.55));
  CHECK(g.r(5, 0) == doctest::Approx(0.025));
  CHECK_THROWS_AS(Grid::annulus({-0.5, {}}, {0.5, {{2, 0.05}}}, 10, 16, Spacing::Latitude), Error);
}

TEST_CASE("sphere and cap grids stay off the poles") {
  const Grid s = Grid::sphere(8, 4);
  CHECK(s.lower_end() == EndKind::Pole);
  CHECK(s.upper_end() == EndKind::Pole);
  CHECK(s.r(0, 0) == doctest::Approx(-std::cos(kPi / 16)));
  CHECK(s.r(7, 0) == doctest::Approx(std::cos(kPi / 16)));
  const Grid c = Grid::cap(0.0, 8, 4);
  CHECK(c.lower_end() == EndKind::Dirichlet);
  CHECK(c.upper_end() == EndKind::Pole);
  CHECK(c.r(0, 0) == 0.0);
  CHECK(c.r(8, 0) < 1.0);
}

TEST_CASE("jet of the height function") {
  const Grid g = Grid::annulus({-0.6, {}}, {0.6, {}}, 64, 16);
  const ScalarField f = sample(g, [](double r, double) { return r; });
  const int mid = 32;
  CHECK(std::abs(g.r(mid, 0)) < 1e-15);
  const FirstSecondJet j = jet(f, mid, 0);
  CHECK(j.grad_norm == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(std::abs(j.laplacian) < 1e-4);
  for (int i : {10, 50}) {
    const double r = g.r(i, 3);
    const FirstSecondJet k = jet(f, i, 3);
    CHECK(k.grad_norm == doctest::Approx(std::sqrt(1 - r * r)).epsilon(1e-4));
    CHECK(k.laplacian == doctest::Approx(-2 * r).epsilon(1e-3));
    CHECK(level_curvature(k) == doctest::Approx(r / std::sqrt(1 - r * r)).epsilon(1e-3));
  }
  CHECK(std::abs(level_curvature(jet(f, mid, 0))) < 1e-6);
}

TEST_CASE("jet of a constant field") {
  const Grid g = Grid::annulus({-0.3, {}}, {0.4, {}}, 16, 8);
  const ScalarField f = sample(g, [](double, double) { return 2.5; });
  const FirstSecondJet j = jet(f, 8, 2);
  CHECK(std::abs(j.grad_norm) < 1e-12);
  CHECK(std::abs(j.laplacian) < 1e-10);
}

TEST_CASE("jet_from_partials matches the analytic chart formulas") {
  // f = x = sqrt(1 - r^2) cos(theta): a degree-one harmonic, laplacian -2 f
  const double r = 0.35, t = 0.8, q = std::sqrt(1 - r * r);
  const FirstSecondJet j = jet_from_partials(r, q * std::cos(t), -r / q * std::cos(t), -q * std::sin(t),
                                             -std::cos(t) / (q * q * q), r / q * std::sin(t), -q * std::cos(t));
  CHECK(j.laplacian == doctest::Approx(-2.0 * q * std::cos(t)));
  CHECK(j.grad_norm == doctest::Approx(std::sqrt(1 - q * q * std::cos(t) * std::cos(t))));
}

TEST_CASE("centered stencil is unavailable on boundary rows") {
  const Grid g = Grid::annulus({-0.3, {}}, {0.4, {}}, 16, 8);
  const ScalarField f = sample(g, [](double r, double) { return r; });
  CHECK_THROWS_AS(jet(f, 0, 0), Error);
  CHECK(jet(f, 0, 0, Stencil::OneSided).grad_norm == doctest::Approx(std::sqrt(1 - 0.09)).epsilon(1e-6));
}

TEST_CASE("fourier profile") {
  const FourierProfile p{0.2, {{2, 0.05}, {3, -0.01}}};
  CHECK(p.value(0.0) == doctest::Approx(0.24));
  CHECK(p.d1(0.3) == doctest::Approx(-0.1 * std::sin(0.6) + 0.03 * std::sin(0.9)));
  CHECK_FALSE(p.is_constant());
  CHECK(p.max_value() >= p.value(0.0));
  CHECK(p.min_value() <= p.value(kPi / 2));
}
