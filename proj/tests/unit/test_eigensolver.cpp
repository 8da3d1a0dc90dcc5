#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles/oracle_values.hpp"
#include "sphoep/eigensolver.hpp"
#include "sphoep/error.hpp"
#include "sphoep/model.hpp"

using namespace sphoep;

namespace {

double sup_error_vs_model(const EigenSolution& sol, const ModelSolution& m) {
  const Grid& g = sol.field.grid();
  double err = 0.0;
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) {
      err = std::max(err, std::abs(sol.field.at(i, j) - m.value(g.r(i, j)) / m.xi_max));
    }
  }
  return err;
}

}  // namespace

TEST_CASE("shooting reproduces the model zeros") {
  for (const oracle::FamilyRow& o : oracle::kFamily) {
    CAPTURE(o.R);
    const ShootResult s = shoot_next_zero(o.r_minus);
    CHECK(std::abs(s.r_b - o.r_plus) < 1e-8);
  }
  const ShootResult s0 = shoot_next_zero(-oracle::kRBar);
  CHECK(std::abs(s0.r_b - oracle::kRBar) < 1e-8);
}

TEST_CASE("shooting profile peaks at the model parameter") {
  const ShootResult s = shoot_next_zero(model(0.25).r_minus);
  CHECK(std::abs(s.r_max - 0.25) < 1e-6);
  CHECK(s.profile.size() > 10);
  CHECK(std::abs(s.eval(s.r_b)) < 1e-10);
  // the profile solves the rotational equation, a multiple of xi_R
  const ModelSolution m = model(0.25);
  const double scale = s.xi_max / m.xi_max;
  for (double r : {-0.5, 0.0, 0.5, 0.8}) CHECK(s.eval(r) == doctest::Approx(scale * m.value(r)).epsilon(1e-7));
}

TEST_CASE("shooting errors") {
  CHECK_THROWS_AS(shoot_next_zero(1.2), Error);
  CHECK_THROWS_AS(find_rb_for_eigenvalue2(0.3), Error);
  try {
    shoot_next_zero(0.95);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoZeroBeforePole);
  }
}

TEST_CASE("next zero for eigenvalue two") {
  CHECK(std::abs(find_rb_for_eigenvalue2(-oracle::kRBar) - oracle::kRBar) < 1e-8);
  CHECK(std::abs(find_rb_for_eigenvalue2(oracle::kFamily[7].r_minus) - oracle::kFamily[7].r_plus) < 1e-8);
  const double rb = find_rb_for_eigenvalue2(-0.5);
  const double e32 = std::abs(dirichlet_solve(rot_annulus(-0.5, rb, 32, 4)).lambda - 2.0);
  const double e64 = std::abs(dirichlet_solve(rot_annulus(-0.5, rb, 64, 4)).lambda - 2.0);
  CHECK(e64 < e32 / 3.0);
}

TEST_CASE("domain validation") {
  CHECK_THROWS_AS(rot_annulus(0.5, 0.2, 32, 8).validate(), Error);
  CHECK_THROWS_AS(rot_annulus(-0.5, 0.2, 4, 8).validate(), Error);
  DomainSpec d = disk(0.0, 32, 8);
  CHECK(d.r_upper == 1.0);
  CHECK_NOTHROW(d.validate());
  d.r_upper = 0.5;
  CHECK_THROWS_AS(d.validate(), Error);
  CHECK(std::string(domain_kind_name(DomainKind::PerturbedAnnulus)).size() > 0);
}

TEST_CASE("operator is symmetric with positive weights") {
  const DiscreteOperator op = assemble(rot_annulus(-0.4, 0.7, 16, 8).grid());
  const Eigen::SparseMatrix<double> diff = op.K - Eigen::SparseMatrix<double>(op.K.transpose());
  CHECK(diff.norm() < 1e-12 * op.K.norm());
  CHECK(op.mass.minCoeff() > 0.0);
}

TEST_CASE("symmetric model annulus converges to eigenvalue two") {
  const ModelSolution m = model(0.0);
  const EigenSolution a = dirichlet_solve(rot_annulus(m.r_minus, m.r_plus, 32, 16));
  const EigenSolution b = dirichlet_solve(rot_annulus(m.r_minus, m.r_plus, 64, 32));
  const double ea = std::abs(a.lambda - 2.0), eb = std::abs(b.lambda - 2.0);
  CHECK(eb < ea);
  CHECK(std::log2(ea / eb) > 1.8);
  CHECK(sup_error_vs_model(b, m) < 1e-3);
  CHECK(b.residual_l2 / b.field_l2 < 1e-8);
  CHECK(std::abs(b.next_lambda - 2.0) > 0.5);
}

TEST_CASE("hemisphere eigenfunction is the height function") {
  const EigenSolution sol = dirichlet_solve(disk(0.0, 128, 8));
  CHECK(std::abs(sol.lambda - 2.0) < 1e-3);
  const Grid& g = sol.field.grid();
  double err = 0.0, top = 0.0;
  for (int i = 0; i < g.rows(); ++i) top = std::max(top, g.r(i, 0));
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) err = std::max(err, std::abs(sol.field.at(i, j) - g.r(i, j) / top));
  }
  CHECK(err < 1e-3);
}

TEST_CASE("generic annulus does not carry eigenvalue two") {
  const EigenSolution sol = dirichlet_solve(rot_annulus(-0.3, 0.6, 32, 16));
  const double h = sol.field.grid().h_r();
  CHECK(std::abs(sol.lambda - 2.0) > 10 * h * h);
}

TEST_CASE("full sphere carries a triple eigenvalue two") {
  const EigenRun run = nearest_eigenpairs(assemble(full_sphere(32, 16).grid()), 3);
  REQUIRE(run.pairs.size() == 3);
  for (const EigenPair& p : run.pairs) CHECK(std::abs(p.lambda - 2.0) < 3e-2);
  // the cos/sin pair is exactly degenerate by rotational symmetry
  EigenOptions opts;
  opts.shift = 0.5 * (run.pairs[1].lambda + run.pairs[2].lambda);
  try {
    dirichlet_solve(full_sphere(32, 16), opts);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateNearTwo);
  }
}

TEST_CASE("overdetermined residual on model annuli") {
  const ModelSolution m0 = model(0.0);
  const auto od0 = overdetermined_residual(dirichlet_solve(rot_annulus(m0.r_minus, m0.r_plus, 64, 16)));
  REQUIRE(od0.size() == 2);
  CHECK(od0[0].relative_deviation < 1e-10);
  CHECK(od0[1].relative_deviation < 1e-10);
  CHECK(od0[0].b / od0[1].b == doctest::Approx(1.0).epsilon(1e-9));

  const ModelSolution m = model(0.5);
  const auto od = overdetermined_residual(dirichlet_solve(rot_annulus(m.r_minus, m.r_plus, 128, 8)));
  const double qm = std::abs(m.r_minus) * std::sqrt(1 - m.r_minus * m.r_minus);
  const double qp = m.r_plus * std::sqrt(1 - m.r_plus * m.r_plus);
  const double ratio = od[1].b / od[0].b;  // upper over lower
  CHECK(ratio == doctest::Approx(qm / qp).epsilon(2e-3));
}

TEST_CASE("perturbed annulus keeps a deviation under refinement") {
  const ModelSolution m = model(0.0);
  double last = 0.0;
  for (int n : {32, 64}) {
    const auto od = overdetermined_residual(
        dirichlet_solve(perturbed_annulus(m.r_minus, m.r_plus, {}, {{2, 0.05}}, n, 32)));
    CHECK(od[1].relative_deviation > 0.05);
    if (last > 0.0) CHECK(od[1].relative_deviation == doctest::Approx(last).epsilon(0.2));
    last = od[1].relative_deviation;
  }
}

TEST_CASE("boundary gradients are reported per component") {
  const ModelSolution m = model(0.25);
  const EigenSolution sol = dirichlet_solve(rot_annulus(m.r_minus, m.r_plus, 32, 8));
  REQUIRE(sol.boundary_grad.size() == 2);
  CHECK(sol.boundary_grad[0].component == "lower");
  CHECK(sol.boundary_grad[1].component == "upper");
  CHECK(sol.boundary_grad[1].grad.size() == 8u);
}

TEST_CASE("solves are deterministic") {
  const DomainSpec spec = perturbed_annulus(-0.6, 0.7, {{3, 0.02}}, {}, 32, 16);
  const EigenSolution a = dirichlet_solve(spec), b = dirichlet_solve(spec);
  CHECK(a.lambda == b.lambda);
  CHECK(a.field.values() == b.field.values());
}
