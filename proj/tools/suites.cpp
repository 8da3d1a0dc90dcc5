#include <algorithm>
#include <cmath>
#include <numbers>

#include "cli.hpp"
#include "sphoep/catenoid.hpp"
#include "sphoep/comparison.hpp"
#include "sphoep/eigensolver.hpp"
#include "sphoep/error.hpp"
#include "sphoep/model.hpp"

namespace sphoep::cli {

namespace {

constexpr double kPi = std::numbers::pi;

Check at_most(std::string name, double value, double limit) {
  return {std::move(name), value, limit, value <= limit};
}

Check at_least(std::string name, double value, double limit) {
  return {std::move(name), value, limit, value >= limit};
}

Check truth(std::string name, bool ok) { return {std::move(name), ok ? 1.0 : 0.0, 1.0, ok}; }

std::pair<int, int> res_or(const RunConfig& cfg, int n_r, int n_theta) {
  return cfg.resolution.value_or(std::make_pair(n_r, n_theta));
}

std::string tag(const std::string& base, double R) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s[R=%.2f]", base.c_str(), R);
  return buf;
}

ScalarField model_field(double R, int n_r, int n_theta) {
  const ModelSolution m = model(R);
  return sample_model(m, model_grid(m, n_r, n_theta));
}

ScalarField hemisphere(int n_r, int n_theta) {
  return sample(Grid::cap(0.0, n_r, n_theta), [](double r, double) { return r; });
}

std::vector<Check> suite_model() {
  std::vector<Check> out;
  const FamilyConstants& fc = family_constants();
  out.push_back(at_most("r_bar_residual", std::abs(1.0 - fc.r_bar * std::atanh(fc.r_bar)), 1e-12));
  out.push_back(truth("r_bar_in_(0.8,0.9)", fc.r_bar > 0.8 && fc.r_bar < 0.9));
  out.push_back(at_least("tau0", fc.tau0, 1.0));
  double root = 0.0, scaled = 0.0, grad = 0.0, hess = 0.0;
  bool mono = true;
  double prev_plus = -1.0, prev_minus = 1e300;
  for (int k = 0; k < 100; ++k) {
    const double R = 0.9 * k / 99.0;
    const ModelSolution m = model(R);
    for (double r : {m.r_minus, m.r_plus}) {
      const double f = std::abs(xi_unit(r, m.omega));
      const double slope = std::abs(-std::atanh(r) - r / (1.0 - r * r) + m.omega);
      if (R <= 0.85) root = std::max(root, f);
      scaled = std::max(scaled, f / slope);
    }
    grad = std::max(grad, std::abs(xi_eval(m, m.r_plus).grad_norm - 1.0));
    for (double r : {0.5 * (m.r_minus + R), 0.5 * (R + m.r_plus)}) {
      const auto [nn, tt] = hessian_from_identity(m, r);
      const FirstSecondJet j = xi_eval(m, r);
      hess = std::max({hess, std::abs(nn - j.hess_nn), std::abs(tt - j.hess_tt)});
    }
    const double tp = tau_pm(m, Branch::Plus), tm = tau_pm(m, Branch::Minus);
    if (k > 0) mono = mono && tp > prev_plus && tm < prev_minus;
    prev_plus = tp;
    prev_minus = tm;
  }
  out.push_back(at_most("root_residual", root, 1e-12));
  out.push_back(at_most("root_residual_over_slope", scaled, 1e-12));
  out.push_back(at_most("upper_gradient_unit", grad, 1e-10));
  out.push_back(at_most("hessian_identity", hess, 1e-8));
  out.push_back(truth("tau_monotone", mono));
  double inv = 0.0;
  for (double R : {0.1, 0.4, 0.8}) {
    const ModelSolution m = model(R);
    inv = std::max(inv, std::abs(invert_tau(tau_pm(m, Branch::Plus)) - R));
    inv = std::max(inv, std::abs(invert_tau(tau_pm(m, Branch::Minus)) - R));
  }
  out.push_back(at_most("invert_tau_roundtrip", inv, 1e-9));
  return out;
}

std::vector<Check> suite_nwss(const RunConfig& cfg) {
  std::vector<Check> out;
  const auto [nr, nt] = res_or(cfg, 256, 8);
  for (double R : {0.0, 0.25, 0.5}) {
    const NwssReport rep = nwss(model_field(R, nr, nt));
    out.push_back(truth(tag("two_regions", R), rep.regions.size() == 2));
    double err = 0.0;
    for (const Region& g : rep.regions) err = std::max(err, std::abs(g.expected_height - R));
    out.push_back(at_most(tag("expected_height", R), err, 1e-3));
  }
  const NwssReport hemi = nwss(hemisphere(nr, std::max(nt, 8)));
  out.push_back(truth("hemisphere_single_region", hemi.regions.size() == 1));
  if (!hemi.regions.empty()) {
    out.push_back(at_most("hemisphere_tau", std::abs(hemi.regions[0].tau - 1.0), 1e-12));
    out.push_back(at_most("hemisphere_height", std::abs(hemi.regions[0].expected_height - 1.0), 1e-12));
  }
  return out;
}

std::vector<Check> suite_comparison(const RunConfig& cfg) {
  std::vector<Check> out;
  const auto [nr, nt] = res_or(cfg, 256, 8);
  for (double R : {0.0, 0.5}) {
    const ScalarField f = model_field(R, nr, nt);
    const NwssReport rep = nwss(f);
    const ScalarField fn = normalize_to_model(f, R);
    for (const Region& g : rep.regions) {
      const ComparisonReport c = compare_W(fn, pseudo_radial(fn, R, rep, g.id), R);
      out.push_back(at_most(tag("max_violation", R), c.max_violation, c.compare_tol));
      out.push_back(truth(tag("equality_case", R), c.equality_case));
    }
  }
  return out;
}

std::vector<Check> suite_pfunction(const RunConfig& cfg) {
  std::vector<Check> out;
  const auto [nr, nt] = res_or(cfg, 128, 16);
  for (double R : {0.0, 0.25, 0.5, 0.75}) {
    const ScalarField f = model_field(R, nr, nt);
    const double h = f.grid().h_metric();
    out.push_back(at_least(tag("min_laplacian_P", R), p_function_check(f).min_laplacian, -10.0 * h * h));
  }
  return out;
}

std::vector<Check> suite_energy(const RunConfig& cfg) {
  std::vector<Check> out;
  const auto [nr, nt] = res_or(cfg, 128, 128);
  const ScalarField f = hemisphere(nr, nt);
  const NwssReport rep = nwss(f);
  std::vector<double> ts;
  for (int k = 0; k <= 9; ++k) ts.push_back(0.1 * k);
  const double h = f.grid().h_metric();
  const EnergyProfile e = energy_profile(f, rep, 0, ts, 2.0 * h);
  double err = 0.0;
  for (const EnergyRow& r : e.rows) {
    if (!r.skipped) err = std::max(err, std::abs(r.E - 2.0 * kPi));
  }
  out.push_back(at_most("hemisphere_E", err, 2.0 * h));
  out.push_back(truth("monotone_asserted", e.monotone_asserted));
  out.push_back(truth("monotone_holds", e.monotone_holds));
  return out;
}

std::vector<Check> suite_curvature(const RunConfig& cfg) {
  std::vector<Check> out;
  const auto [nr, nt] = res_or(cfg, 256, 8);
  for (double R : {0.25, 0.5}) {
    const ScalarField f = model_field(R, nr, nt);
    const double tol = 2.0 * f.grid().h_r();
    const CurvatureReport c = curvature_bound_report(f, nwss(f), tol);
    for (const CurvatureRegionReport& g : c.regions) {
      out.push_back(at_most(tag("boundary_saturation", R), std::abs(g.boundary_kappa - g.boundary_bound), tol));
      out.push_back(at_most(tag("top_saturation", R), std::abs(g.top_kappa - g.top_bound), tol));
    }
    for (const TopCurveOrdering& o : c.orderings) {
      out.push_back(truth(tag("ordering_holds", R), o.holds));
      out.push_back(truth(tag("ordering_equality", R), o.equality));
    }
  }
  return out;
}

std::vector<Check> suite_lengths(const RunConfig& cfg) {
  std::vector<Check> out;
  const auto [nr, nt] = res_or(cfg, 128, 256);
  for (double R : {0.0, 0.5}) {
    const ScalarField f = model_field(R, nr, nt);
    const NwssReport rep = nwss(f);
    const double h = f.grid().h_metric();
    for (const Region& g : rep.regions) {
      const LengthBoundResult l = length_bound_check(f, rep, g.id, 0.0, 20000, cfg.seed);
      out.push_back(at_most(tag("length_equality", R), std::abs(l.lhs - l.rhs) / l.rhs, h * h * 10.0));
      out.push_back(at_most(tag("zero_set_equality", R), std::abs(l.boundary_length - l.zero_set_bound) / l.zero_set_bound, h * h * 10.0));
      out.push_back(at_most(tag("crofton_boundary", R), std::abs(l.crofton_boundary_length - l.boundary_length) / l.boundary_length, 1e-2));
    }
  }
  std::vector<SphericalPoint> circle;
  const double rb = family_constants().r_bar;
  for (int k = 0; k < 512; ++k) circle.emplace_back(rb, 2.0 * kPi * k / 512);
  const double exact = 2.0 * kPi * std::sqrt(1.0 - rb * rb);
  out.push_back(at_most("crofton_parallel", std::abs(crofton_length(circle, 100000, cfg.seed) - exact) / exact, 1e-2));
  return out;
}

std::vector<Check> suite_catenoid(const RunConfig& cfg) {
  std::vector<Check> out;
  const auto [nr, nt] = res_or(cfg, 64, 32);
  for (double R : {0.0, 0.25, 0.5, 0.75}) {
    const ModelSolution m = model(R);
    const SurfaceMesh mesh = model_catenoid(R, nr, nt);
    const double h = 1.0 / nr;
    const SurfaceMesh X = support_map(sample_model(m, model_grid(m, nr, nt)));
    out.push_back(at_most(tag("support_map", R), max_vertex_deviation(X, reflect_z(mesh)), 200.0 * h * h));
    const BoundaryReport br = boundary_report(mesh);
    double upper = 1e300;
    for (const LoopReport& l : br.loops) upper = std::min(upper, std::abs(l.sphere_radius - 1.0));
    out.push_back(at_most(tag("unit_loop_radius", R), upper, h));
    double orth = 0.0;
    for (const LoopReport& l : br.loops) orth = std::max(orth, l.orthogonality_deviation);
    out.push_back(at_most(tag("free_boundary_orthogonality", R), orth, h));
    out.push_back(at_most(tag("flux_balance", R), br.flux_sum.norm(), h));
    const GaussGraphReport gg = gauss_and_graph_checks(mesh, 2000, cfg.seed);
    out.push_back(truth(tag("gauss_loops_disjoint", R), gg.gauss_loops_disjoint));
    out.push_back(truth(tag("radial_graph", R), gg.radial_graph));
    out.push_back(at_least(tag("support_positive", R), gg.support_min_interior, 0.0));
    out.push_back(truth(tag("critical_sets_coincide", R), support_critical_set(mesh).coincide));
  }
  return out;
}

std::vector<Check> suite_eigen1d() {
  std::vector<Check> out;
  double err = 0.0;
  for (int k = 0; k <= 9; ++k) {
    const ModelSolution m = model(0.1 * k);
    err = std::max(err, std::abs(shoot_next_zero(m.r_minus).r_b - m.r_plus));
  }
  out.push_back(at_most("shooting_vs_roots", err, 1e-8));
  return out;
}

std::vector<Check> suite_eigen2d(const RunConfig& cfg) {
  std::vector<Check> out;
  const int base = cfg.resolution ? cfg.resolution->first : 32;
  for (double R : {0.0, 0.5}) {
    const ModelSolution m = model(R);
    std::vector<double> errs;
    for (int n : {base, 2 * base, 4 * base}) {
      errs.push_back(std::abs(dirichlet_solve(rot_annulus(m.r_minus, m.r_plus, n, n / 2)).lambda - 2.0));
    }
    const double order = std::log2(errs[1] / errs[2]);
    out.push_back(at_least(tag("fitted_order", R), order, 1.9));
  }
  const ModelSolution m = model(0.0);
  const double plain = overdetermined_residual(dirichlet_solve(rot_annulus(m.r_minus, m.r_plus, 64, 32)))[1].relative_deviation;
  const double bent = overdetermined_residual(
      dirichlet_solve(perturbed_annulus(m.r_minus, m.r_plus, {}, {{2, 0.05}}, 64, 32)))[1].relative_deviation;
  out.push_back(at_least("perturbed_deviation_ratio", bent / std::max(plain, 1e-300), 10.0));
  return out;
}

}  // namespace

std::vector<Check> run_suite(const std::string& suite, const RunConfig& cfg) {
  if (suite == "model") return suite_model();
  if (suite == "nwss") return suite_nwss(cfg);
  if (suite == "comparison") return suite_comparison(cfg);
  if (suite == "pfunction") return suite_pfunction(cfg);
  if (suite == "energy") return suite_energy(cfg);
  if (suite == "curvature") return suite_curvature(cfg);
  if (suite == "lengths") return suite_lengths(cfg);
  if (suite == "catenoid") return suite_catenoid(cfg);
  if (suite == "eigen1d") return suite_eigen1d();
  if (suite == "eigen2d") return suite_eigen2d(cfg);
  throw Error(ErrorCode::UnknownSuite, "unknown suite '" + suite + "'");
}

}  // namespace sphoep::cli
