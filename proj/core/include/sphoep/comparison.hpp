#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sphoep/model.hpp"
#include "sphoep/sphere.hpp"

namespace sphoep {

inline constexpr double kNwssTieTol = 1e-9;
// Default compare_tol = kCompareTolC * h^2.
inline constexpr double kCompareTolC = 300.0;

// Field maximum refined by parabolic fits along s (and pole extrapolation).
double refined_max(const ScalarField& field);

struct ComponentTau {
  std::string component;  // "lower" or "upper"
  double max_grad = 0.0;
  double tau = 0.0;
};

struct MaxComponent {
  std::vector<int> nodes;
  bool curve_like = false;
  bool wraps = false;
  double diameter = 0.0;
  std::vector<int> adjacent_regions;
};

struct Region {
  int id = 0;
  std::vector<int> nodes;
  std::vector<std::string> boundary_components;
  double tau = 0.0;
  double expected_height = 1.0;
  bool no_boundary_contact = false;
  Branch branch = Branch::Plus;
};

struct NwssReport {
  double xi_max = 0.0;
  double max_band = 0.0;
  double h = 0.0;
  std::vector<ComponentTau> per_component_tau;
  std::vector<Region> regions;
  std::vector<MaxComponent> max_components;
  std::vector<int> node_region;  // -1 on Max(xi) nodes
  bool max_at_pole = false;
  std::vector<std::string> flags;
};

// Branch for a region with the given NWSS value.
Branch branch_for_tau(double tau);

NwssReport nwss(const ScalarField& field);

// Field scaled so that its refined maximum equals the model maximum for R_bar.
ScalarField normalize_to_model(const ScalarField& field, double R_bar);

// Psi on the region's nodes, NaN elsewhere. Requires a normalised field.
ScalarField pseudo_radial(const ScalarField& field, double R_bar, const NwssReport& report,
                          int region);

struct ComparisonRow {
  double r, theta, W, W_Rbar, violation;
};

struct EnergyRow {
  double t = 0.0;
  double E = 0.0;
  bool skipped = false;
  std::string reason;
};

struct ComparisonReport {
  double max_violation = 0.0;
  double min_violation = 0.0;
  double max_abs_difference = 0.0;
  double compare_tol = 0.0;
  bool equality_case = false;
  std::vector<ComparisonRow> violation_nodes;
  std::vector<ComparisonRow> rows;
  double near_max_ratio = 0.0;      // max W / sqrt(W_Rbar) next to Max(xi)
  double lemma_max_deviation = 0.0; // |W_Rbar / (xi_max - xi) / (4 xi_max) - 1|
  int lemma_nodes = 0;
  std::vector<EnergyRow> energy_profile;
  double p_min_laplacian = 0.0;
};

ComparisonReport compare_W(const ScalarField& field, const ScalarField& psi, double R_bar,
                           double compare_tol = -1.0, double lemma_band = 1e-3);

struct PFunctionResult {
  ScalarField P;
  double min_laplacian = 0.0;
  double max_laplacian = 0.0;
};

// Delta P is taken on rows whose neighbours carry centered jets; one-sided jets on the
// end rows are accurate to O(h^2) in P, which Delta P would amplify to O(1).
PFunctionResult p_function_check(const ScalarField& field);

struct Polyline {
  std::vector<SphericalPoint> points;
  std::vector<double> kappa;
  std::vector<double> grad;
  bool closed = false;
  int region = -1;
  double length = 0.0;
};

struct LevelCurve {
  double level = 0.0;
  std::vector<Polyline> polylines;
  double metric_length = 0.0;
  std::vector<double> kappa_samples() const;
};

// node_region may be empty; then polylines carry region -1.
LevelCurve level_extract(const ScalarField& field, double t,
                         const std::vector<int>& node_region = {});

struct EnergyProfile {
  std::vector<EnergyRow> rows;
  bool monotone_asserted = false;
  bool monotone_holds = true;
  double max_increase = 0.0;
};

EnergyProfile energy_profile(const ScalarField& field, const NwssReport& report, int region,
                             const std::vector<double>& t_grid, double slack = 0.0);

struct CurvatureRegionReport {
  int region = 0;
  Branch branch = Branch::Plus;
  double R_bar = 0.0;
  double boundary_kappa = 0.0;       // worst case over near-maximal |grad| points
  double boundary_bound = 0.0;
  bool boundary_holds = false;
  bool has_top_curve = false;
  double top_kappa = 0.0;            // inner orientation to the region
  double top_bound = 0.0;
  bool top_holds = false;
};

struct TopCurveOrdering {
  int region1 = -1;
  int region2 = -1;
  double R1 = 0.0;
  double R2 = 0.0;
  double kappa = 0.0;                // normal pointing to region 2
  double lower = 0.0, upper = 0.0;
  bool holds = false;
  bool equality = false;
};

struct CurvatureReport {
  std::vector<CurvatureRegionReport> regions;
  std::vector<TopCurveOrdering> orderings;
  std::string convention = "geodesic curvature w.r.t. the inner normal of the region";
};

CurvatureReport curvature_bound_report(const ScalarField& field, const NwssReport& report,
                                       double tol = 0.0);

// Low-discrepancy direction set on the unit sphere with a seeded rotation shift.
std::vector<Eigen::Vector3d> sphere_directions(int n, std::uint64_t seed);

double crofton_length(const std::vector<SphericalPoint>& closed_polyline, int n_planes,
                      std::uint64_t seed = 0);
double crofton_length(const LevelCurve& curve, int n_planes, std::uint64_t seed = 0);
double polyline_length(const std::vector<SphericalPoint>& pts, bool closed);

struct TopCurve {
  std::vector<SphericalPoint> points;
  double length = 0.0;
};

// Per-column vertex fit of a wrapping Max(xi) component.
TopCurve top_curve(const ScalarField& field, const NwssReport& report, int component);

struct LengthBoundResult {
  double top_length = 0.0;
  double boundary_length = 0.0;
  double lhs = 0.0;  // |gamma| / sqrt(1 - R^2)
  double rhs = 0.0;  // |Gamma| / sqrt(1 - r_pm^2)
  bool holds = false;
  double crofton_boundary_length = 0.0;
  double zero_set_bound = 0.0;  // 2 pi sqrt(1 - r_pm^2)
  bool zero_set_holds = false;
};

LengthBoundResult length_bound_check(const ScalarField& field, const NwssReport& report,
                                     int region, double tol = 0.0, int n_planes = 100000,
                                     std::uint64_t seed = 0);

}  // namespace sphoep
