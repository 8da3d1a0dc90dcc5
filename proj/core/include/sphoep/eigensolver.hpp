#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <string>
#include <utility>
#include <vector>

#include "sphoep/sphere.hpp"

namespace sphoep {

enum class DomainKind { RotAnnulus, PerturbedAnnulus, Disk, Sphere };

const char* domain_kind_name(DomainKind kind);

struct DomainSpec {
  DomainKind kind = DomainKind::RotAnnulus;
  double r_lower = 0.0;
  double r_upper = 0.0;  // 1 for a disk (north pole)
  std::vector<std::pair<int, double>> fourier_lower;
  std::vector<std::pair<int, double>> fourier_upper;
  int n_r = 64;
  int n_theta = 64;

  void validate() const;
  Grid grid() const;
};

DomainSpec rot_annulus(double r_lower, double r_upper, int n_r, int n_theta);
DomainSpec perturbed_annulus(double r_lower, double r_upper,
                             std::vector<std::pair<int, double>> lower,
                             std::vector<std::pair<int, double>> upper, int n_r, int n_theta);
// Polar cap {r > r_lower}; the hemisphere is disk(0, ...).
DomainSpec disk(double r_lower, int n_r, int n_theta);
DomainSpec full_sphere(int n_r, int n_theta);

struct ProfileSample {
  double r;
  double xi;
  double dxi;
};

struct ShootResult {
  double r_b = 0.0;
  double r_max = 0.0;
  double xi_max = 0.0;
  std::vector<ProfileSample> profile;

  // Cubic Hermite interpolation of the dense profile.
  double eval(double r) const;
};

ShootResult shoot_next_zero(double r_a);
double find_rb_for_eigenvalue2(double r_a);

struct DiscreteOperator {
  Grid grid;
  Eigen::SparseMatrix<double> K;  // symmetric discrete -Delta (energy form)
  Eigen::VectorXd mass;            // lumped area weights
  std::vector<int> unknown_to_node;
  std::vector<int> node_to_unknown;  // -1 on Dirichlet rows
};

DiscreteOperator assemble(const Grid& grid);

struct EigenOptions {
  double shift = 2.0;
  double cluster_tol = 2e-6;
  double solver_tol = 1e-10;
  int max_iter = 10000;
  unsigned seed = 20240611u;
};

struct EigenPair {
  double lambda;
  Eigen::VectorXd vector;
  double residual;  // relative, discrete L2
};

struct EigenRun {
  std::vector<EigenPair> pairs;  // ordered by distance to the shift
  int iterations = 0;
};

EigenRun nearest_eigenpairs(const DiscreteOperator& op, int count, const EigenOptions& opts = {});

struct BoundaryGradient {
  std::string component;  // "lower" or "upper"
  int row = 0;
  std::vector<double> theta;
  std::vector<double> r;
  std::vector<double> grad;
};

// |grad xi| along every Dirichlet row from one-sided stencils.
std::vector<BoundaryGradient> boundary_gradients(const ScalarField& field);

struct EigenSolution {
  double lambda = 0.0;
  ScalarField field;
  std::vector<BoundaryGradient> boundary_grad;
  double residual_l2 = 0.0;
  double field_l2 = 0.0;
  int iterations = 0;
  double next_lambda = 0.0;
};

EigenSolution dirichlet_solve(const DomainSpec& spec, const EigenOptions& opts = {});

struct OverdeterminedComponent {
  std::string component;
  double b = 0.0;
  double max_deviation = 0.0;
  double relative_deviation = 0.0;
};

std::vector<OverdeterminedComponent> overdetermined_residual(const EigenSolution& sol);
std::vector<OverdeterminedComponent> overdetermined_residual(const ScalarField& field);

}  // namespace sphoep
