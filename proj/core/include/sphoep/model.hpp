#pragma once

#include "sphoep/sphere.hpp"

namespace sphoep {

enum class Branch { Minus, Plus };

struct FamilyConstants {
  double r_bar;
  double tau0;
  // Largest R whose upper zero stays inside the pole guard.
  double R_cap;
};

// Computed once, shared read-only.
const FamilyConstants& family_constants();

// xi_{1,omega}(r) = 1 - r arctanh r + omega r
double xi_unit(double r, double omega);

struct ModelSolution {
  double R;
  double r_minus;
  double r_plus;
  double alpha;
  double omega;
  double xi_max;
  // Uniform factor applied on top of the geometric normalisation alpha.
  double scale = 1.0;

  double value(double r) const;
  // d xi / d r, smooth through r = 0.
  double dr(double r) const;
  // xi_max - xi(r) without cancellation near r = R.
  double drop(double r) const;
};

ModelSolution model(double R);

// Same family member rescaled so that its maximum equals `xi_max`.
ModelSolution with_max(const ModelSolution& m, double xi_max);

FirstSecondJet xi_eval(const ModelSolution& m, double r);

// Hessian rebuilt from the identity relating it to g and d xi (x) d xi, valid
// away from critical points. Returns (hess_nn, hess_tt).
std::pair<double, double> hessian_from_identity(const ModelSolution& m, double r);

double dr_dR(const ModelSolution& m, Branch b);
double tau_pm(const ModelSolution& m, Branch b);
double invert_tau(double tau);

double chi_branch(const ModelSolution& m, double xi_value, Branch b);

struct ChiDerivatives {
  double first;
  double second;
};

ChiDerivatives chi_derivatives(const ModelSolution& m, double xi_value, Branch b);

double W_model(const ModelSolution& m, double psi);

// r+^2 (1 - r+^2) / (r-^2 (1 - r-^2))
double boundary_ratio_f(const ModelSolution& m);

// |grad xi| on the lower boundary, absolute value.
double lower_boundary_gradient(const ModelSolution& m);

ScalarField sample_model(const ModelSolution& m, const Grid& grid);

// Tensor grid covering [r_minus, r_plus].
Grid model_grid(const ModelSolution& m, int n_r, int n_theta);

}  // namespace sphoep
