#include "sphoep/model.hpp"

#include <cmath>

#include "sphoep/error.hpp"

namespace sphoep {

namespace {

// Bisection to adjacent doubles; f(a) and f(b) must have opposite signs.
template <class F>
double bisect(F f, double a, double b) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0)) throw Error(ErrorCode::ParameterOutOfRange, "root not bracketed");
  for (int it = 0; it < 2000; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= std::min(a, b) || m >= std::max(a, b)) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  return std::abs(fa) <= std::abs(fb) ? a : b;
}

double omega_of(double R) { return std::atanh(R) + R / (1.0 - R * R); }

double r_minus_of(double omega) {
  return bisect([omega](double r) { return xi_unit(r, omega); }, -1.0 + kPoleGuard, -1e-12);
}

double r_plus_of(double R, double omega, double r_bar) {
  const double lo = std::max(R, r_bar * 1e-3);
  return bisect([omega](double r) { return xi_unit(r, omega); }, lo, 1.0 - kPoleGuard);
}

// -z - log1p(-z), and z + (1 - z) log1p(-z), without cancellation for small z.
double g1(double z) {
  if (std::abs(z) < 0.25) {
    double s = 0.0, p = z;
    for (int k = 2; k < 60; ++k) {
      p *= z;
      s += p / k;
      if (std::abs(p) < 1e-18 * std::abs(s)) break;
    }
    return s;
  }
  return -z - std::log1p(-z);
}

double h1(double z) {
  if (std::abs(z) < 0.25) {
    double s = 0.0, p = z;
    for (int k = 2; k < 60; ++k) {
      p *= z;
      s += p / (static_cast<double>(k) * (k - 1));
      if (std::abs(p) < 1e-18 * std::abs(s)) break;
    }
    return s;
  }
  return z + (1.0 - z) * std::log1p(-z);
}

// d u / d r for u = 1 - r arctanh r + omega(R) r, expanded around R.
double unit_slope(double R, double r) {
  const double a = 1.0 - R, b = 1.0 + R, d = r - R;
  return -0.5 * (d / (a * (a - d)) + d / (b * (b + d)) - std::log1p(-d / a) + std::log1p(d / b));
}

// u(R) - u(r) for the same u.
double unit_drop(double R, double r) {
  const double a = 1.0 - R, b = 1.0 + R, d = r - R;
  return 0.5 * (g1(d / a) + g1(-d / b) + a * h1(d / a) + b * h1(-d / b));
}

}  // namespace

double xi_unit(double r, double omega) { return 1.0 - r * std::atanh(r) + omega * r; }

const FamilyConstants& family_constants() {
  static const FamilyConstants c = [] {
    FamilyConstants k{};
    k.r_bar = bisect([](double r) { return 1.0 - r * std::atanh(r); }, 0.8, 0.99);
    k.tau0 = 1.0 / (k.r_bar * std::sqrt(1.0 - k.r_bar * k.r_bar));
    const double rg = 1.0 - kPoleGuard;
    const double omega_cap = (rg * std::atanh(rg) - 1.0) / rg;
    k.R_cap = bisect([omega_cap](double R) { return omega_of(R) - omega_cap; }, 0.0, 1.0 - 1e-12);
    // Step inside so that the upper root is bracketed strictly.
    k.R_cap = std::nextafter(k.R_cap, 0.0);
    while (xi_unit(rg, omega_of(k.R_cap)) >= 0.0) k.R_cap = std::nextafter(k.R_cap, 0.0);
    return k;
  }();
  return c;
}

double ModelSolution::value(double r) const { return scale * alpha * xi_unit(r, omega); }

double ModelSolution::dr(double r) const { return scale * alpha * unit_slope(R, r); }

double ModelSolution::drop(double r) const { return scale * alpha * unit_drop(R, r); }

ModelSolution model(double R) {
  if (!(R >= 0.0 && R < 1.0)) throw Error(ErrorCode::ParameterOutOfRange, "R must lie in [0, 1)");
  const FamilyConstants& k = family_constants();
  if (R > k.R_cap) {
    throw Error(ErrorCode::ParameterOutOfRange, "upper zero lies beyond the pole guard");
  }
  ModelSolution m{};
  m.R = R;
  m.omega = omega_of(R);
  m.r_plus = (R == 0.0) ? k.r_bar : r_plus_of(R, m.omega, k.r_bar);
  m.r_minus = (R == 0.0) ? -k.r_bar : r_minus_of(m.omega);
  m.alpha = m.r_plus * std::sqrt(1.0 - m.r_plus * m.r_plus);
  m.xi_max = m.alpha / (1.0 - R * R);
  m.scale = 1.0;
  return m;
}

ModelSolution with_max(const ModelSolution& m, double xi_max) {
  ModelSolution out = m;
  out.scale = xi_max / (m.alpha / (1.0 - m.R * m.R));
  out.xi_max = xi_max;
  return out;
}

FirstSecondJet xi_eval(const ModelSolution& m, double r) {
  const double slack = 1e-14;
  if (!(r >= m.r_minus - slack && r <= m.r_plus + slack)) {
    throw Error(ErrorCode::OutOfDomain, "r outside [r_minus, r_plus]");
  }
  const double q = 1.0 - r * r;
  const double a = m.scale * m.alpha;
  FirstSecondJet j;
  j.value = m.value(r);
  j.grad_n = std::sqrt(q) * m.dr(r);
  j.grad_t = 0.0;
  j.grad_norm = std::abs(j.grad_n);
  j.hess_nn = -j.value - a / q;
  j.hess_tt = -j.value + a / q;
  j.hess_nt = 0.0;
  j.laplacian = j.hess_nn + j.hess_tt;
  return j;
}

std::pair<double, double> hessian_from_identity(const ModelSolution& m, double r) {
  const double q = 1.0 - r * r;
  const double a = m.scale * m.alpha;
  const double xi = m.value(r);
  const double den = q * xi - a;
  const double A = r * r * a / (den * den);
  const double g2 = q * m.dr(r) * m.dr(r);
  const double tt = A * g2 - xi;
  const double nn = tt - 2.0 * A * g2;
  return {nn, tt};
}

double dr_dR(const ModelSolution& m, Branch b) {
  const double r = (b == Branch::Plus) ? m.r_plus : m.r_minus;
  const double d = 1.0 - m.R * m.R;
  return 2.0 * r * r * (1.0 - r * r) / (d * d);
}

double tau_pm(const ModelSolution& m, Branch b) {
  const double d = 1.0 - m.R * m.R;
  if (b == Branch::Plus) return d / (m.r_plus * std::sqrt(1.0 - m.r_plus * m.r_plus));
  return -d / (m.r_minus * std::sqrt(1.0 - m.r_minus * m.r_minus));
}

double invert_tau(double tau) {
  if (!(tau >= 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "tau must be non-negative");
  const FamilyConstants& k = family_constants();
  if (tau <= 1.0) return 1.0;
  if (tau < k.tau0) {
    auto tau_minus = [](double R) {
      const double rm = (R == 0.0) ? -family_constants().r_bar : r_minus_of(omega_of(R));
      return -(1.0 - R * R) / (rm * std::sqrt(1.0 - rm * rm));
    };
    const double hi = 1.0 - 1e-12;
    if (tau <= tau_minus(hi)) return hi;
    return bisect([&](double R) { return tau_minus(R) - tau; }, 0.0, hi);
  }
  if (tau == k.tau0) return 0.0;
  auto tau_plus = [](double R) { return tau_pm(model(R), Branch::Plus); };
  if (tau > tau_plus(k.R_cap)) {
    throw Error(ErrorCode::ParameterOutOfRange, "tau beyond the representable upper branch");
  }
  return bisect([&](double R) { return tau_plus(R) - tau; }, 0.0, k.R_cap);
}

double chi_branch(const ModelSolution& m, double xi_value, Branch b) {
  if (!(xi_value >= 0.0 && xi_value <= m.xi_max)) {
    throw Error(ErrorCode::ValueOutOfRange, "xi value outside [0, xi_max]");
  }
  if (xi_value == m.xi_max) return m.R;
  if (xi_value == 0.0) return b == Branch::Plus ? m.r_plus : m.r_minus;
  const double target = m.xi_max - xi_value;
  auto f = [&](double r) { return m.drop(r) - target; };
  // drop at the zero may round just below xi_max.
  const double end = (b == Branch::Plus) ? m.r_plus : m.r_minus;
  if (f(end) <= 0.0) return end;
  if (b == Branch::Plus) return bisect(f, m.R, m.r_plus);
  return bisect(f, m.r_minus, m.R);
}

ChiDerivatives chi_derivatives(const ModelSolution& m, double xi_value, Branch b) {
  const double chi = chi_branch(m, xi_value, b);
  const double q = 1.0 - chi * chi;
  const double d1 = m.dr(chi);
  const double d2 = -2.0 * m.scale * m.alpha / (q * q);
  return {1.0 / d1, -d2 / (d1 * d1 * d1)};
}

double W_model(const ModelSolution& m, double psi) {
  const double slack = 1e-14;
  if (!(psi >= m.r_minus - slack && psi <= m.r_plus + slack)) {
    throw Error(ErrorCode::OutOfDomain, "psi outside [r_minus, r_plus]");
  }
  const double d = m.dr(psi);
  return (1.0 - psi * psi) * d * d;
}

double boundary_ratio_f(const ModelSolution& m) {
  const double p = m.r_plus * m.r_plus * (1.0 - m.r_plus * m.r_plus);
  const double q = m.r_minus * m.r_minus * (1.0 - m.r_minus * m.r_minus);
  return p / q;
}

double lower_boundary_gradient(const ModelSolution& m) {
  return m.scale * m.alpha / (std::abs(m.r_minus) * std::sqrt(1.0 - m.r_minus * m.r_minus));
}

Grid model_grid(const ModelSolution& m, int n_r, int n_theta) {
  return Grid::annulus(FourierProfile{m.r_minus, {}}, FourierProfile{m.r_plus, {}}, n_r, n_theta);
}

ScalarField sample_model(const ModelSolution& m, const Grid& grid) {
  ScalarField f = sample(grid, [&m](double r, double) { return m.value(r); });
  for (int i : {0, grid.rows() - 1}) {
    if (!grid.is_boundary_row(i)) continue;
    for (int j = 0; j < grid.cols(); ++j) f.values()[grid.index(i, j)] = 0.0;
  }
  return f;
}

}  // namespace sphoep
