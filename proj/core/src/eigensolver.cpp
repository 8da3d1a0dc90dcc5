#include "sphoep/eigensolver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

#include "sphoep/error.hpp"

namespace sphoep {

const char* domain_kind_name(DomainKind kind) {
  switch (kind) {
    case DomainKind::RotAnnulus: return "rot_annulus";
    case DomainKind::PerturbedAnnulus: return "perturbed_annulus";
    case DomainKind::Disk: return "disk";
    case DomainKind::Sphere: return "sphere";
  }
  return "unknown";
}

void DomainSpec::validate() const {
  if (n_r < 8 || n_theta < 1) throw Error(ErrorCode::InvalidDomain, "resolution too small");
  switch (kind) {
    case DomainKind::RotAnnulus:
      if (!fourier_lower.empty() || !fourier_upper.empty()) {
        throw Error(ErrorCode::InvalidDomain, "rot_annulus takes no Fourier perturbation");
      }
      [[fallthrough]];
    case DomainKind::PerturbedAnnulus:
      if (!(-1.0 < r_lower && r_lower < r_upper && r_upper < 1.0)) {
        throw Error(ErrorCode::InvalidDomain, "need -1 < r_lower < r_upper < 1");
      }
      break;
    case DomainKind::Disk:
      if (!(-1.0 < r_lower && r_lower < 1.0) || r_upper != 1.0) {
        throw Error(ErrorCode::InvalidDomain, "disk needs -1 < r_lower < 1 and r_upper = 1");
      }
      if (!fourier_lower.empty() || !fourier_upper.empty()) {
        throw Error(ErrorCode::InvalidDomain, "disk takes no Fourier perturbation");
      }
      break;
    case DomainKind::Sphere:
      break;
  }
  (void)grid();
}

Grid DomainSpec::grid() const {
  switch (kind) {
    case DomainKind::RotAnnulus:
    case DomainKind::PerturbedAnnulus:
      return Grid::annulus(FourierProfile{r_lower, fourier_lower},
                           FourierProfile{r_upper, fourier_upper}, n_r, n_theta);
    case DomainKind::Disk:
      return Grid::cap(r_lower, n_r, n_theta);
    case DomainKind::Sphere:
      return Grid::sphere(n_r, n_theta);
  }
  throw Error(ErrorCode::InvalidDomain, "unknown domain kind");
}

DomainSpec rot_annulus(double r_lower, double r_upper, int n_r, int n_theta) {
  DomainSpec s;
  s.kind = DomainKind::RotAnnulus;
  s.r_lower = r_lower;
  s.r_upper = r_upper;
  s.n_r = n_r;
  s.n_theta = n_theta;
  return s;
}

DomainSpec perturbed_annulus(double r_lower, double r_upper,
                             std::vector<std::pair<int, double>> lower,
                             std::vector<std::pair<int, double>> upper, int n_r, int n_theta) {
  DomainSpec s = rot_annulus(r_lower, r_upper, n_r, n_theta);
  s.kind = DomainKind::PerturbedAnnulus;
  s.fourier_lower = std::move(lower);
  s.fourier_upper = std::move(upper);
  return s;
}

DomainSpec disk(double r_lower, int n_r, int n_theta) {
  DomainSpec s;
  s.kind = DomainKind::Disk;
  s.r_lower = r_lower;
  s.r_upper = 1.0;
  s.n_r = n_r;
  s.n_theta = n_theta;
  return s;
}

DomainSpec full_sphere(int n_r, int n_theta) {
  DomainSpec s;
  s.kind = DomainKind::Sphere;
  s.r_lower = -1.0;
  s.r_upper = 1.0;
  s.n_r = n_r;
  s.n_theta = n_theta;
  return s;
}

// ---------------------------------------------------------------------------
// Shooting

namespace {

using State = std::array<double, 2>;

State rhs(double r, const State& y) {
  return {y[1], (2.0 * r * y[1] - 2.0 * y[0]) / (1.0 - r * r)};
}

struct DpStep {
  State y5;
  State err;
};

// One Dormand-Prince 5(4) step.
DpStep dp_step(double r, const State& y, double h) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  auto add = [](const State& y0, std::initializer_list<std::pair<double, const State*>> terms,
                double hh) {
    State out = y0;
    for (auto [c, k] : terms) {
      out[0] += hh * c * (*k)[0];
      out[1] += hh * c * (*k)[1];
    }
    return out;
  };
  const State k1 = rhs(r, y);
  const State k2 = rhs(r + c2 * h, add(y, {{a21, &k1}}, h));
  const State k3 = rhs(r + c3 * h, add(y, {{a31, &k1}, {a32, &k2}}, h));
  const State k4 = rhs(r + c4 * h, add(y, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, h));
  const State k5 = rhs(r + c5 * h, add(y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, h));
  const State k6 =
      rhs(r + h, add(y, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, h));
  const State y5 = add(y, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}}, h);
  const State k7 = rhs(r + h, y5);
  State err{};
  for (int c = 0; c < 2; ++c) {
    err[c] = h * (e1 * k1[c] + e3 * k3[c] + e4 * k4[c] + e5 * k5[c] + e6 * k6[c] + e7 * k7[c]);
  }
  return {y5, err};
}

// Smallest sub-step from (r, y) at which component `c` changes sign, by bisection.
double polish(double r, const State& y, double h, int c) {
  const double s0 = y[c];
  double lo = 0.0, hi = h;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const State ym = dp_step(r, y, mid).y5;
    if ((ym[c] > 0) == (s0 > 0) && ym[c] != 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double ShootResult::eval(double r) const {
  if (profile.empty()) throw Error(ErrorCode::OutOfDomain, "empty profile");
  if (r <= profile.front().r) return profile.front().xi;
  if (r >= profile.back().r) return profile.back().xi;
  auto it = std::upper_bound(profile.begin(), profile.end(), r,
                             [](double v, const ProfileSample& s) { return v < s.r; });
  const ProfileSample& b = *it;
  const ProfileSample& a = *(it - 1);
  const double h = b.r - a.r;
  const double t = (r - a.r) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * a.xi + (t3 - 2 * t2 + t) * h * a.dxi +
         (-2 * t3 + 3 * t2) * b.xi + (t3 - t2) * h * b.dxi;
}

ShootResult shoot_next_zero(double r_a) {
  if (!(r_a > -1.0 && r_a < 1.0)) throw Error(ErrorCode::ParameterOutOfRange, "r_a outside (-1, 1)");
  constexpr double atol = 1e-12, rtol = 1e-10;
  constexpr double r_stop = 1.0 - 1e-6;
  ShootResult out;
  double r = r_a;
  State y{0.0, 1.0};
  out.profile.push_back({r, y[0], y[1]});
  double h = 1e-4;
  bool have_max = false;
  for (int steps = 0; steps < 10000000; ++steps) {
    if (r >= r_stop) break;
    h = std::min(h, r_stop - r);
    const DpStep st = dp_step(r, y, h);
    double en = 0.0;
    for (int c = 0; c < 2; ++c) {
      const double sc = atol + rtol * std::max(std::abs(y[c]), std::abs(st.y5[c]));
      en = std::max(en, std::abs(st.err[c]) / sc);
    }
    if (en > 1.0 || !std::isfinite(en)) {
      h *= std::max(0.1, 0.9 * std::pow(en, -0.2));
      if (!std::isfinite(en)) h *= 0.1;
      if (h < 1e-18) throw Error(ErrorCode::NoZeroBeforePole, "step size underflow");
      continue;
    }
    if (!have_max && y[1] > 0.0 && st.y5[1] <= 0.0) {
      const double hm = polish(r, y, h, 1);
      const State ym = dp_step(r, y, hm).y5;
      out.r_max = r + hm;
      out.xi_max = ym[0];
      have_max = true;
    }
    if (steps > 0 || y[0] != 0.0) {
      if (y[0] > 0.0 && st.y5[0] <= 0.0) {
        const double hz = polish(r, y, h, 0);
        const State yz = dp_step(r, y, hz).y5;
        out.r_b = r + hz;
        out.profile.push_back({out.r_b, 0.0, yz[1]});
        if (!have_max) throw Error(ErrorCode::NoZeroBeforePole, "zero without interior maximum");
        return out;
      }
    }
    r += h;
    y = st.y5;
    out.profile.push_back({r, y[0], y[1]});
    h *= std::min(5.0, 0.9 * std::pow(std::max(en, 1e-10), -0.2));
  }
  throw Error(ErrorCode::NoZeroBeforePole, "no zero before r = 1 - 1e-6");
}

double find_rb_for_eigenvalue2(double r_a) {
  if (!(r_a > -1.0 && r_a < 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "r_a outside (-1, 0)");
  return shoot_next_zero(r_a).r_b;
}

// ---------------------------------------------------------------------------
// Assembly

DiscreteOperator assemble(const Grid& grid) {
  DiscreteOperator op;
  op.grid = grid;
  const int rows = grid.rows(), cols = grid.cols();
  op.node_to_unknown.assign(grid.size(), -1);
  for (int i = 0; i < rows; ++i) {
    if (grid.is_boundary_row(i)) continue;
    for (int j = 0; j < cols; ++j) {
      op.node_to_unknown[grid.index(i, j)] = static_cast<int>(op.unknown_to_node.size());
      op.unknown_to_node.push_back(grid.index(i, j));
    }
  }
  const int n = static_cast<int>(op.unknown_to_node.size());
  const double hs = grid.hs(), ht = grid.htheta();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n) * 13);
  auto unk = [&](int i, int j) { return op.node_to_unknown[grid.index(i, j)]; };
  auto add = [&](int a, int b, double w) {
    if (a >= 0 && b >= 0) trip.emplace_back(a, b, w);
  };
  auto add_diff = [&](int a, int b, double w) {
    add(a, a, w);
    add(b, b, w);
    add(a, b, -w);
    add(b, a, -w);
  };
  auto clampq = [](double r) {
    const double rc = std::clamp(r, -1.0 + kPoleGuard, 1.0 - kPoleGuard);
    return 1.0 - rc * rc;
  };
  const bool rotational = grid.is_rotational();
  // s-faces and corner cross terms
  for (int i = 0; i + 1 < rows; ++i) {
    const double sf = grid.s(i) + 0.5 * hs;
    for (int j = 0; j < cols; ++j) {
      const Grid::Map m = grid.map(sf, grid.theta(j));
      const double q = clampq(m.r);
      const double a = (m.c * m.c / q + q) / m.D;
      add_diff(unk(i, j), unk(i + 1, j), a * ht / hs);
      if (rotational || cols < 2) continue;
      const Grid::Map mc = grid.map(sf, grid.theta(j) + 0.5 * ht);
      const double b = -mc.c / clampq(mc.r);
      // f_s = (u . f) / (2 hs), f_t = (v . f) / (2 ht) over corners (i,j),(i,j+1),(i+1,j),(i+1,j+1)
      const std::array<int, 4> idx{unk(i, j), unk(i, j + 1), unk(i + 1, j), unk(i + 1, j + 1)};
      const std::array<double, 4> u{-1, -1, 1, 1};
      const std::array<double, 4> v{-1, 1, -1, 1};
      const double w = b * hs * ht / (4.0 * hs * ht);
      for (int p = 0; p < 4; ++p) {
        for (int qq = 0; qq < 4; ++qq) add(idx[p], idx[qq], w * (u[p] * v[qq] + v[p] * u[qq]));
      }
    }
  }
  // theta-faces
  if (cols >= 2) {
    for (int i = 0; i < rows; ++i) {
      if (grid.is_boundary_row(i)) continue;
      for (int j = 0; j < cols; ++j) {
        const Grid::Map m = grid.map(grid.s(i), grid.theta(j) + 0.5 * ht);
        const double d = m.D / clampq(m.r);
        add_diff(unk(i, j), unk(i, j + 1), d * hs / ht);
      }
    }
  }
  op.K.resize(n, n);
  op.K.setFromTriplets(trip.begin(), trip.end());
  op.K.makeCompressed();
  op.mass.resize(n);
  for (int k = 0; k < n; ++k) {
    const int node = op.unknown_to_node[k];
    const int i = node / cols, j = node % cols;
    op.mass[k] = grid.map(grid.s(i), grid.theta(j)).D * hs * ht;
  }
  return op;
}

// ---------------------------------------------------------------------------
// Shift-invert subspace iteration

namespace {

// M-orthonormalise columns in place (modified Gram-Schmidt, two passes).
void m_orthonormalize(Eigen::MatrixXd& Y, const Eigen::VectorXd& mass) {
  for (int pass = 0; pass < 2; ++pass) {
    for (int k = 0; k < Y.cols(); ++k) {
      for (int l = 0; l < k; ++l) {
        const double c = Y.col(l).dot(mass.cwiseProduct(Y.col(k)));
        Y.col(k) -= c * Y.col(l);
      }
      const double nrm = std::sqrt(Y.col(k).dot(mass.cwiseProduct(Y.col(k))));
      if (nrm > 0) Y.col(k) /= nrm;
    }
  }
}

double relative_residual(const DiscreteOperator& op, const Eigen::VectorXd& x, double lambda) {
  const Eigen::VectorXd r = op.K * x - lambda * op.mass.cwiseProduct(x);
  const double num = std::sqrt(r.cwiseAbs2().cwiseQuotient(op.mass).sum());
  const double den = std::sqrt(x.cwiseAbs2().cwiseProduct(op.mass).sum());
  return num / den;
}

}  // namespace

EigenRun nearest_eigenpairs(const DiscreteOperator& op, int count, const EigenOptions& opts) {
  const int n = static_cast<int>(op.mass.size());
  if (count < 1 || n < count + 1) throw Error(ErrorCode::ParameterOutOfRange, "bad pair count");
  const int p = std::min(n, count + 3);
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  double sigma = opts.shift;
  for (int attempt = 0; attempt < 4; ++attempt) {
    Eigen::SparseMatrix<double> A = op.K;
    for (int k = 0; k < n; ++k) A.coeffRef(k, k) -= sigma * op.mass[k];
    lu.compute(A);
    if (lu.info() == Eigen::Success) break;
    sigma = opts.shift * (1.0 + 1e-9 * (attempt + 1));
  }
  if (lu.info() != Eigen::Success) throw Error(ErrorCode::EigenNotConverged, "shifted factorisation failed");

  std::mt19937_64 rng(opts.seed);
  Eigen::MatrixXd X(n, p);
  for (int k = 0; k < p; ++k) {
    for (int i = 0; i < n; ++i) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      X(i, k) = (k == 0) ? 1.0 + 0.1 * u : 2.0 * u - 1.0;
    }
  }
  m_orthonormalize(X, op.mass);
  EigenRun run;
  std::vector<double> ritz(p);
  for (int it = 1; it <= opts.max_iter; ++it) {
    Eigen::MatrixXd Y = lu.solve(op.mass.asDiagonal() * X);
    m_orthonormalize(Y, op.mass);
    const Eigen::MatrixXd Kr = Y.transpose() * (op.K * Y);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Kr + Kr.transpose()));
    std::vector<int> order(p);
    std::iota(order.begin(), order.end(), 0);
    const Eigen::VectorXd ev = es.eigenvalues();
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return std::abs(ev[a] - opts.shift) < std::abs(ev[b] - opts.shift);
    });
    Eigen::MatrixXd V(p, p);
    for (int k = 0; k < p; ++k) {
      V.col(k) = es.eigenvectors().col(order[k]);
      ritz[k] = ev[order[k]];
    }
    X = Y * V;
    bool done = true;
    run.pairs.clear();
    for (int k = 0; k < count; ++k) {
      const double res = relative_residual(op, X.col(k), ritz[k]);
      run.pairs.push_back({ritz[k], X.col(k), res});
      if (!(res <= opts.solver_tol)) done = false;
    }
    run.iterations = it;
    if (done) return run;
  }
  throw Error(ErrorCode::EigenNotConverged, "iteration budget exceeded");
}

// ---------------------------------------------------------------------------

std::vector<BoundaryGradient> boundary_gradients(const ScalarField& field) {
  const Grid& g = field.grid();
  std::vector<BoundaryGradient> out;
  for (int i : {0, g.rows() - 1}) {
    if (!g.is_boundary_row(i)) continue;
    BoundaryGradient b;
    b.component = (i == 0) ? "lower" : "upper";
    b.row = i;
    for (int j = 0; j < g.cols(); ++j) {
      b.theta.push_back(g.theta(j));
      b.r.push_back(g.r(i, j));
      b.grad.push_back(jet(field, i, j, Stencil::OneSided).grad_norm);
    }
    out.push_back(std::move(b));
  }
  return out;
}

EigenSolution dirichlet_solve(const DomainSpec& spec, const EigenOptions& opts) {
  spec.validate();
  const Grid grid = spec.grid();
  const DiscreteOperator op = assemble(grid);
  const EigenRun run = nearest_eigenpairs(op, 2, opts);
  const EigenPair& first = run.pairs[0];
  const EigenPair& second = run.pairs[1];
  if (std::abs(second.lambda - first.lambda) <= opts.cluster_tol) {
    throw Error(ErrorCode::DegenerateNearTwo, "two eigenvalues within cluster_tol near the shift");
  }
  Eigen::VectorXd x = first.vector;
  Eigen::Index imax = 0;
  x.cwiseAbs().maxCoeff(&imax);
  x /= x[imax];
  std::vector<double> values(grid.size(), 0.0);
  for (int k = 0; k < x.size(); ++k) values[op.unknown_to_node[k]] = x[k];
  EigenSolution sol;
  sol.lambda = first.lambda;
  sol.field = ScalarField(grid, std::move(values));
  sol.field_l2 = std::sqrt(x.cwiseAbs2().cwiseProduct(op.mass).sum());
  sol.residual_l2 = first.residual * sol.field_l2;
  sol.iterations = run.iterations;
  sol.next_lambda = second.lambda;
  sol.boundary_grad = boundary_gradients(sol.field);
  return sol;
}

std::vector<OverdeterminedComponent> overdetermined_residual(const ScalarField& field) {
  std::vector<OverdeterminedComponent> out;
  for (const BoundaryGradient& b : boundary_gradients(field)) {
    OverdeterminedComponent c;
    c.component = b.component;
    c.b = std::accumulate(b.grad.begin(), b.grad.end(), 0.0) / b.grad.size();
    for (double g : b.grad) c.max_deviation = std::max(c.max_deviation, std::abs(g - c.b));
    c.relative_deviation = c.max_deviation / c.b;
    out.push_back(c);
  }
  return out;
}

std::vector<OverdeterminedComponent> overdetermined_residual(const EigenSolution& sol) {
  return overdetermined_residual(sol.field);
}

}  // namespace sphoep
