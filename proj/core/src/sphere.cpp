#include "sphoep/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sphoep/error.hpp"

namespace sphoep {

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

SphericalPoint::SphericalPoint(double r_, double theta_) : r(r_), theta(wrap_angle(theta_)) {
  if (!(std::abs(r_) <= 1.0)) throw Error(ErrorCode::OutOfDomain, "|r| must not exceed 1");
}

Eigen::Vector3d embed(const SphericalPoint& p) {
  const double rho = std::sqrt(std::max(0.0, 1.0 - p.r * p.r));
  return {rho * std::cos(p.theta), rho * std::sin(p.theta), p.r};
}

double geodesic_distance(const SphericalPoint& p, const SphericalPoint& q) {
  const double c = std::clamp(embed(p).dot(embed(q)), -1.0, 1.0);
  return std::acos(c);
}

Eigen::Vector3d frame_n(const SphericalPoint& p) {
  const double rho = std::sqrt(std::max(0.0, 1.0 - p.r * p.r));
  return {-p.r * std::cos(p.theta), -p.r * std::sin(p.theta), rho};
}

Eigen::Vector3d frame_t(const SphericalPoint& p) {
  return {-std::sin(p.theta), std::cos(p.theta), 0.0};
}

MetricCoeffs metric(double r) {
  if (!(std::abs(r) < 1.0)) throw Error(ErrorCode::OutOfDomain, "metric requires |r| < 1");
  const double q = 1.0 - r * r;
  return {1.0 / q, q};
}

double FourierProfile::value(double theta) const {
  double v = base;
  for (auto [k, a] : modes) v += a * std::cos(k * theta);
  return v;
}

double FourierProfile::d1(double theta) const {
  double v = 0.0;
  for (auto [k, a] : modes) v -= a * k * std::sin(k * theta);
  return v;
}

double FourierProfile::d2(double theta) const {
  double v = 0.0;
  for (auto [k, a] : modes) v -= a * k * k * std::cos(k * theta);
  return v;
}

namespace {

double profile_extreme(const FourierProfile& p, bool want_max) {
  if (p.is_constant()) return p.base;
  double best = want_max ? -std::numeric_limits<double>::infinity()
                         : std::numeric_limits<double>::infinity();
  const int n = 4096;
  for (int k = 0; k < n; ++k) {
    const double v = p.value(kTwoPi * k / n);
    best = want_max ? std::max(best, v) : std::min(best, v);
  }
  return best;
}

}  // namespace

double FourierProfile::min_value() const { return profile_extreme(*this, false); }
double FourierProfile::max_value() const { return profile_extreme(*this, true); }

bool FourierProfile::is_constant() const {
  return std::all_of(modes.begin(), modes.end(),
                     [](const auto& m) { return m.first == 0 || m.second == 0.0; });
}

Grid Grid::annulus(FourierProfile lower, FourierProfile upper, int n_r, int n_theta) {
  const Spacing sp = (lower.is_constant() && upper.is_constant()) ? Spacing::Latitude
                                                                  : Spacing::Height;
  return annulus(std::move(lower), std::move(upper), n_r, n_theta, sp);
}

Grid Grid::annulus(FourierProfile lower, FourierProfile upper, int n_r, int n_theta,
                   Spacing spacing) {
  if (n_r < 2 || n_theta < 1) throw Error(ErrorCode::ParameterOutOfRange, "grid too small");
  for (const auto* p : {&lower, &upper}) {
    for (auto [k, a] : p->modes) {
      if (k < 0) throw Error(ErrorCode::InvalidDomain, "negative Fourier mode");
    }
  }
  const double lo_min = lower.min_value(), up_max = upper.max_value();
  if (!(lo_min > -1.0 + kPoleGuard) || !(up_max < 1.0 - kPoleGuard)) {
    throw Error(ErrorCode::InvalidDomain, "boundary leaves the pole guard");
  }
  const int n = 4096;
  for (int k = 0; k < n; ++k) {
    const double t = kTwoPi * k / n;
    if (!(upper.value(t) > lower.value(t))) {
      throw Error(ErrorCode::InvalidDomain, "boundaries intersect or are misordered");
    }
  }
  if (spacing == Spacing::Latitude && !(lower.is_constant() && upper.is_constant())) {
    throw Error(ErrorCode::InvalidDomain, "latitude spacing needs rotational boundaries");
  }
  Grid g;
  g.lower_ = std::move(lower);
  g.upper_ = std::move(upper);
  g.spacing_ = spacing;
  g.b_lower_ = std::asin(g.lower_.base);
  g.b_upper_ = std::asin(g.upper_.base);
  g.rows_ = n_r + 1;
  g.cols_ = n_theta;
  g.hs_ = 1.0 / n_r;
  g.s0_ = 0.0;
  g.ht_ = kTwoPi / n_theta;
  return g;
}

Grid Grid::cap(double r_lower, int n_r, int n_theta, Spacing spacing) {
  if (n_r < 2 || n_theta < 1) throw Error(ErrorCode::ParameterOutOfRange, "grid too small");
  if (!(r_lower > -1.0 + kPoleGuard && r_lower < 1.0 - kPoleGuard)) {
    throw Error(ErrorCode::InvalidDomain, "cap boundary outside (-1, 1)");
  }
  Grid g;
  g.lower_ = FourierProfile{r_lower, {}};
  g.upper_ = FourierProfile{1.0, {}};
  g.upper_end_ = EndKind::Pole;
  g.spacing_ = spacing;
  g.b_lower_ = std::asin(r_lower);
  g.b_upper_ = 0.5 * kPi;
  g.rows_ = n_r + 1;
  g.cols_ = n_theta;
  g.hs_ = 1.0 / (n_r + 0.5);
  g.s0_ = 0.0;
  g.ht_ = kTwoPi / n_theta;
  return g;
}

Grid Grid::sphere(int n_r, int n_theta) {
  if (n_r < 2 || n_theta < 1) throw Error(ErrorCode::ParameterOutOfRange, "grid too small");
  Grid g;
  g.lower_ = FourierProfile{-1.0, {}};
  g.upper_ = FourierProfile{1.0, {}};
  g.lower_end_ = EndKind::Pole;
  g.upper_end_ = EndKind::Pole;
  g.rows_ = n_r;
  g.cols_ = n_theta;
  g.hs_ = 1.0 / n_r;
  g.s0_ = 0.5 / n_r;
  g.ht_ = kTwoPi / n_theta;
  g.spacing_ = Spacing::Latitude;
  g.b_lower_ = -0.5 * kPi;
  g.b_upper_ = 0.5 * kPi;
  return g;
}

double Grid::theta(int j) const {
  const int jj = ((j % cols_) + cols_) % cols_;
  return jj * ht_;
}

double Grid::r(int i, int j) const { return map(s(i), theta(j)).r; }

Grid::Map Grid::map(double sv, double th) const {
  if (spacing_ == Spacing::Latitude) {
    const double span = b_upper_ - b_lower_;
    const double b = b_lower_ + sv * span;
    double r = std::sin(b);
    if (sv == 0.0 && lower_end_ == EndKind::Dirichlet) r = lower_.base;
    if (sv == 1.0 && upper_end_ == EndKind::Dirichlet) r = upper_.base;
    return {r, std::cos(b) * span, 0.0, 0.0, 0.0, -std::sin(b) * span * span};
  }
  const double lo = lower_.value(th), up = upper_.value(th);
  const double lo1 = lower_.d1(th), up1 = upper_.d1(th);
  const double lo2 = lower_.d2(th), up2 = upper_.d2(th);
  Map m;
  m.D = up - lo;
  m.r = lo + sv * m.D;
  m.dD = up1 - lo1;
  m.c = lo1 + sv * m.dD;
  m.cc = lo2 + sv * (up2 - lo2);
  m.Ds = 0.0;
  return m;
}

bool Grid::is_boundary_row(int i) const {
  return (i == 0 && lower_end_ == EndKind::Dirichlet) ||
         (i == rows_ - 1 && upper_end_ == EndKind::Dirichlet);
}

int Grid::index(int i, int j) const {
  const int jj = ((j % cols_) + cols_) % cols_;
  return i * cols_ + jj;
}

double Grid::h_r() const {
  if (spacing_ == Spacing::Latitude) return (b_upper_ - b_lower_) * hs_;
  const double span = upper_.base - lower_.base;
  return hs_ * span;
}

double Grid::h_metric() const {
  return std::max(h_r(), ht_ * std::sqrt(std::max(0.0, 1.0 - std::pow(lower_.base, 2))));
}

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.size()) {
    throw Error(ErrorCode::ParameterOutOfRange, "value count does not match grid");
  }
}

NodeKind ScalarField::mask(int i, int) const {
  return grid_.is_boundary_row(i) ? NodeKind::Boundary : NodeKind::Interior;
}

std::vector<double> ScalarField::r_nodes(int j) const {
  std::vector<double> out(grid_.rows());
  for (int i = 0; i < grid_.rows(); ++i) out[i] = grid_.r(i, j);
  return out;
}

std::vector<double> ScalarField::theta_nodes() const {
  std::vector<double> out(grid_.cols());
  for (int j = 0; j < grid_.cols(); ++j) out[j] = grid_.theta(j);
  return out;
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

ScalarField sample(const Grid& grid, const std::function<double(double, double)>& f) {
  std::vector<double> v(grid.size());
  for (int i = 0; i < grid.rows(); ++i) {
    for (int j = 0; j < grid.cols(); ++j) v[grid.index(i, j)] = f(grid.r(i, j), grid.theta(j));
  }
  return ScalarField(grid, std::move(v));
}

FirstSecondJet jet_from_partials(double r, double f, double f_r, double f_t, double f_rr,
                                 double f_rt, double f_tt) {
  const double q = 1.0 - r * r;
  const double sq = std::sqrt(q);
  FirstSecondJet j;
  j.value = f;
  j.grad_n = sq * f_r;
  j.grad_t = f_t / sq;
  j.grad_norm = std::hypot(j.grad_n, j.grad_t);
  j.hess_nn = q * f_rr - r * f_r;
  j.hess_tt = f_tt / q - r * f_r;
  j.hess_nt = f_rt + r * f_t / q;
  j.laplacian = j.hess_nn + j.hess_tt;
  return j;
}

namespace {

struct SDiffs {
  double f_s, f_ss;
};

// s-derivatives of a column sampled by `get(row)`.
template <class Get>
SDiffs s_diffs(Get get, int i, int rows, double h, bool allow_one_sided) {
  if (i >= 1 && i <= rows - 2) {
    const double fm = get(i - 1), f0 = get(i), fp = get(i + 1);
    return {(fp - fm) / (2 * h), (fp - 2 * f0 + fm) / (h * h)};
  }
  if (!allow_one_sided) throw Error(ErrorCode::StencilUnavailable, "centered stencil at edge row");
  if (rows < 4) throw Error(ErrorCode::StencilUnavailable, "too few rows for one-sided stencil");
  const double sgn = (i == 0) ? 1.0 : -1.0;
  const int d = (i == 0) ? 1 : -1;
  const double f0 = get(i), f1 = get(i + d), f2 = get(i + 2 * d), f3 = get(i + 3 * d);
  const double f_ss = (2 * f0 - 5 * f1 + 4 * f2 - f3) / (h * h);
  if (rows >= 5) {
    const double f4 = get(i + 4 * d);
    return {sgn * (-25 * f0 + 48 * f1 - 36 * f2 + 16 * f3 - 3 * f4) / (12 * h), f_ss};
  }
  return {sgn * (-3 * f0 + 4 * f1 - f2) / (2 * h), f_ss};
}

}  // namespace

FirstSecondJet jet(const ScalarField& field, int i, int j, Stencil stencil) {
  const Grid& g = field.grid();
  const bool one_sided = stencil == Stencil::OneSided;
  if (!one_sided && g.is_boundary_row(i)) {
    throw Error(ErrorCode::StencilUnavailable, "boundary node needs the one-sided stencil");
  }
  const double hs = g.hs(), ht = g.htheta();
  const int rows = g.rows();
  auto col = [&](int jj) { return [&field, jj](int ii) { return field.at(ii, jj); }; };
  const SDiffs c0 = s_diffs(col(j), i, rows, hs, one_sided);
  const SDiffs cm = s_diffs(col(j - 1), i, rows, hs, one_sided);
  const SDiffs cp = s_diffs(col(j + 1), i, rows, hs, one_sided);
  const double f = field.at(i, j);
  const double fjm = field.at(i, j - 1), fjp = field.at(i, j + 1);
  double f_t = 0.0, f_tt = 0.0, f_st = 0.0;
  if (g.cols() >= 3) {
    f_t = (fjp - fjm) / (2 * ht);
    f_tt = (fjp - 2 * f + fjm) / (ht * ht);
    f_st = (cp.f_s - cm.f_s) / (2 * ht);
  }
  const double f_s = c0.f_s, f_ss = c0.f_ss;
  const Grid::Map m = g.map(g.s(i), g.theta(j));
  const double D = m.D, k = m.c / D;
  const double f_r = f_s / D;
  const double f_rr = (f_ss - m.Ds * f_s / D) / (D * D);
  const double f_rt = (f_st - k * f_ss) / D - m.dD * f_s / (D * D);
  const double f_tr = f_t - k * f_s;
  const double dk = m.cc / D - 2.0 * m.c * m.dD / (D * D);
  const double f_ttr = f_tt - 2.0 * k * f_st + k * k * f_ss - f_s * dk;
  const double r = std::clamp(m.r, -1.0 + kPoleGuard, 1.0 - kPoleGuard);
  return jet_from_partials(r, f, f_r, f_tr, f_rr, f_rt, f_ttr);
}

std::vector<FirstSecondJet> all_jets(const ScalarField& field) {
  const Grid& g = field.grid();
  std::vector<FirstSecondJet> out(g.size());
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) out[g.index(i, j)] = jet(field, i, j, Stencil::OneSided);
  }
  return out;
}

double curvature_grad_floor(const ScalarField& field) { return 1e-8 * field.range(); }

double level_curvature(const FirstSecondJet& j, double grad_floor) {
  const double g2 = j.grad_n * j.grad_n + j.grad_t * j.grad_t;
  const double g = std::sqrt(g2);
  if (!(g > grad_floor) || g == 0.0) {
    throw Error(ErrorCode::DegenerateGradient, "gradient below curvature floor");
  }
  const double hgg = j.hess_nn * j.grad_n * j.grad_n + 2.0 * j.hess_nt * j.grad_n * j.grad_t +
                     j.hess_tt * j.grad_t * j.grad_t;
  return (hgg - g2 * j.laplacian) / (g2 * g);
}

}  // namespace sphoep
