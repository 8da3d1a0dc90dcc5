#pragma once

#include <Eigen/Core>

#include <functional>
#include <utility>
#include <vector>

namespace sphoep {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Every computation stays at least this far from the poles.
inline constexpr double kPoleGuard = 1e-9;

double wrap_angle(double theta);

struct SphericalPoint {
  double r = 0.0;
  double theta = 0.0;

  SphericalPoint() = default;
  // Throws OutOfDomain for |r| > 1; theta is wrapped into [0, 2pi).
  SphericalPoint(double r_, double theta_);
};

Eigen::Vector3d embed(const SphericalPoint& p);
double geodesic_distance(const SphericalPoint& p, const SphericalPoint& q);

// Unit meridian vector n (pointing to increasing r) and parallel vector t.
Eigen::Vector3d frame_n(const SphericalPoint& p);
Eigen::Vector3d frame_t(const SphericalPoint& p);

struct MetricCoeffs {
  double g_rr;
  double g_tt;
};

MetricCoeffs metric(double r);

// Boundary height as a function of theta: base + sum amp * cos(mode * theta).
struct FourierProfile {
  double base = 0.0;
  std::vector<std::pair<int, double>> modes;

  double value(double theta) const;
  double d1(double theta) const;
  double d2(double theta) const;
  double min_value() const;
  double max_value() const;
  bool is_constant() const;
};

enum class EndKind { Dirichlet, Pole };

// Row spacing. Height: r = rho_lower(theta) + s * (rho_upper(theta) - rho_lower(theta)).
// Latitude: r = sin(b_lower + s * (b_upper - b_lower)) with b = asin(rho), rotational
// domains only. Latitude rows resolve the arctanh growth of the model near the poles.
enum class Spacing { Height, Latitude };

// Mapped tensor grid, s uniform in [0, 1], theta uniform and periodic.
class Grid {
 public:
  Grid() = default;
  // Both ends Dirichlet; rows s_i = i / n_r, i = 0..n_r. Latitude spacing is the
  // default for rotational boundaries, height spacing otherwise.
  static Grid annulus(FourierProfile lower, FourierProfile upper, int n_r, int n_theta);
  static Grid annulus(FourierProfile lower, FourierProfile upper, int n_r, int n_theta,
                      Spacing spacing);
  // Dirichlet at r_lower, open at the north pole; s_i = i / (n_r + 1/2), i = 0..n_r.
  static Grid cap(double r_lower, int n_r, int n_theta, Spacing spacing = Spacing::Latitude);
  // Whole sphere, uniform in latitude: r = -cos(pi s), s_i = (i + 1/2) / n_r.
  static Grid sphere(int n_r, int n_theta);

  struct Map {
    double r;    // height
    double D;    // rho_upper - rho_lower
    double c;    // d r / d theta at fixed s
    double dD;   // d D / d theta
    double cc;   // d^2 r / d theta^2 at fixed s
    double Ds;   // d D / d s (nonzero only for latitude spacing, where c = 0)
  };

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int size() const { return rows_ * cols_; }
  double hs() const { return hs_; }
  double htheta() const { return ht_; }
  double s(int i) const { return s0_ + i * hs_; }
  double theta(int j) const;
  double r(int i, int j) const;
  Map map(double s, double theta) const;
  EndKind lower_end() const { return lower_end_; }
  EndKind upper_end() const { return upper_end_; }
  const FourierProfile& lower() const { return lower_; }
  const FourierProfile& upper() const { return upper_; }
  bool is_rotational() const { return lower_.is_constant() && upper_.is_constant(); }
  Spacing spacing() const { return spacing_; }
  bool is_boundary_row(int i) const;
  int index(int i, int j) const;
  // Row spacing in r (height) or in latitude, an upper bound for the r spacing.
  double h_r() const;
  // Characteristic metric mesh size max(h_r, typical parallel spacing).
  double h_metric() const;

 private:
  FourierProfile lower_, upper_;
  EndKind lower_end_ = EndKind::Dirichlet;
  EndKind upper_end_ = EndKind::Dirichlet;
  int rows_ = 0;
  int cols_ = 0;
  double hs_ = 0.0;
  double ht_ = 0.0;
  double s0_ = 0.0;
  Spacing spacing_ = Spacing::Height;
  double b_lower_ = 0.0, b_upper_ = 0.0;
};

enum class NodeKind : unsigned char { Interior, Boundary };

class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(Grid grid, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  double at(int i, int j) const { return values_[grid_.index(i, j)]; }
  NodeKind mask(int i, int j) const;
  std::vector<double> r_nodes(int j = 0) const;
  std::vector<double> theta_nodes() const;
  double min() const;
  double max() const;
  double range() const { return max() - min(); }

 private:
  Grid grid_;
  std::vector<double> values_;
};

ScalarField sample(const Grid& grid, const std::function<double(double, double)>& f);

struct FirstSecondJet {
  double value = 0.0;
  double grad_n = 0.0;
  double grad_t = 0.0;
  double grad_norm = 0.0;
  double hess_nn = 0.0;
  double hess_nt = 0.0;
  double hess_tt = 0.0;
  double laplacian = 0.0;
};

enum class Stencil { Centered, OneSided };

// Frame jet from coordinate partials at height r.
FirstSecondJet jet_from_partials(double r, double f, double f_r, double f_t, double f_rr,
                                 double f_rt, double f_tt);

// Centered differences need both neighbour rows; OneSided allows one-sided
// differences on the first and last rows (fourth order for first derivatives,
// second order for second derivatives).
FirstSecondJet jet(const ScalarField& field, int i, int j, Stencil stencil = Stencil::Centered);

// Jets at every node, one-sided where the centered stencil is unavailable.
std::vector<FirstSecondJet> all_jets(const ScalarField& field);

double curvature_grad_floor(const ScalarField& field);

// Geodesic curvature of the level set through the jet, normal grad/|grad|.
double level_curvature(const FirstSecondJet& j, double grad_floor = 0.0);

}  // namespace sphoep
