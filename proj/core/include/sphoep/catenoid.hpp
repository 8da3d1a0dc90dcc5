#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sphoep/model.hpp"
#include "sphoep/sphere.hpp"

namespace sphoep {

struct SurfaceMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::vector<int>> boundary_loops;
  std::vector<Eigen::Vector3d> vertex_normals;
  std::vector<std::string> flags;
};

// Triangulated grid surface. Rows are open, columns periodic; each quad is split
// along the (i, j)-(i+1, j+1) diagonal and oriented to agree with the normals.
SurfaceMesh grid_mesh(const std::vector<Eigen::Vector3d>& vertices,
                      const std::vector<Eigen::Vector3d>& normals, int rows, int cols);

// psi(r, theta) = alpha (cos/sqrt(q), sin/sqrt(q), arctanh r - omega), N = (sqrt(q) cos, sqrt(q) sin, -r),
// sampled on the rotational grid between r_lo and r_hi.
SurfaceMesh catenoid_mesh(double alpha, double omega, double r_lo, double r_hi, int n_r,
                          int n_theta);

// Catenoid whose support function is xi_R; nodes match model_grid(model(R), n_r, n_theta).
SurfaceMesh model_catenoid(double R, int n_r = 128, int n_theta = 64);

// Radius alpha / (|r_-| sqrt(1 - r_-^2)) of the sphere containing the lower loop.
double lower_loop_radius(const ModelSolution& m);

// X = grad xi + xi z per node; vertex normals are the nodes z. Collapsed images are flagged.
SurfaceMesh support_map(const ScalarField& field);

// Mirror image in the plane z = 0.
SurfaceMesh reflect_z(const SurfaceMesh& mesh);

// max_i |a_i - b_i| for meshes with the same vertex layout.
double max_vertex_deviation(const SurfaceMesh& a, const SurfaceMesh& b);

// Geodesic icosahedron subdivision projected to the sphere of the given radius.
SurfaceMesh icosphere(double radius, int subdivisions);

struct MeanCurvatureResidual {
  double max_abs = 0.0;
  double l2 = 0.0;  // sqrt(sum A H^2 / sum A)
  int vertices = 0;
};

MeanCurvatureResidual mean_curvature_residual(const SurfaceMesh& mesh);

struct LoopReport {
  double sphere_radius = 0.0;
  double radius_deviation = 0.0;         // max ||p| - radius| / radius
  double orthogonality_deviation = 0.0;  // max |<p, nu>/|p| - 1|
  Eigen::Vector3d flux = Eigen::Vector3d::Zero();
  double length = 0.0;
};

struct BoundaryReport {
  std::vector<LoopReport> loops;
  Eigen::Vector3d flux_sum = Eigen::Vector3d::Zero();
};

BoundaryReport boundary_report(const SurfaceMesh& mesh);

struct GaussGraphReport {
  bool gauss_loops_disjoint = false;
  double gauss_min_distance = 0.0;
  double gauss_height_min = 0.0;  // extent of the normal image heights
  double gauss_height_max = 0.0;
  double max_normal_defect = 0.0; // max ||N| - 1|
  bool radial_graph = false;
  int rays = 0;
  int max_hits = 0;
  double support_min_interior = 0.0;
  double support_max_boundary = 0.0;  // max |u| on boundary loops
};

GaussGraphReport gauss_and_graph_checks(const SurfaceMesh& mesh, int n_rays = 10000,
                                        std::uint64_t seed = 0);

struct CriticalSetReport {
  std::vector<int> support_critical;
  std::vector<int> distance_critical;
  double hausdorff = 0.0;  // between the two vertex sets
  double max_edge = 0.0;
  bool coincide = false;
  double circle_height = 0.0;
  double circle_radius = 0.0;
  double circle_residual = 0.0;
  double critical_norm = 0.0;  // mean |p| over the support critical set
  double min_norm = 0.0;       // min |p| over the mesh
};

// crit_factor * h * range thresholds the one-ring least-squares tangential gradient.
CriticalSetReport support_critical_set(const SurfaceMesh& mesh, double crit_factor = 10.0);

}  // namespace sphoep
