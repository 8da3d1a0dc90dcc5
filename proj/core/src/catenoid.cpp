#include "sphoep/catenoid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include <Eigen/Dense>

#include "sphoep/comparison.hpp"
#include "sphoep/error.hpp"

namespace sphoep {

namespace {

using Vec3 = Eigen::Vector3d;

std::vector<std::vector<int>> vertex_neighbours(const SurfaceMesh& mesh) {
  std::vector<std::set<int>> nb(mesh.vertices.size());
  for (const auto& t : mesh.triangles) {
    for (int a = 0; a < 3; ++a) {
      nb[t[a]].insert(t[(a + 1) % 3]);
      nb[t[a]].insert(t[(a + 2) % 3]);
    }
  }
  std::vector<std::vector<int>> out(nb.size());
  for (std::size_t i = 0; i < nb.size(); ++i) out[i].assign(nb[i].begin(), nb[i].end());
  return out;
}

// Vertices on edges used by a single triangle.
std::vector<char> boundary_vertices(const SurfaceMesh& mesh) {
  std::map<std::pair<int, int>, int> count;
  for (const auto& t : mesh.triangles) {
    for (int a = 0; a < 3; ++a) {
      const int u = t[a], v = t[(a + 1) % 3];
      ++count[{std::min(u, v), std::max(u, v)}];
    }
  }
  std::vector<char> out(mesh.vertices.size(), 0);
  for (const auto& [e, c] : count) {
    if (c == 1) out[e.first] = out[e.second] = 1;
  }
  return out;
}

double mean_edge_length(const SurfaceMesh& mesh, double* max_edge) {
  double sum = 0.0, mx = 0.0;
  long n = 0;
  for (const auto& t : mesh.triangles) {
    for (int a = 0; a < 3; ++a) {
      const double l = (mesh.vertices[t[a]] - mesh.vertices[t[(a + 1) % 3]]).norm();
      sum += l;
      mx = std::max(mx, l);
      ++n;
    }
  }
  if (max_edge) *max_edge = mx;
  return n ? sum / n : 0.0;
}

}  // namespace

SurfaceMesh grid_mesh(const std::vector<Vec3>& vertices, const std::vector<Vec3>& normals,
                      int rows, int cols) {
  if (rows < 2 || cols < 3 || static_cast<int>(vertices.size()) != rows * cols ||
      normals.size() != vertices.size()) {
    throw Error(ErrorCode::ParameterOutOfRange, "grid mesh needs rows >= 2, cols >= 3");
  }
  SurfaceMesh mesh;
  mesh.vertices = vertices;
  mesh.vertex_normals = normals;
  auto id = [cols](int i, int j) { return i * cols + (j % cols); };
  auto add = [&mesh](int a, int b, int c) {
    const Vec3& pa = mesh.vertices[a];
    const Vec3 n = (mesh.vertices[b] - pa).cross(mesh.vertices[c] - pa);
    const Vec3 avg = mesh.vertex_normals[a] + mesh.vertex_normals[b] + mesh.vertex_normals[c];
    if (n.dot(avg) < 0.0) std::swap(b, c);
    mesh.triangles.push_back({a, b, c});
  };
  for (int i = 0; i + 1 < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      add(id(i, j), id(i, j + 1), id(i + 1, j + 1));
      add(id(i, j), id(i + 1, j + 1), id(i + 1, j));
    }
  }
  for (int i : {0, rows - 1}) {
    std::vector<int> loop;
    for (int j = 0; j < cols; ++j) loop.push_back(id(i, j));
    mesh.boundary_loops.push_back(std::move(loop));
  }
  return mesh;
}

SurfaceMesh catenoid_mesh(double alpha, double omega, double r_lo, double r_hi, int n_r,
                          int n_theta) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "alpha must be positive");
  if (!(r_lo > -1.0 + kPoleGuard && r_hi < 1.0 - kPoleGuard && r_lo < r_hi)) {
    throw Error(ErrorCode::ParameterOutOfRange, "r range must lie inside (-1, 1)");
  }
  const Grid g = Grid::annulus(FourierProfile{r_lo, {}}, FourierProfile{r_hi, {}}, n_r, n_theta);
  std::vector<Vec3> v, nrm;
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) {
      const double r = g.r(i, j), th = g.theta(j);
      const double sq = std::sqrt(1.0 - r * r);
      v.emplace_back(alpha * std::cos(th) / sq, alpha * std::sin(th) / sq,
                     alpha * (std::atanh(r) - omega));
      nrm.emplace_back(sq * std::cos(th), sq * std::sin(th), -r);
    }
  }
  return grid_mesh(v, nrm, g.rows(), g.cols());
}

SurfaceMesh model_catenoid(double R, int n_r, int n_theta) {
  const ModelSolution m = model(R);
  return catenoid_mesh(m.scale * m.alpha, m.omega, m.r_minus, m.r_plus, n_r, n_theta);
}

double lower_loop_radius(const ModelSolution& m) {
  return m.scale * m.alpha / (std::abs(m.r_minus) * std::sqrt(1.0 - m.r_minus * m.r_minus));
}

SurfaceMesh support_map(const ScalarField& field) {
  const Grid& g = field.grid();
  const std::vector<FirstSecondJet> jets = all_jets(field);
  std::vector<Vec3> v, nrm;
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) {
      const SphericalPoint p(std::clamp(g.r(i, j), -1.0, 1.0), g.theta(j));
      const FirstSecondJet& jt = jets[g.index(i, j)];
      const Vec3 z = embed(p);
      v.push_back(jt.grad_n * frame_n(p) + jt.grad_t * frame_t(p) + jt.value * z);
      nrm.push_back(z);
    }
  }
  Vec3 centre = Vec3::Zero();
  for (const auto& x : v) centre += x;
  centre /= static_cast<double>(v.size());
  double spread = 0.0;
  for (const auto& x : v) spread = std::max(spread, (x - centre).norm());
  SurfaceMesh mesh;
  // a degree-one field maps to a single point up to the O(h^2) jet error
  const double hm = g.h_metric();
  if (spread <= 0.5 * hm * hm * (1.0 + centre.norm())) {
    mesh.vertices = v;
    mesh.vertex_normals = nrm;
    mesh.flags.push_back("DegenerateImage: support map collapses to a point");
    return mesh;
  }
  mesh = grid_mesh(v, nrm, g.rows(), g.cols());
  if (g.upper_end() == EndKind::Pole || g.lower_end() == EndKind::Pole) {
    mesh.flags.push_back("PoleHole: rows next to a pole bound an open loop");
  }
  return mesh;
}

SurfaceMesh reflect_z(const SurfaceMesh& mesh) {
  SurfaceMesh out = mesh;
  for (auto& x : out.vertices) x.z() = -x.z();
  for (auto& n : out.vertex_normals) n.z() = -n.z();
  for (auto& t : out.triangles) std::swap(t[1], t[2]);
  return out;
}

double max_vertex_deviation(const SurfaceMesh& a, const SurfaceMesh& b) {
  if (a.vertices.size() != b.vertices.size()) {
    throw Error(ErrorCode::ParameterOutOfRange, "meshes have different vertex counts");
  }
  double d = 0.0;
  for (std::size_t k = 0; k < a.vertices.size(); ++k) {
    d = std::max(d, (a.vertices[k] - b.vertices[k]).norm());
  }
  return d;
}

SurfaceMesh icosphere(double radius, int subdivisions) {
  const double t = 0.5 * (1.0 + std::sqrt(5.0));
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0},
                         {0, -1, t}, {0, 1, t},  {0, -1, -t}, {0, 1, -t},
                         {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (auto& x : v) x.normalize();
  std::vector<std::array<int, 3>> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                       {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                       {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                       {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      const int id = static_cast<int>(v.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> nf;
    for (const auto& tr : f) {
      const int a = midpoint(tr[0], tr[1]), b = midpoint(tr[1], tr[2]), c = midpoint(tr[2], tr[0]);
      nf.push_back({tr[0], a, c});
      nf.push_back({tr[1], b, a});
      nf.push_back({tr[2], c, b});
      nf.push_back({a, b, c});
    }
    f = std::move(nf);
  }
  SurfaceMesh mesh;
  mesh.vertex_normals = v;
  for (auto& x : v) x *= radius;
  mesh.vertices = std::move(v);
  mesh.triangles = std::move(f);
  for (auto& tr : mesh.triangles) {
    const Vec3 n = (mesh.vertices[tr[1]] - mesh.vertices[tr[0]])
                       .cross(mesh.vertices[tr[2]] - mesh.vertices[tr[0]]);
    if (n.dot(mesh.vertex_normals[tr[0]]) < 0.0) std::swap(tr[1], tr[2]);
  }
  return mesh;
}

MeanCurvatureResidual mean_curvature_residual(const SurfaceMesh& mesh) {
  const std::size_t n = mesh.vertices.size();
  std::vector<Vec3> lap(n, Vec3::Zero());
  std::vector<double> area(n, 0.0);
  for (const auto& t : mesh.triangles) {
    const Vec3& p0 = mesh.vertices[t[0]];
    const Vec3& p1 = mesh.vertices[t[1]];
    const Vec3& p2 = mesh.vertices[t[2]];
    const double A = 0.5 * (p1 - p0).cross(p2 - p0).norm();
    if (A < 1e-14) throw Error(ErrorCode::DegenerateTriangle, "triangle area below 1e-14");
    const Vec3* p[3] = {&p0, &p1, &p2};
    double cot[3];
    bool obtuse = false;
    int obtuse_at = -1;
    for (int a = 0; a < 3; ++a) {
      const Vec3 u = *p[(a + 1) % 3] - *p[a], w = *p[(a + 2) % 3] - *p[a];
      cot[a] = u.dot(w) / u.cross(w).norm();
      if (u.dot(w) < 0.0) {
        obtuse = true;
        obtuse_at = a;
      }
    }
    for (int a = 0; a < 3; ++a) {
      const int i = t[(a + 1) % 3], j = t[(a + 2) % 3];
      lap[i] += cot[a] * (mesh.vertices[j] - mesh.vertices[i]);
      lap[j] += cot[a] * (mesh.vertices[i] - mesh.vertices[j]);
    }
    for (int a = 0; a < 3; ++a) {
      double va;
      if (!obtuse) {
        const Vec3 e1 = *p[(a + 1) % 3] - *p[a], e2 = *p[(a + 2) % 3] - *p[a];
        va = (e1.squaredNorm() * cot[(a + 2) % 3] + e2.squaredNorm() * cot[(a + 1) % 3]) / 8.0;
      } else {
        va = (a == obtuse_at) ? A / 2.0 : A / 4.0;
      }
      area[t[a]] += va;
    }
  }
  const std::vector<char> bnd = boundary_vertices(mesh);
  MeanCurvatureResidual out;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (bnd[i] || area[i] <= 0.0) continue;
    const double H = (lap[i] / (2.0 * area[i])).norm() / 2.0;
    out.max_abs = std::max(out.max_abs, H);
    num += area[i] * H * H;
    den += area[i];
    ++out.vertices;
  }
  out.l2 = den > 0.0 ? std::sqrt(num / den) : 0.0;
  return out;
}

BoundaryReport boundary_report(const SurfaceMesh& mesh) {
  const auto nb = vertex_neighbours(mesh);
  BoundaryReport rep;
  for (const auto& loop : mesh.boundary_loops) {
    LoopReport lr;
    const int n = static_cast<int>(loop.size());
    if (n < 3) throw Error(ErrorCode::OpenCurve, "boundary loop needs three vertices");
    const std::set<int> on_loop(loop.begin(), loop.end());
    for (int v : loop) lr.sphere_radius += mesh.vertices[v].norm();
    lr.sphere_radius /= n;
    for (int k = 0; k < n; ++k) {
      const Vec3& p = mesh.vertices[loop[k]];
      const Vec3& prev = mesh.vertices[loop[(k + n - 1) % n]];
      const Vec3& next = mesh.vertices[loop[(k + 1) % n]];
      lr.radius_deviation = std::max(lr.radius_deviation,
                                     std::abs(p.norm() - lr.sphere_radius) / lr.sphere_radius);
      Vec3 nu = (next - prev).cross(mesh.vertex_normals[loop[k]]);
      if (nu.norm() == 0.0) continue;
      nu.normalize();
      Vec3 inward = Vec3::Zero();
      for (int w : nb[loop[k]]) {
        if (!on_loop.count(w)) inward += mesh.vertices[w] - p;
      }
      if (nu.dot(inward) > 0.0) nu = -nu;
      const double ds = 0.5 * ((next - p).norm() + (p - prev).norm());
      lr.flux += ds * nu;
      lr.length += (next - p).norm();
      lr.orthogonality_deviation =
          std::max(lr.orthogonality_deviation, std::abs(p.dot(nu) / p.norm() - 1.0));
    }
    rep.flux_sum += lr.flux;
    rep.loops.push_back(lr);
  }
  return rep;
}

namespace {

bool ray_hits(const Vec3& d, const Vec3& v0, const Vec3& v1, const Vec3& v2) {
  const Vec3 e1 = v1 - v0, e2 = v2 - v0;
  const Vec3 pv = d.cross(e2);
  const double det = e1.dot(pv);
  if (std::abs(det) < 1e-300) return false;
  const Vec3 tv = -v0;
  const double u = tv.dot(pv) / det;
  if (u < 0.0 || u > 1.0) return false;
  const Vec3 qv = tv.cross(e1);
  const double v = d.dot(qv) / det;
  if (v < 0.0 || u + v > 1.0) return false;
  return e2.dot(qv) / det > 1e-12;
}

}  // namespace

GaussGraphReport gauss_and_graph_checks(const SurfaceMesh& mesh, int n_rays, std::uint64_t seed) {
  GaussGraphReport rep;
  rep.gauss_height_min = std::numeric_limits<double>::infinity();
  rep.gauss_height_max = -std::numeric_limits<double>::infinity();
  for (const auto& nrm : mesh.vertex_normals) {
    rep.max_normal_defect = std::max(rep.max_normal_defect, std::abs(nrm.norm() - 1.0));
    rep.gauss_height_min = std::min(rep.gauss_height_min, nrm.z());
    rep.gauss_height_max = std::max(rep.gauss_height_max, nrm.z());
  }
  rep.gauss_min_distance = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < mesh.boundary_loops.size(); ++a) {
    for (std::size_t b = a + 1; b < mesh.boundary_loops.size(); ++b) {
      for (int u : mesh.boundary_loops[a]) {
        for (int w : mesh.boundary_loops[b]) {
          const double c = mesh.vertex_normals[u].normalized().dot(mesh.vertex_normals[w].normalized());
          rep.gauss_min_distance = std::min(rep.gauss_min_distance, std::acos(std::clamp(c, -1.0, 1.0)));
        }
      }
    }
  }
  rep.gauss_loops_disjoint = mesh.boundary_loops.size() >= 2 && rep.gauss_min_distance > 1e-12;

  // Ray casting with a bounding-cone filter per triangle.
  const std::size_t nt = mesh.triangles.size();
  std::vector<Vec3> axis(nt);
  std::vector<double> cos_radius(nt);
  for (std::size_t k = 0; k < nt; ++k) {
    const auto& t = mesh.triangles[k];
    Vec3 c = mesh.vertices[t[0]] + mesh.vertices[t[1]] + mesh.vertices[t[2]];
    if (c.norm() == 0.0) {
      axis[k] = Vec3::UnitZ();
      cos_radius[k] = -1.0;
      continue;
    }
    axis[k] = c.normalized();
    double cr = 1.0;
    for (int a = 0; a < 3; ++a) cr = std::min(cr, axis[k].dot(mesh.vertices[t[a]].normalized()));
    cos_radius[k] = cr - 1e-12;
  }
  const auto dirs = sphere_directions(n_rays, seed);
  rep.rays = n_rays;
  for (const auto& d : dirs) {
    int hits = 0;
    for (std::size_t k = 0; k < nt; ++k) {
      if (d.dot(axis[k]) < cos_radius[k]) continue;
      const auto& t = mesh.triangles[k];
      if (ray_hits(d, mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]])) ++hits;
    }
    rep.max_hits = std::max(rep.max_hits, hits);
  }
  rep.radial_graph = rep.max_hits <= 1;

  const std::vector<char> bnd = boundary_vertices(mesh);
  rep.support_min_interior = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const double u = mesh.vertices[i].dot(mesh.vertex_normals[i]);
    if (bnd[i]) {
      rep.support_max_boundary = std::max(rep.support_max_boundary, std::abs(u));
    } else {
      rep.support_min_interior = std::min(rep.support_min_interior, u);
    }
  }
  return rep;
}

namespace {

// Least-squares tangential gradient norm on the one-ring.
std::vector<double> tangential_gradient(const SurfaceMesh& mesh,
                                        const std::vector<std::vector<int>>& nb,
                                        const std::vector<double>& f) {
  std::vector<double> out(mesh.vertices.size(), 0.0);
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Vec3 nrm = mesh.vertex_normals[i].normalized();
    const Vec3 helper = std::abs(nrm.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 e1 = nrm.cross(helper).normalized(), e2 = nrm.cross(e1);
    Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
    Eigen::Vector2d b = Eigen::Vector2d::Zero();
    for (int j : nb[i]) {
      const Vec3 d = mesh.vertices[j] - mesh.vertices[i];
      const Eigen::Vector2d x(d.dot(e1), d.dot(e2));
      A += x * x.transpose();
      b += x * (f[j] - f[i]);
    }
    out[i] = A.ldlt().solve(b).norm();
  }
  return out;
}

std::vector<int> critical_vertices(const std::vector<double>& grad, const std::vector<char>& bnd,
                                   const std::vector<std::vector<int>>& nb, double tol) {
  std::vector<int> out;
  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (bnd[i] || grad[i] >= tol) continue;
    bool local_min = true;
    for (int j : nb[i]) {
      // Ties within rounding stay critical, so rotational rings are kept whole.
      if (!bnd[j] && grad[j] < grad[i] - 1e-9 * tol) local_min = false;
    }
    if (local_min) out.push_back(static_cast<int>(i));
  }
  return out;
}

double range_of(const std::vector<double>& f) {
  const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
  return *hi - *lo;
}

}  // namespace

CriticalSetReport support_critical_set(const SurfaceMesh& mesh, double crit_factor) {
  const auto nb = vertex_neighbours(mesh);
  const std::vector<char> bnd = boundary_vertices(mesh);
  const std::size_t n = mesh.vertices.size();
  std::vector<double> u(n), d(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = mesh.vertices[i].dot(mesh.vertex_normals[i]);
    d[i] = mesh.vertices[i].squaredNorm();
  }
  CriticalSetReport rep;
  const double h = mean_edge_length(mesh, &rep.max_edge);
  rep.support_critical =
      critical_vertices(tangential_gradient(mesh, nb, u), bnd, nb, crit_factor * h * range_of(u));
  rep.distance_critical =
      critical_vertices(tangential_gradient(mesh, nb, d), bnd, nb, crit_factor * h * range_of(d));
  rep.min_norm = std::numeric_limits<double>::infinity();
  for (const auto& x : mesh.vertices) rep.min_norm = std::min(rep.min_norm, x.norm());
  if (rep.support_critical.empty() || rep.distance_critical.empty()) {
    rep.hausdorff = std::numeric_limits<double>::infinity();
    return rep;
  }
  auto directed = [&](const std::vector<int>& a, const std::vector<int>& b) {
    double worst = 0.0;
    for (int i : a) {
      double best = std::numeric_limits<double>::infinity();
      for (int j : b) best = std::min(best, (mesh.vertices[i] - mesh.vertices[j]).norm());
      worst = std::max(worst, best);
    }
    return worst;
  };
  rep.hausdorff = std::max(directed(rep.support_critical, rep.distance_critical),
                           directed(rep.distance_critical, rep.support_critical));
  rep.coincide = rep.hausdorff <= rep.max_edge;
  double zsum = 0.0, rsum = 0.0, nsum = 0.0;
  for (int i : rep.support_critical) {
    const Vec3& x = mesh.vertices[i];
    zsum += x.z();
    rsum += std::hypot(x.x(), x.y());
    nsum += x.norm();
  }
  const double k = static_cast<double>(rep.support_critical.size());
  rep.circle_height = zsum / k;
  rep.circle_radius = rsum / k;
  rep.critical_norm = nsum / k;
  for (int i : rep.support_critical) {
    const Vec3& x = mesh.vertices[i];
    rep.circle_residual = std::max({rep.circle_residual, std::abs(x.z() - rep.circle_height),
                                    std::abs(std::hypot(x.x(), x.y()) - rep.circle_radius)});
  }
  return rep;
}

}  // namespace sphoep
