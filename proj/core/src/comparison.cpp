#include "sphoep/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <random>

#include "sphoep/error.hpp"

namespace sphoep {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Value of the parabola through three equally spaced samples at its vertex.
bool parabola_vertex(double fm, double f0, double fp, double& value, double& offset) {
  const double den = fm - 2.0 * f0 + fp;
  if (!(den < 0.0)) return false;
  offset = 0.5 * (fm - fp) / den;
  if (std::abs(offset) > 1.0) return false;
  value = f0 - (fp - fm) * (fp - fm) / (8.0 * den);
  return true;
}

double pole_extrapolation(const ScalarField& f, bool upper) {
  const Grid& g = f.grid();
  const int n = g.rows();
  double rs[3], vs[3];
  for (int k = 0; k < 3; ++k) {
    const int i = upper ? n - 1 - k : k;
    rs[k] = g.r(i, 0);
    double mean = 0.0;
    for (int j = 0; j < g.cols(); ++j) mean += f.at(i, j);
    vs[k] = mean / g.cols();
  }
  const double x = upper ? 1.0 : -1.0;
  double out = 0.0;
  for (int a = 0; a < 3; ++a) {
    double w = 1.0;
    for (int b = 0; b < 3; ++b) {
      if (b != a) w *= (x - rs[b]) / (rs[a] - rs[b]);
    }
    out += w * vs[a];
  }
  return out;
}

std::vector<int> neighbours(const Grid& g, int node) {
  const int i = node / g.cols(), j = node % g.cols();
  std::vector<int> out;
  if (i > 0) out.push_back(g.index(i - 1, j));
  if (i + 1 < g.rows()) out.push_back(g.index(i + 1, j));
  if (g.cols() > 1) {
    out.push_back(g.index(i, j - 1));
    if (g.cols() > 2) out.push_back(g.index(i, j + 1));
  }
  return out;
}

// Connected components of nodes with flag == want.
std::vector<std::vector<int>> components(const Grid& g, const std::vector<char>& flag, char want) {
  std::vector<int> seen(g.size(), 0);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < g.size(); ++s) {
    if (flag[s] != want || seen[s]) continue;
    std::vector<int> comp;
    std::deque<int> queue{s};
    seen[s] = 1;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      comp.push_back(v);
      for (int w : neighbours(g, v)) {
        if (flag[w] == want && !seen[w]) {
          seen[w] = 1;
          queue.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

SphericalPoint node_point(const Grid& g, int node) {
  const int i = node / g.cols(), j = node % g.cols();
  const double r = std::clamp(g.r(i, j), -1.0, 1.0);
  return SphericalPoint(r, g.theta(j));
}

double approx_diameter(const Grid& g, const std::vector<int>& nodes) {
  if (nodes.size() < 2) return 0.0;
  auto farthest = [&](int from, double& dist) {
    const SphericalPoint p = node_point(g, from);
    int best = from;
    dist = 0.0;
    for (int v : nodes) {
      const double d = geodesic_distance(p, node_point(g, v));
      if (d > dist) {
        dist = d;
        best = v;
      }
    }
    return best;
  };
  double d1 = 0.0, d2 = 0.0;
  const int a = farthest(nodes.front(), d1);
  farthest(a, d2);
  return std::max(d1, d2);
}

double snap_tau(double tau) {
  if (std::abs(tau - 1.0) <= kNwssTieTol) return 1.0;
  const double t0 = family_constants().tau0;
  if (std::abs(tau - t0) <= kNwssTieTol) return t0;
  return tau;
}

}  // namespace

double refined_max(const ScalarField& field) {
  const Grid& g = field.grid();
  double best = field.max();
  bool top_pole = false, bottom_pole = false;
  for (int j = 0; j < g.cols(); ++j) {
    int im = 0;
    for (int i = 1; i < g.rows(); ++i) {
      if (field.at(i, j) > field.at(im, j)) im = i;
    }
    if (im >= 1 && im + 1 < g.rows()) {
      double v = 0.0, off = 0.0;
      if (parabola_vertex(field.at(im - 1, j), field.at(im, j), field.at(im + 1, j), v, off)) {
        best = std::max(best, v);
      }
    } else if (im == g.rows() - 1 && g.upper_end() == EndKind::Pole) {
      top_pole = true;
    } else if (im == 0 && g.lower_end() == EndKind::Pole) {
      bottom_pole = true;
    }
  }
  if (top_pole && g.rows() >= 3) best = std::max(best, pole_extrapolation(field, true));
  if (bottom_pole && g.rows() >= 3) best = std::max(best, pole_extrapolation(field, false));
  return best;
}

Branch branch_for_tau(double tau) {
  return (tau >= family_constants().tau0 - kNwssTieTol) ? Branch::Plus : Branch::Minus;
}

NwssReport nwss(const ScalarField& field) {
  const Grid& g = field.grid();
  NwssReport rep;
  rep.xi_max = refined_max(field);
  if (!(rep.xi_max > 0.0)) throw Error(ErrorCode::ValueOutOfRange, "field has no positive maximum");
  rep.h = g.h_r();
  rep.max_band = 10.0 * rep.h * rep.h * rep.xi_max;
  rep.max_at_pole = rep.xi_max > field.max() &&
                    (g.upper_end() == EndKind::Pole || g.lower_end() == EndKind::Pole);

  std::map<std::string, double> comp_tau;
  for (int i : {0, g.rows() - 1}) {
    if (!g.is_boundary_row(i)) continue;
    ComponentTau ct;
    ct.component = (i == 0) ? "lower" : "upper";
    for (int j = 0; j < g.cols(); ++j) {
      ct.max_grad = std::max(ct.max_grad, jet(field, i, j, Stencil::OneSided).grad_norm);
    }
    ct.tau = ct.max_grad / rep.xi_max;
    comp_tau[ct.component] = ct.tau;
    rep.per_component_tau.push_back(ct);
  }

  std::vector<char> is_max(g.size());
  for (int v = 0; v < g.size(); ++v) is_max[v] = field.values()[v] >= rep.xi_max - rep.max_band;

  rep.node_region.assign(g.size(), -1);
  const auto region_sets = components(g, is_max, 0);
  const double t0 = family_constants().tau0;
  for (std::size_t k = 0; k < region_sets.size(); ++k) {
    Region reg;
    reg.id = static_cast<int>(k);
    reg.nodes = region_sets[k];
    bool lower = false, upper = false;
    for (int v : reg.nodes) {
      rep.node_region[v] = reg.id;
      const int i = v / g.cols();
      if (i == 0 && g.is_boundary_row(0)) lower = true;
      if (i == g.rows() - 1 && g.is_boundary_row(i)) upper = true;
    }
    if (lower) reg.boundary_components.push_back("lower");
    if (upper) reg.boundary_components.push_back("upper");
    for (const auto& c : reg.boundary_components) reg.tau = std::max(reg.tau, comp_tau[c]);
    reg.no_boundary_contact = reg.boundary_components.empty();
    if (reg.no_boundary_contact) {
      rep.flags.push_back("NoBoundaryContact: region " + std::to_string(reg.id));
    }
    reg.tau = snap_tau(reg.tau);
    reg.branch = branch_for_tau(reg.tau);
    if (std::abs(reg.tau - t0) <= kNwssTieTol) {
      reg.expected_height = 0.0;
    } else {
      try {
        reg.expected_height = invert_tau(reg.tau);
      } catch (const Error&) {
        reg.expected_height = kNaN;
        rep.flags.push_back("ExpectedHeightUnavailable: region " + std::to_string(reg.id));
      }
    }
    rep.regions.push_back(std::move(reg));
  }

  const auto max_sets = components(g, is_max, 1);
  for (const auto& nodes : max_sets) {
    MaxComponent mc;
    mc.nodes = nodes;
    std::vector<char> cols(g.cols(), 0);
    for (int v : nodes) cols[v % g.cols()] = 1;
    mc.wraps = std::all_of(cols.begin(), cols.end(), [](char c) { return c != 0; });
    mc.diameter = approx_diameter(g, nodes);
    const double spacing = std::max(rep.h, g.htheta());
    mc.curve_like = (mc.wraps && g.cols() > 1) || mc.diameter > 4.0 * spacing;
    std::vector<char> adj(rep.regions.size(), 0);
    for (int v : nodes) {
      for (int w : neighbours(g, v)) {
        if (rep.node_region[w] >= 0) adj[rep.node_region[w]] = 1;
      }
    }
    for (std::size_t k = 0; k < adj.size(); ++k) {
      if (adj[k]) mc.adjacent_regions.push_back(static_cast<int>(k));
    }
    rep.max_components.push_back(std::move(mc));
  }
  if (rep.max_at_pole) rep.flags.push_back("MaxAtPole: Max(xi) is a point off the grid");
  return rep;
}

ScalarField normalize_to_model(const ScalarField& field, double R_bar) {
  const ModelSolution m = model(R_bar);
  const double scale = m.xi_max / refined_max(field);
  std::vector<double> v = field.values();
  for (double& x : v) x *= scale;
  return ScalarField(field.grid(), std::move(v));
}

ScalarField pseudo_radial(const ScalarField& field, double R_bar, const NwssReport& report,
                          int region) {
  const ModelSolution m = model(R_bar);
  const double fmax = refined_max(field);
  if (std::abs(fmax - m.xi_max) > 1e-9 * m.xi_max) {
    throw Error(ErrorCode::NormalizationMissing, "field maximum differs from the model maximum");
  }
  if (region < 0 || region >= static_cast<int>(report.regions.size())) {
    throw Error(ErrorCode::ParameterOutOfRange, "unknown region");
  }
  const Region& reg = report.regions[region];
  const Grid& g = field.grid();
  std::vector<double> psi(g.size(), kNaN);
  for (int v = 0; v < g.size(); ++v) {
    if (report.node_region[v] == -1) psi[v] = R_bar;
  }
  for (int v : reg.nodes) {
    const double x = std::clamp(field.values()[v], 0.0, m.xi_max);
    psi[v] = chi_branch(m, x, reg.branch);
  }
  return ScalarField(g, std::move(psi));
}

ComparisonReport compare_W(const ScalarField& field, const ScalarField& psi, double R_bar,
                           double compare_tol, double lemma_band) {
  const ModelSolution m = model(R_bar);
  const Grid& g = field.grid();
  const double h = g.h_r();
  const std::vector<FirstSecondJet> jets = all_jets(field);
  ComparisonReport rep;
  rep.compare_tol = compare_tol >= 0.0 ? compare_tol : kCompareTolC * h * h;
  rep.max_violation = -std::numeric_limits<double>::infinity();
  rep.min_violation = std::numeric_limits<double>::infinity();
  const double near_band = 1000.0 * h * h * m.xi_max;
  for (int v = 0; v < g.size(); ++v) {
    const double p = psi.values()[v];
    if (!std::isfinite(p)) continue;
    const int i = v / g.cols(), j = v % g.cols();
    const double W = jets[v].grad_norm * jets[v].grad_norm;
    const double WR = W_model(m, p);
    const double diff = W - WR;
    const ComparisonRow row{g.r(i, j), g.theta(j), W, WR, diff};
    rep.rows.push_back(row);
    rep.max_violation = std::max(rep.max_violation, diff);
    rep.min_violation = std::min(rep.min_violation, diff);
    rep.max_abs_difference = std::max(rep.max_abs_difference, std::abs(diff));
    if (diff > rep.compare_tol) rep.violation_nodes.push_back(row);
    const double delta = m.xi_max - field.values()[v];
    // Max(xi) nodes carry psi = R_bar by assignment, not by inversion.
    if (p != m.R && delta > 1e-12 * m.xi_max && delta < lemma_band) {
      const double dev = std::abs(WR / delta / (4.0 * m.xi_max) - 1.0);
      rep.lemma_max_deviation = std::max(rep.lemma_max_deviation, dev);
      ++rep.lemma_nodes;
    }
    if (delta > 0.0 && delta <= near_band && WR > 0.0) {
      rep.near_max_ratio = std::max(rep.near_max_ratio, W / std::sqrt(WR));
    }
  }
  if (rep.rows.empty()) {
    rep.max_violation = rep.min_violation = 0.0;
  }
  rep.equality_case = rep.max_violation <= rep.compare_tol && rep.min_violation >= -rep.compare_tol;
  return rep;
}

PFunctionResult p_function_check(const ScalarField& field) {
  const Grid& g = field.grid();
  const std::vector<FirstSecondJet> jets = all_jets(field);
  std::vector<double> P(g.size());
  for (int v = 0; v < g.size(); ++v) {
    P[v] = jets[v].grad_norm * jets[v].grad_norm + field.values()[v] * field.values()[v];
  }
  PFunctionResult out{ScalarField(g, std::move(P)), std::numeric_limits<double>::infinity(),
                      -std::numeric_limits<double>::infinity()};
  for (int i = 2; i + 2 < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) {
      const double lap = jet(out.P, i, j, Stencil::Centered).laplacian;
      out.min_laplacian = std::min(out.min_laplacian, lap);
      out.max_laplacian = std::max(out.max_laplacian, lap);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Level sets

std::vector<double> LevelCurve::kappa_samples() const {
  std::vector<double> out;
  for (const auto& p : polylines) out.insert(out.end(), p.kappa.begin(), p.kappa.end());
  return out;
}

double polyline_length(const std::vector<SphericalPoint>& pts, bool closed) {
  double len = 0.0;
  for (std::size_t k = 1; k < pts.size(); ++k) len += geodesic_distance(pts[k - 1], pts[k]);
  if (closed && pts.size() > 2) len += geodesic_distance(pts.back(), pts.front());
  return len;
}

namespace {

FirstSecondJet lerp(const FirstSecondJet& a, const FirstSecondJet& b, double w) {
  auto mix = [w](double x, double y) { return (1.0 - w) * x + w * y; };
  FirstSecondJet j;
  j.value = mix(a.value, b.value);
  j.grad_n = mix(a.grad_n, b.grad_n);
  j.grad_t = mix(a.grad_t, b.grad_t);
  j.grad_norm = std::hypot(j.grad_n, j.grad_t);
  j.hess_nn = mix(a.hess_nn, b.hess_nn);
  j.hess_nt = mix(a.hess_nt, b.hess_nt);
  j.hess_tt = mix(a.hess_tt, b.hess_tt);
  j.laplacian = j.hess_nn + j.hess_tt;
  return j;
}

struct Crossing {
  SphericalPoint point;
  FirstSecondJet jet;
  int low_node;
};

}  // namespace

LevelCurve level_extract(const ScalarField& field, double t, const std::vector<int>& node_region) {
  const Grid& g = field.grid();
  const int rows = g.rows(), cols = g.cols();
  const std::vector<FirstSecondJet> jets = all_jets(field);
  const double floor = curvature_grad_floor(field);
  LevelCurve out;
  out.level = t;
  auto region_of = [&](int node) {
    return node_region.empty() ? -1 : node_region[node];
  };
  auto finish = [&](Polyline& pl, const std::vector<FirstSecondJet>& pj) {
    for (const auto& j : pj) {
      if (!(j.grad_norm > floor)) throw Error(ErrorCode::DegenerateLevel, "gradient floor violated");
      pl.grad.push_back(j.grad_norm);
      pl.kappa.push_back(level_curvature(j, floor));
    }
    pl.length = polyline_length(pl.points, pl.closed);
    out.metric_length += pl.length;
    out.polylines.push_back(std::move(pl));
  };

  // The zero level of a Dirichlet field is its boundary rows.
  bool used_rows = false;
  if (t == 0.0) {
    const double zero_tol = 1e-12 * std::max(std::abs(field.max()), std::abs(field.min()));
    for (int i : {0, rows - 1}) {
      if (!g.is_boundary_row(i)) continue;
      bool zero = true;
      for (int j = 0; j < cols; ++j) zero = zero && std::abs(field.at(i, j)) <= zero_tol;
      if (!zero) continue;
      used_rows = true;
      Polyline pl;
      pl.closed = cols > 2;
      pl.region = region_of(g.index(i, 0));
      std::vector<FirstSecondJet> pj;
      for (int j = 0; j < cols; ++j) {
        pl.points.emplace_back(std::clamp(g.r(i, j), -1.0, 1.0), g.theta(j));
        pj.push_back(jets[g.index(i, j)]);
      }
      finish(pl, pj);
    }
    if (used_rows) return out;
  }

  auto above = [&](int node) { return field.values()[node] >= t; };
  // Edge ids: 2*node for the theta edge (i,j)-(i,j+1), 2*node+1 for the s edge (i,j)-(i+1,j).
  std::map<int, Crossing> crossings;
  auto crossing = [&](int a, int b, int id, bool s_edge) -> bool {
    if (above(a) == above(b)) return false;
    if (crossings.count(id)) return true;
    const double fa = field.values()[a], fb = field.values()[b];
    const double w = (t - fa) / (fb - fa);
    const int ia = a / cols, ja = a % cols;
    const double s = g.s(ia) + (s_edge ? w * g.hs() : 0.0);
    const double th = g.theta(ja) + (s_edge ? 0.0 : w * g.htheta());
    const double r = std::clamp(g.map(s, th).r, -1.0, 1.0);
    crossings.emplace(id, Crossing{SphericalPoint(r, th), lerp(jets[a], jets[b], w),
                                   fa < fb ? a : b});
    return true;
  };
  std::map<int, std::vector<int>> links;
  for (int i = 0; i + 1 < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const int c0 = g.index(i, j), c1 = g.index(i, j + 1);
      const int c2 = g.index(i + 1, j + 1), c3 = g.index(i + 1, j);
      const int e[4] = {2 * c0, 2 * c1 + 1, 2 * c3, 2 * c0 + 1};
      bool hit[4];
      hit[0] = crossing(c0, c1, e[0], false);
      hit[1] = crossing(c1, c2, e[1], true);
      hit[2] = crossing(c3, c2, e[2], false);
      hit[3] = crossing(c0, c3, e[3], true);
      std::vector<int> he;
      for (int k = 0; k < 4; ++k) {
        if (hit[k]) he.push_back(k);
      }
      auto link = [&](int a, int b) {
        links[e[a]].push_back(e[b]);
        links[e[b]].push_back(e[a]);
      };
      if (he.size() == 2) {
        link(he[0], he[1]);
      } else if (he.size() == 4) {
        const double centre = 0.25 * (field.values()[c0] + field.values()[c1] +
                                      field.values()[c2] + field.values()[c3]);
        if ((centre >= t) == above(c0)) {
          link(0, 1);
          link(2, 3);
        } else {
          link(3, 0);
          link(1, 2);
        }
      }
    }
  }
  if (crossings.empty()) throw Error(ErrorCode::EmptyLevel, "level set is empty");

  std::map<int, char> visited;
  auto trace = [&](int start, bool closed_hint) {
    std::vector<int> chain{start};
    visited[start] = 1;
    int prev = -1, cur = start;
    while (true) {
      int next = -1;
      for (int n : links[cur]) {
        if (n != prev && !visited[n]) {
          next = n;
          break;
        }
      }
      if (next < 0) break;
      visited[next] = 1;
      chain.push_back(next);
      prev = cur;
      cur = next;
    }
    (void)closed_hint;
    return chain;
  };
  std::vector<std::vector<int>> chains;
  std::vector<char> chain_closed;
  // Open chains first: start at edges with a single link.
  for (const auto& [id, c] : crossings) {
    (void)c;
    if (visited[id]) continue;
    if (links[id].size() <= 1) {
      chains.push_back(trace(id, false));
      chain_closed.push_back(0);
    }
  }
  for (const auto& [id, c] : crossings) {
    (void)c;
    if (visited[id]) continue;
    chains.push_back(trace(id, true));
    chain_closed.push_back(1);
  }
  for (std::size_t k = 0; k < chains.size(); ++k) {
    Polyline pl;
    pl.closed = chain_closed[k] && chains[k].size() > 2;
    pl.region = region_of(crossings.at(chains[k].front()).low_node);
    std::vector<FirstSecondJet> pj;
    for (int id : chains[k]) {
      const Crossing& c = crossings.at(id);
      pl.points.push_back(c.point);
      pj.push_back(c.jet);
    }
    finish(pl, pj);
  }
  return out;
}

EnergyProfile energy_profile(const ScalarField& field, const NwssReport& report, int region,
                             const std::vector<double>& t_grid, double slack) {
  if (region < 0 || region >= static_cast<int>(report.regions.size())) {
    throw Error(ErrorCode::ParameterOutOfRange, "unknown region");
  }
  EnergyProfile prof;
  const double xm = report.xi_max;
  for (double t : t_grid) {
    EnergyRow row;
    row.t = t;
    if (!(t >= 0.0 && t < xm - report.max_band)) {
      row.skipped = true;
      row.reason = error_name(ErrorCode::CriticalLevelSkipped);
      prof.rows.push_back(row);
      continue;
    }
    try {
      const LevelCurve lc = level_extract(field, t, report.node_region);
      double integral = 0.0;
      for (const Polyline& pl : lc.polylines) {
        if (pl.region != region) continue;
        const std::size_t n = pl.points.size();
        const std::size_t edges = pl.closed ? n : n - 1;
        for (std::size_t k = 0; k < edges; ++k) {
          const std::size_t k2 = (k + 1) % n;
          integral += geodesic_distance(pl.points[k], pl.points[k2]) *
                      0.5 * (pl.grad[k] + pl.grad[k2]);
        }
      }
      row.E = integral / (xm * xm - t * t);
    } catch (const Error& e) {
      row.skipped = true;
      row.reason = e.code() == ErrorCode::DegenerateLevel
                       ? error_name(ErrorCode::CriticalLevelSkipped)
                       : error_name(e.code());
    }
    prof.rows.push_back(row);
  }
  prof.monotone_asserted = report.regions[region].tau <= 1.0;
  std::vector<EnergyRow> ok;
  for (const auto& r : prof.rows) {
    if (!r.skipped) ok.push_back(r);
  }
  std::sort(ok.begin(), ok.end(), [](const EnergyRow& a, const EnergyRow& b) { return a.t < b.t; });
  double running_min = std::numeric_limits<double>::infinity();
  for (const auto& r : ok) {
    if (std::isfinite(running_min)) prof.max_increase = std::max(prof.max_increase, r.E - running_min);
    running_min = std::min(running_min, r.E);
  }
  prof.monotone_holds = prof.max_increase <= slack;
  return prof;
}

// ---------------------------------------------------------------------------
// Curvature bounds

namespace {

// Intercept of the least-squares line y = a + b x.
double fit_intercept(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  const double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-300) return sy / n;
  const double b = (n * sxy - sx * sy) / den;
  return (sy - b * sx) / n;
}

}  // namespace

CurvatureReport curvature_bound_report(const ScalarField& field, const NwssReport& report,
                                       double tol) {
  const Grid& g = field.grid();
  const std::vector<FirstSecondJet> jets = all_jets(field);
  const double floor = curvature_grad_floor(field);
  CurvatureReport out;
  std::map<int, double> top_by_region;
  for (const Region& reg : report.regions) {
    if (reg.no_boundary_contact || !(reg.expected_height < 1.0)) continue;
    CurvatureRegionReport cr;
    cr.region = reg.id;
    cr.branch = reg.branch;
    cr.R_bar = reg.expected_height;
    const ModelSolution m = model(cr.R_bar);
    double gmax = 0.0;
    for (int v : reg.nodes) {
      if (g.is_boundary_row(v / g.cols())) gmax = std::max(gmax, jets[v].grad_norm);
    }
    cr.boundary_kappa = -std::numeric_limits<double>::infinity();
    for (int v : reg.nodes) {
      if (!g.is_boundary_row(v / g.cols())) continue;
      if (jets[v].grad_norm >= gmax * (1.0 - 1e-6)) {
        cr.boundary_kappa = std::max(cr.boundary_kappa, level_curvature(jets[v], floor));
      }
    }
    cr.boundary_bound = (reg.branch == Branch::Plus)
                            ? -m.r_plus / std::sqrt(1.0 - m.r_plus * m.r_plus)
                            : m.r_minus / std::sqrt(1.0 - m.r_minus * m.r_minus);
    cr.boundary_holds = cr.boundary_kappa <= cr.boundary_bound + tol;

    bool adjacent_curve = false;
    for (const MaxComponent& mc : report.max_components) {
      if (mc.curve_like && std::count(mc.adjacent_regions.begin(), mc.adjacent_regions.end(), reg.id)) {
        adjacent_curve = true;
      }
    }
    if (adjacent_curve) {
      std::vector<double> xs, ys;
      for (int v : reg.nodes) {
        const double delta = report.xi_max - field.values()[v];
        if (delta < report.max_band || delta > 10.0 * report.max_band) continue;
        if (!(jets[v].grad_norm > floor)) continue;
        xs.push_back(std::sqrt(delta));
        ys.push_back(level_curvature(jets[v], floor));
      }
      if (xs.size() >= 2) {
        cr.has_top_curve = true;
        cr.top_kappa = -fit_intercept(xs, ys);
        const double b = cr.R_bar / std::sqrt(1.0 - cr.R_bar * cr.R_bar);
        cr.top_bound = (reg.branch == Branch::Plus) ? b : -b;
        cr.top_holds = cr.top_kappa <= cr.top_bound + tol;
        top_by_region[reg.id] = cr.top_kappa;
      }
    }
    out.regions.push_back(cr);
  }
  for (const MaxComponent& mc : report.max_components) {
    if (!mc.curve_like || mc.adjacent_regions.size() != 2) continue;
    int a = mc.adjacent_regions[0], b = mc.adjacent_regions[1];
    if (!top_by_region.count(a) || !top_by_region.count(b)) continue;
    if (report.regions[a].tau > report.regions[b].tau) std::swap(a, b);
    TopCurveOrdering o;
    o.region1 = a;
    o.region2 = b;
    o.R1 = report.regions[a].expected_height;
    o.R2 = report.regions[b].expected_height;
    o.kappa = 0.5 * (top_by_region[b] - top_by_region[a]);
    o.lower = o.R1 / std::sqrt(1.0 - o.R1 * o.R1);
    o.upper = o.R2 / std::sqrt(1.0 - o.R2 * o.R2);
    o.holds = o.kappa >= o.lower - tol && o.kappa <= o.upper + tol && o.R2 >= o.R1 - tol;
    o.equality = std::abs(o.R2 - o.R1) <= 1e-3;
    out.orderings.push_back(o);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lengths

std::vector<Eigen::Vector3d> sphere_directions(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double u1 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  const double inv_golden = 2.0 / (1.0 + std::sqrt(5.0));
  std::vector<Eigen::Vector3d> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double z = 1.0 - 2.0 * (k + u1) / n;
    double frac = k * inv_golden + u2;
    frac -= std::floor(frac);
    const double phi = kTwoPi * frac;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    out.emplace_back(rho * std::cos(phi), rho * std::sin(phi), z);
  }
  return out;
}

double crofton_length(const std::vector<SphericalPoint>& pts, int n_planes, std::uint64_t seed) {
  if (pts.size() < 3) throw Error(ErrorCode::OpenCurve, "closed polyline needs three vertices");
  if (n_planes < 1) throw Error(ErrorCode::ParameterOutOfRange, "n_planes must be positive");
  std::vector<Eigen::Vector3d> xs;
  xs.reserve(pts.size());
  for (const auto& p : pts) xs.push_back(embed(p));
  const auto dirs = sphere_directions(n_planes, seed);
  long long total = 0;
  for (const auto& a : dirs) {
    bool prev = xs.back().dot(a) >= 0.0;
    for (const auto& x : xs) {
      const bool cur = x.dot(a) >= 0.0;
      if (cur != prev) ++total;
      prev = cur;
    }
  }
  return kPi * static_cast<double>(total) / n_planes;
}

double crofton_length(const LevelCurve& curve, int n_planes, std::uint64_t seed) {
  double sum = 0.0;
  for (const auto& pl : curve.polylines) {
    if (!pl.closed) throw Error(ErrorCode::OpenCurve, "level curve polyline is open");
    sum += crofton_length(pl.points, n_planes, seed);
  }
  return sum;
}

TopCurve top_curve(const ScalarField& field, const NwssReport& report, int component) {
  if (component < 0 || component >= static_cast<int>(report.max_components.size())) {
    throw Error(ErrorCode::TopCurveNotFound, "no such Max(xi) component");
  }
  const MaxComponent& mc = report.max_components[component];
  if (!mc.curve_like || !mc.wraps) throw Error(ErrorCode::TopCurveNotFound, "Max(xi) component is point-like");
  const Grid& g = field.grid();
  std::vector<int> lo(g.cols(), g.rows()), hi(g.cols(), -1);
  for (int v : mc.nodes) {
    const int i = v / g.cols(), j = v % g.cols();
    lo[j] = std::min(lo[j], i);
    hi[j] = std::max(hi[j], i);
  }
  TopCurve tc;
  for (int j = 0; j < g.cols(); ++j) {
    int im = lo[j];
    for (int i = lo[j]; i <= hi[j]; ++i) {
      if (field.at(i, j) > field.at(im, j)) im = i;
    }
    double s = g.s(im);
    if (im >= 1 && im + 1 < g.rows()) {
      double v = 0.0, off = 0.0;
      if (parabola_vertex(field.at(im - 1, j), field.at(im, j), field.at(im + 1, j), v, off)) {
        s += off * g.hs();
      }
    }
    tc.points.emplace_back(std::clamp(g.map(s, g.theta(j)).r, -1.0, 1.0), g.theta(j));
  }
  tc.length = polyline_length(tc.points, true);
  return tc;
}

LengthBoundResult length_bound_check(const ScalarField& field, const NwssReport& report,
                                     int region, double tol, int n_planes, std::uint64_t seed) {
  if (region < 0 || region >= static_cast<int>(report.regions.size())) {
    throw Error(ErrorCode::ParameterOutOfRange, "unknown region");
  }
  const Region& reg = report.regions[region];
  LengthBoundResult out;
  bool found = false;
  for (std::size_t k = 0; k < report.max_components.size(); ++k) {
    const MaxComponent& mc = report.max_components[k];
    if (!mc.curve_like || !mc.wraps) continue;
    if (!std::count(mc.adjacent_regions.begin(), mc.adjacent_regions.end(), region)) continue;
    out.top_length += top_curve(field, report, static_cast<int>(k)).length;
    found = true;
  }
  if (!found) throw Error(ErrorCode::TopCurveNotFound, "region has no top curve");
  if (!(reg.expected_height < 1.0)) throw Error(ErrorCode::TopCurveNotFound, "disk-type region");
  const Grid& g = field.grid();
  for (const auto& c : reg.boundary_components) {
    const int i = (c == "lower") ? 0 : g.rows() - 1;
    std::vector<SphericalPoint> pts;
    for (int j = 0; j < g.cols(); ++j) pts.emplace_back(std::clamp(g.r(i, j), -1.0, 1.0), g.theta(j));
    out.boundary_length += polyline_length(pts, true);
    out.crofton_boundary_length += crofton_length(pts, n_planes, seed);
  }
  const ModelSolution m = model(reg.expected_height);
  const double rpm = (reg.branch == Branch::Plus) ? m.r_plus : m.r_minus;
  out.lhs = out.top_length / std::sqrt(1.0 - m.R * m.R);
  out.rhs = out.boundary_length / std::sqrt(1.0 - rpm * rpm);
  out.holds = out.lhs <= out.rhs + tol;
  out.zero_set_bound = kTwoPi * std::sqrt(1.0 - rpm * rpm);
  out.zero_set_holds = out.boundary_length <= out.zero_set_bound + tol;
  return out;
}

}  // namespace sphoep
