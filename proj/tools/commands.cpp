#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "cli.hpp"
#include "sphoep/catenoid.hpp"
#include "sphoep/comparison.hpp"
#include "sphoep/eigensolver.hpp"
#include "sphoep/error.hpp"
#include "sphoep/io.hpp"
#include "sphoep/model.hpp"

namespace sphoep::cli {

using nlohmann::json;

std::pair<int, int> parse_resolution(const std::string& s) {
  const auto x = s.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(s);
    std::size_t a = 0, b = 0;
    const int nr = std::stoi(s.substr(0, x), &a);
    const int nt = std::stoi(s.substr(x + 1), &b);
    if (a != x || b != s.size() - x - 1 || nr <= 0 || nt <= 0) throw std::invalid_argument(s);
    return {nr, nt};
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::ParseError, "resolution must look like NRxNT, got '" + s + "'");
  }
}

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> out;
  if (s.empty()) return out;
  try {
    if (s.rfind("lin:", 0) == 0) {
      std::istringstream ss(s.substr(4));
      std::string a, b, n;
      std::getline(ss, a, ':');
      std::getline(ss, b, ':');
      std::getline(ss, n, ':');
      const double lo = std::stod(a), hi = std::stod(b);
      const int count = std::stoi(n);
      for (int k = 0; k < count; ++k) {
        out.push_back(count == 1 ? lo : lo + (hi - lo) * k / (count - 1));
      }
      return out;
    }
    std::istringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::ParseError, "cannot parse grid '" + s + "'");
  }
  return out;
}

void check_suites(const std::vector<std::string>& suites) {
  for (const auto& s : suites) {
    if (std::find(known_suites().begin(), known_suites().end(), s) == known_suites().end()) {
      throw Error(ErrorCode::UnknownSuite, "unknown suite '" + s + "'");
    }
  }
}

json config_json(const RunConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  j["config"] = cfg.config_path.empty() ? json(nullptr) : json(cfg.config_path);
  j["resolution"] = cfg.resolution ? json::array({cfg.resolution->first, cfg.resolution->second})
                                   : json(nullptr);
  j["suites"] = cfg.suites;
  j["seed"] = cfg.seed;
  j["R"] = cfg.R ? json(*cfg.R) : json(nullptr);
  j["R_grid"] = cfg.R_grid ? json(*cfg.R_grid) : json(nullptr);
  j["field"] = cfg.field_path.empty() ? json(nullptr) : json(cfg.field_path);
  j["curve"] = cfg.curve_path.empty() ? json(nullptr) : json(cfg.curve_path);
  j["planes"] = cfg.planes;
  return j;
}

namespace {

void note(const RunConfig& cfg, const std::string& line) {
  if (cfg.log) *cfg.log << line << '\n';
}

json envelope(const RunConfig& cfg) {
  json j;
  j["tool"] = {{"name", "sphoep"}, {"version", version()}};
  j["config"] = config_json(cfg);
  return j;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << j.dump(2) << '\n';
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Non-finite doubles become null so the report stays valid JSON.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json nwss_json(const NwssReport& rep) {
  json j;
  j["xi_max"] = rep.xi_max;
  j["max_band"] = rep.max_band;
  j["per_component_tau"] = json::array();
  for (const auto& c : rep.per_component_tau) {
    j["per_component_tau"].push_back({{"component", c.component}, {"max_grad", c.max_grad}, {"tau", c.tau}});
  }
  j["regions"] = json::array();
  for (const auto& r : rep.regions) {
    j["regions"].push_back({{"id", r.id},
                            {"nodes", r.nodes.size()},
                            {"boundary_components", r.boundary_components},
                            {"tau", r.tau},
                            {"expected_height", num(r.expected_height)},
                            {"branch", r.branch == Branch::Plus ? "+" : "-"},
                            {"no_boundary_contact", r.no_boundary_contact}});
  }
  j["max_components"] = json::array();
  for (const auto& m : rep.max_components) {
    j["max_components"].push_back({{"nodes", m.nodes.size()},
                                   {"curve_like", m.curve_like},
                                   {"wraps", m.wraps},
                                   {"diameter", m.diameter},
                                   {"adjacent_regions", m.adjacent_regions}});
  }
  j["max_at_pole"] = rep.max_at_pole;
  j["flags"] = rep.flags;
  return j;
}

json vec_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

}  // namespace

int family_table(const RunConfig& cfg) {
  std::vector<double> grid;
  if (cfg.R_grid) {
    grid = parse_grid(*cfg.R_grid);
  } else if (cfg.R) {
    grid = {*cfg.R};
  } else {
    grid = parse_grid("lin:0:0.9:10");
  }
  CsvTable t;
  t.header = {"R", "r_minus", "r_plus", "alpha", "omega", "xi_max", "tau_minus", "tau_plus", "grad_ratio"};
  for (double R : grid) {
    const ModelSolution m = model(R);
    t.rows.push_back({R, m.r_minus, m.r_plus, m.alpha, m.omega, m.xi_max, tau_pm(m, Branch::Minus),
                      tau_pm(m, Branch::Plus), lower_boundary_gradient(m)});
  }
  const std::string path = out_path(cfg, "family_table.csv");
  write_csv_file(path, t);
  note(cfg, path);
  return 0;
}

int verify(const RunConfig& cfg) {
  const std::vector<std::string> suites = cfg.suites.empty() ? known_suites() : cfg.suites;
  check_suites(suites);
  json j = envelope(cfg);
  j["suites"] = json::object();
  bool all = true;
  for (const auto& s : suites) {
    json arr = json::array();
    bool ok = true;
    for (const Check& c : run_suite(s, cfg)) {
      arr.push_back({{"name", c.name}, {"value", num(c.value)}, {"limit", num(c.limit)}, {"pass", c.pass}});
      ok = ok && c.pass;
    }
    j["suites"][s] = {{"pass", ok}, {"checks", arr}};
    note(cfg, (ok ? "PASS " : "FAIL ") + s);
    all = all && ok;
  }
  j["pass"] = all;
  write_json(out_path(cfg, "verify.json"), j);
  return all ? 0 : 1;
}

int solve(const RunConfig& cfg) {
  if (cfg.config_path.empty()) throw Error(ErrorCode::ParseError, "solve needs --config domain.json");
  DomainSpec spec = domain_from_json(read_text(cfg.config_path));
  if (cfg.resolution) {
    spec.n_r = cfg.resolution->first;
    spec.n_theta = cfg.resolution->second;
    spec.validate();
  }
  EigenOptions opts;
  opts.seed = static_cast<unsigned>(cfg.seed ? cfg.seed : opts.seed);
  const EigenSolution sol = dirichlet_solve(spec, opts);
  write_csv_file(out_path(cfg, "solution.csv"), field_table(sol.field));

  json j = envelope(cfg);
  j["domain"] = json::parse(domain_to_json(spec));
  j["lambda"] = sol.lambda;
  j["next_lambda"] = sol.next_lambda;
  j["iterations"] = sol.iterations;
  j["residual_l2"] = sol.residual_l2;
  j["field_l2"] = sol.field_l2;
  j["overdetermined"] = json::array();
  for (const auto& c : overdetermined_residual(sol)) {
    j["overdetermined"].push_back({{"component", c.component},
                                   {"b", c.b},
                                   {"max_deviation", c.max_deviation},
                                   {"relative_deviation", c.relative_deviation}});
  }
  const NwssReport rep = nwss(sol.field);
  j["nwss"] = nwss_json(rep);
  j["tables"] = json::array();
  std::vector<double> ts;
  for (int k = 0; k < 10; ++k) ts.push_back(0.1 * k * rep.xi_max);
  for (const Region& g : rep.regions) {
    const std::string id = std::to_string(g.id);
    json entry = {{"region", g.id}};
    const EnergyProfile e = energy_profile(sol.field, rep, g.id, ts);
    write_csv_file(out_path(cfg, "energy_" + id + ".csv"), energy_table(e));
    entry["energy"] = "energy_" + id + ".csv";
    entry["energy_monotone_asserted"] = e.monotone_asserted;
    entry["energy_monotone"] = e.monotone_holds;
    try {
      const double R_bar = invert_tau(g.tau);
      const ScalarField fn = normalize_to_model(sol.field, R_bar);
      const ComparisonReport c = compare_W(fn, pseudo_radial(fn, R_bar, rep, g.id), R_bar);
      write_csv_file(out_path(cfg, "comparison_" + id + ".csv"), comparison_table(c));
      entry["comparison"] = "comparison_" + id + ".csv";
      entry["R_bar"] = R_bar;
      entry["max_violation"] = c.max_violation;
      entry["compare_tol"] = c.compare_tol;
    } catch (const Error& err) {
      entry["comparison"] = nullptr;
      entry["comparison_skipped"] = err.what();
    }
    j["tables"].push_back(entry);
  }
  write_json(out_path(cfg, "solution.json"), j);
  note(cfg, out_path(cfg, "solution.json"));
  return 0;
}

int mesh(const RunConfig& cfg) {
  const auto [nr, nt] = cfg.resolution.value_or(std::make_pair(128, 64));
  SurfaceMesh m;
  json j = envelope(cfg);
  if (!cfg.field_path.empty()) {
    const ScalarField f = field_from_table(read_csv_file(cfg.field_path));
    m = support_map(f);
    j["source"] = "field";
  } else {
    if (!cfg.R) throw Error(ErrorCode::ParameterOutOfRange, "mesh needs --R or --field");
    m = model_catenoid(*cfg.R, nr, nt);
    j["source"] = "model";
    const ModelSolution ms = model(*cfg.R);
    j["expected_radii"] = {lower_loop_radius(ms), 1.0};
  }
  j["flags"] = m.flags;
  {
    std::ofstream out(out_path(cfg, "mesh.obj"), std::ios::binary);
    write_obj(out, m);
  }
  if (!m.triangles.empty()) {
    const BoundaryReport br = boundary_report(m);
    j["boundary_report"]["loops"] = json::array();
    for (const auto& l : br.loops) {
      j["boundary_report"]["loops"].push_back({{"sphere_radius", l.sphere_radius},
                                               {"radius_deviation", l.radius_deviation},
                                               {"orthogonality_deviation", l.orthogonality_deviation},
                                               {"flux", vec_json(l.flux)},
                                               {"length", l.length}});
    }
    j["boundary_report"]["flux_sum"] = vec_json(br.flux_sum);
    j["boundary_report"]["flux_balance"] = br.flux_sum.norm();
    const MeanCurvatureResidual h = mean_curvature_residual(m);
    j["mean_curvature"] = {{"max_abs", h.max_abs}, {"l2", h.l2}, {"vertices", h.vertices}};
  }
  write_json(out_path(cfg, "mesh.json"), j);
  note(cfg, out_path(cfg, "mesh.obj"));
  return 0;
}

int crofton(const RunConfig& cfg) {
  if (cfg.curve_path.empty()) throw Error(ErrorCode::ParseError, "crofton needs --curve curve.csv");
  const CsvTable t = read_csv_file(cfg.curve_path);
  const int cr = t.column("r"), ct = t.column("theta");
  std::vector<SphericalPoint> pts;
  for (const auto& row : t.rows) pts.emplace_back(row[cr], row[ct]);
  if (pts.size() > 1 && geodesic_distance(pts.front(), pts.back()) == 0.0) pts.pop_back();
  if (pts.size() < 3) throw Error(ErrorCode::OpenCurve, "closed polyline needs three distinct vertices");
  const double est = crofton_length(pts, cfg.planes, cfg.seed);
  const double len = polyline_length(pts, true);
  json j = envelope(cfg);
  j["vertices"] = pts.size();
  j["crofton_length"] = est;
  j["polyline_length"] = len;
  j["relative_gap"] = std::abs(est - len) / len;
  write_json(out_path(cfg, "crofton.json"), j);
  note(cfg, out_path(cfg, "crofton.json"));
  return 0;
}

int run(const RunConfig& cfg) {
  if (cfg.command == "family-table") return family_table(cfg);
  if (cfg.command == "verify") return verify(cfg);
  if (cfg.command == "solve") return solve(cfg);
  if (cfg.command == "mesh") return mesh(cfg);
  if (cfg.command == "crofton") return crofton(cfg);
  throw Error(ErrorCode::ParseError, "unknown command '" + cfg.command + "'");
}

}  // namespace sphoep::cli
