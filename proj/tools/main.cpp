#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"
#include "sphoep/error.hpp"

int main(int argc, char** argv) {
  using sphoep::cli::RunConfig;
  CLI::App app{"Model eigenfunctions on spherical annuli, their estimates, and catenoid meshes"};
  app.require_subcommand(1);
  RunConfig cfg;
  cfg.log = &std::cout;
  std::string resolution, suites, grid;
  double R = 0.0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out_dir, "Output directory");
    sub->add_option("--seed", cfg.seed, "Seed for sampled direction sets");
  };
  auto* ft = app.add_subcommand("family-table", "Tabulate the model family");
  common(ft);
  auto* ft_R = ft->add_option("--R", R, "Single parameter value");
  auto* ft_grid = ft->add_option("--R-grid", grid, "R grid: a,b,c or lin:start:stop:count");

  auto* ver = app.add_subcommand("verify", "Run invariant suites");
  common(ver);
  ver->add_option("--suites", suites, "Comma separated suite names");
  auto* ver_res = ver->add_option("--resolution", resolution, "Grid override NRxNT");

  auto* sol = app.add_subcommand("solve", "Dirichlet eigenpair nearest 2 on a JSON domain");
  common(sol);
  sol->add_option("--config", cfg.config_path, "DomainSpec JSON")->required();
  auto* sol_res = sol->add_option("--resolution", resolution, "Grid override NRxNT");

  auto* me = app.add_subcommand("mesh", "Catenoid mesh and boundary report");
  common(me);
  auto* me_R = me->add_option("--R", R, "Model parameter");
  me->add_option("--field", cfg.field_path, "Field table CSV (r, theta, value)");
  auto* me_res = me->add_option("--resolution", resolution, "Mesh resolution NRxNT");

  auto* cr = app.add_subcommand("crofton", "Crofton length of a closed spherical polyline");
  common(cr);
  cr->add_option("--curve", cfg.curve_path, "Curve CSV (r, theta)")->required();
  cr->add_option("--planes", cfg.planes, "Number of great-circle directions")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    if ((ft_R->count() && cfg.command == "family-table") || (me_R->count() && cfg.command == "mesh")) cfg.R = R;
    if (ft_grid->count()) cfg.R_grid = grid;
    if (ver_res->count() || sol_res->count() || me_res->count()) {
      cfg.resolution = sphoep::cli::parse_resolution(resolution);
    }
    if (!suites.empty()) {
      std::size_t start = 0;
      while (start <= suites.size()) {
        const auto comma = suites.find(',', start);
        const std::string name = suites.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!name.empty()) cfg.suites.push_back(name);
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      sphoep::cli::check_suites(cfg.suites);
    }
    return sphoep::cli::run(cfg);
  } catch (const sphoep::Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
