#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace sphoep::cli {

struct RunConfig {
  std::string command;
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::pair<int, int>> resolution;
  std::vector<std::string> suites;
  std::uint64_t seed = 0;
  std::optional<double> R;
  std::optional<std::string> R_grid;
  std::string field_path;
  std::string curve_path;
  int planes = 100000;
  // Progress lines (written paths, suite verdicts); silent when null.
  std::ostream* log = nullptr;
};

inline const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> s = {"model",     "nwss",   "comparison", "pfunction",
                                             "energy",    "curvature", "lengths", "catenoid",
                                             "eigen1d",   "eigen2d"};
  return s;
}

// "64x32" -> (64, 32); ParseError otherwise.
std::pair<int, int> parse_resolution(const std::string& s);
// "a,b,c" or "lin:start:stop:count"; an empty string is an empty grid.
std::vector<double> parse_grid(const std::string& s);
// Throws UnknownSuite before any work is done.
void check_suites(const std::vector<std::string>& suites);

nlohmann::json config_json(const RunConfig& cfg);

struct Check {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
};

std::vector<Check> run_suite(const std::string& suite, const RunConfig& cfg);

// Each returns the process exit status and writes its files under cfg.out_dir.
int family_table(const RunConfig& cfg);
int verify(const RunConfig& cfg);
int solve(const RunConfig& cfg);
int mesh(const RunConfig& cfg);
int crofton(const RunConfig& cfg);

int run(const RunConfig& cfg);

}  // namespace sphoep::cli
