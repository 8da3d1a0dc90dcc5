#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "sphoep/error.hpp"
#include "sphoep/io.hpp"
#include "sphoep/model.hpp"

using namespace sphoep;

TEST_CASE("doubles round-trip through text") {
  for (double x : {0.1, -1.0 / 3.0, 6.02214076e23, 2.2250738585072014e-308, 0.0}) {
    const std::string s = format_double(x);
    CHECK(std::stod(s) == x);
    CHECK(s.find(',') == std::string::npos);
  }
}

TEST_CASE("csv write and read") {
  CsvTable t;
  t.header = {"a", "b"};
  t.rows = {{1.5, -2.0}, {std::numeric_limits<double>::infinity(), 1e-300}};
  std::stringstream ss;
  write_csv(ss, t);
  CHECK(ss.str().rfind("a,b\n", 0) == 0);
  const CsvTable u = read_csv(ss);
  CHECK(u.header == t.header);
  CHECK(u.rows == t.rows);
  CHECK(u.column("b") == 1);
  CHECK_THROWS_AS(u.column("c"), Error);
}

TEST_CASE("csv reader skips comments and rejects junk") {
  std::istringstream ok("# note\nx,y\n\n1,2\nnan,3\n");
  const CsvTable t = read_csv(ok);
  REQUIRE(t.rows.size() == 2);
  CHECK(std::isnan(t.rows[1][0]));
  std::istringstream bad("x,y\n1,zz\n");
  CHECK_THROWS_AS(read_csv(bad), Error);
  std::istringstream ragged("x,y\n1\n");
  CHECK_THROWS_AS(read_csv(ragged), Error);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_csv(empty), Error);
}

TEST_CASE("domain json round trip") {
  const DomainSpec d = perturbed_annulus(-0.4, 0.6, {{3, 0.01}}, {{2, 0.05}}, 48, 24);
  const DomainSpec e = domain_from_json(domain_to_json(d));
  CHECK(e.kind == DomainKind::PerturbedAnnulus);
  CHECK(e.r_lower == d.r_lower);
  CHECK(e.r_upper == d.r_upper);
  CHECK(e.fourier_lower == d.fourier_lower);
  CHECK(e.fourier_upper == d.fourier_upper);
  CHECK(e.n_r == 48);
  CHECK(e.n_theta == 24);
}

TEST_CASE("domain json parsing") {
  const DomainSpec d = domain_from_json(R"({"kind": "disk", "r_lower": 0.0, "resolution": [32, 8]})");
  CHECK(d.kind == DomainKind::Disk);
  CHECK(d.r_upper == 1.0);
  CHECK_THROWS_AS(domain_from_json(R"({"kind": "torus"})"), Error);
  CHECK_THROWS_AS(domain_from_json("{not json"), Error);
  CHECK_THROWS_AS(domain_from_json(R"({"kind": "rot_annulus", "r_lower": -0.5, "r_upper": 0.5, "resolution": [32]})"), Error);
}

TEST_CASE("field tables rebuild the grid") {
  const ModelSolution m = model(0.3);
  const ScalarField f = sample_model(m, model_grid(m, 24, 12));
  const CsvTable t = field_table(f);
  CHECK(t.header == std::vector<std::string>{"r", "theta", "value"});
  CHECK(t.rows.size() == 25u * 12u);
  std::stringstream ss;
  write_csv(ss, t);
  const ScalarField g = field_from_table(read_csv(ss));
  CHECK(g.grid().rows() == 25);
  CHECK(g.grid().cols() == 12);
  CHECK(g.grid().spacing() == Spacing::Latitude);
  CHECK(g.values() == f.values());

  const ScalarField h = sample(Grid::annulus({-0.5, {}}, {0.5, {}}, 10, 4, Spacing::Height), [](double r, double) { return r; });
  CHECK(field_from_table(field_table(h)).grid().spacing() == Spacing::Height);
  CsvTable broken = t;
  broken.rows.pop_back();
  CHECK_THROWS_AS(field_from_table(broken), Error);
}

TEST_CASE("obj export") {
  const SurfaceMesh m = model_catenoid(0.0, 4, 6);
  std::ostringstream os;
  write_obj(os, m);
  const std::string s = os.str();
  std::size_t v = 0, f = 0, l = 0;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("v ", 0) == 0) ++v;
    if (line.rfind("f ", 0) == 0) ++f;
    if (line.rfind("l ", 0) == 0) ++l;
  }
  CHECK(v == m.vertices.size());
  CHECK(f == m.triangles.size());
  CHECK(l == 2u);
  CHECK(s.find("f 1//1 ") != std::string::npos);
}

TEST_CASE("version string") { CHECK(std::string(version()).size() > 0); }

TEST_CASE("comparison and energy tables") {
  ComparisonReport c;
  c.rows.push_back({0.1, 0.2, 0.3, 0.4, -0.1});
  const CsvTable ct = comparison_table(c);
  CHECK(ct.header == std::vector<std::string>{"r", "theta", "W", "W_Rbar", "violation"});
  REQUIRE(ct.rows.size() == 1);
  CHECK(ct.rows[0][4] == -0.1);

  EnergyProfile e;
  e.rows.push_back({0.0, 6.0, false, ""});
  e.rows.push_back({0.5, 0.0, true, "empty level"});
  const CsvTable et = energy_table(e);
  CHECK(et.header == std::vector<std::string>{"t", "E"});
  CHECK(et.rows.size() == 1);
}
