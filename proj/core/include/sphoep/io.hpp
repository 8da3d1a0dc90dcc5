#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sphoep/catenoid.hpp"
#include "sphoep/comparison.hpp"
#include "sphoep/eigensolver.hpp"
#include "sphoep/sphere.hpp"

namespace sphoep {

const char* version();

// '.'-decimal, 17 significant digits.
std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  // Index of a named column; ParseError when absent.
  int column(const std::string& name) const;
};

void write_csv(std::ostream& os, const CsvTable& table);
CsvTable read_csv(std::istream& is);
CsvTable read_csv_file(const std::string& path);
void write_csv_file(const std::string& path, const CsvTable& table);

// {"kind", "r_lower", "r_upper", "boundary_fourier": {"lower", "upper"}, "resolution": [n_r, n_theta]}
DomainSpec domain_from_json(const std::string& text);
std::string domain_to_json(const DomainSpec& spec);

// Node table with columns r, theta, value in row-major node order.
CsvTable field_table(const ScalarField& field);
// Rebuilds a rotational annulus field; the row heights must match one of the grid spacings.
ScalarField field_from_table(const CsvTable& table);

// Columns r, theta, W, W_Rbar, violation.
CsvTable comparison_table(const ComparisonReport& report);
// Columns t, E; skipped levels are left out.
CsvTable energy_table(const EnergyProfile& profile);

// Vertices, normals, faces, and boundary loops as line elements.
void write_obj(std::ostream& os, const SurfaceMesh& mesh);

}  // namespace sphoep
