#include "sphoep/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <locale>
#include <sstream>

#include <json.hpp>

#include "sphoep/error.hpp"

#ifndef SPHOEP_VERSION
#define SPHOEP_VERSION "0.0.0"
#endif

namespace sphoep {

using nlohmann::json;

const char* version() { return SPHOEP_VERSION; }

std::string format_double(double x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << x;
  return os.str();
}

int CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw Error(ErrorCode::ParseError, "missing column '" + name + "'");
  return static_cast<int>(it - header.begin());
}

void write_csv(std::ostream& os, const CsvTable& table) {
  for (std::size_t k = 0; k < table.header.size(); ++k) {
    if (k) os << ',';
    os << table.header[k];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) os << ',';
      os << format_double(row[k]);
    }
    os << '\n';
  }
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s) {
  std::istringstream is(s);
  is.imbue(std::locale::classic());
  double x = 0.0;
  is >> x;
  if (s == "nan" || s == "-nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (is.fail() || !is.eof()) throw Error(ErrorCode::ParseError, "not a number: '" + s + "'");
  return x;
}

}  // namespace

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  bool have_header = false;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto cells = split(line);
    if (!have_header) {
      t.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": wrong column count");
    }
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_number(c));
    t.rows.push_back(std::move(row));
  }
  if (!have_header) throw Error(ErrorCode::ParseError, "empty CSV");
  return t;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  return read_csv(in);
}

void write_csv_file(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  write_csv(out, table);
}

namespace {

DomainKind kind_from_name(const std::string& s) {
  for (DomainKind k : {DomainKind::RotAnnulus, DomainKind::PerturbedAnnulus, DomainKind::Disk,
                       DomainKind::Sphere}) {
    if (s == domain_kind_name(k)) return k;
  }
  throw Error(ErrorCode::ParseError, "unknown domain kind '" + s + "'");
}

std::vector<std::pair<int, double>> modes_from(const json& j) {
  std::vector<std::pair<int, double>> out;
  for (const auto& m : j) {
    if (!m.is_array() || m.size() != 2) throw Error(ErrorCode::ParseError, "Fourier term must be [mode, amplitude]");
    out.emplace_back(m[0].get<int>(), m[1].get<double>());
  }
  return out;
}

json modes_to(const std::vector<std::pair<int, double>>& modes) {
  json a = json::array();
  for (auto [k, v] : modes) a.push_back(json::array({k, v}));
  return a;
}

}  // namespace

DomainSpec domain_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  try {
    DomainSpec s;
    s.kind = kind_from_name(j.at("kind").get<std::string>());
    if (j.contains("r_lower")) s.r_lower = j["r_lower"].get<double>();
    if (j.contains("r_upper")) s.r_upper = j["r_upper"].get<double>();
    if (s.kind == DomainKind::Disk && !j.contains("r_upper")) s.r_upper = 1.0;
    if (j.contains("boundary_fourier")) {
      const json& bf = j["boundary_fourier"];
      if (bf.contains("lower")) s.fourier_lower = modes_from(bf["lower"]);
      if (bf.contains("upper")) s.fourier_upper = modes_from(bf["upper"]);
    }
    if (j.contains("resolution")) {
      const json& r = j["resolution"];
      if (!r.is_array() || r.size() != 2) throw Error(ErrorCode::ParseError, "resolution must be [n_r, n_theta]");
      s.n_r = r[0].get<int>();
      s.n_theta = r[1].get<int>();
    }
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

std::string domain_to_json(const DomainSpec& s) {
  json j;
  j["kind"] = domain_kind_name(s.kind);
  j["r_lower"] = s.r_lower;
  j["r_upper"] = s.r_upper;
  j["boundary_fourier"] = {{"lower", modes_to(s.fourier_lower)}, {"upper", modes_to(s.fourier_upper)}};
  j["resolution"] = json::array({s.n_r, s.n_theta});
  return j.dump(2);
}

CsvTable comparison_table(const ComparisonReport& report) {
  CsvTable t;
  t.header = {"r", "theta", "W", "W_Rbar", "violation"};
  for (const ComparisonRow& c : report.rows) t.rows.push_back({c.r, c.theta, c.W, c.W_Rbar, c.violation});
  return t;
}

CsvTable energy_table(const EnergyProfile& profile) {
  CsvTable t;
  t.header = {"t", "E"};
  for (const EnergyRow& e : profile.rows) {
    if (!e.skipped) t.rows.push_back({e.t, e.E});
  }
  return t;
}

CsvTable field_table(const ScalarField& field) {
  const Grid& g = field.grid();
  CsvTable t;
  t.header = {"r", "theta", "value"};
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) t.rows.push_back({g.r(i, j), g.theta(j), field.at(i, j)});
  }
  return t;
}

ScalarField field_from_table(const CsvTable& t) {
  const int cr = t.column("r"), ct = t.column("theta"), cv = t.column("value");
  if (t.rows.empty()) throw Error(ErrorCode::ParseError, "empty field table");
  int cols = 0;
  while (cols < static_cast<int>(t.rows.size()) && t.rows[cols][cr] == t.rows[0][cr]) ++cols;
  if (cols < 3 || t.rows.size() % cols != 0) throw Error(ErrorCode::ParseError, "field table is not a tensor grid");
  const int rows = static_cast<int>(t.rows.size()) / cols;
  const double lo = t.rows.front()[cr], hi = t.rows.back()[cr];
  std::vector<double> values;
  for (const auto& row : t.rows) values.push_back(row[cv]);
  for (Spacing sp : {Spacing::Latitude, Spacing::Height}) {
    Grid g;
    try {
      g = Grid::annulus(FourierProfile{lo, {}}, FourierProfile{hi, {}}, rows - 1, cols, sp);
    } catch (const Error&) {
      throw Error(ErrorCode::ParseError, "field table heights do not form an annulus");
    }
    bool match = true;
    for (int i = 0; i < rows && match; ++i) {
      for (int j = 0; j < cols && match; ++j) {
        const auto& row = t.rows[i * cols + j];
        match = std::abs(row[cr] - g.r(i, j)) <= 1e-12 && std::abs(row[ct] - g.theta(j)) <= 1e-12;
      }
    }
    if (match) return ScalarField(g, values);
  }
  throw Error(ErrorCode::ParseError, "field table nodes match no supported grid");
}

void write_obj(std::ostream& os, const SurfaceMesh& mesh) {
  os << "# sphoep " << version() << '\n';
  for (const auto& v : mesh.vertices) {
    os << "v " << format_double(v.x()) << ' ' << format_double(v.y()) << ' ' << format_double(v.z()) << '\n';
  }
  for (const auto& n : mesh.vertex_normals) {
    os << "vn " << format_double(n.x()) << ' ' << format_double(n.y()) << ' ' << format_double(n.z()) << '\n';
  }
  const bool normals = mesh.vertex_normals.size() == mesh.vertices.size();
  for (const auto& t : mesh.triangles) {
    os << 'f';
    for (int a = 0; a < 3; ++a) {
      os << ' ' << t[a] + 1;
      if (normals) os << "//" << t[a] + 1;
    }
    os << '\n';
  }
  for (const auto& loop : mesh.boundary_loops) {
    os << 'l';
    for (int v : loop) os << ' ' << v + 1;
    if (!loop.empty()) os << ' ' << loop.front() + 1;
    os << '\n';
  }
}

}  // namespace sphoep
