#include "grating/materials.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace grating {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_field(const std::string& field, const std::string& origin, int line) {
  const std::string t = trim(field);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != t.size()) {
    throw std::runtime_error(origin + ":" + std::to_string(line) + ": bad number '" + t + "'");
  }
  return v;
}

}  // namespace

PermittivityTable::PermittivityTable(std::vector<PermittivityRow> rows, std::string source)
    : rows_(std::move(rows)), source_(std::move(source)) {
  if (rows_.size() < 2) throw std::invalid_argument("permittivity table needs at least two rows");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].eps.imag() < 0.0) {
      throw std::invalid_argument("permittivity table: Im(eps) < 0 at k0 = " +
                                  std::to_string(rows_[i].k0_cm) + " cm^-1");
    }
    if (i > 0 && !(rows_[i].k0_cm > rows_[i - 1].k0_cm)) {
      throw std::invalid_argument("permittivity table: k0 not strictly increasing at row " +
                                  std::to_string(i));
    }
  }
}

PermittivityTable PermittivityTable::parse(std::istream& in, const std::string& origin) {
  std::vector<PermittivityRow> rows;
  std::string source = origin;
  std::string line;
  bool header_seen = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      const std::string body = trim(t.substr(1));
      if (body.rfind("source:", 0) == 0) source = trim(body.substr(7));
      continue;
    }
    if (!header_seen) {
      if (t != "k0_cm,eps_re,eps_im") {
        throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                 ": expected header 'k0_cm,eps_re,eps_im'");
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(t);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 3) {
      throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": expected 3 fields");
    }
    rows.push_back({parse_field(fields[0], origin, lineno),
                    cplx(parse_field(fields[1], origin, lineno), parse_field(fields[2], origin, lineno))});
  }
  if (!header_seen) throw std::runtime_error(origin + ": missing header");
  return PermittivityTable(std::move(rows), source);
}

PermittivityTable PermittivityTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open permittivity table '" + path + "'");
  return parse(in, path);
}

std::string PermittivityTable::default_path() {
  if (const char* env = std::getenv("GRATING_PERMITTIVITY_TABLE"); env && *env) return env;
  return std::string(GRATING_DATA_DIR) + "/gold_permittivity.csv";
}

cplx PermittivityTable::at_inverse_cm(double k_cm) const {
  if (!(k_cm >= rows_.front().k0_cm && k_cm <= rows_.back().k0_cm)) {
    throw std::range_error("k0 = " + std::to_string(k_cm) + " cm^-1 outside permittivity table [" +
                           std::to_string(rows_.front().k0_cm) + ", " +
                           std::to_string(rows_.back().k0_cm) + "]");
  }
  auto hi = std::lower_bound(rows_.begin(), rows_.end(), k_cm,
                             [](const PermittivityRow& r, double k) { return r.k0_cm < k; });
  if (hi->k0_cm == k_cm) return hi->eps;
  auto lo = hi - 1;
  const double t = (k_cm - lo->k0_cm) / (hi->k0_cm - lo->k0_cm);
  return {lo->eps.real() + t * (hi->eps.real() - lo->eps.real()),
          lo->eps.imag() + t * (hi->eps.imag() - lo->eps.imag())};
}

cplx PermittivityTable::at(Wavenumber k0) const {
  // Converting cm^-1 to rad/m and back can step just past a table end.
  double k = k0.inverse_cm();
  const double slack = 1e-12 * rows_.back().k0_cm;
  if (k < rows_.front().k0_cm && k > rows_.front().k0_cm - slack) k = rows_.front().k0_cm;
  if (k > rows_.back().k0_cm && k < rows_.back().k0_cm + slack) k = rows_.back().k0_cm;
  return at_inverse_cm(k);
}

cplx surface_impedance(cplx eps_m, BoundaryCase c, Surface surface) {
  if (eps_m == cplx(0.0, 0.0)) throw std::domain_error("surface impedance: eps_m = 0");
  switch (c) {
    case BoundaryCase::P:
      return 0.0;
    case BoundaryCase::M0:
    case BoundaryCase::M:
      if (surface == Surface::Wall) return 0.0;
      break;
    case BoundaryCase::R0:
    case BoundaryCase::R:
      break;
  }
  if (c == BoundaryCase::M0 || c == BoundaryCase::R0) {
    if (eps_m.real() >= 0.0) {
      throw std::domain_error("surface impedance: Re(eps_m) >= 0 violates the metal assumption");
    }
    // +0 imaginary part selects sqrt(-|e|) = +i sqrt|e|.
    return 1.0 / std::sqrt(cplx(eps_m.real(), 0.0));
  }
  // Adding +0 maps a signed -0 imaginary part onto the upper branch.
  return 1.0 / std::sqrt(cplx(eps_m.real(), eps_m.imag() + 0.0));
}

Impedance reduced_impedance(cplx xi, Wavenumber k0, double w) {
  return {xi, k0.rad_per_m() * w * xi};
}

CaseImpedance case_impedance(cplx eps_m, BoundaryCase c, Wavenumber k0, const Geometry& g) {
  return {reduced_impedance(surface_impedance(eps_m, c, Surface::Wall), k0, g.w),
          surface_impedance(eps_m, c, Surface::Horizontal)};
}

}  // namespace grating
