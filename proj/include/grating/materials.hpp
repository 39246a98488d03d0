#pragma once

#include <complex>
#include <istream>
#include <string>
#include <vector>

#include "grating/units.hpp"

namespace grating {

using cplx = std::complex<double>;

struct PermittivityRow {
  double k0_cm;
  cplx eps;
};

/// Tabulated metal permittivity eps_m(k0), interpolated piecewise-linearly in cm^-1.
///
/// Rows are kept sorted with strictly increasing k0 and Im(eps) >= 0
/// (exp(-i omega t) convention); both are checked on construction.
class PermittivityTable {
 public:
  PermittivityTable(std::vector<PermittivityRow> rows, std::string source);

  /// CSV with header `k0_cm,eps_re,eps_im`; `#` lines are comments.
  /// A comment of the form `# source: ...` fills the source string.
  static PermittivityTable parse(std::istream& in, const std::string& origin);
  static PermittivityTable load(const std::string& path);

  /// Path of the bundled gold table, unless GRATING_PERMITTIVITY_TABLE is set.
  static std::string default_path();
  static PermittivityTable bundled() { return load(default_path()); }

  /// Throws std::range_error outside [front, back]; no extrapolation. A relative slack of
  /// 1e-12 at the ends absorbs unit-conversion rounding.
  cplx at(Wavenumber k0) const;
  cplx at_inverse_cm(double k_cm) const;

  const std::vector<PermittivityRow>& rows() const { return rows_; }
  const std::string& source() const { return source_; }
  double min_inverse_cm() const { return rows_.front().k0_cm; }
  double max_inverse_cm() const { return rows_.back().k0_cm; }

 private:
  std::vector<PermittivityRow> rows_;
  std::string source_;
};

/// Relative surface impedance xi and its reduced form xi_tilde = k0 w xi = zeta + i eta.
struct Impedance {
  cplx xi;
  cplx xi_tilde;
  double zeta() const { return xi_tilde.real(); }
  double eta() const { return xi_tilde.imag(); }
};

/// xi = 1/sqrt(eps_m) on the given surface for the given case (0 for perfect-metal surfaces).
/// Throws std::domain_error for eps_m = 0, or when a real-part-only case meets Re(eps_m) >= 0.
cplx surface_impedance(cplx eps_m, BoundaryCase c, Surface surface);

Impedance reduced_impedance(cplx xi, Wavenumber k0, double w);

/// Wall and horizontal-surface impedances of one case at one wavenumber.
struct CaseImpedance {
  Impedance wall;
  cplx horizontal;
};

CaseImpedance case_impedance(cplx eps_m, BoundaryCase c, Wavenumber k0, const Geometry& g);

}  // namespace grating
