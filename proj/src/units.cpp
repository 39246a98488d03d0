#include "grating/units.hpp"

#include <cmath>
#include <stdexcept>

namespace grating {

Wavenumber Wavenumber::from_inverse_cm(double k_cm) {
  if (!(k_cm > 0.0) || !std::isfinite(k_cm)) {
    throw std::domain_error("wavenumber must be positive, got " + std::to_string(k_cm) + " cm^-1");
  }
  return Wavenumber(k_cm * kRadPerMeterPerInverseCm);
}

Wavenumber Wavenumber::from_rad_per_m(double k0) {
  if (!(k0 > 0.0) || !std::isfinite(k0)) {
    throw std::domain_error("wavenumber must be positive, got " + std::to_string(k0) + " rad/m");
  }
  return Wavenumber(k0);
}

void Geometry::validate() const {
  if (!(w > 0.0 && w < d)) throw std::invalid_argument("geometry requires 0 < w < d");
  if (!(h > 0.0)) throw std::invalid_argument("geometry requires h > 0");
  if (!(std::abs(theta) < std::numbers::pi / 2)) {
    throw std::invalid_argument("geometry requires |theta| < pi/2");
  }
}

Geometry Geometry::reference() {
  return Geometry{0.75e-6, 1.75e-6, 1.11e-6, 7.5 * std::numbers::pi / 180.0};
}

std::string_view to_string(BoundaryCase c) {
  switch (c) {
    case BoundaryCase::P: return "P";
    case BoundaryCase::M0: return "M0";
    case BoundaryCase::M: return "M";
    case BoundaryCase::R0: return "R0";
    case BoundaryCase::R: return "R";
  }
  return "?";
}

std::optional<BoundaryCase> parse_boundary_case(std::string_view s) {
  if (s == "P") return BoundaryCase::P;
  if (s == "M0") return BoundaryCase::M0;
  if (s == "M") return BoundaryCase::M;
  if (s == "R0") return BoundaryCase::R0;
  if (s == "R") return BoundaryCase::R;
  return std::nullopt;
}

}  // namespace grating
