#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <string_view>

namespace grating {

/// Ratio between a wavenumber in rad/m and the same wavenumber in cm^-1.
inline constexpr double kRadPerMeterPerInverseCm = 200.0 * std::numbers::pi;

/// Free-space wavenumber k0, stored in rad/m.
class Wavenumber {
 public:
  static Wavenumber from_inverse_cm(double k_cm);
  static Wavenumber from_rad_per_m(double k0);

  double rad_per_m() const { return value_; }
  double inverse_cm() const { return value_ / kRadPerMeterPerInverseCm; }

  friend bool operator==(const Wavenumber&, const Wavenumber&) = default;

 private:
  explicit Wavenumber(double v) : value_(v) {}
  double value_;
};

/// Lamellar grating: grooves of width w and depth h repeated with period d, lit at angle theta.
struct Geometry {
  double w;      // m
  double d;      // m
  double h;      // m
  double theta;  // rad

  /// Throws std::invalid_argument unless 0 < w < d, h > 0 and |theta| < pi/2.
  void validate() const;
  double aspect_ratio() const { return w / d; }

  /// w = 0.75 um, d = 1.75 um, h = 1.11 um, theta = 7.5 deg.
  static Geometry reference();
};

/// Treatment of the metal surfaces. The 0 variants drop Im(eps_m).
enum class BoundaryCase { P, M0, M, R0, R };

enum class Surface { Wall, Horizontal };

std::string_view to_string(BoundaryCase c);
std::optional<BoundaryCase> parse_boundary_case(std::string_view s);

/// Walls carry an impedance condition only in the R0 and R cases.
constexpr bool impedance_walls(BoundaryCase c) { return c == BoundaryCase::R0 || c == BoundaryCase::R; }

}  // namespace grating
