#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "grating/materials.hpp"
#include "grating/units.hpp"

namespace grating {

/// Sign of Im(nu_n) selected when taking nu_n = sqrt(1 - mu_n^2).
enum class BranchConvention { ImNuNonNegative, ImNuNonPositive };

/// One horizontal cavity eigenmode.
///
/// mu = (n pi + alpha) / (k0 w), mu^2 + nu^2 = 1, sigma = (-1)^n. The residuals
/// are those of (n pi + alpha) tan(alpha/2) = -i xi_tilde and of
/// exp(i mu k0 w) = sigma (mu + xi) / (mu - xi).
struct CavityMode {
  int n = 0;
  cplx alpha;
  cplx mu;
  cplx nu;
  int sigma = 1;
  double residual = 0.0;
  double eq5_residual = 0.0;
  Wavenumber k0 = Wavenumber::from_rad_per_m(1.0);
  double w = 0.0;
  BoundaryCase boundary = BoundaryCase::P;

  double k0w() const { return k0.rad_per_m() * w; }
};

/// Five-term expansion of alpha_n in powers of xi_tilde / n. Requires n >= 1.
cplx alpha_series(int n, cplx xi_tilde);

/// Odd expansion of alpha_0 in chi = sqrt(xi_tilde) (principal root).
cplx alpha0_series(cplx xi_tilde);

/// F(alpha) = (n pi + alpha) tan(alpha/2) + i xi_tilde and its derivative.
cplx mode_equation(int n, cplx alpha, cplx xi_tilde);
cplx mode_equation_derivative(int n, cplx alpha, cplx xi_tilde);

/// |exp(i p) - sigma (p + xi_tilde)/(p - xi_tilde)| with p = n pi + alpha.
double wall_equation_residual(int n, cplx alpha, cplx xi_tilde);

struct RootReport {
  cplx alpha;
  double residual = 0.0;
  double eq5_residual = 0.0;
  int iterations = 0;
};

inline constexpr double kRootTolerance = 1e-13;
inline constexpr int kMaxNewtonIterations = 50;

/// Newton refinement of F(alpha) = 0 from `seed`.
///
/// Throws RootError when |F| stays above `tol` after kMaxNewtonIterations, when
/// an iterate moves farther than pi/2 from the seed, or when the wall equation
/// residual of the converged root exceeds 1e-10.
RootReport refine_root(int n, cplx xi_tilde, cplx seed, double tol = kRootTolerance);

/// Real horizontal wavenumbers mu_1..mu_{n_max} for a purely imaginary xi_tilde,
/// by bisection of (n pi + alpha) tan(alpha/2) = eta on alpha in (-pi, pi).
std::vector<double> solve_modes_real(int n_max, cplx xi_tilde, double k0w);

/// Real root of alpha tan(alpha/2) = eta near the origin, if one exists.
/// For eta < 0 (real metal without losses) there is none.
std::optional<double> real_fundamental_root(cplx xi_tilde);

cplx nu_from_mu(cplx mu, BranchConvention branch);

struct ModeFamily {
  BoundaryCase boundary = BoundaryCase::P;
  CaseImpedance impedance;
  /// Set in the R0 case, whose family starts at n = 1.
  bool fundamental_absent = false;
  std::vector<CavityMode> modes;
};

/// Modes n = 0..n_max (n = 1..n_max when the fundamental is absent).
ModeFamily solve_mode_family(BoundaryCase c, const Geometry& g, Wavenumber k0, int n_max,
                             BranchConvention branch, cplx eps_m);
ModeFamily solve_mode_family(BoundaryCase c, const Geometry& g, Wavenumber k0, int n_max,
                             BranchConvention branch, const PermittivityTable& table);

}  // namespace grating
