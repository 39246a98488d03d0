#pragma once

#include <complex>
#include <ostream>
#include <vector>

#include "grating/modes.hpp"
#include "grating/rayleigh.hpp"

namespace grating {

/// sin(z)/z with sinc(0) = 1.
cplx sinc(cplx z);

/// (exp(z) - 1)/z with value 1 at z = 0.
cplx exprel(cplx z);

/// psi_n(x) = (1/2)(-i)^n (exp(i mu k0 x) + sigma exp(-i mu k0 x)), |x| <= w/2.
cplx psi(const CavityMode& mode, double x);
cplx psi_derivative(const CavityMode& mode, double x);

/// Separable cavity mode C_n(x, y) = psi_n(x) V_n(y) satisfying the bottom
/// impedance condition, with V_n(y) = e^{-i nu k0 h}(e^{i nu k0 (y+h)} + r e^{-i nu k0 (y+h)}).
struct ModeProfile {
  CavityMode mode;
  cplx r;          // (nu + xi) / (nu - xi)
  cplx xi_bottom;  // horizontal-surface impedance
  double h = 0.0;
};

/// Throws ResonanceError when nu_n = xi.
ModeProfile make_profile(const CavityMode& mode, cplx xi_bottom, const Geometry& g);

cplx vertical_factor(const ModeProfile& p, double y);
cplx vertical_factor_derivative(const ModeProfile& p, double y);
cplx cavity_profile(const ModeProfile& p, double x, double y);

/// S_mn = (1/w) int psi_n(x) conj(phi_m(x)) dx with phi_m = exp(i k0 gamma_m x).
cplx overlap_S(const CavityMode& mode, double gamma);
/// T_n = (1/w) int psi_n^2 dx.
cplx self_overlap_T(const CavityMode& mode);
/// T_nn' = (1/w) int psi_n psi_n' dx; both modes must share k0 and w.
cplx cross_overlap_T(const CavityMode& a, const CavityMode& b);

/// I_n = (1/w) int |psi_n|^2 dx, closed form (1/2)(sinh(b)/b + sigma sin(a)/a), a + ib = mu k0 w.
double norm_I(const CavityMode& mode);
/// J_n = (1/w) int psi_n(x) cos(n pi (x + w/2)/w) dx, closed form.
cplx overlap_J(const CavityMode& mode);
/// (n pi + alpha) sin(alpha/2) / (alpha (n pi + alpha/2)); equals sigma_n J_n. Requires n >= 1.
cplx overlap_J_reduced(const CavityMode& mode);

double norm_I_quadrature(const CavityMode& mode);
cplx overlap_J_quadrature(const CavityMode& mode);

/// d^2_{n,min} = 1 - 2 |J_n|^2 / I_n from quadrature values of I_n and J_n. Requires n >= 1.
double completeness_defect(const CavityMode& mode);

struct EnergyReport {
  int n = 0;
  double energy = 0.0;
  double log10_energy = 0.0;
};

/// E_n = int_{-w/2}^{w/2} int_{-h}^{0} |C_n|^2 dy dx, in closed form.
EnergyReport mode_energy(const ModeProfile& p);

/// Overlap diagnostics for one mode family and one order window.
struct OverlapSet {
  std::vector<int> m;
  std::vector<int> n;
  std::vector<std::vector<cplx>> S;  // S[i][j]: order m[i], mode n[j]
  std::vector<cplx> T;
  std::vector<double> I;
  std::vector<cplx> J;
};

OverlapSet compute_overlaps(const std::vector<CavityMode>& modes, const RayleighSet& orders);

/// Long-format CSV: `kind,m,n,re,im` with kind in {S,T,I,J}.
void write_overlaps_csv(const OverlapSet& set, std::ostream& out);

}  // namespace grating
