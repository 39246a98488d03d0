#pragma once

#include <complex>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "grating/cavity.hpp"
#include "grating/materials.hpp"
#include "grating/modes.hpp"
#include "grating/rayleigh.hpp"

namespace grating {

/// Number of cavity modes and window of reflected orders kept in the truncated system.
struct Truncation {
  int N = 1;
  int m_min = -20;
  int m_max = 20;
  /// Keep exactly the propagative orders at each wavenumber; m_min/m_max are ignored.
  bool propagative_only = false;

  void validate() const;
};

/// Unknowns of the solved linear system: cavity amplitudes A_n or reflection coefficients R_m.
enum class SystemForm { AForm, RForm };

struct SolveResult {
  std::vector<int> n;     // mode indices of A
  std::vector<cplx> A;
  std::map<int, cplx> R;  // window orders only
  double condition = 1.0;
  double aperture_defect = 0.0;
  double metal_defect = 0.0;
  double mismatch = 0.0;  // aperture_defect + metal_defect
  SystemForm form = SystemForm::AForm;
  std::vector<int> U;
};

/// Reflection coefficients from cavity amplitudes,
/// R_m = rho delta_m0 + Gamma/(beta_m + xi) sum_n A_n sigma_n S_mn (nu_n + xi)(1 - e^{-2i nu_n k0 h}).
std::map<int, cplx> reflection_from_cavity(const std::vector<cplx>& A,
                                           const std::vector<ModeProfile>& profiles,
                                           const RayleighSet& orders, cplx xi, const Geometry& g);

/// Cavity amplitudes from reflection coefficients,
/// A_n = sum_m S_mn (delta_m0 + R_m) / (T_n (1 + r_n e^{-2i nu_n k0 h})).
std::vector<cplx> cavity_from_reflection(const std::map<int, cplx>& R,
                                         const std::vector<ModeProfile>& profiles,
                                         const RayleighSet& orders, const Geometry& g);

/// 2-norm condition number from the singular values.
double condition_number(const Eigen::MatrixXcd& m);

/// Truncated coupled system at one wavenumber, with its overlap integrals precomputed.
class CoupledSystem {
 public:
  CoupledSystem(BoundaryCase c, const Geometry& g, Wavenumber k0, cplx eps_m, const Truncation& t,
                BranchConvention branch);
  CoupledSystem(ModeFamily family, RayleighSet orders, const Geometry& g);

  const ModeFamily& family() const { return family_; }
  const RayleighSet& orders() const { return orders_; }
  const std::vector<ModeProfile>& profiles() const { return profiles_; }
  const Geometry& geometry() const { return geometry_; }
  Wavenumber k0() const { return family_.modes.front().k0; }
  cplx xi() const { return family_.impedance.horizontal; }

  /// M A = S, obtained by substituting the R_m expression into the A_n expression.
  Eigen::MatrixXcd a_form_matrix() const;
  Eigen::VectorXcd a_form_rhs() const;
  /// The dual system in the reflection coefficients of the window.
  Eigen::MatrixXcd r_form_matrix() const;
  Eigen::VectorXcd r_form_rhs() const;

  /// Dense LU with partial pivoting. Throws SingularSystemError when the matrix
  /// has a non-finite condition number or the solution is not finite.
  SolveResult solve(SystemForm form = SystemForm::AForm) const;

  /// H^I(x, 0) and (d_y + i k0 xi) H^I(x, 0) for the given reflection coefficients.
  cplx field_above(const SolveResult& r, double x) const;
  cplx impedance_defect_above(const SolveResult& r, double x) const;
  /// H^II(x, 0) for |x| <= w/2.
  cplx field_below(const SolveResult& r, double x) const;

 private:
  void precompute();

  ModeFamily family_;
  RayleighSet orders_;
  Geometry geometry_;
  std::vector<ModeProfile> profiles_;
  Eigen::MatrixXcd S_;    // orders x modes
  Eigen::VectorXcd D_;    // T_n (1 + r_n e^{-2i nu_n k0 h})
  Eigen::VectorXcd C_;    // sigma_n (nu_n + xi)(1 - e^{-2i nu_n k0 h})
  Eigen::VectorXcd G_;    // Gamma / (beta_m + xi)
  cplx rho_;              // (beta_0 - xi)/(beta_0 + xi)
  cplx incidence_;        // 2 beta_0 / (beta_0 + xi)
  std::size_t spec_ = 0;  // row of m = 0
};

/// Fills the continuity diagnostics of `r` by quadrature: ||H^I - H^II|| / ||H^I|| on the aperture,
/// plus ||(d_y + i k0 xi) H^I|| / k0 on the metal relative to ||H^I|| over one period.
void continuity_mismatch(SolveResult& r, const CoupledSystem& sys);

/// Single-mode closed form
/// A_0 [T_0(1 + r_0 e) - Gamma (nu_0 + xi)(1 - e) sum_m s_m^2/(beta_m + xi)] = 2 beta_0 s_0/(beta_0 + xi),
/// e = e^{-2i nu_0 k0 h}. Throws ResonanceError when the bracket vanishes.
cplx monomode_amplitude(const ModeProfile& fundamental, const RayleighSet& orders, cplx xi,
                        const Geometry& g);

/// Convenience overload that solves the fundamental mode; throws std::domain_error in the R0 case.
cplx monomode_amplitude(BoundaryCase c, const Geometry& g, Wavenumber k0, const RayleighSet& orders,
                        cplx eps_m, BranchConvention branch = BranchConvention::ImNuNonPositive);

inline constexpr double kResonanceThreshold = 1e-12;

}  // namespace grating
