#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace grating {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point rule; safe to call from several threads.
const GaussLegendreRule& gauss_legendre(int n);

inline constexpr int kQuadratureStartNodes = 64;
inline constexpr int kQuadratureMaxNodes = 2048;
inline constexpr double kQuadratureRelTol = 1e-13;

/// Integral of f over [a, b] by Gauss-Legendre rules of 64, 128, ... nodes, stopping
/// when two successive estimates differ by less than rel_tol relative to
/// max(|estimate|, integral of |f|). Throws NumericalError past kQuadratureMaxNodes.
std::complex<double> integrate(const std::function<std::complex<double>(double)>& f, double a,
                               double b, double rel_tol = kQuadratureRelTol);

/// Tensor-product version over [ax, bx] x [ay, by].
std::complex<double> integrate_2d(const std::function<std::complex<double>(double, double)>& f,
                                  double ax, double bx, double ay, double by,
                                  double rel_tol = kQuadratureRelTol);

}  // namespace grating
