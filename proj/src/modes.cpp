#include "grating/modes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "grating/errors.hpp"

namespace grating {

namespace {

using std::numbers::pi;
constexpr cplx I{0.0, 1.0};

cplx half_tan(cplx alpha) {
  if (std::abs(alpha) < 1e-4) {
    const cplx a2 = alpha * alpha;
    return alpha * (0.5 + a2 * (1.0 / 24.0 + a2 / 240.0));
  }
  return std::tan(alpha / 2.0);
}

CavityMode make_mode(int n, cplx alpha, const Geometry& g, Wavenumber k0, BoundaryCase c,
                     BranchConvention branch, cplx xi_tilde) {
  CavityMode m;
  m.n = n;
  m.alpha = alpha;
  m.sigma = (n % 2 == 0) ? 1 : -1;
  m.k0 = k0;
  m.w = g.w;
  m.boundary = c;
  m.mu = (n * pi + alpha) / m.k0w();
  m.nu = nu_from_mu(m.mu, branch);
  m.residual = std::abs(mode_equation(n, alpha, xi_tilde));
  if (xi_tilde == cplx(0.0) && alpha == cplx(0.0)) {
    // exp(i n pi) = sigma holds exactly; the quotient form is 0/0 at n = 0.
    m.eq5_residual = 0.0;
  } else {
    const cplx xi = xi_tilde / m.k0w();
    m.eq5_residual = std::abs(std::exp(I * m.mu * m.k0w()) - double(m.sigma) * (m.mu + xi) / (m.mu - xi));
  }
  return m;
}

}  // namespace

cplx alpha_series(int n, cplx xi_tilde) {
  if (n < 1) throw std::domain_error("alpha_series requires n >= 1; use alpha0_series for n = 0");
  const double nn = n;
  const double p3 = pi * pi * pi, p5 = p3 * pi * pi, p7 = p5 * pi * pi, p9 = p7 * pi * pi;
  const cplx q = xi_tilde / nn;
  const cplx c1 = -2.0 * I / pi;
  const cplx c2 = 4.0 / (nn * p3);
  const cplx c3 = I * (16.0 / (nn * nn * p5) - 2.0 / (3.0 * p3));
  const cplx c4 = -(80.0 / (nn * nn * nn * p7) - 16.0 / (3.0 * nn * p5));
  const cplx c5 = -I * (448.0 / (std::pow(nn, 4) * p9) - 40.0 / (nn * nn * p7) + 2.0 / (5.0 * p5));
  return q * (c1 + q * (c2 + q * (c3 + q * (c4 + q * c5))));
}

cplx alpha0_series(cplx xi_tilde) {
  const cplx chi = std::sqrt(xi_tilde);
  const cplx c2 = chi * chi;
  const cplx poly =
      1.0 + c2 * (I / 12.0 + c2 * (-11.0 / 1440.0 + c2 * (-17.0 * I / 40320.0 + c2 * (-281.0 / 9676800.0))));
  return cplx(1.0, -1.0) * chi * poly;
}

cplx mode_equation(int n, cplx alpha, cplx xi_tilde) {
  return (n * pi + alpha) * half_tan(alpha) + I * xi_tilde;
}

cplx mode_equation_derivative(int n, cplx alpha, cplx /*xi_tilde*/) {
  const cplx c = std::cos(alpha / 2.0);
  return half_tan(alpha) + (n * pi + alpha) / (2.0 * c * c);
}

double wall_equation_residual(int n, cplx alpha, cplx xi_tilde) {
  const cplx p = n * pi + alpha;
  const double sigma = (n % 2 == 0) ? 1.0 : -1.0;
  if (p == xi_tilde) return std::abs(std::exp(I * p) * (p - xi_tilde) - sigma * (p + xi_tilde));
  return std::abs(std::exp(I * p) - sigma * (p + xi_tilde) / (p - xi_tilde));
}

RootReport refine_root(int n, cplx xi_tilde, cplx seed, double tol) {
  if (n < 0) throw std::domain_error("refine_root requires n >= 0");
  cplx a = seed;
  for (int it = 0;; ++it) {
    const cplx f = mode_equation(n, a, xi_tilde);
    const double res = std::abs(f);
    if (res < tol) {
      RootReport r{a, res, wall_equation_residual(n, a, xi_tilde), it};
      if (!(r.eq5_residual < 1e-10)) {
        throw RootError("mode " + std::to_string(n) + ": wall equation residual " +
                            std::to_string(r.eq5_residual) + " after convergence",
                        a, res);
      }
      return r;
    }
    if (it == kMaxNewtonIterations || !std::isfinite(res)) {
      throw RootError("mode " + std::to_string(n) + ": Newton did not converge", a, res);
    }
    a -= f / mode_equation_derivative(n, a, xi_tilde);
    if (std::abs(a - seed) > pi / 2) {
      throw RootError("mode " + std::to_string(n) + ": root left the seed branch", a,
                      std::abs(mode_equation(n, a, xi_tilde)));
    }
  }
}

std::vector<double> solve_modes_real(int n_max, cplx xi_tilde, double k0w) {
  if (xi_tilde.real() != 0.0) {
    throw std::domain_error("solve_modes_real requires a purely imaginary reduced impedance");
  }
  const double eta = xi_tilde.imag();
  constexpr double delta = 1e-9;
  std::vector<double> mu;
  mu.reserve(n_max > 0 ? n_max : 0);
  for (int n = 1; n <= n_max; ++n) {
    // -i xi_tilde = eta, so the real form is (n pi + a) tan(a/2) - eta.
    auto g = [&](double a) { return (n * pi + a) * std::tan(a / 2.0) - eta; };
    double lo = -pi + delta, hi = pi - delta;
    double glo = g(lo), ghi = g(hi);
    if (!(glo < 0.0 && ghi > 0.0)) {
      throw NumericalError("real mode solver: no sign change bracketing mode n = " + std::to_string(n));
    }
    double mid = 0.0, gmid = 0.0;
    for (int it = 0; it < 200; ++it) {
      mid = 0.5 * (lo + hi);
      gmid = g(mid);
      if (gmid == 0.0 || mid == lo || mid == hi) break;
      if (gmid < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    if (!(std::abs(gmid) < kRootTolerance)) {
      throw NumericalError("real mode solver: bisection residual " + std::to_string(gmid) +
                           " for mode n = " + std::to_string(n));
    }
    mu.push_back((n * pi + mid) / k0w);
  }
  return mu;
}

std::optional<double> real_fundamental_root(cplx xi_tilde) {
  const cplx target = -I * xi_tilde;
  if (target.imag() != 0.0) return std::nullopt;
  const double eta = target.real();
  // a tan(a/2) is even, vanishes at 0 and increases to +inf at |a| -> pi.
  if (eta < 0.0) return std::nullopt;
  if (eta == 0.0) return 0.0;
  double lo = 0.0, hi = pi - 1e-12;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (mid * std::tan(mid / 2.0) < eta ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

cplx nu_from_mu(cplx mu, BranchConvention branch) {
  cplx nu = std::sqrt((1.0 - mu) * (1.0 + mu));
  if (nu.imag() == 0.0) return nu.real() < 0.0 ? -nu : nu;
  const bool flip = (branch == BranchConvention::ImNuNonNegative) ? nu.imag() < 0.0 : nu.imag() > 0.0;
  return flip ? -nu : nu;
}

ModeFamily solve_mode_family(BoundaryCase c, const Geometry& g, Wavenumber k0, int n_max,
                             BranchConvention branch, cplx eps_m) {
  if (n_max < 0) throw std::invalid_argument("solve_mode_family requires n_max >= 0");
  ModeFamily fam;
  fam.boundary = c;
  fam.impedance = case_impedance(eps_m, c, k0, g);
  const cplx xt = fam.impedance.wall.xi_tilde;
  const double k0w = k0.rad_per_m() * g.w;

  switch (c) {
    case BoundaryCase::P:
    case BoundaryCase::M0:
    case BoundaryCase::M:
      for (int n = 0; n <= n_max; ++n) fam.modes.push_back(make_mode(n, 0.0, g, k0, c, branch, xt));
      break;
    case BoundaryCase::R0: {
      fam.fundamental_absent = !real_fundamental_root(xt).has_value();
      if (!fam.fundamental_absent) {
        throw NumericalError("R0 case: unexpected real fundamental mode (Re(eps_m) >= 0?)");
      }
      const auto mu = solve_modes_real(n_max, xt, k0w);
      for (int n = 1; n <= n_max; ++n) {
        const double alpha = mu[n - 1] * k0w - n * pi;
        fam.modes.push_back(make_mode(n, alpha, g, k0, c, branch, xt));
      }
      break;
    }
    case BoundaryCase::R:
      for (int n = 0; n <= n_max; ++n) {
        const cplx seed = (n == 0) ? alpha0_series(xt) : alpha_series(n, xt);
        const RootReport root = refine_root(n, xt, seed);
        fam.modes.push_back(make_mode(n, root.alpha, g, k0, c, branch, xt));
      }
      break;
  }
  return fam;
}

ModeFamily solve_mode_family(BoundaryCase c, const Geometry& g, Wavenumber k0, int n_max,
                             BranchConvention branch, const PermittivityTable& table) {
  return solve_mode_family(c, g, k0, n_max, branch, table.at(k0));
}

}  // namespace grating
