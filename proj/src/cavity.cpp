#include "grating/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "grating/emit.hpp"
#include "grating/errors.hpp"
#include "grating/quadrature.hpp"

namespace grating {

namespace {

using std::numbers::pi;
constexpr cplx I{0.0, 1.0};

cplx minus_i_pow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

double sinc_real(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double sinhc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sinh(x) / x;
}

}  // namespace

cplx sinc(cplx z) {
  if (std::abs(z) < 1e-4) {
    const cplx z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

cplx exprel(cplx z) {
  if (std::abs(z) < 1e-3) {
    return 1.0 + z / 2.0 * (1.0 + z / 3.0 * (1.0 + z / 4.0 * (1.0 + z / 5.0 * (1.0 + z / 6.0))));
  }
  return (std::exp(z) - 1.0) / z;
}

cplx psi(const CavityMode& mode, double x) {
  const cplx k = mode.mu * mode.k0.rad_per_m();
  return 0.5 * minus_i_pow(mode.n) * (std::exp(I * k * x) + double(mode.sigma) * std::exp(-I * k * x));
}

cplx psi_derivative(const CavityMode& mode, double x) {
  const cplx k = mode.mu * mode.k0.rad_per_m();
  return 0.5 * minus_i_pow(mode.n) * I * k *
         (std::exp(I * k * x) - double(mode.sigma) * std::exp(-I * k * x));
}

ModeProfile make_profile(const CavityMode& mode, cplx xi_bottom, const Geometry& g) {
  if (mode.nu == xi_bottom) {
    throw ResonanceError("mode " + std::to_string(mode.n) + ": nu_n equals the bottom impedance", mode.n);
  }
  return ModeProfile{mode, (mode.nu + xi_bottom) / (mode.nu - xi_bottom), xi_bottom, g.h};
}

cplx vertical_factor(const ModeProfile& p, double y) {
  const cplx q = p.mode.nu * p.mode.k0.rad_per_m();
  const double t = y + p.h;
  return std::exp(-I * q * p.h) * (std::exp(I * q * t) + p.r * std::exp(-I * q * t));
}

cplx vertical_factor_derivative(const ModeProfile& p, double y) {
  const cplx q = p.mode.nu * p.mode.k0.rad_per_m();
  const double t = y + p.h;
  return std::exp(-I * q * p.h) * I * q * (std::exp(I * q * t) - p.r * std::exp(-I * q * t));
}

cplx cavity_profile(const ModeProfile& p, double x, double y) {
  return psi(p.mode, x) * vertical_factor(p, y);
}

cplx overlap_S(const CavityMode& mode, double gamma) {
  const double half = 0.5 * mode.k0w();
  return 0.5 * minus_i_pow(mode.n) *
         (sinc((mode.mu - gamma) * half) + double(mode.sigma) * sinc((mode.mu + gamma) * half));
}

cplx self_overlap_T(const CavityMode& mode) {
  return 0.5 * (double(mode.sigma) * sinc(mode.mu * mode.k0w()) + 1.0);
}

cplx cross_overlap_T(const CavityMode& a, const CavityMode& b) {
  const double half = 0.5 * a.k0w();
  const double ss = double(a.sigma) * b.sigma;
  const double sp = double(a.sigma) + b.sigma;
  return 0.25 * minus_i_pow(a.n + b.n) *
         ((1.0 + ss) * sinc((a.mu + b.mu) * half) + sp * sinc((a.mu - b.mu) * half));
}

double norm_I(const CavityMode& mode) {
  const cplx p = mode.mu * mode.k0w();
  return 0.5 * (sinhc(p.imag()) + mode.sigma * sinc_real(p.real()));
}

cplx overlap_J(const CavityMode& mode) {
  const cplx a = mode.alpha;
  return 0.5 * (sinc(mode.n * pi + a / 2.0) + double(mode.sigma) * sinc(a / 2.0));
}

cplx overlap_J_reduced(const CavityMode& mode) {
  if (mode.n < 1) throw std::domain_error("overlap_J_reduced requires n >= 1");
  const cplx a = mode.alpha;
  const double npi = mode.n * pi;
  // sin(a/2)/a = sinc(a/2)/2 keeps the a -> 0 limit finite.
  return (npi + a) * 0.5 * sinc(a / 2.0) / (npi + a / 2.0);
}

double norm_I_quadrature(const CavityMode& mode) {
  const double hw = 0.5 * mode.w;
  const cplx v = integrate([&](double x) { return cplx(std::norm(psi(mode, x))); }, -hw, hw);
  return v.real() / mode.w;
}

cplx overlap_J_quadrature(const CavityMode& mode) {
  const double hw = 0.5 * mode.w;
  const double kn = mode.n * pi / mode.w;
  return integrate([&](double x) { return psi(mode, x) * std::cos(kn * (x + hw)); }, -hw, hw) / mode.w;
}

double completeness_defect(const CavityMode& mode) {
  if (mode.n < 1) throw std::domain_error("completeness_defect requires n >= 1");
  const double in = norm_I_quadrature(mode);
  const cplx jn = overlap_J_quadrature(mode);
  // The defect is a squared distance; only rounding can push it below zero.
  return std::max(0.0, 1.0 - 2.0 * std::norm(jn) / in);
}

EnergyReport mode_energy(const ModeProfile& p) {
  const double w = p.mode.w;
  const double h = p.h;
  const cplx q = p.mode.nu * p.mode.k0.rad_per_m();
  const double qa = q.real(), qb = q.imag();
  // int_0^h |e^{-iqh}(e^{iqt} + r e^{-iqt})|^2 dt, written with exprel so that
  // no exponential is formed with a growing argument before it is needed.
  const double e1 = exprel(cplx(2.0 * qb * h)).real();
  const double grow = std::exp(2.0 * qb * h);
  const double vertical =
      h * (e1 + std::norm(p.r) * grow * e1 + 2.0 * grow * (std::conj(p.r) * exprel(2.0 * I * qa * h)).real());
  EnergyReport rep;
  rep.n = p.mode.n;
  rep.energy = w * norm_I(p.mode) * vertical;
  rep.log10_energy = std::log10(rep.energy);
  return rep;
}

OverlapSet compute_overlaps(const std::vector<CavityMode>& modes, const RayleighSet& orders) {
  OverlapSet set;
  for (const auto& o : orders.orders) set.m.push_back(o.m);
  for (const auto& md : modes) {
    set.n.push_back(md.n);
    set.T.push_back(self_overlap_T(md));
    set.I.push_back(norm_I(md));
    set.J.push_back(overlap_J(md));
  }
  for (const auto& o : orders.orders) {
    std::vector<cplx> row;
    for (const auto& md : modes) row.push_back(overlap_S(md, o.gamma));
    set.S.push_back(std::move(row));
  }
  return set;
}

void write_overlaps_csv(const OverlapSet& set, std::ostream& out) {
  out << "kind,m,n,re,im\n";
  auto line = [&](const char* kind, const std::string& m, int n, cplx v) {
    out << kind << ',' << m << ',' << n << ',' << format_double(v.real()) << ','
        << format_double(v.imag()) << '\n';
  };
  for (std::size_t i = 0; i < set.m.size(); ++i) {
    for (std::size_t j = 0; j < set.n.size(); ++j) line("S", std::to_string(set.m[i]), set.n[j], set.S[i][j]);
  }
  for (std::size_t j = 0; j < set.n.size(); ++j) {
    line("T", "", set.n[j], set.T[j]);
    line("I", "", set.n[j], set.I[j]);
    line("J", "", set.n[j], set.J[j]);
  }
}

}  // namespace grating
