#include "grating/rayleigh.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace grating {

std::size_t RayleighSet::specular_index() const {
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (orders[i].m == 0) return i;
  }
  throw std::logic_error("reflected-order window does not contain m = 0");
}

RayleighOrder rayleigh_order(int m, Wavenumber k0, const Geometry& g) {
  RayleighOrder o;
  o.m = m;
  o.gamma = std::sin(g.theta) + 2.0 * std::numbers::pi * m / (k0.rad_per_m() * g.d);
  const double s = 1.0 - o.gamma * o.gamma;
  o.propagative = std::abs(o.gamma) <= 1.0;
  o.beta = o.propagative ? std::complex<double>(std::sqrt(std::max(s, 0.0)), 0.0)
                         : std::complex<double>(0.0, std::sqrt(-s));
  return o;
}

namespace {

std::vector<int> propagative_set(Wavenumber k0, const Geometry& g) {
  const double scale = k0.rad_per_m() * g.d / (2.0 * std::numbers::pi);
  const double s = std::sin(g.theta);
  const int lo = static_cast<int>(std::ceil((-1.0 - s) * scale));
  const int hi = static_cast<int>(std::floor((1.0 - s) * scale));
  std::vector<int> u;
  for (int m = lo - 1; m <= hi + 1; ++m) {
    if (rayleigh_order(m, k0, g).propagative) u.push_back(m);
  }
  return u;
}

}  // namespace

RayleighSet rayleigh_orders(Wavenumber k0, const Geometry& g, int m_min, int m_max) {
  if (!(m_min <= 0 && 0 <= m_max)) {
    throw std::invalid_argument("reflected-order window must contain m = 0");
  }
  RayleighSet set;
  for (int m = m_min; m <= m_max; ++m) set.orders.push_back(rayleigh_order(m, k0, g));
  set.U = propagative_set(k0, g);
  return set;
}

RayleighSet propagative_orders(Wavenumber k0, const Geometry& g) {
  RayleighSet set;
  set.U = propagative_set(k0, g);
  for (int m : set.U) set.orders.push_back(rayleigh_order(m, k0, g));
  return set;
}

std::pair<double, double> u_transitions_inverse_cm(const Geometry& g) {
  const double d_cm = g.d * 100.0;
  const double s = std::abs(std::sin(g.theta));
  return {1.0 / (d_cm * (1.0 + s)), 1.0 / (d_cm * (1.0 - s))};
}

}  // namespace grating
