#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "grating/units.hpp"

namespace grating {

/// Reflected plane wave exp(i k0 (gamma x + beta y)) of diffraction order m.
struct RayleighOrder {
  int m = 0;
  double gamma = 0.0;
  std::complex<double> beta;  // Im(beta) >= 0
  bool propagative = false;   // |gamma| <= 1
};

struct RayleighSet {
  std::vector<RayleighOrder> orders;
  /// Propagative orders in the whole of Z (not only the window).
  std::vector<int> U;

  /// Position of m = 0 in `orders`; throws if the window misses it.
  std::size_t specular_index() const;
  const RayleighOrder& specular() const { return orders[specular_index()]; }
};

RayleighOrder rayleigh_order(int m, Wavenumber k0, const Geometry& g);

/// Orders m_min..m_max (requires m_min <= 0 <= m_max).
RayleighSet rayleigh_orders(Wavenumber k0, const Geometry& g, int m_min, int m_max);

/// Window made of the propagative orders only.
RayleighSet propagative_orders(Wavenumber k0, const Geometry& g);

/// Wavenumbers (cm^-1) where orders -1 and +1 become propagative:
/// 1/(d (1 + sin theta)) and 1/(d (1 - sin theta)) for theta >= 0.
std::pair<double, double> u_transitions_inverse_cm(const Geometry& g);

}  // namespace grating
