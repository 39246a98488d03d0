#include "grating/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "grating/errors.hpp"

namespace grating {

namespace {

GaussLegendreRule build_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double wgt = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = wgt;
    rule.weights[n - 1 - i] = wgt;
  }
  return rule;
}

struct Estimate {
  std::complex<double> value;
  double magnitude;
};

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  static std::mutex mutex;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

std::complex<double> integrate(const std::function<std::complex<double>(double)>& f, double a,
                               double b, double rel_tol) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  auto estimate = [&](int n) {
    const auto& rule = gauss_legendre(n);
    Estimate e{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
      const auto v = f(mid + half * rule.nodes[i]);
      e.value += rule.weights[i] * v;
      e.magnitude += rule.weights[i] * std::abs(v);
    }
    e.value *= half;
    e.magnitude *= std::abs(half);
    return e;
  };
  Estimate prev = estimate(kQuadratureStartNodes);
  for (int n = 2 * kQuadratureStartNodes; n <= kQuadratureMaxNodes; n *= 2) {
    const Estimate cur = estimate(n);
    const double scale = std::max(std::abs(cur.value), cur.magnitude);
    if (std::abs(cur.value - prev.value) <= rel_tol * scale) return cur.value;
    prev = cur;
  }
  throw NumericalError("quadrature did not converge with " + std::to_string(kQuadratureMaxNodes) +
                       " nodes");
}

std::complex<double> integrate_2d(const std::function<std::complex<double>(double, double)>& f,
                                  double ax, double bx, double ay, double by, double rel_tol) {
  const double mx = 0.5 * (ax + bx), hx = 0.5 * (bx - ax);
  const double my = 0.5 * (ay + by), hy = 0.5 * (by - ay);
  auto estimate = [&](int n) {
    const auto& rule = gauss_legendre(n);
    Estimate e{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
      const double x = mx + hx * rule.nodes[i];
      for (int j = 0; j < n; ++j) {
        const auto v = f(x, my + hy * rule.nodes[j]);
        const double wij = rule.weights[i] * rule.weights[j];
        e.value += wij * v;
        e.magnitude += wij * std::abs(v);
      }
    }
    e.value *= hx * hy;
    e.magnitude *= std::abs(hx * hy);
    return e;
  };
  Estimate prev = estimate(kQuadratureStartNodes);
  for (int n = 2 * kQuadratureStartNodes; n <= kQuadratureMaxNodes; n *= 2) {
    const Estimate cur = estimate(n);
    const double scale = std::max(std::abs(cur.value), cur.magnitude);
    if (std::abs(cur.value - prev.value) <= rel_tol * scale) return cur.value;
    prev = cur;
  }
  throw NumericalError("2D quadrature did not converge");
}

}  // namespace grating
