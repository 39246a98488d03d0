#include "grating/system.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "grating/errors.hpp"
#include "grating/quadrature.hpp"

namespace grating {

namespace {

constexpr cplx I{0.0, 1.0};

cplx round_trip(const ModeProfile& p) {
  return std::exp(-2.0 * I * p.mode.nu * p.mode.k0.rad_per_m() * p.h);
}

cplx order_factor(const RayleighOrder& o, cplx xi, const Geometry& g) {
  const cplx den = o.beta + xi;
  if (std::abs(den) < kResonanceThreshold) {
    throw ResonanceError("order m = " + std::to_string(o.m) + ": beta_m + xi vanishes", o.m);
  }
  return g.aspect_ratio() / den;
}

cplx cavity_denominator(const ModeProfile& p) {
  const cplx t = self_overlap_T(p.mode);
  if (std::abs(t) < 1e-8) {
    throw ResonanceError("mode " + std::to_string(p.mode.n) + ": T_n vanishes", p.mode.n);
  }
  const cplx den = t * (1.0 + p.r * round_trip(p));
  if (std::abs(den) < kResonanceThreshold) {
    throw ResonanceError("mode " + std::to_string(p.mode.n) + ": cavity resonance denominator vanishes",
                         p.mode.n);
  }
  return den;
}

cplx coupling(const ModeProfile& p, cplx xi) {
  return double(p.mode.sigma) * (p.mode.nu + xi) * (1.0 - round_trip(p));
}

}  // namespace

void Truncation::validate() const {
  if (N < 1) throw std::invalid_argument("truncation requires N >= 1");
  if (!propagative_only && !(m_min <= 0 && 0 <= m_max)) {
    throw std::invalid_argument("reflected-order window must contain m = 0");
  }
}

std::map<int, cplx> reflection_from_cavity(const std::vector<cplx>& A,
                                           const std::vector<ModeProfile>& profiles,
                                           const RayleighSet& orders, cplx xi, const Geometry& g) {
  if (A.size() != profiles.size()) throw std::invalid_argument("one amplitude per mode expected");
  const auto& b0 = orders.specular().beta;
  std::map<int, cplx> R;
  for (const auto& o : orders.orders) {
    cplx sum = 0.0;
    for (std::size_t j = 0; j < profiles.size(); ++j) {
      sum += A[j] * overlap_S(profiles[j].mode, o.gamma) * coupling(profiles[j], xi);
    }
    cplx r = order_factor(o, xi, g) * sum;
    if (o.m == 0) r += (b0 - xi) / (b0 + xi);
    R[o.m] = r;
  }
  return R;
}

std::vector<cplx> cavity_from_reflection(const std::map<int, cplx>& R,
                                         const std::vector<ModeProfile>& profiles,
                                         const RayleighSet& orders, const Geometry& /*g*/) {
  std::vector<cplx> A;
  A.reserve(profiles.size());
  for (const auto& p : profiles) {
    cplx sum = 0.0;
    for (const auto& o : orders.orders) {
      const auto it = R.find(o.m);
      const cplx rm = (it == R.end()) ? cplx(0.0) : it->second;
      sum += overlap_S(p.mode, o.gamma) * ((o.m == 0 ? 1.0 : 0.0) + rm);
    }
    A.push_back(sum / cavity_denominator(p));
  }
  return A;
}

double condition_number(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("condition_number: square matrix expected");
  if (m.rows() > 64) throw std::invalid_argument("condition_number: matrix larger than 64");
  if (!m.allFinite()) return std::numeric_limits<double>::infinity();
  if (m.size() == 1) return std::abs(m(0, 0)) == 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

CoupledSystem::CoupledSystem(BoundaryCase c, const Geometry& g, Wavenumber k0, cplx eps_m,
                             const Truncation& t, BranchConvention branch)
    : geometry_(g) {
  t.validate();
  g.validate();
  const int n_max = (c == BoundaryCase::R0) ? t.N : t.N - 1;
  family_ = solve_mode_family(c, g, k0, n_max, branch, eps_m);
  orders_ = t.propagative_only ? propagative_orders(k0, g) : rayleigh_orders(k0, g, t.m_min, t.m_max);
  precompute();
}

CoupledSystem::CoupledSystem(ModeFamily family, RayleighSet orders, const Geometry& g)
    : family_(std::move(family)), orders_(std::move(orders)), geometry_(g) {
  if (family_.modes.empty()) throw std::invalid_argument("coupled system needs at least one mode");
  precompute();
}

void CoupledSystem::precompute() {
  const cplx xi = family_.impedance.horizontal;
  profiles_.clear();
  for (const auto& m : family_.modes) profiles_.push_back(make_profile(m, xi, geometry_));
  spec_ = orders_.specular_index();

  const auto nm = static_cast<Eigen::Index>(orders_.orders.size());
  const auto nn = static_cast<Eigen::Index>(profiles_.size());
  S_.resize(nm, nn);
  G_.resize(nm);
  D_.resize(nn);
  C_.resize(nn);
  for (Eigen::Index i = 0; i < nm; ++i) {
    const auto& o = orders_.orders[i];
    G_(i) = order_factor(o, xi, geometry_);
    for (Eigen::Index j = 0; j < nn; ++j) S_(i, j) = overlap_S(profiles_[j].mode, o.gamma);
  }
  for (Eigen::Index j = 0; j < nn; ++j) {
    D_(j) = cavity_denominator(profiles_[j]);
    C_(j) = coupling(profiles_[j], xi);
  }
  const cplx b0 = orders_.orders[spec_].beta;
  rho_ = (b0 - xi) / (b0 + xi);
  incidence_ = 2.0 * b0 / (b0 + xi);
}

Eigen::MatrixXcd CoupledSystem::a_form_matrix() const {
  // M_nn' = D_n delta_nn' - sum_m S_mn G_m S_mn' C_n'
  Eigen::MatrixXcd m = -(S_.transpose() * G_.asDiagonal() * S_) * C_.asDiagonal();
  m.diagonal() += D_;
  return m;
}

Eigen::VectorXcd CoupledSystem::a_form_rhs() const {
  return S_.row(static_cast<Eigen::Index>(spec_)).transpose() * incidence_;
}

Eigen::MatrixXcd CoupledSystem::r_form_matrix() const {
  // K_mm' = delta_mm' - G_m sum_n C_n S_mn S_m'n / D_n
  const Eigen::VectorXcd cd = C_.cwiseQuotient(D_);
  Eigen::MatrixXcd k = -(G_.asDiagonal() * S_ * cd.asDiagonal() * S_.transpose());
  k.diagonal().array() += 1.0;
  return k;
}

Eigen::VectorXcd CoupledSystem::r_form_rhs() const {
  const Eigen::VectorXcd cd = C_.cwiseQuotient(D_);
  Eigen::VectorXcd rhs =
      G_.asDiagonal() * (S_ * (cd.cwiseProduct(S_.row(static_cast<Eigen::Index>(spec_)).transpose())));
  rhs(static_cast<Eigen::Index>(spec_)) += rho_;
  return rhs;
}

SolveResult CoupledSystem::solve(SystemForm form) const {
  SolveResult res;
  res.form = form;
  res.U = orders_.U;
  for (const auto& m : family_.modes) res.n.push_back(m.n);

  const Eigen::MatrixXcd mat = (form == SystemForm::AForm) ? a_form_matrix() : r_form_matrix();
  const Eigen::VectorXcd rhs = (form == SystemForm::AForm) ? a_form_rhs() : r_form_rhs();
  res.condition = condition_number(mat);
  if (!std::isfinite(res.condition)) {
    throw SingularSystemError("coupled system matrix is singular", res.condition);
  }
  const Eigen::VectorXcd x = mat.partialPivLu().solve(rhs);
  if (!x.allFinite()) throw SingularSystemError("coupled system solution is not finite", res.condition);

  if (form == SystemForm::AForm) {
    res.A.assign(x.data(), x.data() + x.size());
    const Eigen::VectorXcd r = G_.cwiseProduct(S_ * C_.cwiseProduct(x));
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      res.R[orders_.orders[i].m] = r(i) + (static_cast<std::size_t>(i) == spec_ ? rho_ : cplx(0.0));
    }
  } else {
    for (Eigen::Index i = 0; i < x.size(); ++i) res.R[orders_.orders[i].m] = x(i);
    Eigen::VectorXcd incident_plus = x;
    incident_plus(static_cast<Eigen::Index>(spec_)) += 1.0;
    const Eigen::VectorXcd a = (S_.transpose() * incident_plus).cwiseQuotient(D_);
    res.A.assign(a.data(), a.data() + a.size());
  }
  return res;
}

cplx CoupledSystem::field_above(const SolveResult& r, double x) const {
  const double k0 = this->k0().rad_per_m();
  cplx v = std::exp(I * k0 * orders_.orders[spec_].gamma * x);
  for (const auto& o : orders_.orders) v += r.R.at(o.m) * std::exp(I * k0 * o.gamma * x);
  return v;
}

cplx CoupledSystem::impedance_defect_above(const SolveResult& r, double x) const {
  const double k0 = this->k0().rad_per_m();
  const cplx xi = family_.impedance.horizontal;
  const auto& o0 = orders_.orders[spec_];
  cplx v = I * k0 * (xi - o0.beta) * std::exp(I * k0 * o0.gamma * x);
  for (const auto& o : orders_.orders) {
    v += I * k0 * (o.beta + xi) * r.R.at(o.m) * std::exp(I * k0 * o.gamma * x);
  }
  return v;
}

cplx CoupledSystem::field_below(const SolveResult& r, double x) const {
  // The amplitudes carry the parity sign sigma_n of the R_m / A_n relations.
  cplx v = 0.0;
  for (std::size_t j = 0; j < profiles_.size(); ++j) {
    v += r.A[j] * double(profiles_[j].mode.sigma) * psi(profiles_[j].mode, x) * vertical_factor(profiles_[j], 0.0);
  }
  return v;
}

void continuity_mismatch(SolveResult& r, const CoupledSystem& sys) {
  const Geometry& g = sys.geometry();
  const double hw = 0.5 * g.w, hd = 0.5 * g.d;
  const double k0 = sys.k0().rad_per_m();
  constexpr double tol = 1e-10;
  auto sq = [](cplx z) { return cplx(std::norm(z)); };

  const double diff_ap =
      integrate([&](double x) { return sq(sys.field_above(r, x) - sys.field_below(r, x)); }, -hw, hw, tol).real();
  const double above_ap =
      integrate([&](double x) { return sq(sys.field_above(r, x)); }, -hw, hw, tol).real();
  const double above_period =
      integrate([&](double x) { return sq(sys.field_above(r, x)); }, -hd, hd, tol).real();
  auto defect = [&](double x) { return sq(sys.impedance_defect_above(r, x)); };
  const double metal =
      integrate(defect, -hd, -hw, tol).real() + integrate(defect, hw, hd, tol).real();

  r.aperture_defect = std::sqrt(diff_ap / above_ap);
  // The metal defect involves a normal derivative, so 1/k0 makes it dimensionless.
  r.metal_defect = std::sqrt(metal / above_period) / k0;
  r.mismatch = r.aperture_defect + r.metal_defect;
}

cplx monomode_amplitude(const ModeProfile& p, const RayleighSet& orders, cplx xi, const Geometry& g) {
  if (p.mode.n != 0) throw std::invalid_argument("monomode_amplitude expects the fundamental mode");
  const cplx e = round_trip(p);
  const cplx b0 = orders.specular().beta;
  cplx sum = 0.0;
  for (const auto& o : orders.orders) {
    const cplx s = overlap_S(p.mode, o.gamma);
    const cplx den = o.beta + xi;
    if (std::abs(den) < kResonanceThreshold) {
      throw ResonanceError("order m = " + std::to_string(o.m) + ": beta_m + xi vanishes", o.m);
    }
    sum += s * s / den;
  }
  const cplx bracket = self_overlap_T(p.mode) * (1.0 + p.r * e) -
                       g.aspect_ratio() * (p.mode.nu + xi) * (1.0 - e) * sum;
  if (std::abs(bracket) < kResonanceThreshold) throw ResonanceError("monomode bracket vanishes", 0);
  return 2.0 * b0 * overlap_S(p.mode, orders.specular().gamma) / (b0 + xi) / bracket;
}

cplx monomode_amplitude(BoundaryCase c, const Geometry& g, Wavenumber k0, const RayleighSet& orders,
                        cplx eps_m, BranchConvention branch) {
  if (c == BoundaryCase::R0) throw std::domain_error("R0 case has no fundamental cavity mode");
  const ModeFamily fam = solve_mode_family(c, g, k0, 0, branch, eps_m);
  const ModeProfile p = make_profile(fam.modes.front(), fam.impedance.horizontal, g);
  return monomode_amplitude(p, orders, fam.impedance.horizontal, g);
}

}  // namespace grating
