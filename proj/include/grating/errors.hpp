#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace grating {

/// Raised when an iterative or direct numerical procedure fails on valid input.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Newton refinement did not reach tolerance, or left the seed's branch.
class RootError : public NumericalError {
 public:
  RootError(const std::string& what, std::complex<double> last_iterate, double residual)
      : NumericalError(what), last_iterate_(last_iterate), residual_(residual) {}

  std::complex<double> last_iterate() const { return last_iterate_; }
  double residual() const { return residual_; }

 private:
  std::complex<double> last_iterate_;
  double residual_;
};

/// A mode denominator T_n(1 + r_n e^{-2i nu_n k0 h}) or beta_m + xi vanished.
class ResonanceError : public NumericalError {
 public:
  ResonanceError(const std::string& what, int index) : NumericalError(what), index_(index) {}
  int index() const { return index_; }

 private:
  int index_;
};

class SingularSystemError : public NumericalError {
 public:
  SingularSystemError(const std::string& what, double condition)
      : NumericalError(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

}  // namespace grating
