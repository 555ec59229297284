#pragma once

#include <complex>
#include <optional>
#include <string>

namespace osg {

using cplx = std::complex<double>;

/// Dimensionless simulation parameters shared by every module.
struct SimParams {
  double lambda = 4.0;         ///< interaction parameter mu*E0*tau/hbar
  double k_dr = 0.6283185307179586;  ///< pinhole scale k*Delta_r
  double eps_trunc = 1e-6;     ///< tolerated probability loss from Fock truncation
  int n_max = -1;              ///< total-excitation cutoff; -1 lets the state builder choose

  /// Throws Error(InvalidArgument) unless lambda > 0, k_dr > 0, 0 < eps_trunc < 1.
  void validate() const;

  /// Non-empty when k*Delta_r leaves the linearized-node regime (Delta_r << lambda).
  std::optional<std::string> regime_warning() const;

  /// Exponential decay rate of the pinhole amplitude in rho = k r, 1/(2 k Delta_r).
  double pinhole_rate() const { return 0.5 / k_dr; }

  bool operator==(const SimParams&) const = default;
};

}  // namespace osg
