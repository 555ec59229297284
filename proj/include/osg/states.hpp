#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "osg/params.hpp"

namespace osg {

enum class GeneratorKind { Fock, Coherent, SqueezedCoherent, Raw };

/// How a single-mode state was built.
struct Generator {
  GeneratorKind kind = GeneratorKind::Raw;
  int fock_n = 0;
  cplx alpha{};
  double r = 0.0;
  double phi_sq = 0.0;

  std::string describe() const;
};

/// Truncated single-mode Fock expansion.
///
/// Amplitudes are renormalized over the window [0, n_max]; `captured_weight()`
/// keeps the probability the exact (untruncated) state has inside the window.
class ModeCoeffs {
 public:
  ModeCoeffs(std::vector<cplx> amplitudes, double captured_weight, Generator generator);

  std::span<const cplx> amplitudes() const { return amplitudes_; }
  const cplx& operator[](std::size_t n) const { return amplitudes_[n]; }
  std::size_t size() const { return amplitudes_.size(); }
  int n_max() const { return static_cast<int>(amplitudes_.size()) - 1; }
  double captured_weight() const { return captured_weight_; }
  const Generator& generator() const { return generator_; }

  /// True when the squeeze phase differs from the momentum-quadrature protocol value pi.
  bool off_protocol() const;

 private:
  std::vector<cplx> amplitudes_;
  double captured_weight_;
  Generator generator_;
};

ModeCoeffs fock_coeffs(int n, int n_max);

/// Coherent state |alpha>, built by c_{n+1} = c_n alpha / sqrt(n+1) with running rescaling.
/// Throws CutoffTooSmall when the window keeps less than 1 - eps_trunc.
ModeCoeffs coherent_coeffs(cplx alpha, int n_max, double eps_trunc = 1e-6);

/// S(xi) D(alpha)|0>, xi = r e^{i phi_sq}. Coefficients follow the eigenvalue recurrence
/// cosh(r) sqrt(n+1) c_{n+1} + e^{i phi_sq} sinh(r) sqrt(n) c_{n-1} = alpha c_n.
ModeCoeffs squeezed_coherent_coeffs(cplx alpha, double r, double phi_sq, int n_max,
                                    double eps_trunc = 1e-6);

/// Sum_n n |c_n|^2.
double mean_photon(const ModeCoeffs& mode);

/// <a^dagger a> of S(xi)D(alpha)|0> in closed form: |alpha cosh r - e^{i phi} alpha^* sinh r|^2 + sinh^2 r.
double squeezed_mean_photon(cplx alpha, double r, double phi_sq);

/// Smallest n_max whose coherent window loses less than eps (Poisson tail).
int coherent_window(cplx alpha, double eps);

/// Window large enough for a squeezed coherent state to lose less than eps.
int squeezed_window(cplx alpha, double r, double phi_sq, double eps);

/// Two-mode coefficient matrix C[m][n], m photons in mode a, n in mode b, restricted to m + n <= N_max.
///
/// Entries hold the true (not renormalized) amplitudes, so the sum of |C|^2 equals captured_weight().
class TwoModeFockState {
 public:
  /// Takes a dense (dim x dim) row-major matrix; entries with m + n > n_total_max are dropped.
  TwoModeFockState(std::vector<cplx> dense, int dim, int n_total_max);

  /// Raw C matrix with no generator; the captured weight is the plain sum of |C|^2.
  static TwoModeFockState from_matrix(const std::vector<std::vector<cplx>>& rows);

  cplx coefficient(int m, int n) const;
  int n_total_max() const { return n_total_max_; }
  int dim() const { return dim_; }
  double captured_weight() const { return captured_weight_; }

  TwoModeFockState renormalized() const;
  TwoModeFockState transposed() const;

 private:
  std::vector<cplx> c_;
  int dim_;
  int n_total_max_;
  double captured_weight_;
};

/// Smallest N_max with sum_{m+n<=N_max} |a_m b_n|^2 >= 1 - eps (true weights).
/// Throws UnreachableTolerance if the per-mode windows already lose more than eps.
int choose_total_cutoff(const ModeCoeffs& a, const ModeCoeffs& b, double eps_trunc);

/// a (x) b restricted to m + n <= choose_total_cutoff(a, b, eps_trunc).
TwoModeFockState product_state(const ModeCoeffs& a, const ModeCoeffs& b, double eps_trunc);

/// Internal state c_g|g> + c_e|e> of the incoming atom.
struct AtomPrep {
  cplx c_g{1.0, 0.0};
  cplx c_e{0.0, 0.0};

  /// (|g> + e^{i kappa}|e>)/sqrt(2).
  static AtomPrep from_phase(double kappa);
  static AtomPrep ground() { return {}; }

  /// Throws InvalidArgument unless |c_g|^2 + |c_e|^2 = 1 within 1e-12.
  void validate() const;
};

}  // namespace osg
