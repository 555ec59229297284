#pragma once

#include <cstddef>
#include <vector>

namespace osg {

/// Scalar weights of the N-excitation two-mode rotation,
///
///   Bbar(N; m, n, l) = (-1)^{m-l} sqrt(m! n! (N-m)! (N-n)!) / (l! (m-l)! (n-l)! (N-m-n+l)!).
///
/// Evaluated as (-1)^{m-l} sqrt(C(N,n)/C(N,m)) C(n,l) C(N-n,m-l) from a long-double
/// Pascal table; no factorial is ever formed. Immutable after construction.
class BbarTable {
 public:
  explicit BbarTable(int n_max);

  int n_max() const { return n_max_; }

  /// Throws Error(InvalidIndex) outside 0 <= m,n <= N <= n_max, max(0,m+n-N) <= l <= min(m,n).
  double operator()(int N, int m, int n, int l) const;

  /// sqrt(C(N,n) / C(N,m)), the l-independent part of Bbar.
  long double kappa(int N, int m, int n) const;

  long double binomial(int n, int k) const;

 private:
  int n_max_;
  std::vector<std::vector<long double>> pascal_;
};

/// Bbar without a prebuilt table.
double bbar(int N, int m, int n, int l);

/// Rotation of the degenerate N-excitation Fock subspace by the mode-mixing angle theta.
/// Row m is the a-photon count of |m, N-m>_ab; column n is the photon count of the rotated
/// mode c = cos(theta) a + sin(theta) b, so entry (m, n) = <n_c, (N-n)_d | m_a, (N-m)_b>.
struct BMatrix {
  int N = 0;
  double theta = 0.0;
  std::vector<double> entries;  ///< (N+1)^2, row-major

  double operator()(int m, int n) const { return entries[std::size_t(m) * (N + 1) + n]; }
  int dim() const { return N + 1; }
};

BMatrix b_matrix(int N, double theta);
BMatrix b_matrix(const BbarTable& table, int N, double theta);

}  // namespace osg
