#pragma once

#include <cstddef>
#include <vector>

#include "osg/bogoliubov.hpp"
#include "osg/grid.hpp"
#include "osg/params.hpp"
#include "osg/states.hpp"

namespace osg {

/// Internal atomic level carried by a Fourier transform.
enum class Level { Ground, Excited };

/// Dressed-state branch: Upper carries e^{+i sqrt(n) Lambda rho}, Lower e^{-i sqrt(n) Lambda rho}.
enum class Branch { Upper, Lower };

inline int level_shift(Level level) { return level == Level::Excited ? 1 : 0; }

/// 0 for nu >= 0 and for even negative nu; 1 for odd negative nu.
int upsilon(int nu);

/// gamma(n) = -(2 k dr)^-1 + i sqrt(n) Lambda.
cplx gamma_factor(int n, const SimParams& params);

/// Radial factor of the analytic transform for angular order v_eff:
///
///   (-1)^{Upsilon(v)} / (sqrt(2 pi) k dr) * (R|v| + s) / R^3 * (p / (s + R))^{|v|},
///   s = -gamma (Upper) or -conj(gamma) (Lower), R = sqrt(s^2 + p^2) on the principal branch.
///
/// This is the exact value of the radial integral of rho e^{-s rho} J_v(p rho).
cplx s_factor(int v_eff, int n, double p, const SimParams& params, Branch branch = Branch::Upper);

/// Fourier coefficients of B^{(N-d)}_{m-d,n-d}(theta) in e^{i v theta}, d = 0 (Ground) or 1 (Excited),
/// i.e. the sum of the binomial weights R over all (l, s, t) with 2(s+t) - (N-d) = v.
///
/// Entries are indexed by the transform indices (m, n) and v_eff in {-(N-d), -(N-d)+2, ..., N-d}.
/// The (l, s, t) sum is carried out in exact integer arithmetic and scaled once, so large N
/// does not suffer from cancellation.
class ATensor {
 public:
  ATensor(Level level, int N, std::vector<cplx> values);

  Level level() const { return level_; }
  int N() const { return N_; }
  int reduced_N() const { return N_ - level_shift(level_); }
  int index_min() const { return level_shift(level_); }

  /// Throws InvalidIndex when (m, n) is outside the level's range; returns 0 for v_eff off the lattice.
  cplx at(int m, int n, int v_eff) const;

  /// Coefficient by lattice position k = (v_eff + reduced_N) / 2, k in [0, reduced_N].
  cplx coefficient(int m, int n, int k) const;

  std::size_t entry_count() const { return values_.size(); }

 private:
  void check(int m, int n) const;

  Level level_;
  int N_;
  std::vector<cplx> values_;
};

/// Requires N >= 1 for Excited; BbarTable must cover N.
ATensor a_tensor(Level level, int N, const BbarTable& table);

/// A-tensors for every (level, N) up to n_max, built once and read-only afterwards.
class TransformTables {
 public:
  explicit TransformTables(int n_max);

  int n_max() const { return n_max_; }
  const BbarTable& bbar() const { return table_; }
  const ATensor& get(Level level, int N) const;

 private:
  int n_max_;
  BbarTable table_;
  std::vector<ATensor> ground_;
  std::vector<ATensor> excited_;
};

/// F^{level(N)}_{m,n}(p, phi) = sum_v (-i e^{i phi})^v A[m][n][v] s_factor(v, n, p).
cplx f_transform(Level level, int N, int m, int n, double p, double phi, const TransformTables& tables,
                 const SimParams& params, Branch branch = Branch::Upper);

/// Same transform from the unfactorized (l, s, t) triple sum, with R and S per term in double.
/// Only meant for small N, to check the regrouped evaluation.
cplx f_transform_literal(Level level, int N, int m, int n, double p, double phi, const BbarTable& table,
                         const SimParams& params, Branch branch = Branch::Upper);

struct KernelOptions {
  int threads = 1;
  double term_budget = 1e11;  ///< cap on n_p * sum_N (N+1)^2 (2N+1)
};

/// Predicted term count n_p * sum_{N <= N_max+1} (N+1)^2 (2N+1).
double predicted_terms(int n_total_max, int n_p);

/// Atomic momentum distribution W(p, phi).
///
/// Ground-level transforms run over N = 0..N_max; the dressed-pair lines run over
/// N = 1..N_max+1 and n = 1..N, since the e-component with N_max photons pairs with an
/// (N_max+1)-excitation g-state. Each ring is an independent finite Fourier series in phi;
/// rings are distributed over `threads` workers and the per-point summation order is fixed,
/// so the output is bitwise independent of the worker count.
MomentumGrid momentum_distribution(const TwoModeFockState& field, const AtomPrep& atom,
                                   const SimParams& params, const GridSpec& grid = {},
                                   const KernelOptions& options = {});

}  // namespace osg
