#pragma once

#include <functional>
#include <string>
#include <vector>

#include "osg/bogoliubov.hpp"
#include "osg/grid.hpp"
#include "osg/kernel.hpp"
#include "osg/states.hpp"

// Brute-force references. Clarity over speed: nothing here reuses the regrouped
// kernel sums, and the operator oracles build their matrices from ladder algebra.
namespace osg::oracle {

/// Composite Gauss-Legendre panels in rho (30 nodes each) times a uniform angular rule.
struct QuadratureSpec {
  int radial_panels = 64;
  int angular_nodes = 1024;
  double rho_max = 0.0;  ///< 0 selects 40 decay lengths of the pinhole profile

  static constexpr int kPanelOrder = 30;

  /// Throws InvalidArgument unless both node counts are >= 64 and the neglected
  /// radial tail is below 1e-9 of the profile's mass.
  void validate(const SimParams& params) const;
  double resolved_rho_max(const SimParams& params) const;
  QuadratureSpec doubled() const;
};

/// Radial integral rho f(rho) e^{-i rho [p cos(theta - phi) -+ sqrt(n) Lambda]} at every angular node.
struct AngularProfile {
  std::vector<double> theta;
  std::vector<cplx> radial;
};

AngularProfile angular_profile(int n, double p, double phi, const SimParams& params, const QuadratureSpec& spec,
                               Branch branch = Branch::Upper);

/// (1/2 pi) sum_j dtheta B(theta_j)[mr][nr] radial_j, with rotations[j] = b_matrix(Nr, theta_j).
cplx transform_from_profile(const AngularProfile& profile, const std::vector<BMatrix>& rotations, int mr, int nr);

/// Direct 2D quadrature of the Fourier transform of the pinhole amplitude times the rotation element.
/// With check_convergence, the value is recomputed with doubled node counts and NotConverged is
/// thrown if the two differ by more than 1e-8.
cplx f_quadrature(Level level, int N, int m, int n, double p, double phi, const SimParams& params,
                  const QuadratureSpec& spec = {}, Branch branch = Branch::Upper, bool check_convergence = false);

/// exp(theta G) on the N-excitation subspace, G the matrix of a b^dagger - a^dagger b on
/// |m, N-m>. N <= 14.
std::vector<double> beam_splitter_oracle(int N, double theta);

/// exp(1/2 (xi^* a^2 - xi a^dagger^2)) applied to the coherent vector on a padded space,
/// returned on [0, n_max]. Throws TruncationLeak if more than 1e-10 lies outside the window
/// or the padding changes the kept amplitudes by more than 1e-12.
ModeCoeffs squeeze_operator_oracle(cplx alpha, double r, double phi_sq, int n_max);

enum class TraceBasis { Local, Lab };

/// Cartesian position grid for the evolution oracle, in units of 1/k: M x M points spaced dx,
/// centred on the node crossing.
struct CartesianGrid {
  int points = 192;
  double spacing = 0.2;
};

struct EvolutionOptions {
  CartesianGrid cart;
  TraceBasis basis = TraceBasis::Local;
  int threads = 1;
};

/// Largest field cutoff the evolution oracle accepts.
inline constexpr int kEvolutionMaxCutoff = 12;

/// Pointwise evolution of the joint atom-field state under the interaction Hamiltonian,
/// followed by a 2D FFT of every component and an incoherent sum, resampled bicubically
/// onto `polar` (points beyond the FFT band are left at 0).
///
/// TraceBasis::Local sums over the rotated-mode photon numbers at each position (the
/// decomposition the analytic distribution uses); TraceBasis::Lab sums over the fixed a/b
/// photon numbers.
MomentumGrid evolution_fft_oracle(const TwoModeFockState& field, const AtomPrep& atom, const SimParams& params,
                                  const GridSpec& polar, const EvolutionOptions& options = {});

/// Integral of |W1 - W2| p dp dphi over two grids with identical axes.
double l1_distance(const MomentumGrid& a, const MomentumGrid& b);

// ---- equivalence suites ----------------------------------------------------

struct SuiteResult {
  std::string name;
  std::size_t samples = 0;
  double max_error = 0.0;
  double mean_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

using TransformFn = std::function<cplx(Level, int N, int m, int n, double p, double phi, Branch)>;

/// Every (level, N <= n_max, m, n, branch) at `points` random (p in [0, 3 Lambda], phi):
/// relative error |F - F_q| / |F_q| against the quadrature oracle. `analytic` defaults to f_transform.
SuiteResult quadrature_suite(const SimParams& params, int n_max = 5, int points = 20, unsigned seed = 1,
                             TransformFn analytic = {}, const QuadratureSpec& spec = {});

/// b_matrix against beam_splitter_oracle for N <= n_max at random angles.
SuiteResult rotation_oracle_suite(int n_max = 12, int angles = 10, unsigned seed = 2);
/// max |B^T B - I| for N <= n_max, `angles` random angles each.
SuiteResult orthogonality_suite(int n_max = 30, int angles = 20, unsigned seed = 3);
/// max |B(a) B(b) - B(a + b)| for N <= n_max.
SuiteResult composition_suite(int n_max = 20, int pairs = 5, unsigned seed = 4);

/// squeezed_coherent_coeffs against squeeze_operator_oracle for |alpha| <= 4, r <= 1.5.
SuiteResult squeeze_suite(int samples = 8, unsigned seed = 5);

struct PipelineCase {
  cplx alpha{0.0, 0.8};
  cplx beta{0.0, 0.8};
  double kappa = 1.5707963267948966;
  SimParams params{2.0};
  GridSpec polar{160, 128, 0.0};
  EvolutionOptions evolution;
  double tolerance = 2e-2;
};

/// Kernel against evolution_fft_oracle, L1 distance on the common polar grid.
SuiteResult pipeline_suite(const PipelineCase& c = {});

}  // namespace osg::oracle
