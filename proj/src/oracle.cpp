#include "osg/oracle.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "osg/error.hpp"
#include "osg/parallel.hpp"

namespace osg::oracle {

namespace {

constexpr double kPi = std::numbers::pi;

// Full 30-point Gauss-Legendre rule on [-1, 1].
struct LegendreRule {
  std::vector<double> x, w;
  LegendreRule() {
    using rule = boost::math::quadrature::gauss<double, QuadratureSpec::kPanelOrder>;
    const auto& a = rule::abscissa();
    const auto& wt = rule::weights();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0.0) {
        x.push_back(0.0);
        w.push_back(wt[i]);
        continue;
      }
      x.push_back(a[i]);
      w.push_back(wt[i]);
      x.push_back(-a[i]);
      w.push_back(wt[i]);
    }
  }
};

const LegendreRule& legendre() {
  static const LegendreRule rule;
  return rule;
}

double pinhole_norm(const SimParams& params) { return 1.0 / (std::sqrt(2.0 * kPi) * params.k_dr); }

}  // namespace

// ---- quadrature -------------------------------------------------------------

double QuadratureSpec::resolved_rho_max(const SimParams& params) const {
  return rho_max > 0.0 ? rho_max : 40.0 / params.pinhole_rate();
}

void QuadratureSpec::validate(const SimParams& params) const {
  if (radial_panels * kPanelOrder < 64 || angular_nodes < 64)
    throw Error(ErrorKind::InvalidArgument, "quadrature needs at least 64 radial and 64 angular nodes");
  // mass of rho e^{-a rho} beyond rho_max, relative to the whole: e^{-x}(1 + x), x = a rho_max
  const double x = params.pinhole_rate() * resolved_rho_max(params);
  if (std::exp(-x) * (1.0 + x) > 1e-9)
    throw Error(ErrorKind::InvalidArgument, "quadrature rho_max leaves more than 1e-9 of the profile");
}

QuadratureSpec QuadratureSpec::doubled() const {
  QuadratureSpec d = *this;
  d.radial_panels *= 2;
  d.angular_nodes *= 2;
  return d;
}

AngularProfile angular_profile(int n, double p, double phi, const SimParams& params, const QuadratureSpec& spec,
                               Branch branch) {
  spec.validate(params);
  const auto& rule = legendre();
  const double rho_max = spec.resolved_rho_max(params);
  const double h = rho_max / spec.radial_panels;
  std::vector<double> rho, weight;
  for (int k = 0; k < spec.radial_panels; ++k)
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      const double r = h * (k + 0.5 * (rule.x[i] + 1.0));
      rho.push_back(r);
      weight.push_back(0.5 * h * rule.w[i] * r * std::exp(-params.pinhole_rate() * r) * pinhole_norm(params));
    }
  const double detune = (branch == Branch::Upper ? 1.0 : -1.0) * std::sqrt(double(n)) * params.lambda;

  AngularProfile out;
  out.theta.resize(spec.angular_nodes);
  out.radial.resize(spec.angular_nodes);
  for (int j = 0; j < spec.angular_nodes; ++j) {
    const double th = 2.0 * kPi * j / spec.angular_nodes;
    const double kappa = p * std::cos(th - phi) - detune;
    cplx acc = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) acc += weight[i] * std::polar(1.0, -rho[i] * kappa);
    out.theta[j] = th;
    out.radial[j] = acc;
  }
  return out;
}

cplx transform_from_profile(const AngularProfile& profile, const std::vector<BMatrix>& rotations, int mr, int nr) {
  cplx acc = 0.0;
  for (std::size_t j = 0; j < profile.theta.size(); ++j) acc += rotations[j](mr, nr) * profile.radial[j];
  return acc / double(profile.theta.size());
}

namespace {

std::vector<BMatrix> rotations_at(const BbarTable& table, int Nr, const AngularProfile& profile) {
  std::vector<BMatrix> out;
  out.reserve(profile.theta.size());
  for (double th : profile.theta) out.push_back(b_matrix(table, Nr, th));
  return out;
}

cplx quadrature_once(Level level, int N, int m, int n, double p, double phi, const SimParams& params,
                     const QuadratureSpec& spec, Branch branch) {
  const int d = level_shift(level);
  if (N < d || m < d || m > N || n < d || n > N)
    throw Error(ErrorKind::InvalidIndex, "f_quadrature: index out of range");
  const auto profile = angular_profile(n, p, phi, params, spec, branch);
  const BbarTable table(N - d);
  return transform_from_profile(profile, rotations_at(table, N - d, profile), m - d, n - d);
}

}  // namespace

cplx f_quadrature(Level level, int N, int m, int n, double p, double phi, const SimParams& params,
                  const QuadratureSpec& spec, Branch branch, bool check_convergence) {
  const cplx value = quadrature_once(level, N, m, n, p, phi, params, spec, branch);
  if (check_convergence) {
    const cplx finer = quadrature_once(level, N, m, n, p, phi, params, spec.doubled(), branch);
    if (std::abs(finer - value) > 1e-8) {
      std::ostringstream os;
      os << "quadrature moved by " << std::abs(finer - value) << " under node doubling";
      throw Error(ErrorKind::NotConverged, os.str());
    }
  }
  return value;
}

// ---- operator oracles ---------------------------------------------------------

namespace {

// Matrix of a b^dagger - a^dagger b on |m, N-m>: column m maps to rows m +- 1.
Eigen::MatrixXd mixing_generator(int N) {
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(N + 1, N + 1);
  for (int m = 0; m < N; ++m) {
    G(m, m + 1) = std::sqrt(double(m + 1) * (N - m));
    G(m + 1, m) = -G(m, m + 1);
  }
  return G;
}

}  // namespace

std::vector<double> beam_splitter_oracle(int N, double theta) {
  if (N < 0 || N > 14) throw Error(ErrorKind::InvalidArgument, "beam_splitter_oracle supports 0 <= N <= 14");
  const Eigen::MatrixXd U = (theta * mixing_generator(N)).exp();
  std::vector<double> out(std::size_t(N + 1) * (N + 1));
  for (int m = 0; m <= N; ++m)
    for (int n = 0; n <= N; ++n) out[std::size_t(m) * (N + 1) + n] = U(m, n);
  return out;
}

namespace {

Eigen::VectorXcd squeeze_on(cplx alpha, double r, double phi_sq, int dim) {
  using Mat = Eigen::MatrixXcd;
  Mat K = Mat::Zero(dim, dim);
  const cplx xi = std::polar(r, phi_sq);
  // 1/2 (xi^* a^2 - xi a^dagger^2); a^2 |n> = sqrt(n (n-1)) |n-2>
  for (int n = 2; n < dim; ++n) {
    const double s = std::sqrt(double(n) * (n - 1));
    K(n - 2, n) += 0.5 * std::conj(xi) * s;
    K(n, n - 2) -= 0.5 * xi * s;
  }
  Eigen::VectorXcd coh(dim);
  for (int n = 0; n < dim; ++n) {
    const double logmag = (n == 0 ? 0.0 : n * std::log(std::abs(alpha))) - 0.5 * std::norm(alpha) -
                          0.5 * std::lgamma(n + 1.0);
    coh(n) = (n > 0 && alpha == 0.0) ? cplx(0.0) : std::polar(std::exp(logmag), n * std::arg(alpha));
  }
  const Mat S = K.exp();
  return S * coh;
}

}  // namespace

ModeCoeffs squeeze_operator_oracle(cplx alpha, double r, double phi_sq, int n_max) {
  if (n_max < 0 || !(r >= 0.0)) throw Error(ErrorKind::InvalidArgument, "squeeze oracle needs n_max >= 0, r >= 0");
  const int pad = 40 + n_max / 2;
  const int dim = n_max + 1 + pad;
  const Eigen::VectorXcd v = squeeze_on(alpha, r, phi_sq, dim);
  const Eigen::VectorXcd wide = squeeze_on(alpha, r, phi_sq, dim + pad);
  double pad_shift = 0.0, tail = 0.0, kept = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    pad_shift = std::max(pad_shift, std::abs(v(n) - wide(n)));
    kept += std::norm(wide(n));
  }
  for (int n = n_max + 1; n < wide.size(); ++n) tail += std::norm(wide(n));
  if (tail > 1e-10 || pad_shift > 1e-12) {
    std::ostringstream os;
    os << "squeeze oracle: tail " << tail << " beyond n_max=" << n_max << ", padding shift " << pad_shift;
    throw Error(ErrorKind::TruncationLeak, os.str());
  }
  std::vector<cplx> amps(n_max + 1);
  const double scale = 1.0 / std::sqrt(kept);
  for (int n = 0; n <= n_max; ++n) amps[n] = wide(n) * scale;
  Generator gen{GeneratorKind::SqueezedCoherent, 0, alpha, r, phi_sq};
  return ModeCoeffs(std::move(amps), std::min(1.0, kept), gen);
}

// ---- evolution + FFT ----------------------------------------------------------

namespace {

// Keys cubic convolution kernel (a = -1/2).
double cubic_weight(double t) {
  t = std::abs(t);
  if (t < 1.0) return (1.5 * t - 2.5) * t * t + 1.0;
  if (t < 2.0) return ((-0.5 * t + 2.5) * t - 4.0) * t + 2.0;
  return 0.0;
}

// exp(theta G_K) from one Hermitian eigendecomposition of i G_K.
struct MixingExponential {
  Eigen::MatrixXcd V;
  Eigen::VectorXd lambda;
  explicit MixingExponential(int K) {
    const Eigen::MatrixXcd H = cplx(0.0, 1.0) * mixing_generator(K).cast<cplx>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    V = es.eigenvectors();
    lambda = es.eigenvalues();
  }
  Eigen::MatrixXd at(double theta) const {
    Eigen::VectorXcd phase(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) phase(i) = std::polar(1.0, -theta * lambda(i));
    return (V * phase.asDiagonal() * V.adjoint()).real();
  }
};

}  // namespace

MomentumGrid evolution_fft_oracle(const TwoModeFockState& field, const AtomPrep& atom, const SimParams& params,
                                  const GridSpec& polar, const EvolutionOptions& options) {
  params.validate();
  atom.validate();
  polar.validate();
  const int Nf = field.n_total_max();
  if (Nf > kEvolutionMaxCutoff) {
    std::ostringstream os;
    os << "evolution oracle limited to N_max <= " << kEvolutionMaxCutoff << " (got " << Nf << ")";
    throw Error(ErrorKind::BudgetExceeded, os.str());
  }
  const int M = options.cart.points;
  const double dx = options.cart.spacing;
  if (M < 16 || M % 2 || !(dx > 0.0)) throw Error(ErrorKind::InvalidArgument, "cartesian grid needs even M >= 16, dx > 0");
  if (0.5 * M * dx < 30.0 * params.k_dr)
    throw Error(ErrorKind::InvalidArgument, "cartesian grid must extend to k X_max >= 30 k dr");
  const double dp = 2.0 * kPi / (M * dx);
  const double p_band = kPi / dx;
  const double needed = std::sqrt(double(Nf)) * params.lambda + 6.0 * params.pinhole_rate();
  if (p_band < needed) {
    std::ostringstream os;
    os << "FFT momentum band " << p_band << " < " << needed << " (outer ring plus central peak); reduce dx";
    throw Error(ErrorKind::GridAliasing, os.str());
  }

  const std::size_t npts = std::size_t(M) * M;
  std::vector<double> cart(npts, 0.0);
  const double a = params.pinhole_rate();
  const double fnorm = 1.0 / (std::sqrt(2.0 * kPi) * params.k_dr);
  const double ft_scale = dx * dx / (2.0 * kPi);

  // Position of storage index j: FFT order, x = j dx for j < M/2 and (j - M) dx otherwise.
  auto coord = [&](int j) { return (j < M / 2 ? j : j - M) * dx; };

  std::vector<cplx> scratch(npts);
  fftw_plan plan = fftw_plan_dft_2d(M, M, reinterpret_cast<fftw_complex*>(scratch.data()),
                                    reinterpret_cast<fftw_complex*>(scratch.data()), FFTW_FORWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);

  for (int K = 0; K <= Nf + 1; ++K) {
    const int ng = K <= Nf ? K + 1 : 0;  // |g; m, K-m>
    const int ne = K;                     // |e; m, K-1-m>
    Eigen::VectorXcd psi0(ng + ne);
    for (int m = 0; m < ng; ++m) psi0(m) = atom.c_g * field.coefficient(m, K - m);
    for (int m = 0; m < ne; ++m) psi0(ng + m) = atom.c_e * field.coefficient(m, K - 1 - m);
    if (psi0.norm() == 0.0) continue;
    const int dim = ng + ne;
    const MixingExponential mix_g(std::max(K, 0)), mix_e(std::max(K - 1, 0));

    std::vector<std::vector<cplx>> comps(dim, std::vector<cplx>(npts));
    parallel_for(npts, options.threads, [&](std::size_t idx) {
      const double x = coord(int(idx / M)), y = coord(int(idx % M));
      const double rho = std::hypot(x, y), th = std::atan2(y, x);
      const double c = std::cos(th), s = std::sin(th);
      Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
      for (int m = 0; m < ng; ++m) {
        if (m >= 1 && ne > 0) H(ng + m - 1, m) = H(m, ng + m - 1) = c * std::sqrt(double(m));
        if (m < ne) H(ng + m, m) = H(m, ng + m) = s * std::sqrt(double(K - m));
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
      const Eigen::MatrixXcd V = es.eigenvectors().cast<cplx>();
      Eigen::VectorXcd phase(dim);
      for (int i = 0; i < dim; ++i) phase(i) = std::polar(1.0, params.lambda * rho * es.eigenvalues()(i));
      Eigen::VectorXcd psi = V * phase.asDiagonal() * (V.transpose() * psi0);
      psi *= std::exp(-a * rho) * fnorm;
      if (options.basis == TraceBasis::Local) {
        // amplitudes on |n_c, (K-n)_d>: B^T psi
        if (ng > 0) psi.head(ng) = mix_g.at(th).transpose().cast<cplx>() * psi.head(ng);
        if (ne > 0) psi.tail(ne) = mix_e.at(th).transpose().cast<cplx>() * psi.tail(ne);
      }
      for (int i = 0; i < dim; ++i) comps[i][idx] = psi(i);
    });

    for (auto& comp : comps) {
      fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(comp.data()),
                       reinterpret_cast<fftw_complex*>(comp.data()));
      for (std::size_t i = 0; i < npts; ++i) cart[i] += std::norm(comp[i] * ft_scale);
    }
  }
  fftw_destroy_plan(plan);

  // Resample onto the polar grid; momentum index k sits at (k < M/2 ? k : k - M) dp.
  const int n_total = Nf;
  MomentumGrid out = make_polar_grid(polar.n_p, polar.n_phi, polar.resolved_p_max(n_total, params));
  auto sample = [&](int ix, int iy) { return cart[std::size_t((ix + M) % M) * M + (iy + M) % M]; };
  for (std::size_t i = 0; i < out.n_p(); ++i)
    for (std::size_t j = 0; j < out.n_phi(); ++j) {
      const double px = out.p_axis()[i] * std::cos(out.phi_axis()[j]);
      const double py = out.p_axis()[i] * std::sin(out.phi_axis()[j]);
      const double ux = px / dp, uy = py / dp;
      const int bx = int(std::floor(ux)), by = int(std::floor(uy));
      if (bx - 1 < -M / 2 || bx + 2 >= M / 2 || by - 1 < -M / 2 || by + 2 >= M / 2) continue;
      double acc = 0.0;
      for (int di = -1; di <= 2; ++di) {
        const double wx = cubic_weight(ux - (bx + di));
        for (int dj = -1; dj <= 2; ++dj) acc += wx * cubic_weight(uy - (by + dj)) * sample(bx + di, by + dj);
      }
      out.at(i, j) = std::max(acc, 0.0);
    }
  out.metadata.params = params;
  out.metadata.n_total_max = Nf;
  out.metadata.captured_weight = field.captured_weight();
  out.metadata.field = options.basis == TraceBasis::Local ? "evolution oracle (local trace)"
                                                          : "evolution oracle (lab trace)";
  out.metadata.integral = grid_integral(out);
  return out;
}

double l1_distance(const MomentumGrid& a, const MomentumGrid& b) {
  if (a.p_axis() != b.p_axis() || a.phi_axis() != b.phi_axis())
    throw Error(ErrorKind::InvalidArgument, "l1_distance needs identical grids");
  double total = 0.0;
  for (std::size_t i = 0; i < a.n_p(); ++i) {
    const double w = (i == 0 || i + 1 == a.n_p()) ? 0.5 : 1.0;
    double ring = 0.0;
    for (std::size_t j = 0; j < a.n_phi(); ++j) ring += std::abs(a.at(i, j) - b.at(i, j));
    total += w * a.p_axis()[i] * ring;
  }
  return total * a.dp() * a.dphi();
}

// ---- suites --------------------------------------------------------------------

namespace {

void summarize(SuiteResult& r, const std::vector<double>& errors) {
  r.samples = errors.size();
  r.max_error = 0.0;
  double sum = 0.0;
  for (double e : errors) {
    r.max_error = std::max(r.max_error, e);
    sum += e;
  }
  r.mean_error = errors.empty() ? 0.0 : sum / errors.size();
  r.pass = !errors.empty() && r.max_error <= r.tolerance && std::isfinite(r.max_error);
}

}  // namespace

SuiteResult quadrature_suite(const SimParams& params, int n_max, int points, unsigned seed, TransformFn analytic,
                             const QuadratureSpec& spec) {
  SuiteResult result;
  result.name = "transform vs quadrature";
  result.tolerance = 1e-6;
  const TransformTables tables(n_max);
  if (!analytic)
    analytic = [&](Level l, int N, int m, int n, double p, double phi, Branch b) {
      return f_transform(l, N, m, n, p, phi, tables, params, b);
    };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> momentum(0.0, 3.0 * params.lambda), angle(0.0, 2.0 * kPi);

  // rotations[Nr][j] at the suite's angular nodes
  const BbarTable table(n_max);
  std::vector<std::vector<BMatrix>> rotations(n_max + 1);
  {
    const auto probe = angular_profile(0, 0.0, 0.0, params, spec);
    for (int Nr = 0; Nr <= n_max; ++Nr) rotations[Nr] = rotations_at(table, Nr, probe);
  }

  std::vector<double> errors;
  double worst = -1.0;
  std::ostringstream worst_case;
  for (int k = 0; k < points; ++k) {
    const double p = momentum(rng), phi = angle(rng);
    for (int n = 0; n <= n_max; ++n)
      for (Branch b : {Branch::Upper, Branch::Lower}) {
        if (n == 0 && b == Branch::Lower) continue;
        const auto profile = angular_profile(n, p, phi, params, spec, b);
        for (Level level : {Level::Ground, Level::Excited}) {
          const int d = level_shift(level);
          if (n < d) continue;
          for (int N = std::max(n, d); N <= n_max; ++N)
            for (int m = d; m <= N; ++m) {
              const cplx q = transform_from_profile(profile, rotations[N - d], m - d, n - d);
              const cplx f = analytic(level, N, m, n, p, phi, b);
              const double err = std::abs(f - q) / std::abs(q);
              errors.push_back(std::isfinite(err) ? err : 1e300);
              if (err > worst) {
                worst = err;
                worst_case.str("");
                worst_case << (level == Level::Ground ? "g" : "e") << " N=" << N << " m=" << m << " n=" << n
                           << (b == Branch::Upper ? " upper" : " lower") << " p=" << p << " phi=" << phi
                           << " |F_q|=" << std::abs(q);
              }
            }
        }
      }
  }
  summarize(result, errors);
  result.detail = "worst: " + worst_case.str();
  return result;
}

SuiteResult rotation_oracle_suite(int n_max, int angles, unsigned seed) {
  SuiteResult result;
  result.name = "rotation vs matrix exponential";
  result.tolerance = 1e-10;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  const BbarTable table(n_max);
  std::vector<double> errors;
  for (int N = 0; N <= n_max; ++N)
    for (int k = 0; k < angles; ++k) {
      const double th = angle(rng);
      const auto B = b_matrix(table, N, th);
      const auto E = beam_splitter_oracle(N, th);
      double e = 0.0;
      for (std::size_t i = 0; i < E.size(); ++i) e = std::max(e, std::abs(B.entries[i] - E[i]));
      errors.push_back(e);
    }
  summarize(result, errors);
  return result;
}

SuiteResult orthogonality_suite(int n_max, int angles, unsigned seed) {
  SuiteResult result;
  result.name = "rotation orthogonality";
  result.tolerance = 1e-11;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  const BbarTable table(n_max);
  std::vector<double> errors;
  for (int N = 0; N <= n_max; ++N)
    for (int k = 0; k < angles; ++k) {
      const auto B = b_matrix(table, N, angle(rng));
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> M(B.entries.data(),
                                                                                                  N + 1, N + 1);
      const Eigen::MatrixXd D = M.transpose() * M - Eigen::MatrixXd::Identity(N + 1, N + 1);
      errors.push_back(D.cwiseAbs().maxCoeff());
    }
  summarize(result, errors);
  return result;
}

SuiteResult composition_suite(int n_max, int pairs, unsigned seed) {
  SuiteResult result;
  result.name = "rotation composition";
  result.tolerance = 1e-10;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  const BbarTable table(n_max);
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  std::vector<double> errors;
  for (int N = 0; N <= n_max; ++N)
    for (int k = 0; k < pairs; ++k) {
      const double t1 = angle(rng), t2 = angle(rng);
      const auto B1 = b_matrix(table, N, t1), B2 = b_matrix(table, N, t2), B12 = b_matrix(table, N, t1 + t2);
      const Eigen::Map<const RowMat> M1(B1.entries.data(), N + 1, N + 1), M2(B2.entries.data(), N + 1, N + 1),
          M12(B12.entries.data(), N + 1, N + 1);
      errors.push_back((M1 * M2 - M12).cwiseAbs().maxCoeff());
    }
  summarize(result, errors);
  return result;
}

SuiteResult squeeze_suite(int samples, unsigned seed) {
  SuiteResult result;
  result.name = "squeezed coefficients vs operator exponential";
  result.tolerance = 1e-8;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mod(0.0, 4.0), sq(0.0, 1.5), sign(-1.0, 1.0), phase(0.0, 2 * kPi);
  struct Case { cplx alpha; double r, phi; };
  std::vector<Case> cases{{{0.0, 2.0}, 1.0, kPi}, {{0.0, 4.0}, 1.5, kPi}, {0.0, 0.5, kPi}, {{1.2, -0.7}, 0.6, 0.8}};
  for (int k = 0; k < samples; ++k) {
    // momentum-quadrature protocol: alpha on the imaginary axis, phi_sq = pi
    const double s = sign(rng) < 0 ? -1.0 : 1.0;
    cases.push_back({{0.0, s * mod(rng)}, sq(rng), kPi});
  }
  cases.push_back({std::polar(1.5, phase(rng)), 0.5 * sq(rng), phase(rng)});
  std::vector<double> errors;
  for (const auto& c : cases) {
    const int n_max = squeezed_window(c.alpha, c.r, c.phi, 1e-13);
    const auto fast = squeezed_coherent_coeffs(c.alpha, c.r, c.phi, n_max, 1e-12);
    const auto ref = squeeze_operator_oracle(c.alpha, c.r, c.phi, n_max);
    double e = 0.0;
    for (int n = 0; n <= n_max; ++n) e = std::max(e, std::abs(fast[n] - ref[n]));
    errors.push_back(e);
  }
  summarize(result, errors);
  return result;
}

SuiteResult pipeline_suite(const PipelineCase& c) {
  SuiteResult result;
  result.name = "distribution vs evolution oracle (L1)";
  result.tolerance = c.tolerance;
  const double eps = c.params.eps_trunc;
  const auto field = product_state(coherent_coeffs(c.alpha, coherent_window(c.alpha, eps / 8)),
                                   coherent_coeffs(c.beta, coherent_window(c.beta, eps / 8)), eps);
  const AtomPrep atom = AtomPrep::from_phase(c.kappa);
  GridSpec polar = c.polar;
  if (polar.p_max <= 0.0) polar.p_max = 0.9 * kPi / c.evolution.cart.spacing;
  const auto analytic = momentum_distribution(field, atom, c.params, polar, KernelOptions{c.evolution.threads});
  const auto reference = evolution_fft_oracle(field, atom, c.params, polar, c.evolution);
  summarize(result, {l1_distance(analytic, reference)});
  std::ostringstream os;
  os << "N_max=" << field.n_total_max() << " p_max=" << polar.p_max << " kernel mass " << analytic.metadata.integral
     << " oracle mass " << reference.metadata.integral;
  result.detail = os.str();
  return result;
}

}  // namespace osg::oracle
