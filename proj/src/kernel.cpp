#include "osg/kernel.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "osg/error.hpp"
#include "osg/parallel.hpp"

namespace osg {

namespace {

__extension__ typedef __int128 int128;

// i^{-q}
cplx inverse_i_power(int q) {
  switch (((q % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

// (-i)^v
cplx minus_i_power(int v) { return inverse_i_power(v); }

long double to_long_double(int128 x) { return static_cast<long double>(x); }
template <class Int>
long double to_long_double(const Int& x) {
  return static_cast<long double>(x);
}

// Binomial-weighted Fourier coefficients of the reduced rotation, in exact integers:
//   I(mr, nr, k) = sum_l C(nr,l) C(Nr-nr, mr-l) K_{mr+nr-2l}(k),
//   K_u(k) = sum_t (-1)^t C(Nr-u, k-t) C(u, t).
// The remaining factor (-1)^nr i^{-(mr+nr)} kappa / 2^Nr is applied in floating point.
template <class Int>
std::vector<cplx> exact_coefficients(int Nr, const BbarTable& table) {
  std::vector<std::vector<Int>> binom(Nr + 1);
  for (int n = 0; n <= Nr; ++n) {
    binom[n].assign(n + 1, Int(1));
    for (int k = 1; k < n; ++k) binom[n][k] = binom[n - 1][k - 1] + binom[n - 1][k];
  }
  const int dim = Nr + 1;
  std::vector<Int> K(std::size_t(dim) * dim, Int(0));
  for (int u = 0; u <= Nr; ++u)
    for (int k = 0; k <= Nr; ++k) {
      Int acc(0);
      for (int t = std::max(0, k - (Nr - u)); t <= std::min(u, k); ++t) {
        const Int term = binom[Nr - u][k - t] * binom[u][t];
        if (t % 2) acc -= term; else acc += term;
      }
      K[std::size_t(u) * dim + k] = acc;
    }

  std::vector<cplx> values(std::size_t(dim) * dim * dim);
  std::vector<Int> I(dim);
  for (int mr = 0; mr <= Nr; ++mr)
    for (int nr = 0; nr <= Nr; ++nr) {
      std::fill(I.begin(), I.end(), Int(0));
      for (int l = std::max(0, mr + nr - Nr); l <= std::min(mr, nr); ++l) {
        const Int w = binom[nr][l] * binom[Nr - nr][mr - l];
        const Int* row = &K[std::size_t(mr + nr - 2 * l) * dim];
        for (int k = 0; k <= Nr; ++k) I[k] += w * row[k];
      }
      const long double scale = std::ldexp(table.kappa(Nr, mr, nr), -Nr) * ((nr % 2) ? -1.0L : 1.0L);
      const cplx phase = inverse_i_power(mr + nr);
      cplx* out = &values[(std::size_t(mr) * dim + nr) * dim];
      for (int k = 0; k <= Nr; ++k) out[k] = phase * double(scale * to_long_double(I[k]));
    }
  return values;
}

}  // namespace

int upsilon(int nu) { return (nu < 0 && (-nu) % 2 == 1) ? 1 : 0; }

cplx gamma_factor(int n, const SimParams& params) {
  return {-params.pinhole_rate(), std::sqrt(double(n)) * params.lambda};
}

cplx s_factor(int v_eff, int n, double p, const SimParams& params, Branch branch) {
  const cplx g = gamma_factor(n, params);
  const cplx s = branch == Branch::Upper ? -g : -std::conj(g);
  const cplx R = std::sqrt(s * s + p * p);
  const int nu = std::abs(v_eff);
  const cplx ratio = p / (s + R);
  cplx power = 1.0;
  for (int i = 0; i < nu; ++i) power *= ratio;
  const double sign = upsilon(v_eff) ? -1.0 : 1.0;
  const double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * params.k_dr);
  return sign * norm * (double(nu) * R + s) / (R * R * R) * power;
}

ATensor::ATensor(Level level, int N, std::vector<cplx> values)
    : level_(level), N_(N), values_(std::move(values)) {}

void ATensor::check(int m, int n) const {
  const int lo = index_min();
  if (m < lo || m > N_ || n < lo || n > N_) {
    std::ostringstream os;
    os << "transform index (m=" << m << ", n=" << n << ") outside [" << lo << ", " << N_ << "] for "
       << (level_ == Level::Excited ? "excited" : "ground") << " level, N=" << N_;
    throw Error(ErrorKind::InvalidIndex, os.str());
  }
}

cplx ATensor::coefficient(int m, int n, int k) const {
  check(m, n);
  const int Nr = reduced_N(), dim = Nr + 1, d = index_min();
  if (k < 0 || k > Nr) return 0.0;
  return values_[(std::size_t(m - d) * dim + (n - d)) * dim + k];
}

cplx ATensor::at(int m, int n, int v_eff) const {
  check(m, n);
  const int Nr = reduced_N();
  if (std::abs(v_eff) > Nr || (v_eff + Nr) % 2 != 0) return 0.0;
  return coefficient(m, n, (v_eff + Nr) / 2);
}

ATensor a_tensor(Level level, int N, const BbarTable& table) {
  const int Nr = N - level_shift(level);
  if (Nr < 0) throw Error(ErrorKind::InvalidIndex, "excited-level transforms need N >= 1");
  if (Nr > table.n_max()) throw Error(ErrorKind::InvalidIndex, "a_tensor: N exceeds Bbar table");
  namespace mp = boost::multiprecision;
  // |I| <= 4^Nr: 128-bit integers hold Nr <= 62, 256-bit Nr <= 126.
  if (Nr <= 62) return ATensor(level, N, exact_coefficients<int128>(Nr, table));
  if (Nr <= 126) return ATensor(level, N, exact_coefficients<mp::int256_t>(Nr, table));
  return ATensor(level, N, exact_coefficients<mp::cpp_int>(Nr, table));
}

TransformTables::TransformTables(int n_max) : n_max_(n_max), table_(std::max(n_max, 0)) {
  if (n_max < 0) throw Error(ErrorKind::InvalidArgument, "TransformTables needs n_max >= 0");
  for (int N = 0; N <= n_max; ++N) ground_.push_back(a_tensor(Level::Ground, N, table_));
  for (int N = 1; N <= n_max; ++N) excited_.push_back(a_tensor(Level::Excited, N, table_));
}

const ATensor& TransformTables::get(Level level, int N) const {
  if (N < level_shift(level) || N > n_max_) {
    std::ostringstream os;
    os << "no transform table for N=" << N << " (" << (level == Level::Excited ? "excited" : "ground") << ")";
    throw Error(ErrorKind::InvalidIndex, os.str());
  }
  return level == Level::Ground ? ground_[N] : excited_[N - 1];
}

cplx f_transform(Level level, int N, int m, int n, double p, double phi, const TransformTables& tables,
                 const SimParams& params, Branch branch) {
  const ATensor& A = tables.get(level, N);
  const int Nr = A.reduced_N();
  const cplx z = std::polar(1.0, phi);
  cplx acc = 0.0;
  for (int k = 0; k <= Nr; ++k) {
    const int v = 2 * k - Nr;
    const cplx a = A.coefficient(m, n, k);
    if (a == 0.0) continue;
    acc += minus_i_power(v) * std::pow(z, v) * a * s_factor(v, n, p, params, branch);
  }
  return acc;
}

cplx f_transform_literal(Level level, int N, int m, int n, double p, double phi, const BbarTable& table,
                         const SimParams& params, Branch branch) {
  const int d = level_shift(level);
  if (N < d || m < d || m > N || n < d || n > N)
    throw Error(ErrorKind::InvalidIndex, "f_transform_literal: index out of range");
  const int Nr = N - d, mr = m - d, nr = n - d;
  const cplx z = std::polar(1.0, phi);
  cplx acc = 0.0;
  for (int l = std::max(0, mr + nr - Nr); l <= std::min(mr, nr); ++l) {
    const int u = mr + nr - 2 * l;
    const double b = table(Nr, mr, nr, l);
    for (int s = 0; s <= Nr - u; ++s)
      for (int t = 0; t <= u; ++t) {
        const int v = 2 * (s + t) - Nr;
        const double mag = std::ldexp(double(table.binomial(Nr - u, s) * table.binomial(u, t)), -Nr) * b;
        const cplx R = (((u - t) % 2) ? -1.0 : 1.0) * mag * inverse_i_power(u);
        acc += R * minus_i_power(v) * std::pow(z, v) * s_factor(v, n, p, params, branch);
      }
  }
  return acc;
}

double predicted_terms(int n_total_max, int n_p) {
  double per_ring = 0.0;
  for (int N = 0; N <= n_total_max + 1; ++N) per_ring += double(N + 1) * (N + 1) * (2 * N + 1);
  return per_ring * double(n_p);
}

namespace {

// Contraction of the transform coefficients with the field: for each (N, n) the
// Fourier coefficients of sum_m C F^{level}_{m,n}, stripped of the radial factor.
struct FieldContraction {
  int n_max = 0;  // highest N (= field cutoff + 1)
  // ground[N][n][k], k in [0, N]; excited[N][n][k], k in [0, N-1], n >= 1
  std::vector<std::vector<std::vector<cplx>>> ground, excited;
};

FieldContraction contract(const TwoModeFockState& field, const TransformTables& tables) {
  FieldContraction q;
  const int Nf = field.n_total_max();
  q.n_max = Nf + 1;
  q.ground.resize(q.n_max + 1);
  q.excited.resize(q.n_max + 1);
  for (int N = 0; N <= q.n_max; ++N) {
    q.ground[N].assign(N + 1, std::vector<cplx>(N + 1, 0.0));
    if (N <= Nf) {
      const ATensor& A = tables.get(Level::Ground, N);
      for (int n = 0; n <= N; ++n)
        for (int m = 0; m <= N; ++m) {
          const cplx c = field.coefficient(m, N - m);
          if (c == 0.0) continue;
          for (int k = 0; k <= N; ++k) q.ground[N][n][k] += c * A.coefficient(m, n, k);
        }
    }
    if (N == 0) continue;
    q.excited[N].assign(N + 1, std::vector<cplx>(N, 0.0));
    const ATensor& A = tables.get(Level::Excited, N);
    for (int n = 1; n <= N; ++n)
      for (int m = 1; m <= N; ++m) {
        const cplx c = field.coefficient(m - 1, N - m);
        if (c == 0.0) continue;
        for (int k = 0; k < N; ++k) q.excited[N][n][k] += c * A.coefficient(m, n, k);
      }
  }
  return q;
}

std::string describe_atom(const AtomPrep& atom) {
  std::ostringstream os;
  os.precision(12);
  os << "c_g=(" << atom.c_g.real() << "," << atom.c_g.imag() << ") c_e=(" << atom.c_e.real() << ","
     << atom.c_e.imag() << ")";
  return os.str();
}

class BackwardDft {
 public:
  explicit BackwardDft(int n) : n_(n) {
    std::vector<cplx> in(n), out(n);
    // ESTIMATE never touches the arrays; UNALIGNED keeps the plan valid for any buffer,
    // so every worker runs the identical codelet sequence.
    plan_ = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                             reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan_) throw Error(ErrorKind::InvalidArgument, "could not plan azimuthal transform");
  }
  ~BackwardDft() { fftw_destroy_plan(plan_); }
  BackwardDft(const BackwardDft&) = delete;
  BackwardDft& operator=(const BackwardDft&) = delete;

  void operator()(std::vector<cplx>& in, std::vector<cplx>& out) const {
    fftw_execute_dft(plan_, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
  }

 private:
  int n_;
  fftw_plan plan_;
};

}  // namespace

MomentumGrid momentum_distribution(const TwoModeFockState& field, const AtomPrep& atom,
                                   const SimParams& params, const GridSpec& spec,
                                   const KernelOptions& options) {
  params.validate();
  atom.validate();
  spec.validate();
  const int Nf = field.n_total_max();
  const double terms = predicted_terms(Nf, spec.n_p);
  if (terms > options.term_budget) {
    std::ostringstream os;
    os << "predicted " << terms << " terms for N_max=" << Nf << " and " << spec.n_p
       << " rings exceeds the budget of " << options.term_budget << "; lower N_max or n_p";
    throw Error(ErrorKind::BudgetExceeded, os.str());
  }

  MomentumGrid grid = make_polar_grid(spec.n_p, spec.n_phi, spec.resolved_p_max(Nf, params));
  const TransformTables tables(Nf + 1);
  const FieldContraction q = contract(field, tables);
  const int n_phi = spec.n_phi;
  const BackwardDft dft(n_phi);
  const int n_top = q.n_max;

  parallel_for(grid.n_p(), options.threads, [&](std::size_t i) {
    const double p = grid.p_axis()[i];
    // Radial factors with the (-i)^v phase folded in: S[n][branch][v + n_top].
    const int width = 2 * n_top + 1;
    std::vector<cplx> S(std::size_t(n_top + 1) * 2 * width);
    auto s_at = [&](int n, int b, int v) -> cplx& { return S[(std::size_t(n) * 2 + b) * width + v + n_top]; };
    for (int n = 0; n <= n_top; ++n)
      for (int b = 0; b < (n == 0 ? 1 : 2); ++b)
        for (int v = -n_top; v <= n_top; ++v)
          s_at(n, b, v) = minus_i_power(v) * s_factor(v, n, p, params, b == 0 ? Branch::Upper : Branch::Lower);

    std::vector<cplx> coeffs(n_phi), amp(n_phi);
    std::vector<double> sum(n_phi, 0.0), carry(n_phi, 0.0);
    for (int N = 0; N <= n_top; ++N)
      for (int n = 0; n <= N; ++n)
        for (int b = 0; b < (n == 0 ? 1 : 2); ++b) {
          const double sigma = b == 0 ? 1.0 : -1.0;
          const double weight = n == 0 ? 1.0 : 0.5;
          std::fill(coeffs.begin(), coeffs.end(), cplx(0.0));
          bool any = false;
          // Coefficients of e^{i v phi}; folding v modulo n_phi is exact on the sample points.
          const auto& qg = q.ground[N][n];
          for (int k = 0; k <= N; ++k) {
            if (qg[k] == 0.0) continue;
            const int v = 2 * k - N;
            coeffs[((v % n_phi) + n_phi) % n_phi] += atom.c_g * qg[k] * s_at(n, b, v);
            any = true;
          }
          if (n >= 1 && atom.c_e != 0.0) {
            const auto& qe = q.excited[N][n];
            for (int k = 0; k < N; ++k) {
              if (qe[k] == 0.0) continue;
              const int v = 2 * k - (N - 1);
              coeffs[((v % n_phi) + n_phi) % n_phi] += sigma * atom.c_e * qe[k] * s_at(n, b, v);
              any = true;
            }
          }
          if (!any) continue;
          dft(coeffs, amp);
          for (int j = 0; j < n_phi; ++j) {
            const double y = weight * std::norm(amp[j]) - carry[j];
            const double t = sum[j] + y;
            carry[j] = (t - sum[j]) - y;
            sum[j] = t;
          }
        }
    for (int j = 0; j < n_phi; ++j) grid.at(i, j) = sum[j];
  });

  for (double w : grid.values())
    if (!std::isfinite(w)) throw Error(ErrorKind::NonFinite, "non-finite value in momentum distribution");

  GridMetadata& meta = grid.metadata;
  meta.params = params;
  meta.params.n_max = Nf;
  meta.field = "C-matrix, N_max=" + std::to_string(Nf);
  meta.atom = describe_atom(atom);
  meta.n_total_max = Nf;
  meta.captured_weight = field.captured_weight();
  meta.integral = grid_integral(grid);
  meta.rings = ring_weights(grid, params.lambda, Nf + 2);
  return grid;
}

}  // namespace osg
