#include "osg/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "osg/error.hpp"

namespace osg {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::InvalidIndex: return "invalid-index";
    case ErrorKind::CutoffTooSmall: return "cutoff-too-small";
    case ErrorKind::UnreachableTolerance: return "unreachable-tolerance";
    case ErrorKind::NonFinite: return "non-finite";
    case ErrorKind::BudgetExceeded: return "budget-exceeded";
    case ErrorKind::InfeasibleSqueeze: return "infeasible-squeeze";
    case ErrorKind::EmptyRegion: return "empty-region";
    case ErrorKind::NotConverged: return "not-converged";
    case ErrorKind::TruncationLeak: return "truncation-leak";
    case ErrorKind::GridAliasing: return "grid-aliasing";
    case ErrorKind::Config: return "config-error";
    case ErrorKind::Io: return "io-error";
  }
  return "unknown";
}

void SimParams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw Error(ErrorKind::InvalidArgument, "lambda must be positive");
  if (!(k_dr > 0.0) || !std::isfinite(k_dr))
    throw Error(ErrorKind::InvalidArgument, "k_dr must be positive");
  if (!(eps_trunc > 0.0 && eps_trunc < 1.0))
    throw Error(ErrorKind::InvalidArgument, "eps_trunc must lie in (0, 1)");
  if (n_max < -1) throw Error(ErrorKind::InvalidArgument, "n_max must be >= 0 (or -1 for auto)");
}

std::optional<std::string> SimParams::regime_warning() const {
  if (k_dr > 1.0) {
    std::ostringstream os;
    os << "k_dr = " << k_dr << " > 1: pinhole is not small against the wavelength, "
       << "the linearized-node approximation is doubtful";
    return os.str();
  }
  return std::nullopt;
}

std::string Generator::describe() const {
  std::ostringstream os;
  switch (kind) {
    case GeneratorKind::Fock: os << "fock(" << fock_n << ")"; break;
    case GeneratorKind::Coherent:
      os << "coherent(" << alpha.real() << (alpha.imag() < 0 ? "" : "+") << alpha.imag() << "i)";
      break;
    case GeneratorKind::SqueezedCoherent:
      os << "squeezed(" << alpha.real() << (alpha.imag() < 0 ? "" : "+") << alpha.imag()
         << "i, r=" << r << ", phi=" << phi_sq << ")";
      break;
    case GeneratorKind::Raw: os << "raw"; break;
  }
  return os.str();
}

ModeCoeffs::ModeCoeffs(std::vector<cplx> amplitudes, double captured_weight, Generator generator)
    : amplitudes_(std::move(amplitudes)), captured_weight_(captured_weight),
      generator_(generator) {
  if (amplitudes_.empty()) throw Error(ErrorKind::InvalidArgument, "mode needs at least one amplitude");
  for (const auto& c : amplitudes_)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw Error(ErrorKind::NonFinite, "non-finite mode amplitude");
}

bool ModeCoeffs::off_protocol() const {
  return generator_.kind == GeneratorKind::SqueezedCoherent && generator_.r > 0.0 &&
         std::abs(std::remainder(generator_.phi_sq - std::numbers::pi, 2.0 * std::numbers::pi)) > 1e-12;
}

namespace {

constexpr double kRescaleAbove = 1e100;
constexpr int kHardWindowLimit = 1 << 20;

// Unnormalized expansion of S(xi)D(alpha)|0>; true amplitude = stored * exp(log_scale) * phase.
struct Expansion {
  std::vector<cplx> stored;
  double log_scale = 0.0;
  cplx phase{1.0, 0.0};
  double true_weight = 0.0;
};

// Runs the eigenvalue recurrence either to a fixed n_max (n_max >= 0) or until the
// accumulated true weight reaches 1 - eps (n_max < 0).
Expansion expand(cplx alpha, double r, double phi_sq, int n_max, double eps) {
  const double ch = std::cosh(r);
  const double sh = std::sinh(r);
  const cplx squeeze = std::polar(sh, phi_sq);
  const cplx log_c0 = -0.5 * std::norm(alpha) + 0.5 * std::polar(std::tanh(r), -phi_sq) * alpha * alpha;

  Expansion ex;
  ex.log_scale = log_c0.real() - 0.5 * std::log(ch);
  ex.phase = std::polar(1.0, log_c0.imag());
  ex.stored.push_back(1.0);
  ex.true_weight = std::exp(2.0 * ex.log_scale);

  for (int n = 0;; ++n) {
    if (n_max >= 0 && n >= n_max) break;
    if (n_max < 0 && ex.true_weight >= 1.0 - eps) break;
    if (n >= kHardWindowLimit)
      throw Error(ErrorKind::CutoffTooSmall, "Fock window exceeds hard limit");
    const cplx prev = n >= 1 ? ex.stored[n - 1] : cplx{};
    cplx next = (alpha * ex.stored[n] - squeeze * std::sqrt(double(n)) * prev) /
                (ch * std::sqrt(double(n + 1)));
    if (!std::isfinite(next.real()) || !std::isfinite(next.imag()))
      throw Error(ErrorKind::NonFinite, "Fock recurrence overflowed");
    if (std::abs(next) > kRescaleAbove) {
      for (auto& c : ex.stored) c /= kRescaleAbove;
      next /= kRescaleAbove;
      ex.log_scale += std::log(kRescaleAbove);
    }
    ex.stored.push_back(next);
    ex.true_weight += std::exp(std::log(std::norm(next)) + 2.0 * ex.log_scale);
  }
  return ex;
}

ModeCoeffs finish(Expansion ex, double eps, Generator gen) {
  double norm = 0.0;
  for (const auto& c : ex.stored) norm += std::norm(c);
  if (!(norm > 0.0)) throw Error(ErrorKind::NonFinite, "zero-norm Fock window");
  const double captured = std::min(1.0, ex.true_weight);
  if (captured < 1.0 - eps) {
    std::ostringstream os;
    os << gen.describe() << " keeps weight " << captured << " in [0, " << ex.stored.size() - 1
       << "], below 1 - " << eps << "; raise n_max";
    throw Error(ErrorKind::CutoffTooSmall, os.str());
  }
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& c : ex.stored) c *= scale * ex.phase;
  return ModeCoeffs(std::move(ex.stored), captured, gen);
}

}  // namespace

ModeCoeffs fock_coeffs(int n, int n_max) {
  if (n < 0 || n_max < n) throw Error(ErrorKind::InvalidArgument, "fock state needs 0 <= n <= n_max");
  std::vector<cplx> amps(n_max + 1);
  amps[n] = 1.0;
  Generator gen{GeneratorKind::Fock, n};
  return ModeCoeffs(std::move(amps), 1.0, gen);
}

ModeCoeffs coherent_coeffs(cplx alpha, int n_max, double eps_trunc) {
  if (n_max < 0) throw Error(ErrorKind::InvalidArgument, "n_max must be >= 0");
  Generator gen{GeneratorKind::Coherent, 0, alpha};
  return finish(expand(alpha, 0.0, 0.0, n_max, eps_trunc), eps_trunc, gen);
}

ModeCoeffs squeezed_coherent_coeffs(cplx alpha, double r, double phi_sq, int n_max, double eps_trunc) {
  if (n_max < 0) throw Error(ErrorKind::InvalidArgument, "n_max must be >= 0");
  if (!(r >= 0.0)) throw Error(ErrorKind::InvalidArgument, "squeeze factor r must be >= 0");
  Generator gen{GeneratorKind::SqueezedCoherent, 0, alpha, r, phi_sq};
  return finish(expand(alpha, r, phi_sq, n_max, eps_trunc), eps_trunc, gen);
}

int coherent_window(cplx alpha, double eps) {
  return static_cast<int>(expand(alpha, 0.0, 0.0, -1, eps).stored.size()) - 1;
}

int squeezed_window(cplx alpha, double r, double phi_sq, double eps) {
  if (!(r >= 0.0)) throw Error(ErrorKind::InvalidArgument, "squeeze factor r must be >= 0");
  return static_cast<int>(expand(alpha, r, phi_sq, -1, eps).stored.size()) - 1;
}

double mean_photon(const ModeCoeffs& mode) {
  double norm = 0.0, acc = 0.0;
  for (std::size_t n = 0; n < mode.size(); ++n) {
    norm += std::norm(mode[n]);
    acc += double(n) * std::norm(mode[n]);
  }
  return acc / norm;
}

double squeezed_mean_photon(cplx alpha, double r, double phi_sq) {
  const double sh = std::sinh(r);
  return std::norm(alpha * std::cosh(r) - std::polar(sh, phi_sq) * std::conj(alpha)) + sh * sh;
}

TwoModeFockState::TwoModeFockState(std::vector<cplx> dense, int dim, int n_total_max)
    : c_(std::move(dense)), dim_(dim), n_total_max_(n_total_max), captured_weight_(0.0) {
  if (dim < 1 || static_cast<std::size_t>(dim) * dim != c_.size())
    throw Error(ErrorKind::InvalidArgument, "C matrix must be dim x dim");
  if (n_total_max < 0) throw Error(ErrorKind::InvalidArgument, "N_max must be >= 0");
  for (int m = 0; m < dim_; ++m)
    for (int n = 0; n < dim_; ++n) {
      auto& c = c_[std::size_t(m) * dim_ + n];
      if (m + n > n_total_max_) c = 0.0;
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw Error(ErrorKind::NonFinite, "non-finite C entry");
      captured_weight_ += std::norm(c);
    }
}

TwoModeFockState TwoModeFockState::from_matrix(const std::vector<std::vector<cplx>>& rows) {
  const int rows_n = static_cast<int>(rows.size());
  int dim = rows_n;
  for (const auto& row : rows) dim = std::max(dim, static_cast<int>(row.size()));
  if (dim == 0) throw Error(ErrorKind::InvalidArgument, "empty C matrix");
  std::vector<cplx> dense(std::size_t(dim) * dim);
  int n_total = 0;
  for (int m = 0; m < rows_n; ++m)
    for (int n = 0; n < static_cast<int>(rows[m].size()); ++n) {
      dense[std::size_t(m) * dim + n] = rows[m][n];
      if (rows[m][n] != cplx{}) n_total = std::max(n_total, m + n);
    }
  return TwoModeFockState(std::move(dense), dim, n_total);
}

cplx TwoModeFockState::coefficient(int m, int n) const {
  if (m < 0 || n < 0 || m >= dim_ || n >= dim_ || m + n > n_total_max_) return {};
  return c_[std::size_t(m) * dim_ + n];
}

TwoModeFockState TwoModeFockState::renormalized() const {
  if (!(captured_weight_ > 0.0)) throw Error(ErrorKind::NonFinite, "cannot renormalize a zero state");
  auto copy = c_;
  const double s = 1.0 / std::sqrt(captured_weight_);
  for (auto& c : copy) c *= s;
  return TwoModeFockState(std::move(copy), dim_, n_total_max_);
}

TwoModeFockState TwoModeFockState::transposed() const {
  std::vector<cplx> t(c_.size());
  for (int m = 0; m < dim_; ++m)
    for (int n = 0; n < dim_; ++n) t[std::size_t(n) * dim_ + m] = c_[std::size_t(m) * dim_ + n];
  return TwoModeFockState(std::move(t), dim_, n_total_max_);
}

int choose_total_cutoff(const ModeCoeffs& a, const ModeCoeffs& b, double eps_trunc) {
  if (!(eps_trunc > 0.0 && eps_trunc < 1.0))
    throw Error(ErrorKind::InvalidArgument, "eps_trunc must lie in (0, 1)");
  const double total = a.captured_weight() * b.captured_weight();
  if (total < 1.0 - eps_trunc) {
    std::ostringstream os;
    os << "per-mode windows keep only " << total << " < 1 - " << eps_trunc;
    throw Error(ErrorKind::UnreachableTolerance, os.str());
  }
  const int na = a.n_max(), nb = b.n_max();
  double cumulative = 0.0;
  for (int N = 0; N <= na + nb; ++N) {
    double shell = 0.0;
    for (int m = std::max(0, N - nb); m <= std::min(N, na); ++m)
      shell += std::norm(a[m]) * std::norm(b[N - m]);
    cumulative += shell * total;
    if (cumulative >= 1.0 - eps_trunc) return N;
  }
  return na + nb;
}

TwoModeFockState product_state(const ModeCoeffs& a, const ModeCoeffs& b, double eps_trunc) {
  const int N = choose_total_cutoff(a, b, eps_trunc);
  const int dim = N + 1;
  const double sa = std::sqrt(a.captured_weight()), sb = std::sqrt(b.captured_weight());
  std::vector<cplx> dense(std::size_t(dim) * dim);
  for (int m = 0; m <= std::min(N, a.n_max()); ++m)
    for (int n = 0; n <= std::min(N - m, b.n_max()); ++n)
      dense[std::size_t(m) * dim + n] = sa * a[m] * sb * b[n];
  return TwoModeFockState(std::move(dense), dim, N);
}

AtomPrep AtomPrep::from_phase(double kappa) {
  const double h = 1.0 / std::numbers::sqrt2;
  return {cplx{h, 0.0}, std::polar(h, kappa)};
}

void AtomPrep::validate() const {
  const double w = std::norm(c_g) + std::norm(c_e);
  if (std::abs(w - 1.0) > 1e-12)
    throw Error(ErrorKind::InvalidArgument, "atom amplitudes must satisfy |c_g|^2 + |c_e|^2 = 1");
}

}  // namespace osg
