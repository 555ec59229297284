#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "osg/bogoliubov.hpp"
#include "osg/error.hpp"
#include "osg/kernel.hpp"

using namespace osg;

namespace {

const double kPi = std::numbers::pi;

double vacuum_closed_form(double p, const SimParams& params) {
  const double a = params.pinhole_rate();
  return a / (std::sqrt(2 * kPi) * params.k_dr * std::pow(a * a + p * p, 1.5));
}

TwoModeFockState coherent_pair(cplx alpha, cplx beta, double eps) {
  return product_state(coherent_coeffs(alpha, coherent_window(alpha, eps / 8)),
                       coherent_coeffs(beta, coherent_window(beta, eps / 8)), eps);
}

// Rotation element from the l-sum in 50-digit arithmetic, immune to the cancellation
// that limits the double evaluation at large N.
double precise_rotation(int N, int m, int n, double theta) {
  using real = boost::multiprecision::cpp_bin_float_50;
  auto binom = [](int a, int b) {
    real r = 1;
    for (int k = 1; k <= b; ++k) r = r * (a - b + k) / k;
    return r;
  };
  const real c = cos(real(theta)), s = sin(real(theta));
  const real kappa = sqrt(binom(N, n) / binom(N, m));
  real acc = 0;
  for (int l = std::max(0, m + n - N); l <= std::min(m, n); ++l) {
    const real term = kappa * binom(n, l) * binom(N - n, m - l) * pow(c, N - m - n + 2 * l) * pow(s, m + n - 2 * l);
    acc += ((m - l) % 2) ? -term : term;
  }
  return acc.convert_to<double>();
}

}  // namespace

TEST_CASE("upsilon") {
  CHECK(upsilon(5) == 0);
  CHECK(upsilon(0) == 0);
  CHECK(upsilon(-2) == 0);
  CHECK(upsilon(-3) == 1);
  CHECK(upsilon(-1) == 1);
}

TEST_CASE("gamma factor") {
  SimParams p;
  CHECK(gamma_factor(0, p).real() == doctest::Approx(-0.7957747154594767));
  CHECK(gamma_factor(0, p).imag() == 0.0);
  CHECK(gamma_factor(4, p).imag() == doctest::Approx(8.0));
  CHECK(gamma_factor(4, p).real() < 0.0);
}

TEST_CASE("radial factor at the origin and the Hankel identity") {
  SimParams params;
  const double a = params.pinhole_rate();
  const cplx s0 = s_factor(0, 0, 0.0, params);
  CHECK(s0.imag() == 0.0);
  CHECK(s0.real() == doctest::Approx(1.0 / (a * a * std::sqrt(2 * kPi) * params.k_dr)).epsilon(1e-14));
  for (double p : {0.0, 0.3, 2.0, 7.5, 40.0})
    CHECK(std::abs(s_factor(0, 0, p, params)) == doctest::Approx(vacuum_closed_form(p, params)).epsilon(1e-13));
  // p = 0 kills every nonzero order
  CHECK(std::abs(s_factor(3, 2, 0.0, params)) == 0.0);
}

TEST_CASE("A tensor small cases") {
  const BbarTable table(6);
  const auto A0 = a_tensor(Level::Ground, 0, table);
  CHECK(A0.entry_count() == 1);
  CHECK(std::abs(A0.at(0, 0, 0) - 1.0) < 1e-15);
  for (int N = 1; N <= 6; ++N) {
    CHECK(a_tensor(Level::Ground, N, table).entry_count() <= std::size_t((N + 1) * (N + 1) * (N + 1)));
    CHECK(a_tensor(Level::Excited, N, table).entry_count() <= std::size_t((N + 1) * (N + 1) * (N + 1)));
  }
  CHECK_THROWS_AS(a_tensor(Level::Excited, 0, table), Error);
  const auto Ae = a_tensor(Level::Excited, 3, table);
  try {
    (void)Ae.at(0, 1, 0);
    FAIL("expected invalid-index");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidIndex);
  }
  CHECK(Ae.at(1, 1, 1) == cplx{});  // off-lattice order
}

TEST_CASE("A tensor is the Fourier series of the rotation") {
  // sum_v A_v e^{i v theta} = B^{(N-d)}_{m-d,n-d}(theta); N = 70 exercises the 256-bit path.
  const BbarTable table(70);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
  for (int N : {1, 4, 13, 40, 70})
    for (Level level : {Level::Ground, Level::Excited}) {
      const auto A = a_tensor(level, N, table);
      const int d = level_shift(level), Nr = N - d;
      for (int rep = 0; rep < 3; ++rep) {
        const double th = angle(rng);
        double worst = 0.0;
        const int stride = Nr > 20 ? 7 : 1;
        for (int m = d; m <= N; m += stride)
          for (int n = d; n <= N; n += stride) {
            cplx acc = 0.0;
            for (int k = 0; k <= Nr; ++k) acc += A.coefficient(m, n, k) * std::polar(1.0, (2 * k - Nr) * th);
            worst = std::max(worst, std::abs(acc - precise_rotation(Nr, m - d, n - d, th)));
          }
        CHECK(worst < 1e-12);
      }
    }
}

TEST_CASE("regrouped transform equals the literal triple sum") {
  const SimParams params;
  const TransformTables tables(8);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> momentum(0.0, 12.0), angle(0.0, 2 * kPi);
  double worst = 0.0;
  for (int N = 0; N <= 8; ++N)
    for (Level level : {Level::Ground, Level::Excited}) {
      const int d = level_shift(level);
      if (N < d) continue;
      for (int rep = 0; rep < 6; ++rep) {
        std::uniform_int_distribution<int> index(d, N);
        const int m = index(rng), n = index(rng);
        const double p = momentum(rng), phi = angle(rng);
        for (Branch b : {Branch::Upper, Branch::Lower}) {
          const cplx fast = f_transform(level, N, m, n, p, phi, tables, params, b);
          const cplx slow = f_transform_literal(level, N, m, n, p, phi, tables.bbar(), params, b);
          worst = std::max(worst, std::abs(fast - slow) / std::max(std::abs(slow), 1e-10));
        }
      }
    }
  CHECK(worst < 1e-12);
}

TEST_CASE("transform periodicity and vacuum amplitude") {
  const SimParams params;
  const TransformTables tables(4);
  for (double p : {0.0, 1.5, 6.0}) {
    const cplx f = f_transform(Level::Ground, 0, 0, 0, p, 0.4, tables, params);
    CHECK(std::abs(f) == doctest::Approx(vacuum_closed_form(p, params)).epsilon(1e-13));
    CHECK(std::abs(f - f_transform(Level::Ground, 0, 0, 0, p, 2.9, tables, params)) < 1e-15);
    const cplx g = f_transform(Level::Excited, 4, 2, 3, p, 0.4, tables, params);
    CHECK(std::abs(g - f_transform(Level::Excited, 4, 2, 3, p, 0.4 + 2 * kPi, tables, params)) < 1e-13);
  }
}

TEST_CASE("lower branch is the mirrored conjugate of the upper branch") {
  const SimParams params;
  const TransformTables tables(5);
  for (Level level : {Level::Ground, Level::Excited})
    for (int n = 1; n <= 5; ++n) {
      const cplx up = f_transform(level, 5, 2, n, 3.3, 1.1 + kPi, tables, params, Branch::Upper);
      const cplx lo = f_transform(level, 5, 2, n, 3.3, 1.1, tables, params, Branch::Lower);
      CHECK(std::abs(lo - std::conj(up)) < 1e-13);
    }
}

TEST_CASE("vacuum distribution") {
  const SimParams params;
  const auto vac = coherent_pair(0.0, 0.0, 1e-6);
  GridSpec spec{256, 32, 0.0};
  const auto W = momentum_distribution(vac, AtomPrep::ground(), params, spec);
  for (std::size_t i = 0; i < W.n_p(); i += 7) {
    const double expect = std::pow(vacuum_closed_form(W.p_axis()[i], params), 2);
    for (std::size_t j = 0; j < W.n_phi(); ++j) CHECK(W.at(i, j) == doctest::Approx(expect).epsilon(1e-13));
  }
  CHECK(W.metadata.integral == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(W.metadata.captured_weight == 1.0);
}

TEST_CASE("distribution is positive, symmetric and thread independent") {
  SimParams params;
  params.lambda = 2.0;
  const auto field = coherent_pair({0.0, 0.8}, {0.0, 0.8}, 1e-8);
  const AtomPrep atom = AtomPrep::from_phase(kPi / 2);
  GridSpec spec{256, 64, 0.0};
  const auto W1 = momentum_distribution(field, atom, params, spec, {1});
  const auto W3 = momentum_distribution(field, atom, params, spec, {3});
  CHECK(W1.values() == W3.values());
  double worst = 0.0, peak = 0.0;
  const std::size_t nphi = W1.n_phi();
  for (std::size_t i = 0; i < W1.n_p(); ++i)
    for (std::size_t j = 0; j < nphi; ++j) {
      CHECK(W1.at(i, j) >= 0.0);
      const std::size_t mirror = (nphi / 4 + nphi - j) % nphi;  // pi/2 - phi
      worst = std::max(worst, std::abs(W1.at(i, j) - W1.at(i, mirror)));
      peak = std::max(peak, W1.at(i, j));
    }
  CHECK(worst < 1e-10 * std::max(1.0, peak));
  CHECK(W1.metadata.integral == doctest::Approx(field.captured_weight()).epsilon(1e-3));
}

TEST_CASE("single photon produces a ring at Lambda") {
  SimParams params;
  params.lambda = 3.0;
  const auto field = TwoModeFockState::from_matrix({{0.0}, {1.0}});  // |1, 0>
  const auto W = momentum_distribution(field, AtomPrep::ground(), params, GridSpec{401, 32, 0.0});
  const auto marginal = radial_marginal(W);
  std::size_t best = 0;
  for (std::size_t i = 1; i < marginal.size(); ++i)
    if (W.p_axis()[i] > 1.5 && marginal[i] > marginal[best]) best = i;
  CHECK(W.p_axis()[best] == doctest::Approx(3.0).epsilon(0.05));
  CHECK(W.metadata.integral == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("cutoff convergence") {
  SimParams params;
  params.lambda = 2.0;
  const cplx alpha{0.0, 0.8};
  const auto a = coherent_coeffs(alpha, 40), b = coherent_coeffs(alpha, 40);
  const auto base = product_state(a, b, 1e-6);
  const int N = base.n_total_max();
  const auto wider = product_state(a, b, 1e-14);
  REQUIRE(wider.n_total_max() >= N + 5);
  std::vector<cplx> dense(std::size_t(N + 6) * (N + 6));
  for (int m = 0; m <= N + 5; ++m)
    for (int n = 0; n <= N + 5 - m; ++n) dense[std::size_t(m) * (N + 6) + n] = a[m] * b[n];
  const TwoModeFockState plus5(std::move(dense), N + 6, N + 5);
  GridSpec spec{64, 32, 15.0};
  const AtomPrep atom = AtomPrep::from_phase(0.3);
  const auto W0 = momentum_distribution(base, atom, params, spec);
  const auto W5 = momentum_distribution(plus5, atom, params, spec);
  double worst = 0.0;
  for (std::size_t k = 0; k < W0.values().size(); ++k)
    worst = std::max(worst, std::abs(W0.values()[k] - W5.values()[k]));
  CHECK(worst < 1e-3);
}

TEST_CASE("budget is enforced") {
  const auto field = coherent_pair({0.0, 2.0}, {0.0, 2.0}, 1e-6);
  KernelOptions opts;
  opts.term_budget = 1e3;
  try {
    momentum_distribution(field, AtomPrep::ground(), SimParams{}, GridSpec{}, opts);
    FAIL("expected budget error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BudgetExceeded);
  }
  CHECK(predicted_terms(0, 10) == doctest::Approx(10 * (1 + 4 * 3)));
}
