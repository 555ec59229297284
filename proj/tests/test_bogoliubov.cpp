#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include <boost/multiprecision/cpp_int.hpp>

#include "osg/bogoliubov.hpp"
#include "osg/error.hpp"

using namespace osg;
namespace mp = boost::multiprecision;

namespace {

mp::cpp_int fact(int n) {
  mp::cpp_int f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Bbar from integer factorials: sqrt(m! n! (N-m)! (N-n)!) / (l! (m-l)! (n-l)! (N-m-n+l)!)
double exact_bbar(int N, int m, int n, int l) {
  const mp::cpp_int radicand = fact(m) * fact(n) * fact(N - m) * fact(N - n);
  const mp::cpp_int denom = fact(l) * fact(m - l) * fact(n - l) * fact(N - m - n + l);
  // sqrt(radicand) / denom = sqrt(radicand / denom^2), evaluated in long double from the exact ratio
  const mp::cpp_int d2 = denom * denom;
  const mp::cpp_int q = radicand / d2, r = radicand % d2;
  long double ratio = static_cast<long double>(q) + static_cast<long double>(r) / static_cast<long double>(d2);
  const double sign = ((m - l) % 2) ? -1.0 : 1.0;
  return sign * double(std::sqrt(ratio));
}

double max_offset(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

std::vector<double> product(const BMatrix& x, const BMatrix& y) {
  const int d = x.dim();
  std::vector<double> out(std::size_t(d) * d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j) out[std::size_t(i) * d + j] += x(i, k) * y(k, j);
  return out;
}

}  // namespace

TEST_CASE("bbar special values") {
  for (int N = 0; N <= 40; ++N) CHECK(bbar(N, 0, 0, 0) == 1.0);
  CHECK(bbar(2, 1, 1, 0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(bbar(2, 1, 1, 1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("bbar matches exact integer factorials") {
  CHECK(bbar(30, 15, 15, 10) == doctest::Approx(exact_bbar(30, 15, 15, 10)).epsilon(1e-10));
  const BbarTable table(60);
  for (auto [N, m, n, l] : {std::array{60, 30, 30, 15}, {45, 20, 31, 10}, {25, 0, 25, 0}, {52, 51, 2, 2}})
    CHECK(table(N, m, n, l) == doctest::Approx(exact_bbar(N, m, n, l)).epsilon(1e-12));
}

TEST_CASE("bbar rejects invalid indices") {
  const BbarTable table(5);
  for (auto [N, m, n, l] : {std::array{3, 4, 0, 0}, {3, 2, 2, 0}, {3, 1, 1, 2}, {6, 0, 0, 0}, {2, -1, 0, 0}}) {
    try {
      (void)table(N, m, n, l);
      FAIL("expected invalid-index");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidIndex);
    }
  }
}

TEST_CASE("single-excitation rotation") {
  for (double th : {0.3, -1.1, 2.5}) {
    const auto B = b_matrix(1, th);
    CHECK(B(0, 0) == doctest::Approx(std::cos(th)));
    CHECK(B(0, 1) == doctest::Approx(std::sin(th)));
    CHECK(B(1, 0) == doctest::Approx(-std::sin(th)));
    CHECK(B(1, 1) == doctest::Approx(std::cos(th)));
  }
}

TEST_CASE("identity at zero angle and anti-diagonal at pi/2") {
  for (int N : {0, 1, 5, 17}) {
    const auto B0 = b_matrix(N, 0.0);
    const auto Bq = b_matrix(N, std::numbers::pi / 2);
    for (int m = 0; m <= N; ++m)
      for (int n = 0; n <= N; ++n) {
        CHECK(B0(m, n) == (m == n ? 1.0 : 0.0));
        if (n == N - m) CHECK(std::abs(std::abs(Bq(m, n)) - 1.0) < 1e-12);
        else CHECK(std::abs(Bq(m, n)) < 1e-12);
      }
  }
}

TEST_CASE("orthogonality up to N = 30") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  const BbarTable table(30);
  double worst = 0.0;
  for (int N = 0; N <= 30; ++N)
    for (int rep = 0; rep < 20; ++rep) {
      const auto B = b_matrix(table, N, angle(rng));
      BMatrix Bt = B;
      for (int i = 0; i <= N; ++i)
        for (int j = 0; j <= N; ++j) Bt.entries[std::size_t(i) * (N + 1) + j] = B(j, i);
      auto P = product(Bt, B);
      for (int i = 0; i <= N; ++i) P[std::size_t(i) * (N + 1) + i] -= 1.0;
      worst = std::max(worst, max_offset(P, std::vector<double>(P.size(), 0.0)));
    }
  CHECK(worst < 1e-11);
}

TEST_CASE("composition up to N = 20") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  double worst = 0.0;
  for (int N = 0; N <= 20; ++N)
    for (int rep = 0; rep < 5; ++rep) {
      const double a = angle(rng), b = angle(rng);
      worst = std::max(worst, max_offset(product(b_matrix(N, a), b_matrix(N, b)), b_matrix(N, a + b).entries));
    }
  CHECK(worst < 1e-10);
}
