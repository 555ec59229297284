#include "osg/bogoliubov.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "osg/error.hpp"

namespace osg {

BbarTable::BbarTable(int n_max) : n_max_(n_max) {
  if (n_max < 0) throw Error(ErrorKind::InvalidArgument, "BbarTable needs n_max >= 0");
  pascal_.resize(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    pascal_[n].assign(n + 1, 1.0L);
    for (int k = 1; k < n; ++k) pascal_[n][k] = pascal_[n - 1][k - 1] + pascal_[n - 1][k];
  }
}

long double BbarTable::binomial(int n, int k) const {
  if (n < 0 || n > n_max_ || k < 0 || k > n) return 0.0L;
  return pascal_[n][k];
}

long double BbarTable::kappa(int N, int m, int n) const {
  return std::sqrt(binomial(N, n) / binomial(N, m));
}

double BbarTable::operator()(int N, int m, int n, int l) const {
  if (N < 0 || N > n_max_ || m < 0 || m > N || n < 0 || n > N || l < std::max(0, m + n - N) ||
      l > std::min(m, n)) {
    std::ostringstream os;
    os << "Bbar(N=" << N << ", m=" << m << ", n=" << n << ", l=" << l << ") out of range";
    throw Error(ErrorKind::InvalidIndex, os.str());
  }
  const long double sign = ((m - l) % 2 == 0) ? 1.0L : -1.0L;
  return static_cast<double>(sign * kappa(N, m, n) * binomial(n, l) * binomial(N - n, m - l));
}

double bbar(int N, int m, int n, int l) {
  return BbarTable(std::max(N, 0))(N, m, n, l);
}

BMatrix b_matrix(const BbarTable& table, int N, double theta) {
  if (N < 0) throw Error(ErrorKind::InvalidArgument, "b_matrix needs N >= 0");
  if (N > table.n_max()) throw Error(ErrorKind::InvalidIndex, "b_matrix: N exceeds table");
  const double c = std::cos(theta), s = std::sin(theta);
  // 0^0 = 1 keeps the surviving terms exact at theta = 0, pi/2, ...
  std::vector<double> cpow(N + 1, 1.0), spow(N + 1, 1.0);
  for (int k = 1; k <= N; ++k) {
    cpow[k] = cpow[k - 1] * c;
    spow[k] = spow[k - 1] * s;
  }
  BMatrix out{N, theta, std::vector<double>(std::size_t(N + 1) * (N + 1))};
  for (int m = 0; m <= N; ++m)
    for (int n = 0; n <= N; ++n) {
      double acc = 0.0;
      for (int l = std::max(0, m + n - N); l <= std::min(m, n); ++l)
        acc += table(N, m, n, l) * cpow[N - m - n + 2 * l] * spow[m + n - 2 * l];
      out.entries[std::size_t(m) * (N + 1) + n] = acc;
    }
  return out;
}

BMatrix b_matrix(int N, double theta) { return b_matrix(BbarTable(std::max(N, 0)), N, theta); }

}  // namespace osg
