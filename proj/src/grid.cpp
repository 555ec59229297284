#include "osg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "osg/error.hpp"

namespace osg {

void GridSpec::validate() const {
  if (n_p < 2) throw Error(ErrorKind::InvalidArgument, "grid needs n_p >= 2");
  if (n_phi < 4) throw Error(ErrorKind::InvalidArgument, "grid needs n_phi >= 4");
  if (!(p_max >= 0.0) || !std::isfinite(p_max))
    throw Error(ErrorKind::InvalidArgument, "p_max must be finite and >= 0 (0 = auto)");
}

double GridSpec::resolved_p_max(int n_total_max, const SimParams& params) const {
  if (p_max > 0.0) return p_max;
  // The cusp of the pinhole profile at rho = 0 gives every ring a |p - R|^-3 amplitude tail;
  // the probability left beyond a margin of M pinhole widths is about 1.75 / M^2, so 60 widths
  // keep the loss near 5e-4.
  return 1.2 * std::sqrt(double(std::max(n_total_max, 0))) * params.lambda + 60.0 * params.pinhole_rate();
}

MomentumGrid::MomentumGrid(std::vector<double> p_axis, std::vector<double> phi_axis)
    : p_(std::move(p_axis)), phi_(std::move(phi_axis)), values_(p_.size() * phi_.size(), 0.0) {}

double MomentumGrid::dphi() const {
  return phi_.empty() ? 0.0 : 2.0 * std::numbers::pi / double(phi_.size());
}

MomentumGrid make_polar_grid(int n_p, int n_phi, double p_max) {
  if (n_p < 2 || n_phi < 1 || !(p_max > 0.0))
    throw Error(ErrorKind::InvalidArgument, "make_polar_grid needs n_p >= 2, n_phi >= 1, p_max > 0");
  std::vector<double> p(n_p), phi(n_phi);
  for (int i = 0; i < n_p; ++i) p[i] = p_max * double(i) / double(n_p - 1);
  for (int j = 0; j < n_phi; ++j) phi[j] = 2.0 * std::numbers::pi * double(j) / double(n_phi);
  return MomentumGrid(std::move(p), std::move(phi));
}

std::vector<double> radial_marginal(const MomentumGrid& grid) {
  std::vector<double> out(grid.n_p(), 0.0);
  const double dphi = grid.dphi();
  for (std::size_t i = 0; i < grid.n_p(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < grid.n_phi(); ++j) s += grid.at(i, j);
    out[i] = grid.p_axis()[i] * s * dphi;
  }
  return out;
}

double grid_integral(const MomentumGrid& grid) {
  if (grid.n_p() < 2) return 0.0;
  const auto g = radial_marginal(grid);
  const double h = grid.dp();
  double sum = 0.5 * (g.front() + g.back());
  for (std::size_t i = 1; i + 1 < g.size(); ++i) sum += g[i];
  // g = p w(p) with w even near the origin (W is smooth in Cartesian momentum), so the
  // Euler-Maclaurin corrections at p = 0 are h^2/12 g'(0) - h^4/720 g'''(0), g' = w0, g''' = 6 w2.
  auto ring = [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < grid.n_phi(); ++j) s += grid.at(i, j);
    return s * grid.dphi();
  };
  const double w0 = ring(0);
  double correction = h * h / 12.0 * w0;
  if (grid.n_p() >= 3) {
    const double w2h2 = (16.0 * (ring(1) - w0) - (ring(2) - w0)) / 12.0;
    correction -= h * h * w2h2 / 120.0;
  }
  return sum * h + correction;
}

namespace {

// Integral of the piecewise-linear interpolant of g over [lo, hi].
double integrate_linear(const std::vector<double>& p, const std::vector<double>& g, double lo, double hi) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const double a = std::max(lo, p[i]), b = std::min(hi, p[i + 1]);
    if (b <= a) continue;
    const double h = p[i + 1] - p[i];
    auto at = [&](double x) { return g[i] + (g[i + 1] - g[i]) * (x - p[i]) / h; };
    total += 0.5 * (at(a) + at(b)) * (b - a);
  }
  return total;
}

}  // namespace

std::vector<RingWeight> ring_weights(const MomentumGrid& grid, double lambda, int n_rings) {
  std::vector<RingWeight> rings;
  if (grid.n_p() < 2 || n_rings <= 0) return rings;
  const auto g = radial_marginal(grid);
  const double p_end = grid.p_axis().back();
  for (int n = 0; n < n_rings; ++n) {
    RingWeight ring;
    ring.n = n;
    ring.radius = std::sqrt(double(n)) * lambda;
    if (ring.radius > p_end) break;
    ring.inner = n == 0 ? 0.0 : 0.5 * (ring.radius + std::sqrt(double(n - 1)) * lambda);
    ring.outer = n + 1 < n_rings ? 0.5 * (ring.radius + std::sqrt(double(n + 1)) * lambda) : p_end;
    ring.outer = std::min(ring.outer, p_end);
    ring.weight = integrate_linear(grid.p_axis(), g, ring.inner, ring.outer);
    rings.push_back(ring);
  }
  return rings;
}

MomentumGrid with_exclusion(const MomentumGrid& grid, double radius) {
  MomentumGrid out = grid;
  for (std::size_t i = 0; i < out.n_p(); ++i)
    if (out.p_axis()[i] < radius)
      for (std::size_t j = 0; j < out.n_phi(); ++j) out.at(i, j) = 0.0;
  return out;
}

}  // namespace osg
