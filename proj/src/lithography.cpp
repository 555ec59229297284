#include "osg/lithography.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "osg/error.hpp"

namespace osg {

namespace {

const double kPi = std::numbers::pi;
const double kTwoPi = 2.0 * std::numbers::pi;
const double kHbar = 1.054571817e-34;

double fold_angle(double phi) {
  double f = std::fmod(phi, kTwoPi);
  if (f < 0.0) f += kTwoPi;
  return f >= kTwoPi ? 0.0 : f;
}

void check_sign(int s, const char* name) {
  if (s != 1 && s != -1) throw Error(ErrorKind::InvalidArgument, std::string(name) + " must be +1 or -1");
}

// Vertex offset of the parabola through (-1, a), (0, b), (1, c), clamped to half a cell.
double vertex_offset(double a, double b, double c) {
  const double curv = a - 2.0 * b + c;
  if (!(curv < 0.0)) return 0.0;
  return std::clamp(0.5 * (a - c) / curv, -0.5, 0.5);
}

double vertex_value(double a, double b, double c, double t) {
  return b + 0.5 * (c - a) * t + 0.5 * (a - 2.0 * b + c) * t * t;
}

// Position where the cut falls through `half` between samples x0 (above) and x1 (below).
double crossing(double x0, double w0, double x1, double w1, double half) {
  return x0 + (x1 - x0) * (w0 - half) / (w0 - w1);
}

}  // namespace

void LithTarget::validate() const {
  if (!(p > 0.0) || !std::isfinite(p)) throw Error(ErrorKind::InvalidArgument, "target radius must be > 0");
  if (!std::isfinite(phi)) throw Error(ErrorKind::InvalidArgument, "target azimuth must be finite");
}

void ScreenGeometry::validate() const {
  if (!(length > 0.0 && velocity > 0.0 && mass > 0.0 && wavenumber > 0.0))
    throw Error(ErrorKind::InvalidArgument, "screen geometry needs positive L, v, M and k");
}

LithTarget predict_deflection(double mean_a, double mean_b, int sign_a, int sign_b, double lambda) {
  check_sign(sign_a, "sign_a");
  check_sign(sign_b, "sign_b");
  if (!(mean_a >= 0.0 && mean_b >= 0.0) || !(mean_a + mean_b > 0.0))
    throw Error(ErrorKind::InvalidArgument, "mean photon numbers must be >= 0 with a positive sum");
  if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidArgument, "Lambda must be > 0");
  // atan2 covers the mean_a = 0 limit (pi / 2) without a division.
  const double base = std::atan2(std::sqrt(mean_b), std::sqrt(mean_a));
  const double phi = sign_a * sign_b * base + (sign_a == -1 ? kPi : 0.0);
  return {lambda * std::sqrt(mean_a + mean_b), fold_angle(phi)};
}

FieldPlan plan_fields(const LithTarget& target, double lambda, double r_a, double r_b) {
  target.validate();
  if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidArgument, "Lambda must be > 0");
  if (!(r_a >= 0.0 && r_b >= 0.0)) throw Error(ErrorKind::InvalidArgument, "squeeze factors must be >= 0");

  const double phi = fold_angle(target.phi);
  FieldPlan plan;
  plan.r_a = r_a;
  plan.r_b = r_b;
  // Quadrants I..IV map to (+,+), (-,+), (-,-), (+,-); the base angle is the first-quadrant image.
  const int quadrant = std::min(3, int(phi / (0.5 * kPi)));
  plan.sign_a = (quadrant == 1 || quadrant == 2) ? -1 : 1;
  plan.sign_b = quadrant >= 2 ? -1 : 1;
  const double rel = phi - (plan.sign_a == -1 ? kPi : 0.0);
  const double base = std::abs(std::remainder(rel * plan.sign_a * plan.sign_b, kTwoPi));

  const double total = std::pow(target.p / lambda, 2);
  const double c = std::cos(base), s = std::sin(base);
  plan.mean_a = total * c * c;
  plan.mean_b = total * s * s;

  auto amplitude = [](double mean, double r, const char* mode) {
    const double floor = std::pow(std::sinh(r), 2);
    if (mean < floor)
      throw Error(ErrorKind::InfeasibleSqueeze,
                  std::string("mode ") + mode + " needs " + std::to_string(mean) +
                      " photons but squeezing alone contributes sinh^2 r = " + std::to_string(floor) +
                      "; reduce r or raise the target radius");
    return std::exp(r) * std::sqrt(mean - floor);
  };
  plan.abs_alpha = amplitude(plan.mean_a, r_a, "a");
  plan.abs_beta = amplitude(plan.mean_b, r_b, "b");
  return plan;
}

TwoModeFockState plan_state(const FieldPlan& plan, double eps_trunc) {
  const double eps = eps_trunc / 8.0;
  const double phase = FieldPlan::kSqueezePhase;
  const int na = squeezed_window(plan.alpha(), plan.r_a, phase, eps);
  const int nb = squeezed_window(plan.beta(), plan.r_b, phase, eps);
  return product_state(squeezed_coherent_coeffs(plan.alpha(), plan.r_a, phase, na, eps),
                       squeezed_coherent_coeffs(plan.beta(), plan.r_b, phase, nb, eps), eps_trunc);
}

Peak locate_peak(const MomentumGrid& grid, std::optional<double> p_min) {
  const double cut = p_min.value_or(0.5 * grid.metadata.params.lambda);
  if (!(cut >= 0.0)) throw Error(ErrorKind::InvalidArgument, "p_min must be >= 0");
  const auto& p = grid.p_axis();
  const std::size_t nphi = grid.n_phi();
  std::size_t first = 0;
  while (first < p.size() && !(p[first] > cut)) ++first;
  if (first == p.size() || nphi == 0)
    throw Error(ErrorKind::EmptyRegion, "no grid points beyond p_min = " + std::to_string(cut));

  Peak peak;
  peak.i = first;
  double best = grid.at(first, 0);
  for (std::size_t i = first; i < p.size(); ++i)
    for (std::size_t j = 0; j < nphi; ++j)
      if (grid.at(i, j) > best) {
        best = grid.at(i, j);
        peak.i = i;
        peak.j = j;
      }

  const std::size_t i = peak.i, j = peak.j;
  const std::size_t jm = (j + nphi - 1) % nphi, jp = (j + 1) % nphi;
  const bool has_p = i > 0 && i + 1 < p.size();
  double wpm = has_p ? grid.at(i - 1, j) : 0.0, wpp = has_p ? grid.at(i + 1, j) : 0.0;
  double wfm = grid.at(i, jm), wfp = grid.at(i, jp);
  double w0 = best;

  bool log_space = best > 0.0 && wfm > 0.0 && wfp > 0.0;
  if (has_p)
    for (std::size_t a = i - 1; a <= i + 1; ++a)
      for (std::size_t b : {jm, j, jp}) log_space = log_space && grid.at(a, b) > 0.0;
  if (log_space) {
    w0 = std::log(w0);
    wfm = std::log(wfm);
    wfp = std::log(wfp);
    if (has_p) {
      wpm = std::log(wpm);
      wpp = std::log(wpp);
    }
  }

  const double tp = has_p ? vertex_offset(wpm, w0, wpp) : 0.0;
  const double tf = nphi >= 3 ? vertex_offset(wfm, w0, wfp) : 0.0;
  double value = w0;
  if (has_p) value += vertex_value(wpm, w0, wpp, tp) - w0;
  if (nphi >= 3) value += vertex_value(wfm, w0, wfp, tf) - w0;

  peak.p = p[i] + tp * grid.dp();
  peak.phi = fold_angle(grid.phi_axis()[j] + tf * grid.dphi());
  peak.value = log_space ? std::exp(value) : value;
  return peak;
}

PeakWidth peak_width(const MomentumGrid& grid, const Peak& peak) {
  if (peak.i >= grid.n_p() || peak.j >= grid.n_phi())
    throw Error(ErrorKind::InvalidIndex, "peak cell lies outside the grid");
  const auto& p = grid.p_axis();
  const std::size_t nphi = grid.n_phi();
  const double half = 0.5 * std::max(peak.value, grid.at(peak.i, peak.j));
  PeakWidth width;

  // radial cut at the peak azimuth
  std::optional<double> lo, hi;
  for (std::size_t a = peak.i; a > 0; --a)
    if (grid.at(a - 1, peak.j) < half) {
      lo = crossing(p[a], grid.at(a, peak.j), p[a - 1], grid.at(a - 1, peak.j), half);
      break;
    }
  for (std::size_t a = peak.i; a + 1 < p.size(); ++a)
    if (grid.at(a + 1, peak.j) < half) {
      hi = crossing(p[a], grid.at(a, peak.j), p[a + 1], grid.at(a + 1, peak.j), half);
      break;
    }
  if (lo && hi) width.radial = *hi - *lo;

  // azimuthal cut at the peak radius, periodic, at most half way round each side
  const double dphi = grid.dphi();
  std::optional<double> left, right;
  for (std::size_t s = 0; s < nphi / 2; ++s) {
    const double w0 = grid.at(peak.i, (peak.j + s) % nphi), w1 = grid.at(peak.i, (peak.j + s + 1) % nphi);
    if (w1 < half) {
      right = crossing(double(s) * dphi, w0, double(s + 1) * dphi, w1, half);
      break;
    }
  }
  for (std::size_t s = 0; s < nphi / 2; ++s) {
    const double w0 = grid.at(peak.i, (peak.j + nphi - s) % nphi);
    const double w1 = grid.at(peak.i, (peak.j + 2 * nphi - s - 1) % nphi);
    if (w1 < half) {
      left = crossing(double(s) * dphi, w0, double(s + 1) * dphi, w1, half);
      break;
    }
  }
  if (left && right) width.azimuthal = *left + *right;
  return width;
}

double screen_map(double p, const ScreenGeometry& geom) {
  geom.validate();
  return p * kHbar * geom.wavenumber * geom.length / (geom.mass * geom.velocity);
}

}  // namespace osg
