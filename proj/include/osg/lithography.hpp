#pragma once

#include <optional>

#include "osg/grid.hpp"
#include "osg/states.hpp"

namespace osg {

struct LithTarget {
  double p = 0.0;    ///< target radius in scaled momentum
  double phi = 0.0;  ///< target azimuth, folded into [0, 2 pi)

  void validate() const;
};

/// Field amplitudes on the imaginary axis, alpha = sign_a i |alpha|, squeezed along phi_sq = pi.
struct FieldPlan {
  double abs_alpha = 0.0;
  double abs_beta = 0.0;
  int sign_a = 1;
  int sign_b = 1;
  double r_a = 0.0;
  double r_b = 0.0;
  double mean_a = 0.0;  ///< planned mean photon number of mode a
  double mean_b = 0.0;

  static constexpr double kSqueezePhase = 3.141592653589793;

  cplx alpha() const { return {0.0, sign_a * abs_alpha}; }
  cplx beta() const { return {0.0, sign_b * abs_beta}; }
};

struct ScreenGeometry {
  double length = 0.0;    ///< cavity-to-screen distance [m]
  double velocity = 0.0;  ///< longitudinal atomic velocity [m/s]
  double mass = 0.0;      ///< atomic mass [kg]
  double wavenumber = 0.0;  ///< mode wavenumber [1/m]

  void validate() const;
};

/// Expected spot for mean photon numbers mean_a, mean_b: p = Lambda sqrt(mean_a + mean_b),
/// phi = sign_a sign_b atan sqrt(mean_b / mean_a) + pi [sign_a = -1], folded into [0, 2 pi).
LithTarget predict_deflection(double mean_a, double mean_b, int sign_a, int sign_b, double lambda);

/// Closed-form inverse of predict_deflection. Throws InfeasibleSqueeze when a squeeze floor
/// sinh^2 r exceeds the photon number the target needs in that mode.
FieldPlan plan_fields(const LithTarget& target, double lambda, double r_a, double r_b);

/// Product of the planned squeezed coherent states, each mode windowed to lose < eps / 8.
TwoModeFockState plan_state(const FieldPlan& plan, double eps_trunc);

struct Peak {
  double p = 0.0;
  double phi = 0.0;
  double value = 0.0;
  std::size_t i = 0;  ///< grid cell of the raw maximum
  std::size_t j = 0;
};

/// Maximum of W over p > p_min (default 0.5 Lambda from the grid metadata), refined by
/// quadratic fits through the neighbouring cells. Ties go to smaller p, then smaller phi.
Peak locate_peak(const MomentumGrid& grid, std::optional<double> p_min = std::nullopt);

/// Full widths at half maximum through a peak; empty when W stays above half maximum
/// out to the edge of the grid (radial) or half way round (azimuthal).
struct PeakWidth {
  std::optional<double> radial;
  std::optional<double> azimuthal;
};

PeakWidth peak_width(const MomentumGrid& grid, const Peak& peak);

/// Screen displacement p hbar k L / (M v), in metres.
double screen_map(double p, const ScreenGeometry& geom);

}  // namespace osg
