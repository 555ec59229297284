#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "osg/params.hpp"

namespace osg {

/// Polar sampling of (p, phi). p runs over [0, p_max] inclusive; phi over [0, 2 pi) periodic.
struct GridSpec {
  int n_p = 256;
  int n_phi = 256;
  double p_max = 0.0;  ///< 0 selects 1.2 sqrt(N_max) Lambda + 60 / (2 k dr)

  void validate() const;
  double resolved_p_max(int n_total_max, const SimParams& params) const;

  bool operator==(const GridSpec&) const = default;
};

/// Probability collected in the annulus around the ring p = sqrt(n) Lambda.
struct RingWeight {
  int n = 0;
  double radius = 0.0;
  double inner = 0.0;
  double outer = 0.0;
  double weight = 0.0;
};

struct GridMetadata {
  SimParams params;
  std::string field;
  std::string atom;
  int n_total_max = 0;
  double captured_weight = 0.0;
  double integral = 0.0;  ///< integral of W p dp dphi over the grid
  std::vector<RingWeight> rings;
};

/// W(p, phi) on a polar grid, row-major with p outer and phi inner.
class MomentumGrid {
 public:
  MomentumGrid() = default;
  MomentumGrid(std::vector<double> p_axis, std::vector<double> phi_axis);

  const std::vector<double>& p_axis() const { return p_; }
  const std::vector<double>& phi_axis() const { return phi_; }
  std::size_t n_p() const { return p_.size(); }
  std::size_t n_phi() const { return phi_.size(); }

  double& at(std::size_t i, std::size_t j) { return values_[i * phi_.size() + j]; }
  double at(std::size_t i, std::size_t j) const { return values_[i * phi_.size() + j]; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  double dp() const { return p_.size() > 1 ? p_[1] - p_[0] : 0.0; }
  double dphi() const;

  GridMetadata metadata;

 private:
  std::vector<double> p_;
  std::vector<double> phi_;
  std::vector<double> values_;
};

MomentumGrid make_polar_grid(int n_p, int n_phi, double p_max);

/// Integral of W p dp dphi: periodic trapezoid in phi, trapezoid in p with the
/// Euler-Maclaurin endpoint term at p = 0, where d(pW)/dp = W(0).
double grid_integral(const MomentumGrid& grid);

/// p * integral of W dphi, the probability density per unit p.
std::vector<double> radial_marginal(const MomentumGrid& grid);

/// Annulus weights around p = sqrt(n) Lambda for n = 0..n_rings-1, split at midpoints.
std::vector<RingWeight> ring_weights(const MomentumGrid& grid, double lambda, int n_rings);

/// Copy of the grid with W set to zero for p < radius. Display only; never applied to stored data.
MomentumGrid with_exclusion(const MomentumGrid& grid, double radius);

}  // namespace osg
