#include "doctest.h"

#include <cmath>
#include <numbers>

#include "osg/error.hpp"
#include "osg/grid.hpp"

using namespace osg;

TEST_CASE("polar axes") {
  const auto g = make_polar_grid(11, 8, 5.0);
  CHECK(g.n_p() == 11);
  CHECK(g.p_axis().front() == 0.0);
  CHECK(g.p_axis().back() == 5.0);
  CHECK(g.dp() == doctest::Approx(0.5));
  CHECK(g.phi_axis()[2] == doctest::Approx(std::numbers::pi / 2));
  CHECK(g.dphi() == doctest::Approx(std::numbers::pi / 4));
  CHECK(g.values().size() == 88);
}

TEST_CASE("integral of a Gaussian disk") {
  // W = exp(-p^2/2) / (2 pi) integrates to 1 with measure p dp dphi.
  auto g = make_polar_grid(201, 16, 12.0);
  for (std::size_t i = 0; i < g.n_p(); ++i)
    for (std::size_t j = 0; j < g.n_phi(); ++j)
      g.at(i, j) = std::exp(-0.5 * g.p_axis()[i] * g.p_axis()[i]) / (2 * std::numbers::pi);
  CHECK(grid_integral(g) == doctest::Approx(1.0).epsilon(1e-6));

  const auto rings = ring_weights(g, 2.0, 3);
  REQUIRE(rings.size() == 3);
  CHECK(rings[0].outer == doctest::Approx(1.0));
  CHECK(rings[1].inner == doctest::Approx(1.0));
  CHECK(rings[0].weight == doctest::Approx(1.0 - std::exp(-0.5)).epsilon(1e-3));
  double total = 0.0;
  for (const auto& r : rings) total += r.weight;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-3));

  const auto cut = with_exclusion(g, 1.0);
  CHECK(cut.at(0, 0) == 0.0);
  CHECK(cut.at(50, 3) == g.at(50, 3));
  CHECK(g.at(0, 0) > 0.0);
}

TEST_CASE("grid spec") {
  GridSpec spec;
  CHECK_NOTHROW(spec.validate());
  SimParams p;
  CHECK(spec.resolved_p_max(16, p) == doctest::Approx(1.2 * 4 * 4 + 60 * p.pinhole_rate()));
  spec.p_max = 30.0;
  CHECK(spec.resolved_p_max(16, p) == 30.0);
  spec.n_p = 1;
  CHECK_THROWS_AS(spec.validate(), Error);
}
