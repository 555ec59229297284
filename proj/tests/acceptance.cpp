// Acceptance run: one PASS/FAIL line per criterion, details on the same line.
// Exit status is 0 only when every criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "osg/config.hpp"
#include "osg/error.hpp"
#include "osg/grid_io.hpp"
#include "osg/kernel.hpp"
#include "osg/lithography.hpp"
#include "osg/oracle.hpp"

using namespace osg;
namespace fs = std::filesystem;

namespace {

const double kPi = std::numbers::pi;
using clock_type = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<Verdict()>& body) {
  const auto t0 = clock_type::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("error: ") + e.what()};
  }
  const double elapsed = std::chrono::duration<double>(clock_type::now() - t0).count();
  std::string detail = v.detail;
  if (elapsed > budget_s) {
    v.pass = false;
    detail += fmt::format(" | runtime {:.1f}s exceeds {:.0f}s", elapsed, budget_s);
  }
  if (!v.pass) ++failures;
  fmt::print("[{}] {:>2}. {} ({:.1f}s): {}\n", v.pass ? "PASS" : "FAIL", id, title, elapsed, detail);
  std::fflush(stdout);
}

SimParams params_with(double lambda) {
  SimParams p;
  p.lambda = lambda;
  return p;
}

MomentumGrid run_plan(const FieldPlan& plan, double lambda, const GridSpec& grid = {}) {
  return momentum_distribution(plan_state(plan, 1e-6), AtomPrep::from_phase(kPi / 2), params_with(lambda), grid);
}

double angle_gap(double a, double b) { return std::abs(std::remainder(a - b, 2 * kPi)); }

std::string fmt_width(const std::optional<double>& w) { return w ? fmt::format("{:.3f}", *w) : "undef"; }

fs::path config_dir() { return fs::path(OSG_SOURCE_DIR) / "configs"; }

// Interior local maxima of a radial profile, refined by a parabola through the neighbours.
std::vector<double> local_maxima(const std::vector<double>& g, const std::vector<double>& p, double p_min) {
  std::vector<double> out;
  const double dp = p[1] - p[0];
  for (std::size_t i = 1; i + 1 < g.size(); ++i) {
    if (p[i] < p_min || !(g[i] > g[i - 1] && g[i] >= g[i + 1])) continue;
    const double curv = g[i - 1] - 2 * g[i] + g[i + 1];
    const double t = curv < 0 ? std::clamp(0.5 * (g[i - 1] - g[i + 1]) / curv, -0.5, 0.5) : 0.0;
    out.push_back(p[i] + t * dp);
  }
  return out;
}

double nearest(const std::vector<double>& xs, double x) {
  double best = std::nan("");
  for (double v : xs)
    if (std::isnan(best) || std::abs(v - x) < std::abs(best - x)) best = v;
  return best;
}

}  // namespace

int main() {
  fmt::print("osglith acceptance ({})\n", tool_version());
  const SimParams desk = params_with(4.0);

  criterion(1, "analytic transform vs direct quadrature", 60, [&] {
    const auto r = oracle::quadrature_suite(desk, 5, 20, 1);
    return Verdict{r.pass && r.max_error <= 1e-6,
                   fmt::format("{} samples, max rel err {:.2e}, mean {:.2e} (tol 1e-6); {}", r.samples,
                               r.max_error, r.mean_error, r.detail)};
  });

  criterion(2, "full pipeline vs evolution-FFT oracle", 300, [&] {
    const auto local = oracle::pipeline_suite();
    oracle::PipelineCase lab_case;
    lab_case.evolution.basis = oracle::TraceBasis::Lab;
    lab_case.tolerance = 1.0;
    const auto lab = oracle::pipeline_suite(lab_case);
    return Verdict{local.pass && local.max_error <= 2e-2,
                   fmt::format("L1 = {:.3e} (tol 2e-2, local-mode trace); lab-frame trace L1 = {:.3f} (informational)",
                               local.max_error, lab.max_error)};
  });

  criterion(3, "Bogoliubov rotation suite", 30, [&] {
    const auto orth = oracle::orthogonality_suite(30, 20);
    const auto comp = oracle::composition_suite(20, 5);
    const auto expo = oracle::rotation_oracle_suite(12, 10);
    const bool pass = orth.max_error < 1e-11 && comp.max_error <= 1e-10 && expo.max_error <= 1e-10;
    return Verdict{pass, fmt::format("|B^T B - I| {:.2e} (N<=30), composition {:.2e} (N<=20), expm {:.2e} (N<=12)",
                                     orth.max_error, comp.max_error, expo.max_error)};
  });

  criterion(4, "ring law p = sqrt(n) Lambda (Lambda = 5, alpha = 1.5i, beta = 1.5)", 600, [&] {
    auto c = load_config(config_dir() / "fig2a.json");
    const auto state = build_field(c.field, c.params);
    const auto grid = momentum_distribution(state, c.atom->resolve(), c.params, GridSpec{801, 256, 40.0});
    const double L = c.params.lambda;
    // ring profile: azimuthal mean of W
    std::vector<double> ring_profile(grid.n_p(), 0.0);
    for (std::size_t i = 0; i < grid.n_p(); ++i) {
      for (std::size_t j = 0; j < grid.n_phi(); ++j) ring_profile[i] += grid.at(i, j);
      ring_profile[i] /= double(grid.n_phi());
    }
    const auto maxima = local_maxima(ring_profile, grid.p_axis(), 0.5 * L);
    const auto marginal_maxima = local_maxima(radial_marginal(grid), grid.p_axis(), 0.5 * L);
    bool pass = true;
    std::string detail, marginal;
    for (int n = 1; n <= 4; ++n) {
      const double ring = std::sqrt(double(n)) * L;
      const double peak = nearest(maxima, ring);
      const double rel = std::abs(peak - ring) / ring;
      pass = pass && rel <= 0.05;
      detail += fmt::format("{}n={}: {:.3f} vs {:.3f} ({:.1f}%)", n > 1 ? ", " : "", n, peak, ring, 100 * rel);
      marginal += fmt::format("{}{:.2f}", n > 1 ? " " : "", nearest(marginal_maxima, ring));
    }
    return Verdict{pass, "maxima of the azimuthally averaged W: " + detail +
                             " | p-weighted marginal maxima: " + marginal};
  });

  criterion(5, "targeting map fidelity (reduced target 8, pi/3)", 300, [&] {
    const LithTarget target{8.0, kPi / 3};
    const auto plan = plan_fields(target, 4.0, 0.0, 0.0);
    const bool amplitudes = std::abs(plan.abs_alpha - 1.0) < 1e-12 && std::abs(plan.abs_beta - std::sqrt(3.0)) < 1e-12;
    const auto grid = run_plan(plan, 4.0);
    const auto peak = locate_peak(grid);
    const double ring = std::pow(peak.p / 4.0, 2);
    const bool pass = amplitudes && std::abs(ring - 4.0) <= 1.0 && angle_gap(peak.phi, target.phi) <= 0.15;

    const LithTarget fig{20.0, kPi / 4};
    const auto big = run_plan(plan_fields(fig, 4.0, 0.0, 0.0), 4.0);
    auto near_full = [&](const Peak& q) {
      return std::abs(q.p - fig.p) <= 2.0 && angle_gap(q.phi, fig.phi) <= 0.1 ? "within" : "outside";
    };
    const auto full_peak = locate_peak(big);
    const auto full_far = locate_peak(big, 2 * 4.0);
    return Verdict{pass, fmt::format("plan alpha={:.4f}i beta={:.4f}i; peak p={:.3f} (ring {:.2f}, need 4+-1), "
                                     "phi={:.3f} (need {:.3f}+-0.15) | full scale (20, pi/4), +-Lambda/2, +-0.1: "
                                     "default exclusion ({:.3f}, {:.3f}) {}, exclusion 2 Lambda ({:.3f}, {:.3f}) {}",
                                     plan.abs_alpha, plan.abs_beta, peak.p, ring, peak.phi, target.phi, full_peak.p,
                                     full_peak.phi, near_full(full_peak), full_far.p, full_far.phi, near_full(full_far))};
  });

  criterion(6, "reference amplitudes from plan_fields", 1, [&] {
    struct Case {
      LithTarget target;
      double r, alpha, beta;
      int decimals;
    };
    const std::vector<Case> cases{{{20.0, kPi / 4}, 0.0, 3.54, 3.54, 2},
                                  {{20.0, kPi / 4}, 0.5, 5.77, 5.77, 2},
                                  {{20.0, kPi / 4}, 1.0, 9.06, 9.06, 2},
                                  {{15.0, 5 * kPi / 18}, 1.0, 5.7, 7.1, 1}};
    bool pass = true;
    std::string detail;
    for (const auto& c : cases) {
      const auto plan = plan_fields(c.target, 4.0, c.r, c.r);
      const double scale = std::pow(10.0, c.decimals);
      const bool same = std::round(plan.abs_alpha * scale) == std::round(c.alpha * scale) &&
                        std::round(plan.abs_beta * scale) == std::round(c.beta * scale);
      // forward direction: the reference amplitudes land on the reference target
      const double ma = squeezed_mean_photon({0.0, c.alpha}, c.r, FieldPlan::kSqueezePhase);
      const double mb = squeezed_mean_photon({0.0, c.beta}, c.r, FieldPlan::kSqueezePhase);
      const auto back = predict_deflection(ma, mb, 1, 1, 4.0);
      const bool forward = std::abs(back.p - c.target.p) < 0.05 && angle_gap(back.phi, c.target.phi) < 2e-3 * scale;
      pass = pass && same && forward;
      detail += fmt::format("{}r={}: {:.4f}/{:.4f} vs {}/{}", detail.empty() ? "" : "; ", c.r, plan.abs_alpha,
                            plan.abs_beta, c.alpha, c.beta);
    }
    const auto flipped = plan_fields({15.0, 13 * kPi / 18}, 4.0, 1.0, 1.0);
    pass = pass && flipped.sign_a == -1 && flipped.sign_b == 1;
    return Verdict{pass, detail + fmt::format("; 13pi/18 signs ({:+d},{:+d})", flipped.sign_a, flipped.sign_b)};
  });

  criterion(7, "squeezing narrows the azimuthal width (reduced target 12, pi/4)", 900, [&] {
    auto widths = [](const LithTarget& t) {
      std::vector<std::string> parts;
      std::vector<std::optional<double>> w;
      for (double r : {0.0, 0.5, 1.0}) {
        const auto grid = run_plan(plan_fields(t, 4.0, r, r), 4.0);
        const auto peak = locate_peak(grid);
        w.push_back(peak_width(grid, peak).azimuthal);
        parts.push_back(fmt::format("r={}: {} at ({:.2f}, {:.3f})", r, fmt_width(w.back()), peak.p, peak.phi));
      }
      const bool ordered = w[0] && w[1] && w[2] && *w[1] < *w[0] && *w[2] < *w[1];
      return std::make_pair(ordered, fmt::format("{}", fmt::join(parts, ", ")));
    };
    const auto [pass, reduced] = widths({12.0, kPi / 4});
    const auto [full_ok, fig] = widths({20.0, kPi / 4});
    return Verdict{pass, fmt::format("FWHM_phi {} | full scale (20, pi/4): {} ({})", reduced, fig,
                                     full_ok ? "strictly decreasing" : "not strictly decreasing")};
  });

  criterion(8, "quadrant control by the sign of alpha (reduced target 10, 5pi/18, r=1)", 600, [&] {
    auto flip = [](const LithTarget& t) {
      auto plan = plan_fields(t, 4.0, 1.0, 1.0);
      const auto a = locate_peak(run_plan(plan, 4.0));
      plan.sign_a = -plan.sign_a;
      const auto b = locate_peak(run_plan(plan, 4.0));
      const bool ok = angle_gap(a.phi, 5 * kPi / 18) <= 0.15 && angle_gap(b.phi, 13 * kPi / 18) <= 0.15;
      return std::make_tuple(ok, a, b);
    };
    const auto [pass, a, b] = flip({10.0, 5 * kPi / 18});
    const auto [full_ok, fa, fb] = flip({15.0, 5 * kPi / 18});
    return Verdict{pass, fmt::format("phi {:.3f} -> {:.3f} (need {:.3f} -> {:.3f}, +-0.15; peaks at p={:.2f}/{:.2f}) | "
                                     "full scale (15, 5pi/18): {:.3f} -> {:.3f} at p={:.2f} ({})",
                                     a.phi, b.phi, 5 * kPi / 18, 13 * kPi / 18, a.p, b.p, fa.phi, fb.phi, fa.p,
                                     full_ok ? "within +-0.15" : "outside +-0.15")};
  });

  criterion(9, "normalization on every shipped simulate config", 1800, [&] {
    bool pass = true;
    std::string detail;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(config_dir()))
      if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      const auto c = load_config(f);
      if (c.mode != "simulate") continue;
      const auto state = build_field(c.field, c.params, c.base_dir);
      const auto grid = momentum_distribution(state, c.atom ? c.atom->resolve() : AtomPrep::ground(), c.params, c.grid);
      const double dev = grid.metadata.integral - grid.metadata.captured_weight;
      pass = pass && std::abs(dev) <= 1e-3;
      detail += fmt::format("{}{} {:+.1e}", detail.empty() ? "" : ", ", f.stem().string(), dev);
    }
    return Verdict{pass && !detail.empty(), "integral - captured: " + detail};
  });

  criterion(10, "byte-identical grids for 1, 4 and 8 workers", 600, [&] {
    const auto c = load_config(config_dir() / "fig3b.json");
    const auto state = build_field(c.field, c.params);
    const fs::path dir = fs::temp_directory_path() / "osg_acceptance";
    fs::create_directories(dir);
    std::vector<std::string> bytes;
    for (int threads : {1, 4, 8}) {
      KernelOptions o;
      o.threads = threads;
      const auto grid = momentum_distribution(state, c.atom->resolve(), c.params, GridSpec{256, 256, 0.0}, o);
      const auto path = dir / fmt::format("w{}.bin", threads);
      write_grid_bin(path, grid);
      std::ifstream in(path, std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      bytes.push_back(ss.str());
    }
    const bool same = bytes[0] == bytes[1] && bytes[0] == bytes[2];
    return Verdict{same && !bytes[0].empty(), fmt::format("{} bytes per file, {}", bytes[0].size(),
                                                          same ? "identical" : "DIFFERENT")};
  });

  fmt::print("{}/10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
