#include "osg/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "json.hpp"
#include "osg/grid_io.hpp"
#include "osg/kernel.hpp"
#include "osg/lithography.hpp"
#include "osg/oracle.hpp"

namespace osg {

namespace fs = std::filesystem;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

fs::path output_dir(const RunConfig& c) {
  fs::path dir = c.output.dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::string describe_mode(const ModeSpec& m) {
  switch (m.kind) {
    case ModeSpec::Kind::Fock: return fmt::format("fock({})", m.n);
    case ModeSpec::Kind::Coherent: return fmt::format("coherent({:.17g}{:+.17g}i)", m.alpha.real(), m.alpha.imag());
    case ModeSpec::Kind::Squeezed:
      return fmt::format("squeezed({:.17g}{:+.17g}i, r={:.17g}, phi_sq={:.17g})", m.alpha.real(), m.alpha.imag(), m.r,
                         m.phi_sq);
  }
  return "?";
}

std::string describe_field(const FieldSpec& f) {
  if (f.a && f.b) return "a=" + describe_mode(*f.a) + " b=" + describe_mode(*f.b);
  if (!f.matrix_file.empty()) return "C-matrix file " + f.matrix_file;
  return "C-matrix inline";
}

FieldSpec field_for(const FieldPlan& plan) {
  FieldSpec f;
  f.a = ModeSpec{ModeSpec::Kind::Squeezed, 0, plan.alpha(), plan.r_a, FieldPlan::kSqueezePhase};
  f.b = ModeSpec{ModeSpec::Kind::Squeezed, 0, plan.beta(), plan.r_b, FieldPlan::kSqueezePhase};
  if (plan.r_a == 0.0) f.a->kind = ModeSpec::Kind::Coherent;
  if (plan.r_b == 0.0) f.b->kind = ModeSpec::Kind::Coherent;
  return f;
}

MomentumGrid simulate(const FieldSpec& field, const AtomPrep& atom, const RunConfig& c) {
  const auto state = build_field(field, c.params, c.base_dir);
  KernelOptions options;
  options.threads = c.threads;
  options.term_budget = c.term_budget;
  auto grid = momentum_distribution(state, atom, c.params, c.grid, options);
  grid.metadata.field = describe_field(field);
  return grid;
}

std::vector<fs::path> write_grid(const MomentumGrid& grid, const RunConfig& c, const std::string& stem) {
  const fs::path dir = output_dir(c);
  std::vector<fs::path> written;
  if (c.output.format != OutputFormat::Csv) {
    written.push_back(dir / (stem + ".bin"));
    write_grid_bin(written.back(), grid);
  }
  if (c.output.format != OutputFormat::Bin) {
    written.push_back(dir / (stem + ".csv"));
    write_grid_csv(written.back(), grid);
  }
  return written;
}

std::string grid_summary(const MomentumGrid& grid, double elapsed) {
  const auto& m = grid.metadata;
  std::ostringstream os;
  fmt::print(os, "field            {}\n", m.field);
  fmt::print(os, "atom             {}\n", m.atom);
  fmt::print(os, "Lambda           {:.6g}\n", m.params.lambda);
  fmt::print(os, "k dr             {:.6g}\n", m.params.k_dr);
  fmt::print(os, "grid             {} x {}, p in [0, {:.6g}]\n", grid.n_p(), grid.n_phi(), grid.p_axis().back());
  fmt::print(os, "cutoff N_max     {} (eps_trunc {:.3g})\n", m.n_total_max, m.params.eps_trunc);
  fmt::print(os, "captured weight  {:.9f}\n", m.captured_weight);
  fmt::print(os, "integral of W    {:.9f}  (deviation {:+.3e})\n", m.integral, m.integral - m.captured_weight);
  if (std::abs(m.integral - m.captured_weight) > 1e-3)
    fmt::print(os,
               "WARNING          normalization off by more than 1e-3; the ring tails extend beyond p_max or the "
               "p grid is too coarse (raise grid.p_max / grid.n_p)\n");
  fmt::print(os, "ring weights     n   sqrt(n) Lambda   weight\n");
  for (const auto& r : m.rings) fmt::print(os, "                 {:<3d} {:<16.6g} {:.6f}\n", r.n, r.radius, r.weight);
  fmt::print(os, "time             {:.2f} s\n", elapsed);
  return os.str();
}

std::string plan_report(const LithTarget& target, const FieldPlan& plan, double lambda) {
  const auto predicted = predict_deflection(plan.mean_a, plan.mean_b, plan.sign_a, plan.sign_b, lambda);
  std::ostringstream os;
  fmt::print(os, "target           p = {:.6g}, phi = {:.6g} rad, Lambda = {:.6g}\n", target.p, target.phi, lambda);
  fmt::print(os, "alpha            {}{:.4f} i   (|alpha| = {:.4f}, phase {}pi/2, r = {:.4g})\n",
             plan.sign_a < 0 ? "-" : "", plan.abs_alpha, plan.abs_alpha, plan.sign_a < 0 ? "-" : "+", plan.r_a);
  fmt::print(os, "beta             {}{:.4f} i   (|beta| = {:.4f}, phase {}pi/2, r' = {:.4g})\n",
             plan.sign_b < 0 ? "-" : "", plan.abs_beta, plan.abs_beta, plan.sign_b < 0 ? "-" : "+", plan.r_b);
  fmt::print(os, "squeeze phase    pi\n");
  fmt::print(os, "mean photons     {:.6g} + {:.6g}\n", plan.mean_a, plan.mean_b);
  fmt::print(os, "predicted spot   p = {:.6g}, phi = {:.6g} rad\n", predicted.p, predicted.phi);
  return os.str();
}

nlohmann::json plan_json(const LithTarget& target, const FieldPlan& plan, double lambda) {
  return {{"target", {{"p", target.p}, {"phi", target.phi}}},
          {"lambda", lambda},
          {"alpha", {{"re", plan.alpha().real()}, {"im", plan.alpha().imag()}}},
          {"beta", {{"re", plan.beta().real()}, {"im", plan.beta().imag()}}},
          {"abs_alpha", plan.abs_alpha},
          {"abs_beta", plan.abs_beta},
          {"sign_a", plan.sign_a},
          {"sign_b", plan.sign_b},
          {"r_a", plan.r_a},
          {"r_b", plan.r_b},
          {"phi_sq", FieldPlan::kSqueezePhase},
          {"mean_a", plan.mean_a},
          {"mean_b", plan.mean_b}};
}

AtomPrep protocol_atom(const RunConfig& c) {
  return c.atom ? c.atom->resolve() : AtomPrep::from_phase(std::numbers::pi / 2);
}

std::string verify_report(const MomentumGrid& grid, const LithTarget& target, const RunConfig& c) {
  const double cut = c.exclusion_radius.value_or(0.5 * c.params.lambda);
  const auto peak = locate_peak(grid, cut);
  const auto width = peak_width(grid, peak);
  const double dphi = std::remainder(peak.phi - target.phi, 2 * std::numbers::pi);
  std::ostringstream os;
  fmt::print(os, "exclusion radius {:.6g}\n", cut);
  fmt::print(os, "located peak     p = {:.6g}, phi = {:.6g} rad, W = {:.6e}\n", peak.p, peak.phi, peak.value);
  fmt::print(os, "offset           dp = {:+.4g} ({:+.3g} Lambda), dphi = {:+.4g} rad\n", peak.p - target.p,
             (peak.p - target.p) / c.params.lambda, dphi);
  fmt::print(os, "FWHM radial      {}\n", width.radial ? fmt::format("{:.6g}", *width.radial) : "undefined (W stays above half maximum)");
  fmt::print(os, "FWHM azimuthal   {}\n",
             width.azimuthal ? fmt::format("{:.6g} rad", *width.azimuthal) : "undefined (W stays above half maximum)");
  return os.str();
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::InvalidArgument:
    case ErrorKind::InvalidIndex:
    case ErrorKind::CutoffTooSmall:
    case ErrorKind::UnreachableTolerance:
    case ErrorKind::EmptyRegion:
      return kExitConfig;
    case ErrorKind::BudgetExceeded: return kExitBudget;
    case ErrorKind::Io: return kExitIo;
    case ErrorKind::InfeasibleSqueeze: return kExitInfeasible;
    case ErrorKind::NonFinite:
    case ErrorKind::NotConverged:
    case ErrorKind::TruncationLeak:
    case ErrorKind::GridAliasing:
      return kExitOracleFail;
  }
  return kExitOracleFail;
}

RunConfig apply_overrides(RunConfig config, const CommandOptions& o) {
  if (o.out_dir) config.output.dir = *o.out_dir;
  if (o.format) config.output.format = *o.format;
  if (o.threads) {
    if (*o.threads < 1) throw Error(ErrorKind::Config, "--threads must be >= 1");
    config.threads = *o.threads;
  }
  if (o.exclusion_radius) {
    if (!(*o.exclusion_radius >= 0.0)) throw Error(ErrorKind::Config, "--exclusion-radius must be >= 0");
    config.exclusion_radius = *o.exclusion_radius;
  }
  return config;
}

int run_simulate(const RunConfig& c, std::ostream& out) {
  if (!c.field.a && c.field.matrix.empty() && c.field.matrix_file.empty())
    throw Error(ErrorKind::Config, "simulate needs a 'field' section");
  if (auto warning = c.params.regime_warning()) fmt::print(out, "warning: {}\n", *warning);
  const auto t0 = clock_type::now();
  const auto grid = simulate(c.field, c.atom ? c.atom->resolve() : AtomPrep::ground(), c);
  const double elapsed = seconds_since(t0);
  const auto files = write_grid(grid, c, c.output.stem);
  std::string report = grid_summary(grid, elapsed);
  for (const auto& f : files) report += fmt::format("wrote            {}\n", f.string());
  write_text(output_dir(c) / (c.output.stem + ".summary.txt"), report);
  out << report;
  return kExitOk;
}

int run_target(const RunConfig& c, bool verify, std::ostream& out) {
  if (!c.target) throw Error(ErrorKind::Config, "target needs a 'target' section");
  const LithTarget target{c.target->p, c.target->phi};
  const auto plan = plan_fields(target, c.params.lambda, c.target->r_a, c.target->r_b);
  std::string report = plan_report(target, plan, c.params.lambda);
  const fs::path dir = output_dir(c);
  write_text(dir / (c.output.stem + ".plan.json"), plan_json(target, plan, c.params.lambda).dump(2) + "\n");
  if (verify) {
    const auto t0 = clock_type::now();
    auto grid = simulate(field_for(plan), protocol_atom(c), c);
    const double elapsed = seconds_since(t0);
    write_grid(grid, c, c.output.stem);
    report += verify_report(grid, target, c);
    report += grid_summary(grid, elapsed);
  }
  write_text(dir / (c.output.stem + ".report.txt"), report);
  out << report;
  return kExitOk;
}

int run_sweep(const RunConfig& c, bool verify, std::ostream& out) {
  if (c.sweep.empty()) throw Error(ErrorKind::Config, "sweep needs a non-empty 'sweep' list");
  const fs::path dir = output_dir(c);
  nlohmann::json plans = nlohmann::json::array();
  std::ostringstream report;
  fmt::print(report, "{:>4} {:>10} {:>10} {:>6} {:>6} {:>10} {:>10} {:>5} {:>5}  {}\n", "#", "p", "phi", "r", "r'",
             "|alpha|", "|beta|", "sa", "sb", verify ? "located peak" : "");
  bool infeasible = false;
  for (std::size_t i = 0; i < c.sweep.size(); ++i) {
    const auto& t = c.sweep[i];
    const LithTarget target{t.p, t.phi};
    FieldPlan plan;
    try {
      plan = plan_fields(target, c.params.lambda, t.r_a, t.r_b);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InfeasibleSqueeze) throw;
      infeasible = true;
      fmt::print(report, "{:>4} {:>10.5g} {:>10.5g} {:>6.3g} {:>6.3g}  infeasible: {}\n", i, t.p, t.phi, t.r_a, t.r_b,
                 e.what());
      plans.push_back({{"target", {{"p", t.p}, {"phi", t.phi}}}, {"infeasible", e.what()}});
      continue;
    }
    plans.push_back(plan_json(target, plan, c.params.lambda));
    std::string located;
    if (verify) {
      auto grid = simulate(field_for(plan), protocol_atom(c), c);
      write_grid(grid, c, fmt::format("{}_{:03d}", c.output.stem, i));
      const auto peak = locate_peak(grid, c.exclusion_radius.value_or(0.5 * c.params.lambda));
      located = fmt::format("({:.4g}, {:.4g})", peak.p, peak.phi);
    }
    fmt::print(report, "{:>4} {:>10.5g} {:>10.5g} {:>6.3g} {:>6.3g} {:>10.4f} {:>10.4f} {:>5d} {:>5d}  {}\n", i, t.p,
               t.phi, t.r_a, t.r_b, plan.abs_alpha, plan.abs_beta, plan.sign_a, plan.sign_b, located);
  }
  write_text(dir / (c.output.stem + ".plans.json"), plans.dump(2) + "\n");
  write_text(dir / (c.output.stem + ".sweep.txt"), report.str());
  out << report.str();
  return infeasible ? kExitInfeasible : kExitOk;
}

int run_oracle_check(const RunConfig& c, std::ostream& out) {
  // Budgets are checked before anything runs so a refusal never leaves a partial report.
  if (c.oracle.n_max > kOracleMaxN)
    throw Error(ErrorKind::BudgetExceeded, fmt::format("oracle n_max = {} exceeds the quadrature budget N <= {}",
                                                       c.oracle.n_max, kOracleMaxN));
  oracle::PipelineCase pipeline;
  pipeline.evolution.threads = c.threads;
  if (c.oracle.pipeline) {
    const double eps = pipeline.params.eps_trunc / 8.0;
    const int N = product_state(coherent_coeffs(pipeline.alpha, coherent_window(pipeline.alpha, eps), eps),
                                coherent_coeffs(pipeline.beta, coherent_window(pipeline.beta, eps), eps),
                                pipeline.params.eps_trunc)
                      .n_total_max();
    if (N > oracle::kEvolutionMaxCutoff)
      throw Error(ErrorKind::BudgetExceeded, fmt::format("pipeline cutoff {} exceeds the evolution oracle budget {}",
                                                         N, oracle::kEvolutionMaxCutoff));
  }

  SimParams params = c.params;
  std::vector<oracle::SuiteResult> results;
  std::vector<double> times;
  auto timed = [&](auto&& fn) {
    const auto t0 = clock_type::now();
    results.push_back(fn());
    times.push_back(seconds_since(t0));
  };
  timed([&] { return oracle::quadrature_suite(params, c.oracle.n_max, c.oracle.points, c.oracle.seed); });
  timed([&] { return oracle::rotation_oracle_suite(); });
  timed([&] { return oracle::orthogonality_suite(); });
  timed([&] { return oracle::composition_suite(); });
  timed([&] { return oracle::squeeze_suite(); });
  if (c.oracle.pipeline) timed([&] { return oracle::pipeline_suite(pipeline); });

  std::ostringstream report;
  bool all = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    all = all && r.pass;
    fmt::print(report, "{:<4} {:<48} n={:<7} max={:<10.3e} mean={:<10.3e} tol={:<8.1e} {:>6.1f}s  {}\n",
               r.pass ? "PASS" : "FAIL", r.name, r.samples, r.max_error, r.mean_error, r.tolerance, times[i], r.detail);
  }
  write_text(output_dir(c) / (c.output.stem + ".oracle.txt"), report.str());
  out << report.str();
  return all ? kExitOk : kExitOracleFail;
}

}  // namespace osg
