#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "osg/commands.hpp"
#include "osg/grid_io.hpp"

namespace {

struct Invocation {
  std::string config_path;
  std::string out_dir;
  std::string format;
  int threads = 0;
  double exclusion_radius = -1.0;
  bool verify = false;
};

void add_common(CLI::App* cmd, Invocation& inv) {
  cmd->add_option("--config", inv.config_path, "run configuration (JSON)")->required();
  cmd->add_option("--out", inv.out_dir, "output directory (overrides output.dir)");
  cmd->add_option("--format", inv.format, "grid format: csv, bin or both")
      ->check(CLI::IsMember({"csv", "bin", "both"}));
  cmd->add_option("--threads", inv.threads, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--exclusion-radius", inv.exclusion_radius, "ignore p below this radius when locating peaks")
      ->check(CLI::NonNegativeNumber);
}

int dispatch(const std::string& command, const Invocation& inv) {
  osg::CommandOptions options;
  if (!inv.out_dir.empty()) options.out_dir = inv.out_dir;
  if (!inv.format.empty()) options.format = osg::parse_format(inv.format);
  if (inv.threads > 0) options.threads = inv.threads;
  if (inv.exclusion_radius >= 0.0) options.exclusion_radius = inv.exclusion_radius;
  options.verify = inv.verify;

  auto config = osg::apply_overrides(osg::load_config(inv.config_path), options);
  if (!config.mode.empty() && config.mode != command)
    std::cerr << "note: config declares mode '" << config.mode << "', running '" << command << "'\n";
  if (command == "simulate") return osg::run_simulate(config, std::cout);
  if (command == "target") return osg::run_target(config, inv.verify, std::cout);
  if (command == "oracle-check") return osg::run_oracle_check(config, std::cout);
  return osg::run_sweep(config, inv.verify, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-cavity optical Stern-Gerlach momentum distributions and lithography planning"};
  app.set_version_flag("--version", std::string(osg::tool_version()));
  app.require_subcommand(1);

  Invocation inv;
  auto* simulate = app.add_subcommand("simulate", "compute W(p, phi) for the configured field and atom");
  auto* target = app.add_subcommand("target", "plan the field for a deposition target");
  auto* oracle = app.add_subcommand("oracle-check", "run the equivalence suites against the brute-force oracles");
  auto* sweep = app.add_subcommand("sweep", "plan (and optionally simulate) a list of targets");
  for (auto* cmd : {simulate, target, oracle, sweep}) add_common(cmd, inv);
  target->add_flag("--verify", inv.verify, "simulate the plan and report the located peak and widths");
  sweep->add_flag("--verify", inv.verify, "simulate every plan and report the located peaks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? osg::kExitOk : osg::kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return dispatch(command, inv);
  } catch (const osg::Error& e) {
    std::cerr << "osg " << command << ": " << e.what() << "\n";
    return osg::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "osg " << command << ": " << e.what() << "\n";
    return osg::kExitOracleFail;
  }
}
