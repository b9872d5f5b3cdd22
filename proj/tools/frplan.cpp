// frplan: dimensioning tool for FFR/SFR-aided OFDMA cellular networks.
//
// Each subcommand resolves a run configuration (built-in defaults, then the
// optional JSON config file, then command-line overrides), executes one
// experiment, writes CSV tables and plot specs into the output directory,
// and prints a short machine-greppable summary to stdout. Timing goes to
// stderr so identical runs produce byte-identical stdout and files.

#include <chrono>
#include <cstdint>
#include <exception>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "frplan/config.hpp"
#include "frplan/errors.hpp"
#include "frplan/experiments.hpp"
#include "frplan/table.hpp"

namespace {

struct CliArgs {
  std::string config_path;
  std::string scheme;
  std::string design;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool desk_scale = false;
  bool with_sim = false;
};

void add_common_options(CLI::App* cmd, CliArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON config file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--scheme", args.scheme, "reuse scheme")
      ->check(CLI::IsMember({"ffr", "sfr"}));
  cmd->add_option("--design", args.design, "design rule")
      ->check(CLI::IsMember({"r5pd", "fxd", "qoscd"}));
  cmd->add_option("--seed", args.seed, "RNG seed for simulation commands");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_flag("--desk-scale", args.desk_scale,
                "small 12-RB preset for quick runs");
}

frplan::CliOverrides to_overrides(const CliArgs& args) {
  frplan::CliOverrides ov;
  if (!args.scheme.empty()) ov.scheme = frplan::parse_scheme(args.scheme);
  if (!args.design.empty()) ov.design = frplan::parse_design(args.design);
  ov.seed = args.seed;
  ov.out_dir = args.out_dir;
  ov.desk_scale = args.desk_scale;
  ov.with_sim = args.with_sim;
  return ov;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FFR/SFR cellular network dimensioning tool"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(frplan::version_string()));

  CliArgs args;
  using Command = std::function<frplan::CommandOutput(const frplan::RunConfig&)>;
  Command run;

  struct SubSpec {
    const char* name;
    const char* help;
    frplan::CommandOutput (*fn)(const frplan::RunConfig&);
  };
  const SubSpec specs[] = {
      {"cdf", "user-throughput CDF at the designed operating point",
       frplan::cmd_cdf},
      {"sweep-omega", "best split and throughput per distance threshold",
       frplan::cmd_sweep_omega},
      {"pareto", "throughput vs 5th-percentile rate frontier",
       frplan::cmd_pareto},
      {"load-sweep", "designed throughput per mean user count",
       frplan::cmd_load_sweep},
      {"jain", "fairness index per rate floor", frplan::cmd_jain},
      {"simulate", "event-level simulation at the operating point",
       frplan::cmd_simulate},
      {"optimize", "design solve with full evaluation trace",
       frplan::cmd_optimize},
  };
  for (const SubSpec& spec : specs) {
    CLI::App* cmd = app.add_subcommand(spec.name, spec.help);
    add_common_options(cmd, args);
    if (std::string(spec.name) == "cdf")
      cmd->add_flag("--simulate", args.with_sim,
                    "add a simulated empirical CDF column");
    cmd->callback([&run, fn = spec.fn] { run = fn; });
  }

  CLI11_PARSE(app, argc, argv);

  const auto t0 = std::chrono::steady_clock::now();
  try {
    frplan::RunConfig cfg =
        frplan::load_run_config(args.config_path, to_overrides(args));
    frplan::CommandOutput out = run(cfg);
    frplan::write_outputs(out, cfg.out_dir);
    std::cout << out.summary;
    std::cout << "config=" << cfg.fingerprint << " files=" << out.files.size()
              << "\n";
    const auto dt = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - t0);
    std::cerr << "out_dir=" << cfg.out_dir << " elapsed_s=" << dt.count()
              << "\n";
    return out.exit_code;
  } catch (const frplan::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const frplan::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
