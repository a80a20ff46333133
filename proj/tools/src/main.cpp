#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gfalm_app/commands.hpp"
#include "gfalm_app/run_config.hpp"

int main(int argc, char** argv) {
  using namespace gfalm::app;
  CLI::App app{"Ground states of the focusing NLS by normalized gradient flow (GFALM)"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::string taus;
  std::string ground_state;
  std::string suite;
  double dt = 0.01;
  double t_final = 50.0;

  auto* solve = app.add_subcommand("solve", "Run GFALM to the residual tolerance");
  solve->add_option("--config", config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  solve->add_option("--out", out, "Output directory")->required();

  auto* rate = app.add_subcommand("rate", "Fit error decay rates over several tau");
  rate->add_option("--config", config)->required()->check(CLI::ExistingFile);
  rate->add_option("--taus", taus, "Comma-separated time steps")->required();
  rate->add_option("--out", out)->required();

  auto* flow = app.add_subcommand("flow", "Integrate the continuous gradient flow with RK4");
  flow->add_option("--config", config)->required()->check(CLI::ExistingFile);
  flow->add_option("--dt", dt)->required()->check(CLI::PositiveNumber);
  flow->add_option("--t-final", t_final)->required()->check(CLI::PositiveNumber);
  flow->add_option("--out", out)->required();

  auto* verify = app.add_subcommand("verify", "Run a built-in verification suite");
  verify->add_option("suite", suite, "soliton | 2d | norms | geometry | flow")->required();

  auto* probe = app.add_subcommand("probe", "Geometry probes around a converged ground state");
  probe->add_option("--config", config)->required()->check(CLI::ExistingFile);
  probe->add_option("--ground-state", ground_state, "Field file")->required()->check(CLI::ExistingFile);
  probe->add_option("--out", out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*solve) return cmd_solve(config, out, std::cout);
    if (*rate) {
      const auto list = parse_tau_list(taus);
      return cmd_rate(config, list, out, std::cout);
    }
    if (*flow) return cmd_flow(config, dt, t_final, out, std::cout);
    if (*verify) return cmd_verify(suite, std::cout);
    if (*probe) return cmd_probe(config, ground_state, out, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << '\n';
    return kNumericalError;
  }
  return kConfigError;
}
