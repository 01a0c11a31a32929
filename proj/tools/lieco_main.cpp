#include <CLI11.hpp>

#include "scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Drift-free control systems on nilpotent Lie groups: Wei-Norman solver, "
               "subgroup reduction, bracket/controllability analysis"};
  app.require_subcommand(1);

  lieco::cli::Scenario scenario;
  const char* tasks[] = {"simulate", "wn", "reduce", "rank", "close", "verify"};
  const char* blurbs[] = {
      "run a model along its Wei-Norman and ODE-oracle paths",
      "solve the Wei-Norman system for an algebra and control signal",
      "factor the group solution through the center and recombine",
      "rank of a field set at sample points",
      "iterated-bracket closure analysis of a field set",
      "run the built-in verification checks for one model",
  };
  for (int i = 0; i < 6; ++i) {
    CLI::App* sub = app.add_subcommand(tasks[i], blurbs[i]);
    sub->add_option("--config", scenario.config_path, "scenario configuration (JSON)")
        ->required();
    sub->add_option("--out", scenario.out_override, "override the output path");
    sub->add_option("--tol", scenario.tol_override, "override the solver tolerances");
    sub->add_option("--seed", scenario.seed_override, "override the sampling seed");
    sub->callback([&scenario, name = std::string(tasks[i])]() { scenario.task = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : lieco::cli::kConfigError;
  }
  return lieco::cli::run_scenario(scenario);
}
