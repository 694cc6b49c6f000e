// alearn: experiment driver for the plug-in active learner.
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "alearn/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Plug-in active learning experiments: run, rates, verify, minimax-check"};
  app.require_subcommand(1);
  // Global flags are accepted after the subcommand name as well.
  app.fallthrough();

  std::string config_path;
  // Each flag overrides the key of the same name from --config.
  std::vector<std::pair<std::string, std::string>> overrides;
  std::vector<std::pair<std::string, std::string*>> flag_values;
  auto add_flag = [&](const std::string& key, const std::string& help) {
    auto* storage = new std::string;  // lives for the process
    app.add_option("--" + key, *storage, help);
    flag_values.emplace_back(key, storage);
  };
  app.add_option("--config", config_path, "key=value config file")->check(CLI::ExistingFile);
  add_flag("seed", "master seed (64-bit)");
  add_flag("budget", "label budget, or a comma-separated list of budgets");
  add_flag("budgets", "comma-separated list of budgets (alias of --budget)");
  add_flag("alpha", "confidence level alpha in (0,1)");
  add_flag("problem", "problem name: ramp1d, tent1d, gradient2d, convex1d, minimax, shifted_ramp1d");
  add_flag("out", "CSV output path ('-' for standard output)");
  add_flag("jobs", "worker threads");
  add_flag("replications", "replications per budget");
  add_flag("K1", "penalty constant");
  add_flag("band_D", "band constant");
  add_flag("variant", "1a or 1b");
  add_flag("q", "minimax grid parameter");
  add_flag("dim", "minimax dimension");

  auto* run = app.add_subcommand("run", "active learner runs, one CSV row per iteration plus a summary row per run");
  auto* rates = app.add_subcommand("rates", "active vs passive mean excess risk across budgets and fitted slopes");
  auto* minimax = app.add_subcommand("minimax-check", "certificates of the lower-bound construction");
  auto* verify = app.add_subcommand("verify", "acceptance suite; exit code 0 iff every criterion passes");
  std::string suite = "all";
  verify->add_option("suite", suite, "all, quick, a criterion number 1..10 or its name");

  CLI11_PARSE(app, argc, argv);

  alearn::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = alearn::load_config(config_path);
    for (const auto& [key, value] : flag_values) {
      if (app.count("--" + key) > 0) alearn::apply_setting(cfg, key, *value);
    }
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  }

  if (run->parsed()) return alearn::cmd_run(cfg, std::cout, std::cerr);
  if (rates->parsed()) return alearn::cmd_rates(cfg, std::cout, std::cerr);
  if (minimax->parsed()) return alearn::cmd_minimax_check(cfg, std::cout, std::cerr);
  if (verify->parsed()) return alearn::cmd_verify(suite, cfg, std::cout, std::cerr);
  return 2;
}
