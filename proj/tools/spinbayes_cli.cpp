#include "spinbayes/config.hpp"
#include "spinbayes/error.hpp"
#include "spinbayes/runner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>

namespace {

using spinbayes::Command;

int fail(int code, const std::string& kind, const std::string& message, const std::string& key = {},
         int line = 0, int column = 0) {
  nlohmann::ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  if (!key.empty()) j["key"] = key;
  if (line > 0) {
    j["line"] = line;
    j["column"] = column;
  }
  std::cerr << j.dump() << std::endl;
  return code;
}

struct Flags {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  int trials = 0;
  unsigned threads = 0;
  bool no_svg = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive Bayesian phase estimation with spin-squeezed states"};
  app.set_version_flag("--version", spinbayes::tool_version());
  app.require_subcommand(1, 1);

  Flags f;
  const std::vector<std::pair<Command, std::string>> commands{
      {Command::phase, "adaptive phase estimation, ideal and reshaped likelihoods"},
      {Command::sweep, "precision vs state-preparation error"},
      {Command::gravimetry, "Bayesian gravimetry over an interrogation-time schedule"},
      {Command::clock, "clock locking and Allan deviation, squeezed vs coherent"},
      {Command::fringe, "fringe fitting baseline vs squeezing"},
      {Command::noise_check, "generate colored noise and check spectral slopes"}};
  std::map<CLI::App*, Command> subs;
  std::map<CLI::App*, std::array<CLI::Option*, 3>> overrides;
  for (const auto& [cmd, desc] : commands) {
    CLI::App* sc = app.add_subcommand(spinbayes::to_string(cmd), desc);
    sc->add_option("--config", f.config, "TOML config, or a manifest.json to re-run");
    sc->add_option("--out", f.out, "output directory (default $SPINBAYES_OUT/<subcommand>)");
    auto* seed = sc->add_option("--seed", f.seed, "RNG seed, overrides the config");
    auto* trials = sc->add_option("--trials", f.trials, "trial count, overrides the config");
    auto* threads = sc->add_option("--threads", f.threads, "worker threads (0 = all cores)");
    sc->add_flag("--no-svg", f.no_svg, "skip SVG plots");
    subs[sc] = cmd;
    overrides[sc] = {seed, trials, threads};
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(2, "usage", e.what());
  }

  CLI::App* sc = app.get_subcommands().front();
  const Command cmd = subs.at(sc);
  const auto [seed_opt, trials_opt, threads_opt] = overrides.at(sc);

  try {
    spinbayes::RunConfig cfg = f.config.empty() ? spinbayes::parse_config(cmd, "", "<defaults>")
                                                : spinbayes::parse_config_file(cmd, f.config);
    if (seed_opt->count()) cfg.seed = f.seed;
    if (threads_opt->count()) cfg.threads = f.threads;
    if (trials_opt->count()) {
      if (cmd == Command::noise_check) throw spinbayes::ConfigError("trials: not used by noise-check", "trials");
      cfg.trials = f.trials;
    }
    spinbayes::validate(cfg);

    std::filesystem::path out = f.out;
    if (out.empty()) {
      const char* root = std::getenv("SPINBAYES_OUT");
      out = std::filesystem::path(root && *root ? root : "spinbayes_out") / spinbayes::to_string(cmd);
    }
    const spinbayes::RunReport rep = spinbayes::run(cfg, {out, !f.no_svg}, std::cout);
    std::cout << "wrote " << rep.outputs.size() << " files to " << out.string() << " in " << rep.seconds
              << " s\n";
    return 0;
  } catch (const spinbayes::ConfigError& e) {
    return fail(2, "config", e.what(), e.key(), e.line(), e.column());
  } catch (const spinbayes::IoError& e) {
    return fail(4, "io", e.what());
  } catch (const spinbayes::ScenarioError& e) {
    return fail(3, "scenario", e.what());
  } catch (const spinbayes::DomainError& e) {
    return fail(3, "domain", e.what());
  } catch (const std::exception& e) {
    return fail(3, "internal", e.what());
  }
}
