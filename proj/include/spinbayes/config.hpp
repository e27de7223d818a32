#pragma once

#include "spinbayes/bayes.hpp"
#include "spinbayes/clock_stability.hpp"
#include "spinbayes/collective_spin.hpp"
#include "spinbayes/fringe_fit.hpp"
#include "spinbayes/gravimetry.hpp"
#include "spinbayes/noise.hpp"
#include "spinbayes/session.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace spinbayes {

enum class Command { phase, sweep, gravimetry, clock, fringe, noise_check };

std::string to_string(Command c);
/// ConfigError for names other than phase, sweep, gravimetry, clock, fringe, noise-check.
Command command_from_string(const std::string& s);

/// Probe state as written in a config: at most one of xi, xi_db, s, chi_t; none means coherent.
struct StateSection {
  int n = 200;
  std::string family;  ///< "ansatz", "oat" or "coherent"; filled in during parsing
  std::optional<double> xi;
  std::optional<double> xi_db;
  std::optional<double> s;
  std::optional<double> chi_t;
  std::optional<double> alpha;
  double contrast = 1.0;
};

struct LikelihoodSection {
  std::string mode = "both";  ///< phase only: ideal, reshaped or both
  QpnForm qpn = QpnForm::phase_dependent;
  std::size_t grid = 4096;
  bool depolarization_per_step = true;
};

struct PhaseSection {
  std::optional<double> true_phi;
  int steps = 50;
};

struct SweepSection {
  SweepKind kind = SweepKind::alpha_error;
  std::vector<double> values;
};

struct GravimetrySection {
  std::optional<double> true_g;
  std::optional<double> g_prior;  ///< defaults to true_g
  double k_eff = 1.61e7;
  double t_max = 455e-6;
  double a = 1.3;
  int ramp = 25;
  int steps = 50;
  bool reshaped = true;
};

struct ClockSection {
  int cycles = 400;
  double t_max = 0.141;
  double a = 1.3;
  int ramp = 6;
  int steps = 12;
  double carrier_hz = kDefaultCarrierHz;
  double dead_time = 0.0;
  bool compare_coherent = true;
};

struct FringeSection {
  std::optional<double> true_g;
  std::optional<double> g_center;  ///< defaults to true_g
  double k_eff = 1.61e7;
  double t = 455e-6;
  int points = 50;
  int shots = 1;
  std::vector<double> xis{1.0, 0.53, 0.15, 0.06};
  bool bayes = true;
};

struct NoiseCheckSection {
  std::size_t n = 65536;
  double sigma = 1.0;
};

/// Fully resolved scenario configuration for one subcommand.
struct RunConfig {
  Command command = Command::phase;
  std::optional<std::uint64_t> seed;
  int trials = 100;
  unsigned threads = 0;  ///< 0 = hardware concurrency; never changes results
  StateSection state;
  NoiseSpec noise;
  LikelihoodSection likelihood;
  PhaseSection phase;
  SweepSection sweep;
  GravimetrySection gravimetry;
  ClockSection clock;
  FringeSection fringe;
  NoiseCheckSection noise_check;
};

/// Defaults of a subcommand before any file is read.
RunConfig default_config(Command c);

/// Parses TOML text. ConfigError carries line/column for syntax errors and the dotted key for
/// unknown keys, wrong types and violated constraints.
RunConfig parse_config(Command c, const std::string& text, const std::string& source = "<string>");
/// parse_config on a file; a .json path is read as a run manifest (its resolved config is
/// used and its subcommand must match).
RunConfig parse_config_file(Command c, const std::filesystem::path& path);

/// Range and consistency checks of every field, including the module preconditions.
void validate(const RunConfig& cfg);

/// Resolved config with every default written out; parse_config(to_toml(cfg)) == cfg.
std::string to_toml(const RunConfig& cfg);
/// Same content as a JSON object (for the manifest).
std::string to_json(const RunConfig& cfg);

SqueezedStateModel build_state(const StateSection& s);
SessionConfig session_config(const RunConfig& cfg, bool reshaped);
GravimetryConfig gravimetry_config(const RunConfig& cfg);
ClockConfig clock_config(const RunConfig& cfg);
FringeConfig fringe_config(const RunConfig& cfg);

}  // namespace spinbayes
