#include "spinbayes/config.hpp"
#include "spinbayes/error.hpp"
#include "spinbayes/io.hpp"
#include "spinbayes/runner.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

using namespace spinbayes;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("spinbayes_unit_" + name);
  fs::remove_all(p);
  return p;
}

ConfigError config_error(Command c, const std::string& text) {
  try {
    parse_config(c, text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected ConfigError");
  return ConfigError("");
}

}  // namespace

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 9.80665, 1e-18, -2.5e300, 0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("missing required fields name the key") {
  const ConfigError e = config_error(Command::gravimetry, "");
  CHECK(e.key() == "gravimetry.true_g");
  CHECK(config_error(Command::phase, "seed = 1\n").key() == "phase.true_phi");
}

TEST_CASE("clock config from a squeezing level in dB") {
  const RunConfig c = parse_config(Command::clock, "seed = 4\n[state]\nxi_db = -5.1\n");
  const ClockConfig cc = clock_config(c);
  CHECK(cc.state.xi == doctest::Approx(0.556).epsilon(2e-3));
  CHECK(cc.state.n == 30000);
  CHECK(cc.schedule.times.size() == 12u);
  CHECK(cc.schedule.times.back() == doctest::Approx(0.141));
}

TEST_CASE("invalid values are rejected with their key") {
  const ConfigError e = config_error(Command::gravimetry, "[gravimetry]\ntrue_g = 9.8\na = 0.9\n");
  CHECK(e.key() == "gravimetry.a");
  CHECK(std::string(e.what()).find("growth ratio") != std::string::npos);
  CHECK(config_error(Command::clock, "[clock]\ncycles = 10\n").key() == "clock.cycles");
  CHECK(config_error(Command::phase, "[phase]\ntrue_phi = 0.1\n[state]\nN = 1\n").key().rfind("state", 0) == 0);
}

TEST_CASE("unknown keys and syntax errors carry a location") {
  const ConfigError u = config_error(Command::phase, "[phase]\ntrue_phi = 0.1\nbogus = 1\n");
  CHECK(u.key() == "phase.bogus");
  CHECK(u.line() == 3);
  const ConfigError s = config_error(Command::phase, "[phase\n");
  CHECK(s.line() == 1);
  CHECK(s.column() > 0);
  CHECK(config_error(Command::noise_check, "trials = 5\n").key() == "trials");
  CHECK(config_error(Command::phase, "[phase]\ntrue_phi = \"x\"\n").key() == "phase.true_phi");
}

TEST_CASE("resolved TOML round-trips") {
  for (Command c : {Command::phase, Command::sweep, Command::gravimetry, Command::clock, Command::fringe,
                    Command::noise_check}) {
    std::string extra = "seed = 11\n";
    if (c == Command::phase || c == Command::sweep) extra += "[phase]\ntrue_phi = 0.37\n";
    if (c == Command::gravimetry) extra += "[gravimetry]\ntrue_g = 9.81\n";
    if (c == Command::fringe) extra += "[fringe]\ntrue_g = 9.8\n";
    const std::string once = to_toml(parse_config(c, extra));
    CHECK(to_toml(parse_config(c, once)) == once);
  }
}

TEST_CASE("phase run writes its tables and a manifest") {
  const fs::path out = scratch("phase");
  const RunConfig c = parse_config(Command::phase,
                                   "seed = 3\ntrials = 4\n[state]\nN = 200\nxi = 0.53\n"
                                   "[phase]\ntrue_phi = 0.4\nsteps = 10\n[likelihood]\ngrid = 512\n");
  std::ostringstream log;
  const RunReport r = run(c, {out, false}, log);
  int csv = 0;
  for (const auto& p : r.outputs) csv += p.extension() == ".csv";
  CHECK(csv == 4);
  CHECK(fs::exists(out / "manifest.json"));
  CHECK(fs::exists(out / "resolved.toml"));
  CHECK(read_text(out / "phase_ideal_batch.csv").rfind("l,mean_sigma,err_mean,err_std", 0) == 0);
  fs::remove_all(out);
}

TEST_CASE("manifest re-run is thread independent") {
  const fs::path a = scratch("rerun_a"), b = scratch("rerun_b");
  RunConfig c = parse_config(Command::phase,
                             "seed = 8\ntrials = 6\nthreads = 1\n[state]\nN = 100\n"
                             "[phase]\ntrue_phi = -0.2\nsteps = 8\n[likelihood]\ngrid = 512\n");
  std::ostringstream log;
  run(c, {a, false}, log);
  RunConfig again = parse_config_file(Command::phase, a / "manifest.json");
  again.threads = 3;
  run(again, {b, false}, log);
  for (const char* f : {"phase_ideal_trial.csv", "phase_ideal_batch.csv", "phase_reshaped_trial.csv",
                        "phase_reshaped_batch.csv"}) {
    CHECK(read_text(a / f) == read_text(b / f));
  }
  CHECK_THROWS_AS(parse_config_file(Command::clock, a / "manifest.json"), ConfigError);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("noise check reports spectral slopes") {
  const fs::path out = scratch("noise");
  std::ostringstream log;
  run(parse_config(Command::noise_check, "seed = 2\n[noise_check]\nn = 8192\n"), {out, true}, log);
  CHECK(log.str().find("random_walk PSD slope") != std::string::npos);
  CHECK(fs::exists(out / "noise_psd.svg"));
  fs::remove_all(out);
}

TEST_CASE("io errors") {
  CHECK_THROWS_AS(read_text("/nonexistent/spinbayes/file"), IoError);
  CHECK_THROWS_AS(write_text("/proc/spinbayes_forbidden/x.csv", "x"), IoError);
  CHECK_THROWS_AS(parse_config_file(Command::phase, "/nonexistent.toml"), ConfigError);
}
