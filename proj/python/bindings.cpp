#include "spinbayes/clock_stability.hpp"
#include "spinbayes/collective_spin.hpp"
#include "spinbayes/config.hpp"
#include "spinbayes/error.hpp"
#include "spinbayes/exact_oracle.hpp"
#include "spinbayes/fringe_fit.hpp"
#include "spinbayes/gravimetry.hpp"
#include "spinbayes/noise.hpp"
#include "spinbayes/runner.hpp"
#include "spinbayes/session.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace spinbayes;

namespace {

StateFamily family_from(const std::string& s) {
  if (s == "oat") return StateFamily::oat;
  if (s == "ansatz") return StateFamily::ansatz;
  if (s == "coherent") return StateFamily::coherent;
  throw DomainError("family must be oat, ansatz or coherent");
}

NoiseSeries make_noise(const std::string& color, std::size_t n, double sigma, std::uint64_t seed,
                       std::uint64_t stream) {
  Rng rng(seed, stream);
  if (color == "white") return white_noise(n, sigma, rng);
  if (color == "flicker") return flicker_noise(n, sigma, rng);
  if (color == "random_walk") return random_walk_noise(n, sigma, rng);
  throw DomainError("color must be white, flicker or random_walk");
}

}  // namespace

PYBIND11_MODULE(_spinbayes, m) {
  m.doc() = "Adaptive Bayesian phase estimation with spin-squeezed states";
  m.attr("__version__") = tool_version();

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<SqueezedStateModel>(m, "SqueezedStateModel")
      .def_readonly("n", &SqueezedStateModel::n)
      .def_readonly("xi", &SqueezedStateModel::xi)
      .def_readonly("amplitude", &SqueezedStateModel::amplitude)
      .def_readonly("contrast", &SqueezedStateModel::contrast)
      .def_readonly("tan2_coeff", &SqueezedStateModel::tan2_coeff)
      .def("phase_uncertainty", &SqueezedStateModel::phase_uncertainty, py::arg("t"))
      .def("outcome_spread", &SqueezedStateModel::outcome_spread, py::arg("t"))
      .def("__repr__", [](const SqueezedStateModel& s) {
        std::ostringstream os;
        os << "SqueezedStateModel(n=" << s.n << ", xi=" << s.xi << ", amplitude=" << s.amplitude
           << ", contrast=" << s.contrast << ")";
        return os.str();
      });

  m.def("squeezing_parameter",
        [](int n, double chi_t, double alpha) { return squeezing_parameter({n, chi_t, alpha}); },
        py::arg("n"), py::arg("chi_t"), py::arg("alpha"));
  m.def("optimal_twist_time", &optimal_twist_time, py::arg("n"), py::arg("chi") = 1.0);
  m.def("optimal_rotation_angle", &optimal_rotation_angle, py::arg("n"), py::arg("chi_t"));
  m.def("optimal_squeezing", &optimal_squeezing, py::arg("n"), py::arg("chi_t"));
  m.def("mean_jz", [](int n, double chi_t, double alpha, double phi) { return mean_jz({n, chi_t, alpha}, phi); },
        py::arg("n"), py::arg("chi_t"), py::arg("alpha"), py::arg("phi"));
  m.def("mean_jz2", [](int n, double chi_t, double alpha, double phi) { return mean_jz2({n, chi_t, alpha}, phi); },
        py::arg("n"), py::arg("chi_t"), py::arg("alpha"), py::arg("phi"));
  m.def("exact_moments",
        [](int n, double chi_t, double alpha, double phi) {
          const oracle::ExactMoments e = oracle::exact_oat_moments({n, chi_t, alpha}, phi);
          py::dict d;
          d["mean_jz"] = e.mean_jz;
          d["mean_jz2"] = e.mean_jz2;
          d["dmean_jz_dphi"] = e.dmean_jz_dphi;
          d["xi"] = e.xi;
          return d;
        },
        py::arg("n"), py::arg("chi_t"), py::arg("alpha"), py::arg("phi"),
        "Moments from the dense state vector (n <= 14).");
  m.def("xi_from_db", &xi_from_db, py::arg("xi2_db"));
  m.def("coherent_state", &coherent_state, py::arg("n"), py::arg("contrast") = 1.0);
  m.def("state_from_xi",
        [](int n, double xi, double contrast, const std::string& family) {
          return model_from_xi(n, xi, contrast, family_from(family));
        },
        py::arg("n"), py::arg("xi"), py::arg("contrast") = 1.0, py::arg("family") = "oat");

  m.def("noise",
        [](const std::string& color, std::size_t n, double sigma, std::uint64_t seed, std::uint64_t stream) {
          return make_noise(color, n, sigma, seed, stream).samples;
        },
        py::arg("color"), py::arg("n"), py::arg("sigma"), py::arg("seed"), py::arg("stream") = 0);
  m.def("psd_slope",
        [](const std::vector<double>& x, double dt) { return fit_psd_slope(periodogram(x, dt)).beta; },
        py::arg("samples"), py::arg("dt") = 1.0, "Negated log-log slope of the averaged periodogram.");
  m.def("allan_deviation",
        [](const std::vector<double>& y, double tau0, std::vector<int> factors) {
          if (factors.empty()) factors = octave_factors(y.size());
          std::vector<std::pair<double, double>> out;
          for (const AdevPoint& p : allan_deviation(y, tau0, factors)) out.emplace_back(p.tau, p.adev);
          return out;
        },
        py::arg("y"), py::arg("tau0") = 1.0, py::arg("factors") = std::vector<int>{},
        "Overlapping Allan deviation as (tau, adev) pairs; octave factors by default.");
  m.def("theoretical_adev", &theoretical_adev, py::arg("beta"), py::arg("strength"), py::arg("tau"),
        py::arg("tau0"));

  m.def("phase_batch",
        [](const SqueezedStateModel& state, double true_phi, int steps, int trials, std::uint64_t seed,
           bool reshaped, double sigma_w, double p_d, std::size_t grid, unsigned threads) {
          SessionConfig c;
          c.state = state;
          c.true_phi = true_phi;
          c.steps = steps;
          c.reshaped = reshaped;
          c.noise.sigma_w = sigma_w;
          c.noise.p_d = p_d;
          c.grid = grid;
          BatchSummary b;
          {
            py::gil_scoped_release release;
            b = run_batch(c, trials, seed, threads);
          }
          py::dict d;
          d["mean_sigma"] = b.mean_sigma;
          d["err_mean"] = b.err_mean;
          d["err_std"] = b.err_std;
          d["resets"] = b.resets;
          return d;
        },
        py::arg("state"), py::arg("true_phi"), py::arg("steps") = 50, py::arg("trials") = 100,
        py::arg("seed") = 0, py::arg("reshaped") = false, py::arg("sigma_w") = 0.0, py::arg("p_d") = 0.0,
        py::arg("grid") = 4096, py::arg("threads") = 0);

  m.def("fit_sine",
        [](const std::vector<double>& g, const std::vector<double>& p_e, double t, double k_eff, double init) {
          const SineFit f = fit_sine({g, p_e, t, k_eff, 1}, init);
          py::dict d;
          d["g_est"] = f.g_est;
          d["dg_fit"] = f.dg_fit;
          d["amplitude"] = f.amplitude;
          d["offset"] = f.offset;
          return d;
        },
        py::arg("g"), py::arg("p_e"), py::arg("t"), py::arg("k_eff"), py::arg("init"));

  m.def("resolve_config",
        [](const std::string& subcommand, const std::string& text) {
          return to_toml(parse_config(command_from_string(subcommand), text));
        },
        py::arg("subcommand"), py::arg("toml") = "",
        "Parse and validate a config; returns the resolved TOML with all defaults.");
  m.def("run",
        [](const std::string& subcommand, const std::string& text, const std::string& out_dir, bool svg) {
          const RunConfig cfg = parse_config(command_from_string(subcommand), text);
          std::ostringstream log;
          RunReport rep;
          {
            py::gil_scoped_release release;
            rep = run(cfg, {out_dir, svg}, log);
          }
          std::vector<std::string> files;
          for (const auto& p : rep.outputs) files.push_back(p.generic_string());
          return py::make_tuple(files, log.str());
        },
        py::arg("subcommand"), py::arg("toml"), py::arg("out_dir"), py::arg("svg") = true,
        "Run a CLI subcommand in-process; returns (output files, summary text).");
}
