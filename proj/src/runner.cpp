#include "spinbayes/runner.hpp"

#include "spinbayes/clock_stability.hpp"
#include "spinbayes/error.hpp"
#include "spinbayes/fringe_fit.hpp"
#include "spinbayes/gravimetry.hpp"
#include "spinbayes/io.hpp"
#include "spinbayes/noise.hpp"
#include "spinbayes/session.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#ifndef SPINBAYES_VERSION
#define SPINBAYES_VERSION "0.0.0"
#endif

namespace spinbayes {

namespace fs = std::filesystem;

std::string tool_version() { return SPINBAYES_VERSION; }

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Context {
  const RunConfig& cfg;
  const RunOptions& opt;
  std::ostream& log;
  std::uint64_t seed;
  RunReport report;

  void csv(const std::string& name, const CsvTable& t) {
    write_csv(opt.out_dir / name, t);
    report.outputs.emplace_back(name);
  }
  void svg(const std::string& name, const PlotSpec& p) {
    if (!opt.svg) return;
    write_text(opt.out_dir / name, render_svg(p));
    report.outputs.emplace_back(name);
  }
};

std::vector<double> steps_axis(std::size_t n) {
  std::vector<double> l(n);
  for (std::size_t i = 0; i < n; ++i) l[i] = static_cast<double>(i + 1);
  return l;
}

void run_phase(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  std::vector<bool> modes;
  if (cfg.likelihood.mode != "reshaped") modes.push_back(false);
  if (cfg.likelihood.mode != "ideal") modes.push_back(true);

  PlotSpec plot{"Adaptive phase estimation", "measurement l", "phase uncertainty (rad)", true, true, {}};
  for (bool reshaped : modes) {
    const SessionConfig sc = session_config(cfg, reshaped);
    std::vector<TrialRecord> records;
    const BatchSummary b = run_batch(sc, cfg.trials, ctx.seed, cfg.threads, &records);
    const std::string tag = reshaped ? "reshaped" : "ideal";

    CsvTable trial{{"trial", "l", "Phi", "m_z", "phi_est", "sigma_phi"}, {}};
    for (std::size_t t = 0; t < records.size(); ++t) {
      const TrialRecord& r = records[t];
      for (std::size_t l = 0; l < r.aux.size(); ++l) {
        trial.add({static_cast<std::int64_t>(t), static_cast<std::int64_t>(l + 1), r.aux[l], r.m_z[l],
                   r.phi_est[l], r.sigma_phi[l]});
      }
    }
    ctx.csv("phase_" + tag + "_trial.csv", trial);

    CsvTable batch{{"l", "mean_sigma", "err_mean", "err_std"}, {}};
    for (std::size_t l = 0; l < b.mean_sigma.size(); ++l) {
      batch.add({static_cast<std::int64_t>(l + 1), b.mean_sigma[l], b.err_mean[l], b.err_std[l]});
    }
    ctx.csv("phase_" + tag + "_batch.csv", batch);

    const std::vector<double> l = steps_axis(b.mean_sigma.size());
    plot.series.push_back({tag + " posterior std", l, b.mean_sigma});
    plot.series.push_back({tag + " error std", l, b.err_std, true});
    ctx.log << tag << ": final mean sigma " << b.mean_sigma.back() << " rad, error std "
            << b.err_std.back() << " rad, resets " << b.resets << "\n";
  }
  const SqueezedStateModel st = build_state(cfg.state);
  std::vector<double> l = steps_axis(static_cast<std::size_t>(cfg.phase.steps)), th;
  for (double x : l) th.push_back(st.working_point_uncertainty() / std::sqrt(x));
  plot.series.push_back({"xi/(C sqrt(N l))", l, th, false, true});
  ctx.svg("phase_precision.svg", plot);
}

void run_sweep(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const SessionConfig sc = session_config(cfg, cfg.likelihood.mode == "reshaped");
  const auto pts = sweep_imperfection(sc, cfg.sweep.kind, cfg.sweep.values, cfg.trials, ctx.seed, cfg.threads);
  const std::string kind = to_string(cfg.sweep.kind);
  CsvTable t{{"value", "xi", "precision", "err_std"}, {}};
  PlotSeries prec{"posterior std", {}, {}, true};
  PlotSeries err{"error std", {}, {}};
  PlotSeries sql{"1/sqrt(N M)", {}, {}, false, true};
  const double ref = 1.0 / std::sqrt(static_cast<double>(cfg.state.n) * cfg.phase.steps);
  for (const SweepPoint& p : pts) {
    t.add({p.value, p.xi, p.precision, p.err_std});
    prec.x.push_back(p.value);
    prec.y.push_back(p.precision);
    err.x.push_back(p.value);
    err.y.push_back(p.err_std);
    sql.x.push_back(p.value);
    sql.y.push_back(ref);
    ctx.log << kind << " " << p.value << ": xi " << p.xi << ", precision " << p.precision << " rad\n";
  }
  ctx.csv("sweep_" + kind + ".csv", t);
  ctx.svg("sweep_" + kind + ".svg",
          {"Precision vs preparation error", kind, "final precision (rad)", false, true, {prec, err, sql}});
}

void run_gravimetry_cmd(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const GravimetryConfig gc = gravimetry_config(cfg);
  const GravimetryCurve curve = run_gravimetry(gc, cfg.trials, ctx.seed, cfg.threads);
  CsvTable t{{"step", "T_l", "total_T", "dg_theory", "dg_batch", "g_est_mean", "dg_posterior"}, {}};
  PlotSeries th{"theory", {}, {}, false, true}, batch{"batch std", {}, {}, true}, post{"posterior std", {}, {}};
  for (const GravimetryPoint& p : curve.points) {
    t.add({std::int64_t{p.step}, p.t, p.total_time, p.dg_theory, p.dg_batch, p.g_est_mean, p.dg_posterior});
    for (PlotSeries* s : {&th, &batch, &post}) s->x.push_back(p.total_time);
    th.y.push_back(p.dg_theory);
    batch.y.push_back(p.dg_batch);
    post.y.push_back(p.dg_posterior);
  }
  ctx.csv("gravimetry.csv", t);
  ctx.svg("gravimetry.svg", {"Bayesian gravimetry", "total interrogation time (s)",
                             "precision (m/s^2)", true, true, {th, batch, post}});

  const int ramp = cfg.gravimetry.ramp, m = cfg.gravimetry.steps;
  const auto slope = [&](const char* name, int first, int last) {
    if (last - first + 1 < 5) return;
    ctx.log << name << " slope over steps " << first << "-" << last << ": theory "
            << fit_scaling_exponent(curve, first, last, CurveColumn::theory) << ", batch "
            << fit_scaling_exponent(curve, first, last, CurveColumn::batch) << "\n";
  };
  slope("ramp", std::max(1, ramp / 2), ramp);
  slope("capped", (ramp + m) / 2, m);
  ctx.log << "final precision " << curve.points.back().dg_batch << " m/s^2 (theory "
          << curve.points.back().dg_theory << "), resets " << curve.resets << "\n";
}

void run_clock_cmd(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const ClockConfig cc = clock_config(cfg);
  const FrequencyRecord rec = run_clock(cc, ctx.seed, 0);
  CsvTable r{{"cycle", "true_offset", "estimate", "residual"}, {}};
  for (std::size_t k = 0; k < rec.residual.size(); ++k) {
    r.add({static_cast<std::int64_t>(k + 1), rec.true_offset[k], rec.estimate[k], rec.residual[k]});
  }
  ctx.csv("clock_record.csv", r);

  const AdevEnsemble sss = median_adev(cc, cfg.trials, ctx.seed, cfg.threads);
  AdevEnsemble scs;
  if (cfg.clock.compare_coherent) {
    ClockConfig coh = cc;
    coh.state = coherent_state(cfg.state.n, cfg.state.contrast);
    scs = median_adev(coh, cfg.trials, ctx.seed, cfg.threads);
  }

  CsvTable a{{"tau", "adev_sss", "adev_scs", "adev_theory"}, {}};
  PlotSeries ps{"SSS", {}, {}}, pc{"SCS", {}, {}}, pt{"noise model", {}, {}, false, true};
  const double strength[3] = {cfg.noise.sigma_w, cfg.noise.sigma_f, cfg.noise.sigma_r};
  for (std::size_t j = 0; j < sss.median.size(); ++j) {
    const double tau = sss.median[j].tau;
    double var = 0.0;
    for (int beta = 0; beta < 3; ++beta) {
      if (strength[beta] > 0.0) var += std::pow(theoretical_adev(beta, strength[beta], tau, sss.tau0), 2);
    }
    const double c = cfg.clock.compare_coherent ? scs.median[j].adev : kNaN;
    a.add({tau, sss.median[j].adev, c, std::sqrt(var)});
    ps.x.push_back(tau);
    ps.y.push_back(sss.median[j].adev);
    pc.x.push_back(tau);
    pc.y.push_back(c);
    pt.x.push_back(tau);
    pt.y.push_back(std::sqrt(var));
  }
  ctx.csv("clock_adev.csv", a);
  std::vector<PlotSeries> series{ps};
  if (cfg.clock.compare_coherent) series.push_back(pc);
  series.push_back(pt);
  ctx.svg("clock_adev.svg", {"Clock stability", "tau (s)", "Allan deviation", true, true, series});
  ctx.log << "cycle " << sss.tau0 << " s, " << cfg.trials << " runs; flagged cycles SSS " << sss.flagged;
  if (cfg.clock.compare_coherent) ctx.log << ", SCS " << scs.flagged;
  ctx.log << "\n";
}

void run_fringe_cmd(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const FringeConfig fc = fringe_config(cfg);
  const auto pts = precision_vs_squeezing(cfg.fringe.xis, fc, cfg.trials, ctx.seed, cfg.threads, cfg.fringe.bayes);
  const double sql = fringe_sql(fc);

  CsvTable data{{"xi", "g", "P_e", "P_fit"}, {}};
  for (std::size_t x = 0; x < cfg.fringe.xis.size(); ++x) {
    const double xi = cfg.fringe.xis[x];
    const FringeSample s = simulate_fringe_trial(fc, xi, x, ctx.seed, 0);
    const double kt2 = fc.k_eff * fc.t * fc.t;
    SineFit fit{kNaN, kNaN, kNaN, kNaN, 0};
    try {
      fit = fit_sine(s, fc.g_center);
    } catch (const FitError&) {
    }
    PlotSeries meas{"P_e", s.g, s.p_e, true}, model{"fit", {}, {}};
    for (std::size_t i = 0; i < s.g.size(); ++i) {
      const double p = fit.amplitude * std::sin(kt2 * (fit.g_est - s.g[i])) + fit.offset;
      data.add({xi, s.g[i], s.p_e[i], p});
    }
    const double lo = s.g.front(), hi = s.g.back();
    for (int i = 0; i <= 400; ++i) {
      const double g = lo + (hi - lo) * i / 400.0;
      model.x.push_back(g);
      model.y.push_back(fit.amplitude * std::sin(kt2 * (fit.g_est - g)) + fit.offset);
    }
    ctx.svg("fringe_xi_" + format_double(xi) + ".svg",
            {"Fringe and sine fit, xi = " + format_double(xi), "g (m/s^2)", "P_e", false, false, {meas, model}});
  }
  ctx.csv("fringe_data.csv", data);

  CsvTable t{{"xi", "precision_mean", "precision_std", "excluded", "bayes_mean", "bayes_std"}, {}};
  PlotSeries pf{"fringe fit", {}, {}, true}, pb{"Bayesian", {}, {}, true}, ps{"SQL", {}, {}, false, true};
  for (const SqueezingPrecision& p : pts) {
    const double bm = cfg.fringe.bayes ? p.bayes_mean : kNaN;
    const double bs = cfg.fringe.bayes ? p.bayes_std : kNaN;
    t.add({p.xi, p.precision_mean, p.precision_std, std::int64_t{p.excluded}, bm, bs});
    pf.x.push_back(p.xi);
    pf.y.push_back(p.precision_mean);
    pb.x.push_back(p.xi);
    pb.y.push_back(bm);
    ps.x.push_back(p.xi);
    ps.y.push_back(sql * std::sqrt(2.0 / std::numbers::pi));
    ctx.log << "xi " << p.xi << ": fit " << p.precision_mean << " m/s^2 (" << p.excluded << " excluded)";
    if (cfg.fringe.bayes) ctx.log << ", Bayesian " << p.bayes_mean << " m/s^2";
    ctx.log << "\n";
  }
  ctx.csv("fringe_precision.csv", t);
  std::vector<PlotSeries> series{pf};
  if (cfg.fringe.bayes) series.push_back(pb);
  series.push_back(ps);
  ctx.svg("fringe_precision.svg", {"Mean |g error| vs squeezing", "xi", "m/s^2", true, true, series});
}

void run_noise_check(Context& ctx) {
  const NoiseCheckSection& nc = ctx.cfg.noise_check;
  Rng rw(ctx.seed, Rng::stream_id(0, Rng::Purpose::generic));
  Rng rf(ctx.seed, Rng::stream_id(1, Rng::Purpose::generic));
  Rng rr(ctx.seed, Rng::stream_id(2, Rng::Purpose::generic));
  const NoiseSeries series[3] = {white_noise(nc.n, nc.sigma, rw), flicker_noise(nc.n, nc.sigma, rf),
                                 random_walk_noise(nc.n, nc.sigma, rr)};
  CsvTable s{{"index", "white", "flicker", "random_walk"}, {}};
  for (std::size_t i = 0; i < nc.n; ++i) {
    s.add({static_cast<std::int64_t>(i), series[0].samples[i], series[1].samples[i], series[2].samples[i]});
  }
  ctx.csv("noise_series.csv", s);

  CsvTable p{{"frequency", "power", "color"}, {}};
  PlotSpec plot{"Noise power spectra", "frequency", "power", true, true, {}};
  for (const NoiseSeries& ns : series) {
    const Spectrum sp = periodogram(ns);
    const SlopeFit fit = fit_psd_slope(sp);
    for (std::size_t i = 0; i < sp.frequency.size(); ++i) p.add({sp.frequency[i], sp.power[i], to_string(ns.color)});
    plot.series.push_back({to_string(ns.color), sp.frequency, sp.power});
    ctx.log << to_string(ns.color) << " PSD slope " << fit.beta << "\n";
  }
  ctx.csv("noise_psd.csv", p);
  ctx.svg("noise_psd.svg", plot);
}

nlohmann::ordered_json derived(const RunConfig& cfg) {
  nlohmann::ordered_json d = nlohmann::ordered_json::object();
  const bool full_state = cfg.command == Command::phase || cfg.command == Command::gravimetry ||
                          cfg.command == Command::clock;
  if (full_state) {
    const SqueezedStateModel m = build_state(cfg.state);
    d["xi"] = m.xi;
    d["amplitude"] = m.amplitude;
    d["tan2_coeff"] = m.tan2_coeff;
    d["phase_uncertainty"] = m.working_point_uncertainty();
  }
  if (cfg.command == Command::gravimetry) {
    const auto [lo, hi] = gravimetry_window(gravimetry_config(cfg));
    d["g_window"] = {lo, hi};
  }
  if (cfg.command == Command::clock) d["cycle_duration"] = clock_config(cfg).cycle_duration();
  if (cfg.command == Command::fringe) d["sql_per_scan"] = fringe_sql(fringe_config(cfg));
  return d;
}

}  // namespace

RunReport run(const RunConfig& cfg, const RunOptions& opt, std::ostream& log) {
  if (!cfg.seed) throw ConfigError("seed: no seed in the config and none given on the command line", "seed");
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  std::error_code ec;
  fs::create_directories(opt.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + opt.out_dir.string() + ": " + ec.message());

  Context ctx{cfg, opt, log, *cfg.seed, {}};
  switch (cfg.command) {
    case Command::phase: run_phase(ctx); break;
    case Command::sweep: run_sweep(ctx); break;
    case Command::gravimetry: run_gravimetry_cmd(ctx); break;
    case Command::clock: run_clock_cmd(ctx); break;
    case Command::fringe: run_fringe_cmd(ctx); break;
    case Command::noise_check: run_noise_check(ctx); break;
  }

  const std::string toml = to_toml(cfg);
  write_text(opt.out_dir / "resolved.toml", toml);
  ctx.report.outputs.emplace_back("resolved.toml");
  ctx.report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  nlohmann::ordered_json m;
  m["subcommand"] = to_string(cfg.command);
  m["version"] = tool_version();
  m["seed"] = *cfg.seed;
  m["config"] = nlohmann::ordered_json::parse(to_json(cfg));
  m["config_toml"] = toml;
  m["derived"] = derived(cfg);
  m["outputs"] = nlohmann::ordered_json::array();
  for (const fs::path& p : ctx.report.outputs) m["outputs"].push_back(p.generic_string());
  m["outputs"].push_back("manifest.json");
  m["duration_s"] = ctx.report.seconds;
  write_text(opt.out_dir / "manifest.json", m.dump(2) + "\n");
  ctx.report.outputs.emplace_back("manifest.json");
  return ctx.report;
}

}  // namespace spinbayes
