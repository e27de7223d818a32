#include "spinbayes/gravimetry.hpp"

#include "spinbayes/error.hpp"
#include "spinbayes/parallel.hpp"
#include "spinbayes/rng.hpp"
#include "spinbayes/session.hpp"

#include <cmath>
#include <numbers>

namespace spinbayes {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

PhaseModel PhaseModel::gravimetry(double k_eff) { return {k_eff, 2, "g", "m/s^2"}; }

PhaseModel PhaseModel::clock() { return {1.0, 1, "omega", "rad/s"}; }

double PhaseModel::scale(double t) const { return coefficient * std::pow(t, exponent); }

double phase_from_parameter(const PhaseModel& pm, double gamma, double t) {
  if (!(t > 0.0)) throw DomainError("interrogation time must be > 0");
  return pm.scale(t) * gamma;
}

double Schedule::total_time(int l) const {
  double sum = 0.0;
  for (int j = 0; j < l && j < static_cast<int>(times.size()); ++j) sum += times[j];
  return sum;
}

Schedule build_schedule(double t_max, double a, int ramp, int total) {
  if (!(a > 1.0)) throw DomainError("growth ratio a must exceed 1");
  if (!(t_max > 0.0)) throw DomainError("T_max must be > 0");
  if (ramp < 1 || ramp > total) throw DomainError("need 1 <= M_a <= M");
  Schedule s{{}, t_max, a, ramp, total};
  s.times.reserve(static_cast<std::size_t>(total));
  for (int l = 1; l <= total; ++l) {
    s.times.push_back(l < ramp ? t_max / std::pow(a, ramp - l) : t_max);
  }
  return s;
}

double theoretical_precision(const Schedule& sched, int l, const SqueezedStateModel& state,
                             const PhaseModel& pm) {
  if (l < 1 || l > static_cast<int>(sched.times.size())) {
    throw DomainError("step index outside the schedule");
  }
  double sum = 0.0;
  for (int j = 0; j < l; ++j) {
    const double s = std::pow(sched.times[j], pm.exponent);
    sum += s * s;
  }
  return state.xi / (state.contrast * pm.coefficient * std::sqrt(state.n * sum));
}

void validate(const GravimetryConfig& cfg) {
  validate(cfg.state);
  validate(cfg.noise);
  if (cfg.schedule.times.empty()) throw DomainError("empty interrogation schedule");
  if (!(cfg.phase.coefficient > 0.0)) throw DomainError("phase coefficient must be > 0");
  if (cfg.grid < 64) throw DomainError("posterior grid needs at least 64 nodes");
}

std::pair<double, double> gravimetry_window(const GravimetryConfig& cfg) {
  const double period = kTwoPi / cfg.phase.scale(cfg.schedule.times.front());
  return {cfg.g_prior - 0.5 * period, cfg.g_prior + 0.5 * period};
}

GravimetryTrial run_gravimetry_trial(const GravimetryConfig& cfg, std::uint64_t seed,
                                     std::uint64_t trial) {
  validate(cfg);
  const auto [lo, hi] = gravimetry_window(cfg);
  if (!(cfg.true_g >= lo && cfg.true_g < hi)) {
    throw DynamicRangeError("true parameter outside the unambiguous window [" + std::to_string(lo) +
                            ", " + std::to_string(hi) + ") of the shortest interrogation time");
  }
  Rng meas(seed, Rng::stream_id(trial, Rng::Purpose::measurement));
  Rng noise_rng(seed, Rng::stream_id(trial, Rng::Purpose::phase_noise));
  Rng depol(seed, Rng::stream_id(trial, Rng::Purpose::depolarization));

  const std::size_t steps = cfg.schedule.times.size();
  const std::vector<double> accel_noise = noise_mix(cfg.noise, steps, noise_rng);

  LikelihoodModel model{cfg.state, 0.0, cfg.reshaped, 0.0, cfg.noise.p_d, cfg.qpn};
  AdaptiveEstimator est(model, lo, hi, cfg.grid, true);

  GravimetryTrial out;
  out.g_est.reserve(steps);
  out.sigma.reserve(steps);
  double center = cfg.g_prior;
  for (std::size_t l = 0; l < steps; ++l) {
    const double k = cfg.phase.scale(cfg.schedule.times[l]);
    const ShotNoise shot{sample_depolarization(cfg.noise.p_d, depol), k * accel_noise[l]};
    const double m = simulate_measurement(cfg.state, k * (cfg.true_g - center), 0.0, shot, meas);
    est.observe({k, center, m, k * cfg.noise.combined()});
    out.g_est.push_back(est.stats().mean);
    out.sigma.push_back(est.stats().std);
    center = out.g_est.back();
  }
  out.resets = est.resets();
  return out;
}

GravimetryCurve run_gravimetry(const GravimetryConfig& cfg, int trials, std::uint64_t seed,
                               unsigned threads) {
  if (trials < 2) throw DomainError("a batch needs at least 2 trials");
  validate(cfg);
  std::vector<GravimetryTrial> runs(static_cast<std::size_t>(trials));
  parallel_for(runs.size(), threads,
               [&](std::size_t i) { runs[i] = run_gravimetry_trial(cfg, seed, i); });

  GravimetryCurve curve;
  curve.trials = trials;
  for (const auto& r : runs) curve.resets += r.resets;
  const double n = static_cast<double>(trials);
  for (std::size_t l = 0; l < cfg.schedule.times.size(); ++l) {
    GravimetryPoint p;
    p.step = static_cast<int>(l) + 1;
    p.t = cfg.schedule.times[l];
    p.total_time = cfg.schedule.total_time(p.step);
    p.dg_theory = theoretical_precision(cfg.schedule, p.step, cfg.state, cfg.phase);
    for (const auto& r : runs) {
      p.g_est_mean += r.g_est[l] / n;
      p.dg_posterior += r.sigma[l] / n;
    }
    double var = 0.0;
    for (const auto& r : runs) var += (r.g_est[l] - cfg.true_g) * (r.g_est[l] - cfg.true_g);
    const double bias = p.g_est_mean - cfg.true_g;
    p.dg_batch = std::sqrt(std::max(0.0, (var - n * bias * bias) / (n - 1.0)));
    curve.points.push_back(p);
  }
  return curve;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 5) {
    throw DomainError("log-log fit needs at least 5 points");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("log-log fit needs positive values");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double m = static_cast<double>(x.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double fit_scaling_exponent(const GravimetryCurve& curve, int first, int last, CurveColumn column) {
  if (first < 1 || last > static_cast<int>(curve.points.size()) || last - first + 1 < 5) {
    throw DomainError("scaling fit window needs at least 5 steps inside the curve");
  }
  std::vector<double> x;
  std::vector<double> y;
  for (int l = first; l <= last; ++l) {
    const GravimetryPoint& p = curve.points[static_cast<std::size_t>(l - 1)];
    x.push_back(p.total_time);
    y.push_back(column == CurveColumn::theory  ? p.dg_theory
                : column == CurveColumn::batch ? p.dg_batch
                                               : p.dg_posterior);
  }
  return fit_loglog_slope(x, y);
}

}  // namespace spinbayes
