#include "spinbayes/session.hpp"

#include "spinbayes/error.hpp"
#include "spinbayes/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace spinbayes {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZoomTrigger = 48.0;
constexpr double kZoomHalfWidth = 12.0;
constexpr double kEdgeMargin = 4.0;

}  // namespace

double wrap_phase(double x) {
  double r = std::remainder(x, 2.0 * kPi);
  if (r >= kPi) r -= 2.0 * kPi;
  return r;
}

AdaptiveEstimator::AdaptiveEstimator(LikelihoodModel model, double lo, double hi,
                                     std::size_t nodes, bool periodic)
    : model_(std::move(model)),
      kernel_(model_),
      lo0_(lo),
      hi0_(hi),
      periodic0_(periodic),
      nodes_(nodes),
      posterior_(Posterior::uniform(lo, hi, nodes, periodic)) {
  validate(model_);
  stats_ = posterior_stats(posterior_);
}

double AdaptiveEstimator::log_likelihood(const Observation& obs, double x) const {
  return kernel_.log_density(obs.m_z, obs.scale * (x - obs.center), obs.sigma_n);
}

void AdaptiveEstimator::observe(const Observation& obs) {
  std::vector<double> w(posterior_.size());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = log_likelihood(obs, posterior_.node(i));
    peak = std::max(peak, w[i]);
  }
  for (double& v : w) v = std::exp(v - peak);

  try {
    posterior_.update(w);
    history_.push_back(obs);
  } catch (const DegeneratePosterior&) {
    ++resets_;
    history_.clear();
    history_.push_back(obs);
    rebuild(lo0_, hi0_, periodic0_);
  }
  stats_ = posterior_stats(posterior_);

  // A zoom may reveal an even narrower posterior; a few passes settle it.
  for (int pass = 0; pass < 4 && needs_regrid(); ++pass) {
    const double half = std::min(kZoomHalfWidth * std::max(stats_.std, 2.0 * posterior_.spacing()),
                                 0.5 * (hi0_ - lo0_));
    rebuild(stats_.mean - half, stats_.mean + half, false);
    ++regrids_;
  }
}

bool AdaptiveEstimator::needs_regrid() const {
  const double span = posterior_.hi() - posterior_.lo();
  if (stats_.std < span / kZoomTrigger) return true;
  if (posterior_.periodic()) return false;
  const double margin = kEdgeMargin * stats_.std;
  const bool at_edge = stats_.mean - posterior_.lo() < margin || posterior_.hi() - stats_.mean < margin;
  return at_edge && span < (hi0_ - lo0_);
}

void AdaptiveEstimator::rebuild(double lo, double hi, bool periodic) {
  const double h = (hi - lo) / static_cast<double>(nodes_);
  std::vector<double> logd(nodes_, 0.0);
  for (std::size_t i = 0; i < nodes_; ++i) {
    const double x = lo + h * static_cast<double>(i);
    for (const Observation& o : history_) logd[i] += log_likelihood(o, x);
  }
  posterior_ = Posterior::from_log(lo, hi, logd, periodic);
  stats_ = posterior_stats(posterior_);
}

double simulate_measurement(const SqueezedStateModel& state, double true_phi, double aux,
                            const ShotNoise& noise, Rng& rng) {
  const double t = true_phi - aux + noise.phase;
  const double mean = (1.0 - noise.p_tilde) * state.amplitude * state.contrast * std::sin(t);
  return rng.normal(mean, state.outcome_spread(t));
}

void validate(const SessionConfig& cfg) {
  validate(cfg.state);
  validate(cfg.noise);
  if (cfg.steps < 1) throw DomainError("iteration count M must be >= 1");
  if (!(cfg.true_phi >= -kPi && cfg.true_phi < kPi)) {
    throw DomainError("true phase must lie in [-pi, pi)");
  }
  if (cfg.grid < 64) throw DomainError("posterior grid needs at least 64 nodes");
}

TrialRecord run_trial(const SessionConfig& cfg, std::uint64_t seed, std::uint64_t trial) {
  validate(cfg);
  Rng meas(seed, Rng::stream_id(trial, Rng::Purpose::measurement));
  Rng phase_rng(seed, Rng::stream_id(trial, Rng::Purpose::phase_noise));
  Rng depol(seed, Rng::stream_id(trial, Rng::Purpose::depolarization));

  const auto steps = static_cast<std::size_t>(cfg.steps);
  const std::vector<double> phase_noise = noise_mix(cfg.noise, steps, phase_rng);

  LikelihoodModel model{cfg.state, cfg.noise.combined(), cfg.reshaped, 0.0, cfg.noise.p_d, cfg.qpn};
  AdaptiveEstimator est(model, -kPi, kPi, cfg.grid, true);

  TrialRecord rec;
  rec.aux.reserve(steps);
  rec.m_z.reserve(steps);
  rec.phi_est.reserve(steps);
  rec.sigma_phi.reserve(steps);

  double aux = 0.0;
  double p_trial = sample_depolarization(cfg.noise.p_d, depol);
  for (std::size_t l = 0; l < steps; ++l) {
    const double p = cfg.depolarization_per_step ? (l == 0 ? p_trial : sample_depolarization(cfg.noise.p_d, depol))
                                                 : p_trial;
    const double m = simulate_measurement(cfg.state, cfg.true_phi, aux, {p, phase_noise[l]}, meas);
    est.observe({1.0, aux, m, cfg.noise.combined()});
    const PosteriorStats st = est.stats();
    rec.aux.push_back(aux);
    rec.m_z.push_back(m);
    rec.phi_est.push_back(wrap_phase(st.mean));
    rec.sigma_phi.push_back(st.std);
    aux = rec.phi_est.back();
  }
  rec.final_error = wrap_phase(rec.phi_est.back() - cfg.true_phi);
  rec.resets = est.resets();
  return rec;
}

BatchSummary run_batch(const SessionConfig& cfg, int trials, std::uint64_t seed, unsigned threads,
                       std::vector<TrialRecord>* records) {
  if (trials < 2) throw DomainError("a batch needs at least 2 trials");
  validate(cfg);
  std::vector<TrialRecord> recs(static_cast<std::size_t>(trials));
  parallel_for(recs.size(), threads, [&](std::size_t i) { recs[i] = run_trial(cfg, seed, i); });

  const auto steps = static_cast<std::size_t>(cfg.steps);
  BatchSummary s;
  s.trials = trials;
  s.mean_sigma.assign(steps, 0.0);
  s.err_mean.assign(steps, 0.0);
  s.err_std.assign(steps, 0.0);
  const double r = static_cast<double>(trials);
  for (const TrialRecord& t : recs) {
    s.resets += t.resets;
    for (std::size_t l = 0; l < steps; ++l) {
      s.mean_sigma[l] += t.sigma_phi[l] / r;
      s.err_mean[l] += wrap_phase(t.phi_est[l] - cfg.true_phi) / r;
    }
  }
  for (const TrialRecord& t : recs) {
    for (std::size_t l = 0; l < steps; ++l) {
      const double d = wrap_phase(t.phi_est[l] - cfg.true_phi) - s.err_mean[l];
      s.err_std[l] += d * d / (r - 1.0);
    }
  }
  for (double& v : s.err_std) v = std::sqrt(v);
  if (records != nullptr) *records = std::move(recs);
  return s;
}

std::string to_string(SweepKind k) { return k == SweepKind::alpha_error ? "alpha_error" : "t_error"; }

SweepKind sweep_kind_from_string(const std::string& s) {
  if (s == "alpha_error") return SweepKind::alpha_error;
  if (s == "t_error") return SweepKind::t_error;
  throw DomainError("unknown sweep kind '" + s + "' (alpha_error | t_error)");
}

OatParams perturbed_oat(int n, SweepKind kind, double value) {
  if (!std::isfinite(value)) throw DomainError("sweep values must be finite");
  const double chi_t = optimal_twist_time(n, 1.0);
  const double alpha = optimal_rotation_angle(n, chi_t);
  if (kind == SweepKind::alpha_error) return {n, chi_t, alpha + value};
  if (!(value > -1.0)) throw DomainError("twist-time error must exceed -1");
  return {n, chi_t * (1.0 + value), alpha};
}

std::vector<SweepPoint> sweep_imperfection(const SessionConfig& cfg, SweepKind kind,
                                           const std::vector<double>& values, int trials,
                                           std::uint64_t seed, unsigned threads) {
  std::vector<SweepPoint> out;
  out.reserve(values.size());
  for (double v : values) {
    SessionConfig c = cfg;
    c.state = oat_model(perturbed_oat(cfg.state.n, kind, v), cfg.state.contrast);
    const BatchSummary b = run_batch(c, trials, seed, threads);
    out.push_back({v, c.state.xi, b.mean_sigma.back(), b.err_std.back()});
  }
  return out;
}

}  // namespace spinbayes
