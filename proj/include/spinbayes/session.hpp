#pragma once

#include "spinbayes/bayes.hpp"
#include "spinbayes/collective_spin.hpp"
#include "spinbayes/noise.hpp"
#include "spinbayes/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace spinbayes {

/// One measurement as seen by the estimator: working phase = scale * (x - center) for the
/// estimated parameter x, outcome m_z, phase-noise strength sigma_n at this step (rad).
struct Observation {
  double scale = 1.0;
  double center = 0.0;
  double m_z = 0.0;
  double sigma_n = 0.0;
};

/// Grid posterior over one scalar parameter fed by a sequence of Ramsey outcomes.
///
/// The grid starts on [lo, hi) and zooms onto mean +- 12 std whenever the posterior becomes
/// narrower than 1/48 of the grid span (or drifts onto a window edge). Zooming re-evaluates the
/// full likelihood history on the new nodes, so no resolution is lost to interpolation. If an
/// update underflows on every node, the posterior restarts from the uniform prior with the
/// current observation only, and the reset is counted.
class AdaptiveEstimator {
public:
  AdaptiveEstimator(LikelihoodModel model, double lo, double hi, std::size_t nodes, bool periodic);

  void observe(const Observation& obs);

  PosteriorStats stats() const { return stats_; }
  const Posterior& posterior() const { return posterior_; }
  int resets() const { return resets_; }
  int regrids() const { return regrids_; }

  double log_likelihood(const Observation& obs, double x) const;

private:
  void rebuild(double lo, double hi, bool periodic);
  bool needs_regrid() const;

  LikelihoodModel model_;
  LikelihoodKernel kernel_;
  double lo0_;
  double hi0_;
  bool periodic0_;
  std::size_t nodes_;
  Posterior posterior_;
  PosteriorStats stats_;
  std::vector<Observation> history_;
  int resets_ = 0;
  int regrids_ = 0;
};

/// Per-shot noise realisation: contrast loss p_tilde and additive phase.
struct ShotNoise {
  double p_tilde = 0.0;
  double phase = 0.0;
};

/// Draws m_z ~ N((1 - p) A C sin(t), spread(t)) with t = true_phi - aux + phase draw.
double simulate_measurement(const SqueezedStateModel& state, double true_phi, double aux,
                            const ShotNoise& noise, Rng& rng);

struct SessionConfig {
  SqueezedStateModel state;
  double true_phi = 0.0;
  int steps = 50;
  NoiseSpec noise;                    ///< phase-noise strengths in rad
  bool reshaped = false;
  QpnForm qpn = QpnForm::phase_dependent;
  bool depolarization_per_step = true;  ///< false draws p_tilde once per trial
  std::size_t grid = 4096;
};

void validate(const SessionConfig& cfg);

struct TrialRecord {
  std::vector<double> aux;
  std::vector<double> m_z;
  std::vector<double> phi_est;
  std::vector<double> sigma_phi;
  double final_error = 0.0;  ///< phi_est_M - true_phi wrapped to [-pi, pi)
  int resets = 0;
};

/// One adaptive run; all randomness comes from streams (seed, trial).
TrialRecord run_trial(const SessionConfig& cfg, std::uint64_t seed, std::uint64_t trial = 0);

struct BatchSummary {
  std::vector<double> mean_sigma;  ///< mean posterior std per step
  std::vector<double> err_mean;    ///< mean wrapped error per step
  std::vector<double> err_std;     ///< across-trial std of the error per step
  int trials = 0;
  int resets = 0;
};

/// Runs trials 0..R-1 (R >= 2) and aggregates per step in trial order.
BatchSummary run_batch(const SessionConfig& cfg, int trials, std::uint64_t seed, unsigned threads = 0,
                       std::vector<TrialRecord>* records = nullptr);

enum class SweepKind { alpha_error, t_error };

std::string to_string(SweepKind k);
SweepKind sweep_kind_from_string(const std::string& s);

struct SweepPoint {
  double value = 0.0;
  double xi = 0.0;
  double precision = 0.0;  ///< mean posterior std at the last step
  double err_std = 0.0;    ///< across-trial std of the final error
};

/// OAT preparation at chi t_opt (chi = 1) with the optimal angle, perturbed by `value`:
/// alpha_error adds to the angle, t_error scales the twist by (1 + value) at fixed angle.
OatParams perturbed_oat(int n, SweepKind kind, double value);

/// One batch per value on the OAT state of cfg.state.n particles. Every value reuses the same
/// seed so that differences reflect the state, not the draws.
std::vector<SweepPoint> sweep_imperfection(const SessionConfig& cfg, SweepKind kind,
                                           const std::vector<double>& values, int trials,
                                           std::uint64_t seed, unsigned threads = 0);

/// x wrapped into [-pi, pi).
double wrap_phase(double x);

}  // namespace spinbayes
