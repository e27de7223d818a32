#pragma once

#include "spinbayes/collective_spin.hpp"
#include "spinbayes/noise.hpp"
#include "spinbayes/rng.hpp"

#include <cstdint>
#include <vector>

namespace spinbayes {

struct FringeSample {
  std::vector<double> g;    ///< scan values g_c (m/s^2)
  std::vector<double> p_e;  ///< excited fraction per point, clamped to [0, 1]
  double t = 0.0;
  double k_eff = 0.0;
  int shots = 1;
};

/// `points` scan values covering exactly one fringe period 2 pi / (k T^2), centred on g_center.
std::vector<double> fringe_grid(double g_center, double k_eff, double t, int points);

/// P_e = 1/2 + m_z / N per point, m_z averaged over `shots` draws at working phase
/// k T^2 (true_g - g_i); noise strengths in m/s^2. DomainError if the grid spans less than
/// one fringe or has fewer than 4 points.
FringeSample simulate_fringe(const SqueezedStateModel& state, double k_eff, double t, double true_g,
                             const std::vector<double>& g_grid, const NoiseSpec& noise, Rng& rng,
                             int shots = 1);

struct SineFit {
  double g_est = 0.0;
  double dg_fit = 0.0;      ///< standard error from the fit covariance
  double amplitude = 0.0;
  double offset = 0.0;
  int iterations = 0;
};

/// Unweighted least squares of A sin(k T^2 (g - g_i)) + b with A > 0, started from a grid
/// search over one fringe around `init` and refined by damped Gauss-Newton. FitError when the
/// refinement does not converge.
SineFit fit_sine(const FringeSample& sample, double init);

struct FringeConfig {
  int n = 6000;
  double contrast = 0.98;
  double k_eff = 1.61e7;
  double t = 455e-6;
  double true_g = 9.8;
  double g_center = 9.8;
  int points = 50;
  int shots = 1;
  NoiseSpec noise;
  std::size_t grid = 2048;  ///< posterior grid of the matched Bayesian runs
};

void validate(const FringeConfig& cfg);

struct SqueezingPrecision {
  double xi = 1.0;
  double precision_mean = 0.0;  ///< mean |g_est - g_true| over converged fits
  double precision_std = 0.0;
  int excluded = 0;             ///< fits that failed to converge
  double bayes_mean = 0.0;      ///< mean |error| of adaptive runs with the same shots and T
  double bayes_std = 0.0;
};

/// Sample of trial `trial` for the xi at position `index` of a precision_vs_squeezing call
/// (same stream, same draws).
FringeSample simulate_fringe_trial(const FringeConfig& cfg, double xi, std::size_t index,
                                   std::uint64_t seed, std::uint64_t trial);

/// 1 / (C sqrt N k T^2 sqrt(points * shots)): single-shot SQL averaged over the scan.
double fringe_sql(const FringeConfig& cfg);

/// Simulate-and-fit `trials` times per xi (xi = 1 is the coherent state, others OAT).
std::vector<SqueezingPrecision> precision_vs_squeezing(const std::vector<double>& xis,
                                                       const FringeConfig& cfg, int trials,
                                                       std::uint64_t seed, unsigned threads = 0,
                                                       bool with_bayes = true);

}  // namespace spinbayes
