#pragma once

#include "spinbayes/bayes.hpp"
#include "spinbayes/collective_spin.hpp"
#include "spinbayes/noise.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace spinbayes {

/// phi = coefficient * gamma * T^exponent.
struct PhaseModel {
  double coefficient = 1.0;
  int exponent = 1;
  std::string parameter = "omega";
  std::string units = "rad/s";

  static PhaseModel gravimetry(double k_eff);
  static PhaseModel clock();

  /// d phi / d gamma at interrogation time T.
  double scale(double t) const;
};

/// coefficient * gamma * T^exponent; DomainError for T <= 0.
double phase_from_parameter(const PhaseModel& pm, double gamma, double t);

/// Interrogation times T_l = T_max / a^(M_a - l) for l < M_a, T_max afterwards.
struct Schedule {
  std::vector<double> times;
  double t_max = 0.0;
  double a = 1.0;
  int ramp = 1;
  int total = 1;

  /// Sum of T_j for j <= l (1-based).
  double total_time(int l) const;
};

Schedule build_schedule(double t_max, double a, int ramp, int total);

/// xi / (C D sqrt N sqrt(sum_{j<=l} T_j^(2 exponent))), l 1-based.
double theoretical_precision(const Schedule& sched, int l, const SqueezedStateModel& state,
                             const PhaseModel& pm);

struct GravimetryConfig {
  SqueezedStateModel state;
  PhaseModel phase = PhaseModel::gravimetry(1.61e7);
  Schedule schedule;
  double true_g = 0.0;
  double g_prior = 0.0;
  NoiseSpec noise;  ///< phase-noise strengths in m/s^2
  bool reshaped = true;
  QpnForm qpn = QpnForm::phase_dependent;
  std::size_t grid = 4096;
};

void validate(const GravimetryConfig& cfg);

/// Half-open window of one 2 pi fringe at T_1 centred on g_prior.
std::pair<double, double> gravimetry_window(const GravimetryConfig& cfg);

struct GravimetryTrial {
  std::vector<double> g_est;
  std::vector<double> sigma;  ///< posterior std per step
  int resets = 0;
};

/// One adaptive run with g_c^l = g_est^(l-1) (g_c^1 = g_prior). DynamicRangeError when
/// true_g lies outside the window of T_1.
GravimetryTrial run_gravimetry_trial(const GravimetryConfig& cfg, std::uint64_t seed,
                                     std::uint64_t trial = 0);

struct GravimetryPoint {
  int step = 0;
  double t = 0.0;
  double total_time = 0.0;
  double dg_theory = 0.0;
  double dg_batch = 0.0;      ///< across-trial std of g_est
  double dg_posterior = 0.0;  ///< mean posterior std
  double g_est_mean = 0.0;
};

struct GravimetryCurve {
  std::vector<GravimetryPoint> points;
  int trials = 0;
  int resets = 0;
};

GravimetryCurve run_gravimetry(const GravimetryConfig& cfg, int trials, std::uint64_t seed,
                               unsigned threads = 0);

/// Least-squares slope of log y against log x; DomainError with fewer than 5 points or any
/// non-positive value.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

enum class CurveColumn { theory, batch, posterior };

/// Slope of log dg against log total time over steps [first, last] (1-based, inclusive).
double fit_scaling_exponent(const GravimetryCurve& curve, int first, int last,
                            CurveColumn column = CurveColumn::batch);

}  // namespace spinbayes
