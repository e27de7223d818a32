#pragma once

#include "spinbayes/bayes.hpp"
#include "spinbayes/collective_spin.hpp"
#include "spinbayes/gravimetry.hpp"
#include "spinbayes/noise.hpp"
#include "spinbayes/rng.hpp"

#include <cstdint>
#include <vector>

namespace spinbayes {

/// Sr lattice-clock transition frequency, the default carrier.
inline constexpr double kDefaultCarrierHz = 429.228004229873e12;

struct ClockConfig {
  SqueezedStateModel state;
  Schedule schedule;           ///< interrogation times of one lock cycle
  NoiseSpec noise;             ///< LO noise in fractional frequency, one sample per cycle
  int cycles = 400;
  double carrier_hz = kDefaultCarrierHz;
  double dead_time = 0.0;      ///< seconds per cycle outside the interrogations
  std::size_t grid = 1024;

  /// Sum of interrogation times plus dead time.
  double cycle_duration() const;
  /// rad/s per unit fractional frequency.
  double omega_per_y() const;
};

void validate(const ClockConfig& cfg);

struct CycleResult {
  double estimate = 0.0;  ///< fractional frequency
  double residual = 0.0;  ///< offset minus estimate
};

/// Bayesian estimate of the fractional offset seen by the atoms from one pass over the
/// schedule, with the auxiliary phase following the running estimate. DynamicRangeError when
/// the offset lies outside the unambiguous window of T_1.
CycleResult lock_cycle(const ClockConfig& cfg, double offset, Rng& rng);

struct FrequencyRecord {
  std::vector<double> true_offset;  ///< frequency seen by the atoms
  std::vector<double> estimate;
  std::vector<double> residual;     ///< steered LO offset after the correction
  double cycle_duration = 0.0;
  int flagged = 0;                  ///< cycles out of range, left uncorrected
};

/// Runs the lock: the atoms see lo_k + nu_k (steering plus colored noise); after the estimate
/// the steering becomes lo_k - estimate, which is recorded as the residual.
FrequencyRecord run_clock(const ClockConfig& cfg, std::uint64_t seed, std::uint64_t trial = 0);

struct AdevPoint {
  int m = 0;          ///< averaging factor
  double tau = 0.0;   ///< m * tau0
  double adev = 0.0;
};

/// Overlapping Allan deviation of y at averaging factors m; DomainError if any m leaves no
/// difference term (n < 2m + 1).
std::vector<AdevPoint> allan_deviation(const std::vector<double>& y, double tau0,
                                       const std::vector<int>& factors);

/// 1, 2, 4, ... up to a quarter of the record length, capped at `max_factor`.
std::vector<int> octave_factors(std::size_t n, int max_factor = 128);

struct AdevEnsemble {
  std::vector<AdevPoint> median;  ///< per averaging factor, median over runs
  double tau0 = 0.0;
  int flagged = 0;                ///< out-of-range cycles summed over runs
};

/// run_clock for trials 0..runs-1 of `seed`, overlapping ADEV of each residual record at
/// octave factors, median taken per factor.
AdevEnsemble median_adev(const ClockConfig& cfg, int runs, std::uint64_t seed, unsigned threads = 0);

/// h_beta * (tau / tau0)^((beta - 1) / 2) with h_beta^2 = {sigma^2/2, 2 ln2 sigma^2,
/// 2 pi^2/3 sigma^2} for beta = 0, 1, 2.
double theoretical_adev(int beta, double strength, double tau, double tau0);

}  // namespace spinbayes
