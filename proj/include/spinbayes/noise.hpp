#pragma once

#include "spinbayes/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace spinbayes {

enum class NoiseColor { white, flicker, random_walk };

std::string to_string(NoiseColor c);

/// Strengths of depolarisation and of the three phase-noise colours.
///
/// The phase-noise strengths are in the units of whatever quantity the scenario senses
/// (radians for the bare phase loop, m/s^2 for gravimetry, fractional frequency for the clock).
struct NoiseSpec {
  double p_d = 0.0;
  double sigma_w = 0.0;
  double sigma_f = 0.0;
  double sigma_r = 0.0;
  std::uint64_t seed = 0;

  /// sqrt(sigma_w^2 + sigma_f^2 + sigma_r^2).
  double combined() const;
  bool has_phase_noise() const { return sigma_w > 0 || sigma_f > 0 || sigma_r > 0; }
};

/// DomainError if any strength is negative or non-finite.
void validate(const NoiseSpec& spec);

struct NoiseSeries {
  std::vector<double> samples;
  double dt = 1.0;
  NoiseColor color = NoiseColor::white;
};

/// |g| with g ~ N(0, p_d^2), clamped to [0, 1].
double sample_depolarization(double p_d, Rng& rng);

/// E[min(|g|, 1)] for g ~ N(0, p_d^2): the contrast loss an estimator can anticipate.
double expected_depolarization(double p_d);

NoiseSeries white_noise(std::size_t n, double sigma, Rng& rng, double dt = 1.0);

/// White noise shaped by a 1/sqrt(f) amplitude filter in the Fourier domain (DC removed),
/// then rescaled so that the sample standard deviation is exactly sigma. Requires n >= 8.
NoiseSeries flicker_noise(std::size_t n, double sigma, Rng& rng, double dt = 1.0);

/// Running sum of N(0, sigma^2) increments. Requires n >= 8.
NoiseSeries random_walk_noise(std::size_t n, double sigma, Rng& rng, double dt = 1.0);

/// Sum of the three colours at the strengths in `spec`, one element per step. Colours with
/// zero strength contribute nothing; short series are cut from an 8-sample realisation.
std::vector<double> noise_mix(const NoiseSpec& spec, std::size_t n, Rng& rng);

struct Spectrum {
  std::vector<double> frequency;
  std::vector<double> power;
};

/// |DFT|^2 dt / n at positive frequencies (DC excluded), averaged over 8 non-overlapping
/// segments when the series has at least 64 samples. LengthError-style DomainError below 8.
Spectrum periodogram(std::span<const double> samples, double dt = 1.0);
Spectrum periodogram(const NoiseSeries& series);

struct SlopeFit {
  double beta = 0.0;            ///< negated log-log slope: white 0, flicker 1, random walk 2
  std::size_t used = 0;         ///< bins entering the fit
  std::size_t zero_power = 0;   ///< bins skipped because their power was 0
};

/// Least-squares fit of log power against log frequency over the bins that remain after
/// dropping the lowest 2 and the highest 10%.
SlopeFit fit_psd_slope(const Spectrum& spectrum);

/// Sample standard deviation (n - 1 normalisation).
double sample_std(std::span<const double> x);
double sample_mean(std::span<const double> x);

}  // namespace spinbayes
