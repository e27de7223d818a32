#include "spinbayes/noise.hpp"

#include "spinbayes/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

namespace spinbayes {

namespace {

// FFTW's planner is not re-entrant; execution of a finished plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <class T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

class Plan {
public:
  explicit Plan(fftw_plan p) : plan_(p) {}
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  void execute() const { fftw_execute(plan_); }

private:
  fftw_plan plan_;
};

Plan forward_plan(int n, double* in, fftw_complex* out) {
  std::lock_guard lock(planner_mutex());
  return Plan(fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE));
}

Plan inverse_plan(int n, fftw_complex* in, double* out) {
  std::lock_guard lock(planner_mutex());
  return Plan(fftw_plan_dft_c2r_1d(n, in, out, FFTW_ESTIMATE));
}

void require_length(std::size_t n, std::size_t minimum, const char* what) {
  if (n < minimum) {
    throw DomainError(std::string(what) + " needs at least " + std::to_string(minimum) +
                      " samples, got " + std::to_string(n));
  }
}

void require_strength(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw DomainError("noise strength must be >= 0");
}

}  // namespace

std::string to_string(NoiseColor c) {
  switch (c) {
    case NoiseColor::white: return "white";
    case NoiseColor::flicker: return "flicker";
    case NoiseColor::random_walk: return "random_walk";
  }
  return "unknown";
}

double NoiseSpec::combined() const {
  return std::sqrt(sigma_w * sigma_w + sigma_f * sigma_f + sigma_r * sigma_r);
}

void validate(const NoiseSpec& spec) {
  for (double v : {spec.p_d, spec.sigma_w, spec.sigma_f, spec.sigma_r}) require_strength(v);
}

double sample_depolarization(double p_d, Rng& rng) {
  require_strength(p_d);
  return std::clamp(std::abs(rng.normal(0.0, p_d)), 0.0, 1.0);
}

double expected_depolarization(double p_d) {
  require_strength(p_d);
  if (p_d == 0.0) return 0.0;
  const double inv = 1.0 / (p_d * std::numbers::sqrt2);
  return p_d * std::sqrt(2.0 / std::numbers::pi) * (1.0 - std::exp(-inv * inv)) + std::erfc(inv);
}

double sample_mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_std(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double mean = sample_mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

NoiseSeries white_noise(std::size_t n, double sigma, Rng& rng, double dt) {
  require_length(n, 1, "white noise");
  require_strength(sigma);
  NoiseSeries out{std::vector<double>(n), dt, NoiseColor::white};
  for (double& v : out.samples) v = sigma * rng.normal();
  return out;
}

NoiseSeries flicker_noise(std::size_t n, double sigma, Rng& rng, double dt) {
  require_length(n, 8, "flicker noise");
  require_strength(sigma);

  auto real = fftw_buffer<double>(n);
  auto spec = fftw_buffer<fftw_complex>(n / 2 + 1);
  const Plan forward = forward_plan(static_cast<int>(n), real.get(), spec.get());
  const Plan inverse = inverse_plan(static_cast<int>(n), spec.get(), real.get());

  for (std::size_t i = 0; i < n; ++i) real[i] = rng.normal();
  forward.execute();
  spec[0][0] = 0.0;
  spec[0][1] = 0.0;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    const double gain = 1.0 / std::sqrt(static_cast<double>(k) / (static_cast<double>(n) * dt));
    spec[k][0] *= gain;
    spec[k][1] *= gain;
  }
  inverse.execute();

  NoiseSeries out{std::vector<double>(real.get(), real.get() + n), dt, NoiseColor::flicker};
  const double raw = sample_std(out.samples);
  const double scale = raw > 0.0 ? sigma / raw : 0.0;
  for (double& v : out.samples) v *= scale;
  return out;
}

NoiseSeries random_walk_noise(std::size_t n, double sigma, Rng& rng, double dt) {
  require_length(n, 8, "random-walk noise");
  require_strength(sigma);
  NoiseSeries out{std::vector<double>(n), dt, NoiseColor::random_walk};
  double sum = 0.0;
  for (double& v : out.samples) {
    sum += sigma * rng.normal();
    v = sum;
  }
  return out;
}

std::vector<double> noise_mix(const NoiseSpec& spec, std::size_t n, Rng& rng) {
  validate(spec);
  std::vector<double> out(n, 0.0);
  const std::size_t len = std::max<std::size_t>(n, 8);
  const auto add = [&](const NoiseSeries& s) {
    for (std::size_t i = 0; i < n; ++i) out[i] += s.samples[i];
  };
  if (spec.sigma_w > 0.0) add(white_noise(len, spec.sigma_w, rng));
  if (spec.sigma_f > 0.0) add(flicker_noise(len, spec.sigma_f, rng));
  if (spec.sigma_r > 0.0) add(random_walk_noise(len, spec.sigma_r, rng));
  return out;
}

Spectrum periodogram(std::span<const double> samples, double dt) {
  require_length(samples.size(), 8, "periodogram");
  if (!(dt > 0.0)) throw DomainError("sample spacing must be > 0");
  const std::size_t segments = samples.size() >= 64 ? 8 : 1;
  const std::size_t len = samples.size() / segments;
  const std::size_t bins = len / 2;

  auto real = fftw_buffer<double>(len);
  auto spec = fftw_buffer<fftw_complex>(len / 2 + 1);
  const Plan forward = forward_plan(static_cast<int>(len), real.get(), spec.get());

  Spectrum out;
  out.frequency.resize(bins);
  out.power.assign(bins, 0.0);
  for (std::size_t k = 1; k <= bins; ++k) {
    out.frequency[k - 1] = static_cast<double>(k) / (static_cast<double>(len) * dt);
  }
  for (std::size_t s = 0; s < segments; ++s) {
    std::copy_n(samples.begin() + static_cast<std::ptrdiff_t>(s * len), len, real.get());
    forward.execute();
    for (std::size_t k = 1; k <= bins; ++k) {
      const double re = spec[k][0];
      const double im = spec[k][1];
      out.power[k - 1] += (re * re + im * im) * dt / static_cast<double>(len);
    }
  }
  for (double& p : out.power) p /= static_cast<double>(segments);
  return out;
}

Spectrum periodogram(const NoiseSeries& series) { return periodogram(series.samples, series.dt); }

SlopeFit fit_psd_slope(const Spectrum& spectrum) {
  const std::size_t bins = spectrum.power.size();
  if (bins < 8 || spectrum.frequency.size() != bins) {
    throw DomainError("PSD slope fit needs at least 8 spectral points");
  }
  const std::size_t first = 2;
  const std::size_t last = static_cast<std::size_t>(std::floor(0.9 * static_cast<double>(bins)));

  SlopeFit fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = first; k < last; ++k) {
    if (!(spectrum.power[k] > 0.0)) {
      ++fit.zero_power;
      continue;
    }
    const double x = std::log(spectrum.frequency[k]);
    const double y = std::log(spectrum.power[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++fit.used;
  }
  if (fit.used < 2) {
    throw DomainError("PSD slope fit is degenerate: " + std::to_string(fit.zero_power) +
                      " zero-power bins excluded");
  }
  const double m = static_cast<double>(fit.used);
  fit.beta = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
  return fit;
}

}  // namespace spinbayes
