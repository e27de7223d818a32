#include "spinbayes/clock_stability.hpp"

#include "spinbayes/error.hpp"
#include "spinbayes/parallel.hpp"
#include "spinbayes/session.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace spinbayes {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

double ClockConfig::cycle_duration() const { return schedule.total_time(schedule.total) + dead_time; }

double ClockConfig::omega_per_y() const { return 2.0 * kPi * carrier_hz; }

void validate(const ClockConfig& cfg) {
  validate(cfg.state);
  validate(cfg.noise);
  if (cfg.schedule.times.empty()) throw DomainError("empty interrogation schedule");
  if (cfg.cycles < 32) throw DomainError("a clock run needs at least 32 cycles");
  if (!(cfg.carrier_hz > 0.0)) throw DomainError("carrier frequency must be > 0");
  if (!(cfg.dead_time >= 0.0)) throw DomainError("dead time must be >= 0");
  if (cfg.grid < 64) throw DomainError("posterior grid needs at least 64 nodes");
}

CycleResult lock_cycle(const ClockConfig& cfg, double offset, Rng& rng) {
  const double w = cfg.omega_per_y();
  const double half = kPi / cfg.schedule.times.front();
  const double omega = offset * w;
  if (!(std::abs(omega) < half)) {
    throw DynamicRangeError("LO offset outside the unambiguous window of the first interrogation");
  }
  LikelihoodModel model{cfg.state, 0.0, true, 0.0, cfg.noise.p_d, QpnForm::phase_dependent};
  AdaptiveEstimator est(model, -half, half, cfg.grid, true);
  double center = 0.0;
  for (double t : cfg.schedule.times) {
    const double p = sample_depolarization(cfg.noise.p_d, rng);
    const double m = simulate_measurement(cfg.state, t * (omega - center), 0.0, {p, 0.0}, rng);
    est.observe({t, center, m, 0.0});
    center = est.stats().mean;
  }
  const double estimate = center / w;
  return {estimate, offset - estimate};
}

FrequencyRecord run_clock(const ClockConfig& cfg, std::uint64_t seed, std::uint64_t trial) {
  validate(cfg);
  Rng lo_rng(seed, Rng::stream_id(trial, Rng::Purpose::lo_noise));
  Rng meas(seed, Rng::stream_id(trial, Rng::Purpose::measurement));
  const auto n = static_cast<std::size_t>(cfg.cycles);
  NoiseSpec lo_noise = cfg.noise;
  lo_noise.p_d = 0.0;
  const std::vector<double> nu = noise_mix(lo_noise, n, lo_rng);

  FrequencyRecord rec;
  rec.cycle_duration = cfg.cycle_duration();
  double steer = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double seen = steer + nu[k];
    double estimate = 0.0;
    try {
      estimate = lock_cycle(cfg, seen, meas).estimate;
    } catch (const DynamicRangeError&) {
      ++rec.flagged;
    }
    rec.true_offset.push_back(seen);
    rec.estimate.push_back(estimate);
    steer -= estimate;
    rec.residual.push_back(steer);
  }
  return rec;
}

std::vector<AdevPoint> allan_deviation(const std::vector<double>& y, double tau0,
                                       const std::vector<int>& factors) {
  if (!(tau0 > 0.0)) throw DomainError("base averaging time must be > 0");
  std::vector<double> cum(y.size() + 1, 0.0);
  for (std::size_t i = 0; i < y.size(); ++i) cum[i + 1] = cum[i] + y[i];
  std::vector<AdevPoint> out;
  for (int m : factors) {
    if (m < 1) throw DomainError("averaging factor must be >= 1");
    const auto mm = static_cast<std::size_t>(m);
    if (y.size() < 2 * mm + 1) {
      throw DomainError("not enough samples for tau = " + std::to_string(m) + " tau0");
    }
    const std::size_t terms = y.size() - 2 * mm + 1;
    double sum = 0.0;
    for (std::size_t i = 0; i < terms; ++i) {
      const double a = (cum[i + mm] - cum[i]) / m;
      const double b = (cum[i + 2 * mm] - cum[i + mm]) / m;
      sum += (b - a) * (b - a);
    }
    out.push_back({m, m * tau0, std::sqrt(0.5 * sum / static_cast<double>(terms))});
  }
  return out;
}

std::vector<int> octave_factors(std::size_t n, int max_factor) {
  std::vector<int> out;
  for (int m = 1; m <= max_factor && n >= 4 * static_cast<std::size_t>(m); m *= 2) out.push_back(m);
  return out;
}

AdevEnsemble median_adev(const ClockConfig& cfg, int runs, std::uint64_t seed, unsigned threads) {
  if (runs < 1) throw DomainError("median_adev needs at least one run");
  validate(cfg);
  const std::vector<int> factors = octave_factors(static_cast<std::size_t>(cfg.cycles));
  std::vector<std::vector<AdevPoint>> all(static_cast<std::size_t>(runs));
  std::vector<int> flagged(all.size(), 0);
  parallel_for(all.size(), threads, [&](std::size_t i) {
    const FrequencyRecord r = run_clock(cfg, seed, i);
    flagged[i] = r.flagged;
    all[i] = allan_deviation(r.residual, r.cycle_duration, factors);
  });

  AdevEnsemble out;
  out.tau0 = cfg.cycle_duration();
  for (int f : flagged) out.flagged += f;
  for (std::size_t j = 0; j < factors.size(); ++j) {
    std::vector<double> col;
    for (const auto& a : all) col.push_back(a[j].adev);
    std::sort(col.begin(), col.end());
    const std::size_t h = col.size() / 2;
    const double med = col.size() % 2 ? col[h] : 0.5 * (col[h - 1] + col[h]);
    out.median.push_back({factors[j], all[0][j].tau, med});
  }
  return out;
}

double theoretical_adev(int beta, double strength, double tau, double tau0) {
  if (!(tau > 0.0) || !(tau0 > 0.0)) throw DomainError("averaging times must be > 0");
  double h2 = 0.0;
  switch (beta) {
    case 0: h2 = 0.5 * strength * strength; break;
    case 1: h2 = 2.0 * std::log(2.0) * strength * strength; break;
    case 2: h2 = 2.0 * kPi * kPi / 3.0 * strength * strength; break;
    default: throw DomainError("unsupported noise exponent beta = " + std::to_string(beta));
  }
  return std::sqrt(h2) * std::pow(tau / tau0, 0.5 * (beta - 1));
}

}  // namespace spinbayes
