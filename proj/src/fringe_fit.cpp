#include "spinbayes/fringe_fit.hpp"

#include "spinbayes/error.hpp"
#include "spinbayes/gravimetry.hpp"
#include "spinbayes/parallel.hpp"
#include "spinbayes/session.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace spinbayes {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sse(const FringeSample& s, double kt2, double a, double b, double g) {
  double sum = 0.0;
  for (std::size_t i = 0; i < s.g.size(); ++i) {
    const double r = s.p_e[i] - (a * std::sin(kt2 * (g - s.g[i])) + b);
    sum += r * r;
  }
  return sum;
}

// Linear least squares for (A, b) at fixed g.
std::pair<double, double> linear_part(const FringeSample& s, double kt2, double g) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < s.g.size(); ++i) {
    const double x = std::sin(kt2 * (g - s.g[i]));
    sx += x;
    sy += s.p_e[i];
    sxx += x * x;
    sxy += x * s.p_e[i];
  }
  const double n = static_cast<double>(s.g.size());
  const double det = n * sxx - sx * sx;
  if (std::abs(det) < 1e-300) return {0.0, sy / n};
  return {(n * sxy - sx * sy) / det, (sxx * sy - sx * sxy) / det};
}

}  // namespace

std::vector<double> fringe_grid(double g_center, double k_eff, double t, int points) {
  if (points < 4) throw DomainError("a fringe scan needs at least 4 points");
  if (!(k_eff > 0.0) || !(t > 0.0)) throw DomainError("k_eff and T must be > 0");
  const double period = kTwoPi / (k_eff * t * t);
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[i] = g_center - 0.5 * period + period * i / points;
  return g;
}

FringeSample simulate_fringe(const SqueezedStateModel& state, double k_eff, double t, double true_g,
                             const std::vector<double>& g_grid, const NoiseSpec& noise, Rng& rng,
                             int shots) {
  validate(state);
  validate(noise);
  if (shots < 1) throw DomainError("shots per point must be >= 1");
  if (g_grid.size() < 4) throw DomainError("a fringe scan needs at least 4 points");
  const double kt2 = k_eff * t * t;
  const auto [lo, hi] = std::minmax_element(g_grid.begin(), g_grid.end());
  const double span = (*hi - *lo) * g_grid.size() / (g_grid.size() - 1.0);
  if (span * kt2 < kTwoPi * (1.0 - 1e-9)) throw DomainError("scan covers less than one fringe");

  const std::vector<double> accel = noise_mix(noise, g_grid.size() * shots, rng);
  FringeSample s{g_grid, {}, t, k_eff, shots};
  s.p_e.reserve(g_grid.size());
  for (std::size_t i = 0; i < g_grid.size(); ++i) {
    double m = 0.0;
    for (int k = 0; k < shots; ++k) {
      const ShotNoise shot{sample_depolarization(noise.p_d, rng), kt2 * accel[i * shots + k]};
      m += simulate_measurement(state, kt2 * (true_g - g_grid[i]), 0.0, shot, rng) / shots;
    }
    s.p_e.push_back(std::clamp(0.5 + m / state.n, 0.0, 1.0));
  }
  return s;
}

SineFit fit_sine(const FringeSample& s, double init) {
  if (s.g.size() < 4 || s.g.size() != s.p_e.size()) throw DomainError("fringe sample is malformed");
  const double kt2 = s.k_eff * s.t * s.t;
  const double period = kTwoPi / kt2;

  // Coarse scan over one fringe; A < 0 is the same curve shifted by half a period.
  constexpr int kCoarse = 256;
  double best_g = init;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kCoarse; ++i) {
    const double g = init - 0.5 * period + period * i / kCoarse;
    const auto [a, b] = linear_part(s, kt2, g);
    if (a <= 0.0) continue;
    const double e = sse(s, kt2, a, b, g);
    if (e < best) {
      best = e;
      best_g = g;
    }
  }

  auto [a, b] = linear_part(s, kt2, best_g);
  double g = best_g;
  double err = sse(s, kt2, a, b, g);
  double lambda = 1e-3;
  const std::size_t n = s.g.size();
  Eigen::MatrixXd jac(n, 3);
  Eigen::VectorXd res(n);
  int it = 0;
  bool converged = false;
  for (; it < 200 && !converged; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      const double arg = kt2 * (g - s.g[i]);
      jac(i, 0) = std::sin(arg);
      jac(i, 1) = 1.0;
      jac(i, 2) = a * kt2 * std::cos(arg);
      res(i) = s.p_e[i] - (a * std::sin(arg) + b);
    }
    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const Eigen::Vector3d jtr = jac.transpose() * res;
    bool improved = false;
    while (lambda < 1e12) {
      Eigen::Matrix3d damped = jtj;
      damped.diagonal() *= 1.0 + lambda;
      const Eigen::Vector3d step = damped.ldlt().solve(jtr);
      const double na = a + step(0), nb = b + step(1), ng = g + step(2);
      const double ne = sse(s, kt2, na, nb, ng);
      if (ne <= err) {
        const double rel = std::abs(step(2)) / period;
        converged = rel < 1e-12 || (err - ne) <= 1e-15 * std::max(err, 1e-300);
        a = na;
        b = nb;
        g = ng;
        err = ne;
        lambda = std::max(lambda / 10.0, 1e-12);
        improved = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) converged = true;  // no downhill step left: at a minimum to round-off
  }
  if (!converged) throw FitError("sine fit did not converge in 200 iterations");

  SineFit fit{g, 0.0, a, b, it};
  for (std::size_t i = 0; i < n; ++i) {
    const double arg = kt2 * (g - s.g[i]);
    jac(i, 0) = std::sin(arg);
    jac(i, 1) = 1.0;
    jac(i, 2) = a * kt2 * std::cos(arg);
  }
  const Eigen::Matrix3d cov = (jac.transpose() * jac).inverse();
  const double dof = static_cast<double>(n) - 3.0;
  fit.dg_fit = dof > 0.0 ? std::sqrt(std::max(0.0, err / dof * cov(2, 2))) : 0.0;
  return fit;
}

void validate(const FringeConfig& cfg) {
  if (cfg.n < 2) throw DomainError("particle number must be >= 2");
  if (!(cfg.contrast > 0.0 && cfg.contrast <= 1.0)) throw DomainError("contrast must lie in (0, 1]");
  if (!(cfg.k_eff > 0.0) || !(cfg.t > 0.0)) throw DomainError("k_eff and T must be > 0");
  if (cfg.points < 4) throw DomainError("a fringe scan needs at least 4 points");
  if (cfg.shots < 1) throw DomainError("shots per point must be >= 1");
  validate(cfg.noise);
  const double period = kTwoPi / (cfg.k_eff * cfg.t * cfg.t);
  if (!(std::abs(cfg.true_g - cfg.g_center) < 0.5 * period)) {
    throw DynamicRangeError("true g lies outside the scanned fringe");
  }
}

FringeSample simulate_fringe_trial(const FringeConfig& cfg, double xi, std::size_t index,
                                   std::uint64_t seed, std::uint64_t trial) {
  const SqueezedStateModel state = model_from_xi(cfg.n, xi, cfg.contrast, StateFamily::oat);
  const std::vector<double> grid = fringe_grid(cfg.g_center, cfg.k_eff, cfg.t, cfg.points);
  Rng rng(seed, Rng::stream_id(index * 100000 + trial, Rng::Purpose::fringe));
  return simulate_fringe(state, cfg.k_eff, cfg.t, cfg.true_g, grid, cfg.noise, rng, cfg.shots);
}

double fringe_sql(const FringeConfig& cfg) {
  return 1.0 / (cfg.contrast * std::sqrt(static_cast<double>(cfg.n)) * cfg.k_eff * cfg.t * cfg.t *
                std::sqrt(static_cast<double>(cfg.points) * cfg.shots));
}

std::vector<SqueezingPrecision> precision_vs_squeezing(const std::vector<double>& xis,
                                                       const FringeConfig& cfg, int trials,
                                                       std::uint64_t seed, unsigned threads,
                                                       bool with_bayes) {
  validate(cfg);
  if (trials < 10) throw DomainError("precision_vs_squeezing needs at least 10 trials");
  const double period = kTwoPi / (cfg.k_eff * cfg.t * cfg.t);
  std::vector<SqueezingPrecision> out;
  for (std::size_t x = 0; x < xis.size(); ++x) {
    const double xi = xis[x];
    const SqueezedStateModel state = model_from_xi(cfg.n, xi, cfg.contrast, StateFamily::oat);
    std::vector<double> err(static_cast<std::size_t>(trials), -1.0);
    parallel_for(err.size(), threads, [&](std::size_t i) {
      const FringeSample s = simulate_fringe_trial(cfg, xi, x, seed, i);
      try {
        const SineFit f = fit_sine(s, cfg.g_center);
        err[i] = std::abs(std::remainder(f.g_est - cfg.true_g, period));
      } catch (const FitError&) {
      }
    });

    SqueezingPrecision p;
    p.xi = xi;
    std::vector<double> ok;
    for (double e : err) {
      if (e < 0.0) ++p.excluded;
      else ok.push_back(e);
    }
    if (ok.size() >= 2) {
      p.precision_mean = sample_mean(ok);
      p.precision_std = sample_std(ok);
    }

    if (with_bayes) {
      GravimetryConfig g;
      g.state = state;
      g.phase = PhaseModel::gravimetry(cfg.k_eff);
      g.schedule = build_schedule(cfg.t, 1.3, 1, cfg.points * cfg.shots);
      g.true_g = cfg.true_g;
      g.g_prior = cfg.g_center;
      g.noise = cfg.noise;
      g.grid = cfg.grid;
      std::vector<double> berr(static_cast<std::size_t>(trials));
      parallel_for(berr.size(), threads, [&](std::size_t i) {
        const GravimetryTrial r = run_gravimetry_trial(g, seed, x * 100000 + i);
        berr[i] = std::abs(r.g_est.back() - cfg.true_g);
      });
      p.bayes_mean = sample_mean(berr);
      p.bayes_std = sample_std(berr);
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace spinbayes
