#include "oracle_values.hpp"

#include "spinbayes/error.hpp"
#include "spinbayes/gravimetry.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace spinbayes;

TEST_CASE("interrogation schedules") {
  const Schedule c = build_schedule(0.141, 1.3, 6, 12);
  CHECK(c.times[0] == doctest::Approx(oracle_values::kClockT1).epsilon(1e-14));
  for (int l = 6; l <= 12; ++l) CHECK(c.times[l - 1] == 0.141);
  const Schedule flat = build_schedule(0.01, 1.3, 1, 5);
  for (double t : flat.times) CHECK(t == 0.01);
  const Schedule g = build_schedule(455e-6, 1.3, 25, 50);
  CHECK(g.times[24] == 455e-6);
  CHECK(g.times[23] == doctest::Approx(455e-6 / 1.3));
  CHECK(g.total_time(3) == doctest::Approx(g.times[0] + g.times[1] + g.times[2]));
  CHECK_THROWS_AS(build_schedule(0.1, 0.9, 3, 5), DomainError);
  CHECK_THROWS_AS(build_schedule(0.1, 1.3, 6, 5), DomainError);
}

TEST_CASE("phase of a parameter") {
  const PhaseModel grav = PhaseModel::gravimetry(1.61e7);
  CHECK(phase_from_parameter(grav, 0.0, 455e-6) == 0.0);
  CHECK(phase_from_parameter(grav, 9.8, 455e-6) == doctest::Approx(oracle_values::kGravPhase).epsilon(1e-14));
  CHECK(phase_from_parameter(PhaseModel::clock(), 2.0 * std::numbers::pi, 0.5) == doctest::Approx(std::numbers::pi));
  CHECK_THROWS_AS(phase_from_parameter(grav, 9.8, 0.0), DomainError);
}

TEST_CASE("theoretical precision curves") {
  const SqueezedStateModel s = model_from_xi(6000, 0.5, 0.98, StateFamily::oat);
  const PhaseModel pm = PhaseModel::gravimetry(1.61e7);
  const Schedule flat = build_schedule(455e-6, 1.3, 1, 40);
  CHECK(theoretical_precision(flat, 5, s, pm) / theoretical_precision(flat, 20, s, pm) == doctest::Approx(2.0));
  CHECK(theoretical_precision(flat, 1, s, pm) == doctest::Approx(2e-3).epsilon(0.05));

  const Schedule long_sched = build_schedule(455e-6, 1.3, 25, 400);
  std::vector<double> x, y;
  for (int l = 12; l <= 25; ++l) {
    x.push_back(long_sched.total_time(l));
    y.push_back(theoretical_precision(long_sched, l, s, pm));
  }
  CHECK(fit_loglog_slope(x, y) == doctest::Approx(-2.0).epsilon(0.025));
  x.clear();
  y.clear();
  for (int l = 300; l <= 400; ++l) {
    x.push_back(long_sched.total_time(l));
    y.push_back(theoretical_precision(long_sched, l, s, pm));
  }
  CHECK(std::abs(fit_loglog_slope(x, y) + 0.5) < 0.05);
}

TEST_CASE("log-log slope fit") {
  std::vector<double> x, y;
  for (int i = 1; i <= 10; ++i) {
    x.push_back(i * 0.3);
    y.push_back(4.0 * std::pow(i * 0.3, -1.7));
  }
  CHECK(std::abs(fit_loglog_slope(x, y) + 1.7) < 1e-12);
  CHECK_THROWS_AS(fit_loglog_slope({1, 2, 3}, {1, 2, 3}), DomainError);
}

TEST_CASE("gravimetry dynamic range") {
  GravimetryConfig cfg;
  cfg.state = model_from_xi(6000, 0.5, 0.98, StateFamily::oat);
  cfg.schedule = build_schedule(455e-6, 1.3, 25, 50);
  cfg.g_prior = 9.8;
  const auto [lo, hi] = gravimetry_window(cfg);
  const double t1 = cfg.schedule.times[0];
  CHECK(hi - lo == doctest::Approx(2.0 * std::numbers::pi / (1.61e7 * t1 * t1)));
  CHECK(0.5 * (lo + hi) == doctest::Approx(9.8));
  cfg.true_g = hi + 1.0;
  CHECK_THROWS_AS(run_gravimetry_trial(cfg, 1), DynamicRangeError);
}

TEST_CASE("short gravimetry run converges") {
  GravimetryConfig cfg;
  cfg.state = model_from_xi(6000, 0.5, 0.98, StateFamily::oat);
  cfg.schedule = build_schedule(455e-6, 1.3, 25, 50);
  cfg.true_g = 9.8;
  cfg.g_prior = 9.8 - 3.0;
  cfg.grid = 1024;
  const GravimetryCurve c = run_gravimetry(cfg, 40, 4, 0);
  const GravimetryPoint& last = c.points.back();
  CHECK(last.dg_batch == doctest::Approx(last.dg_theory).epsilon(0.5));
  CHECK(std::abs(last.g_est_mean - 9.8) < 5.0 * last.dg_theory);
}
