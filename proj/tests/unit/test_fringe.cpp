#include "spinbayes/error.hpp"
#include "spinbayes/fringe_fit.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace spinbayes;

namespace {
constexpr double kK = 1.61e7, kT = 455e-6;
}

TEST_CASE("fringe grid and preconditions") {
  const auto g = fringe_grid(9.8, kK, kT, 50);
  const double period = 2.0 * std::numbers::pi / (kK * kT * kT);
  CHECK(g.size() == 50u);
  CHECK(g[1] - g[0] == doctest::Approx(period / 50));
  CHECK(g.front() == doctest::Approx(9.8 - period / 2));
  Rng rng(1);
  CHECK_THROWS_AS(simulate_fringe(coherent_state(6000), kK, kT, 9.8, {9.8}, {}, rng), DomainError);
  CHECK_THROWS_AS(fringe_grid(9.8, kK, kT, 1), DomainError);
}

TEST_CASE("many-shot fringe approaches the mean curve") {
  const SqueezedStateModel s = coherent_state(6000, 0.98);
  const auto g = fringe_grid(9.8, kK, kT, 16);
  Rng rng(2);
  const FringeSample f = simulate_fringe(s, kK, kT, 9.8, g, {}, rng, 20000);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double mean = 0.5 + s.amplitude * s.contrast * std::sin(kK * kT * kT * (9.8 - g[i])) / s.n;
    CHECK(std::abs(f.p_e[i] - mean) < 5.0 * (0.5 / std::sqrt(6000.0)) / std::sqrt(20000.0) + 1e-12);
  }
}

TEST_CASE("strong squeezing scatters most on the fringe slope") {
  const SqueezedStateModel s = model_from_xi(6000, 0.06, 0.98, StateFamily::oat);
  const auto g = fringe_grid(9.8, kK, kT, 8);
  std::vector<double> at_zero, at_quarter;
  for (int r = 0; r < 400; ++r) {
    Rng rng(100, static_cast<std::uint64_t>(r));
    const FringeSample f = simulate_fringe(s, kK, kT, 9.8, g, {}, rng);
    at_zero.push_back(f.p_e[4]);
    at_quarter.push_back(f.p_e[3]);
  }
  CHECK(sample_std(at_quarter) > 2.0 * sample_std(at_zero));
}

TEST_CASE("noiseless sine fit recovers g exactly") {
  FringeSample s;
  s.t = kT;
  s.k_eff = kK;
  s.g = fringe_grid(9.8, kK, kT, 40);
  const double kt2 = kK * kT * kT;
  for (double g : s.g) s.p_e.push_back(0.5 + 0.43 * std::sin(kt2 * (9.80037 - g)));
  const SineFit f = fit_sine(s, 9.8);
  CHECK(std::abs(f.g_est - 9.80037) < 1e-9 * 9.8);
  CHECK(f.amplitude == doctest::Approx(0.43).epsilon(1e-9));
  CHECK(f.offset == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("fringe fitting precision vs squeezing") {
  FringeConfig cfg;
  cfg.g_center = 9.5;
  const auto p = precision_vs_squeezing({1.0, 0.15}, cfg, 20, 3, 0, false);
  const double sql = fringe_sql(cfg) * std::sqrt(2.0 / std::numbers::pi);
  CHECK(p[0].precision_mean == doctest::Approx(sql).epsilon(0.5));
  CHECK(p[1].precision_mean < p[0].precision_mean);
  CHECK(p[0].excluded == 0);
  CHECK_THROWS_AS(precision_vs_squeezing({1.0}, cfg, 5, 3), DomainError);
  cfg.true_g = cfg.g_center + 1.0;
  CHECK_THROWS_AS(validate(cfg), DynamicRangeError);
}
