#include "oracle_values.hpp"

#include "spinbayes/bayes.hpp"
#include "spinbayes/collective_spin.hpp"
#include "spinbayes/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace spinbayes;

namespace {

constexpr double kPi = std::numbers::pi;

LikelihoodModel squeezed_model(double sigma_n = 0.0, bool reshaped = false) {
  LikelihoodModel m;
  m.state = model_from_xi(200, 0.15, 1.0, StateFamily::ansatz);
  m.sigma_n = sigma_n;
  m.reshaped = reshaped;
  return m;
}

std::vector<double> grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / n;
  return g;
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

TEST_CASE("outcome mean") {
  const LikelihoodModel m = squeezed_model();
  CHECK(outcome_mean(m, 0.4, 0.4) == 0.0);
  CHECK(outcome_mean(m, 0.9, 0.3, 1.0) == 0.0);
  CHECK(outcome_mean(m, 0.6, 0.5) == doctest::Approx(m.state.amplitude * std::sin(0.1)).epsilon(1e-14));

  const double t = optimal_twist_time(200, 1.0);
  const OatParams p{200, t, optimal_rotation_angle(200, t)};
  LikelihoodModel o;
  o.state = oat_model(p);
  CHECK(outcome_mean(o, 0.6, 0.5) == doctest::Approx(-mean_jz(p, 0.1)).epsilon(1e-12));
}

TEST_CASE("reshaped outcome spread") {
  const LikelihoodModel m = squeezed_model(0.0, true);
  const double ideal = m.state.amplitude * 0.15 / std::sqrt(200.0);
  CHECK(reshaped_sigma(m, 0.0) == doctest::Approx(ideal).epsilon(1e-12));
  CHECK(reshaped_sigma(m, kPi / 2) == doctest::Approx(m.floor()).epsilon(1e-12));
  CHECK(m.floor() == doctest::Approx(ideal / 10.0));
  CHECK(reshaped_sigma(squeezed_model(0.03, true), 0.0) ==
        doctest::Approx(oracle_values::kReshapedSigma015).epsilon(1e-10));
  CHECK(likelihood_sigma(squeezed_model(0.03, false), 0.7) == doctest::Approx(ideal));

  LikelihoodModel s = squeezed_model(0.03, true);
  s.qpn = QpnForm::small_angle;
  CHECK(reshaped_sigma(s, 0.0) == doctest::Approx(oracle_values::kReshapedSigma015).epsilon(1e-10));
}

TEST_CASE("likelihood profiles") {
  const auto g = grid(-kPi, kPi, 4096);
  const LikelihoodModel m = squeezed_model();
  const auto zero = likelihood_curve(m, 0.0, 0.0, g);
  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double l = zero[(i + g.size() - 1) % g.size()], r = zero[(i + 1) % g.size()];
    if (zero[i] > l && zero[i] >= r && zero[i] > 0.5 * zero[argmax(zero)]) peaks.push_back(i);
  }
  REQUIRE(peaks.size() == 2);
  CHECK(std::abs(std::remainder(g[peaks[0]], kPi)) < 1e-3);
  CHECK(std::abs(std::remainder(g[peaks[1]], kPi)) < 1e-3);

  const auto top = likelihood_curve(m, m.state.amplitude, 0.0, g);
  CHECK(std::abs(g[argmax(top)] - kPi / 2) < 2e-3);

  LikelihoodModel c;
  c.state = coherent_state(200);
  const auto ramsey = likelihood_curve(c, 12.0, 0.3, g);
  const double ref0 = std::exp(-std::pow(12.0 - 100.0 * std::sin(g[0] - 0.3), 2) / (2.0 * 50.0));
  for (std::size_t i = 0; i < g.size(); i += 64) {
    const double ref = std::exp(-std::pow(12.0 - 100.0 * std::sin(g[i] - 0.3), 2) / (2.0 * 50.0));
    CHECK(ramsey[i] / ramsey[0] == doctest::Approx(ref / ref0).epsilon(1e-9));
  }
}

TEST_CASE("grid posterior updates") {
  const std::size_t n = 20000;
  Posterior p = Posterior::uniform(-3.0, 3.0, n, false);
  const auto x = p.grid();
  std::vector<double> w1(n), w2(n);
  for (std::size_t i = 0; i < n; ++i) {
    w1[i] = std::exp(-0.5 * std::pow((x[i] - 0.2) / 0.3, 2));
    w2[i] = std::exp(-0.5 * std::pow((x[i] + 0.1) / 0.4, 2));
  }
  const Posterior once = bayes_update(p, w1);
  double max_w = *std::max_element(w1.begin(), w1.end());
  for (std::size_t i = 0; i < n; i += 997) {
    CHECK(once.density()[i] / once.density()[n / 2] == doctest::Approx(w1[i] / w1[n / 2]));
  }
  CHECK(max_w > 0);
  const Posterior both = bayes_update(once, w2);
  const PosteriorStats s = posterior_stats(both);
  const PosteriorStats ref = gaussian_product({0.2, 0.3}, {-0.1, 0.4});
  CHECK(ref.std == doctest::Approx(oracle_values::kGaussProductStd).epsilon(1e-12));
  CHECK(s.std == doctest::Approx(ref.std).epsilon(1e-6));
  CHECK(s.mean == doctest::Approx(ref.mean).epsilon(1e-6));
  CHECK(both.integral() == doctest::Approx(1.0).epsilon(1e-12));

  Posterior r = Posterior::uniform(-3.0, 3.0, n, false);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = std::exp(-0.5 * std::pow(x[i] / 1.2, 2));
  double s1 = 0.0;
  for (int l = 1; l <= 16; ++l) {
    r.update(w);
    if (l == 1) s1 = posterior_stats(r).std;
    if (l == 4) CHECK(posterior_stats(r).std == doctest::Approx(s1 / 2.0).epsilon(0.02));
    if (l == 16) CHECK(posterior_stats(r).std == doctest::Approx(s1 / 4.0).epsilon(0.02));
  }

  std::vector<double> zeros(n, 0.0);
  CHECK_THROWS_AS(r.update(zeros), DegeneratePosterior);
}

TEST_CASE("posterior moments") {
  const std::size_t n = 8192;
  const auto g = grid(-kPi, kPi, n);
  std::vector<double> logd(n);
  for (std::size_t i = 0; i < n; ++i) logd[i] = -0.5 * std::pow((g[i] - 0.4) / 0.2, 2);
  const PosteriorStats s = posterior_stats(Posterior::from_log(-kPi, kPi, logd, true));
  CHECK(s.mean == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(s.std == doctest::Approx(0.2).epsilon(1e-4));

  const PosteriorStats u = posterior_stats(Posterior::uniform(-kPi, kPi, n, false));
  CHECK(std::abs(u.std - oracle_values::kUniformStdPi) < 1e-3);

  std::vector<double> spike(n, -1e300);
  spike[1234] = 0.0;
  CHECK(posterior_stats(Posterior::from_log(-kPi, kPi, spike, false)).std < 1e-12);

  // posterior straddling the wrap point
  for (std::size_t i = 0; i < n; ++i) logd[i] = -0.5 * std::pow(std::remainder(g[i] - 3.0, 2 * kPi) / 0.1, 2);
  const PosteriorStats w = posterior_stats(Posterior::from_log(-kPi, kPi, logd, true));
  CHECK(std::abs(std::remainder(w.mean - 3.0, 2 * kPi)) < 1e-6);
  CHECK(w.std == doctest::Approx(0.1).epsilon(1e-3));
}

TEST_CASE("analytic precision law") {
  CHECK(analytic_posterior_std(1.0, 200, 1) == doctest::Approx(1.0 / std::sqrt(200.0)));
  CHECK(analytic_posterior_std(0.15, 200, 50) == doctest::Approx(oracle_values::kPrecision015_200_50).epsilon(1e-14));
  CHECK(analytic_posterior_std(0.3, 100, 7) / analytic_posterior_std(0.3, 100, 28) == doctest::Approx(2.0).epsilon(1e-15));
}
