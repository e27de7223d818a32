#include "oracle_values.hpp"

#include "spinbayes/clock_stability.hpp"
#include "spinbayes/error.hpp"
#include "spinbayes/noise.hpp"
#include "spinbayes/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace spinbayes;

TEST_CASE("philox known answers") {
  using B = std::array<std::uint32_t, 4>;
  CHECK(Rng::philox_block({0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Rng::philox_block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Rng::philox_block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("rng streams are reproducible and distinct") {
  Rng a(7, Rng::stream_id(3, Rng::Purpose::measurement));
  Rng b(7, Rng::stream_id(3, Rng::Purpose::measurement));
  Rng c(7, Rng::stream_id(4, Rng::Purpose::measurement));
  bool differ = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a(), y = b(), z = c();
    CHECK(x == y);
    differ |= x != z;
  }
  CHECK(differ);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("depolarisation draws") {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) CHECK(sample_depolarization(0.0, rng) == 0.0);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += sample_depolarization(0.1, rng);
  CHECK(std::abs(sum / n - oracle_values::kHalfNormalMean01) < 0.002);
  int at_one = 0;
  for (int i = 0; i < 1000; ++i) {
    const double p = sample_depolarization(10.0, rng);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    at_one += p == 1.0;
  }
  CHECK(at_one > 900);
  CHECK(expected_depolarization(0.1) == doctest::Approx(oracle_values::kHalfNormalMean01).epsilon(1e-6));
}

TEST_CASE("zero-strength generators are silent") {
  Rng rng(2);
  for (const NoiseSeries& s : {white_noise(64, 0.0, rng), flicker_noise(64, 0.0, rng), random_walk_noise(64, 0.0, rng)}) {
    for (double x : s.samples) CHECK(x == 0.0);
  }
  CHECK_THROWS_AS(white_noise(16, -1.0, rng), DomainError);
}

TEST_CASE("spectral slopes of the three colours") {
  const std::size_t n = 1 << 16;
  Rng r1(11), r2(12), r3(13);
  const NoiseSeries w = white_noise(n, 1.0, r1);
  const NoiseSeries f = flicker_noise(n, 1.0, r2);
  const NoiseSeries r = random_walk_noise(n, 1.0, r3);
  CHECK(std::abs(fit_psd_slope(periodogram(w)).beta) < 0.1);
  CHECK(std::abs(fit_psd_slope(periodogram(f)).beta - 1.0) < 0.15);
  CHECK(std::abs(fit_psd_slope(periodogram(r)).beta - 2.0) < 0.2);
  CHECK(sample_std(f.samples) == doctest::Approx(1.0).epsilon(1e-12));
  Rng r4(14);
  CHECK(std::abs(sample_std(white_noise(n, 1e-6, r4).samples) / 1e-6 - 1.0) < 0.02);
}

TEST_CASE("white noise mean shrinks with length") {
  int ok = 0;
  for (int s = 0; s < 100; ++s) {
    Rng rng(100 + s);
    const auto x = white_noise(4096, 1.0, rng).samples;
    ok += std::abs(sample_mean(x)) < 5.0 / std::sqrt(4096.0);
  }
  CHECK(ok >= 99);
}

TEST_CASE("random walk variance grows linearly") {
  const int reps = 1000;
  std::vector<double> at10, at50;
  for (int s = 0; s < reps; ++s) {
    Rng rng(5000 + s);
    const auto x = random_walk_noise(64, 1.0, rng).samples;
    at10.push_back(x[9]);
    at50.push_back(x[49]);
  }
  CHECK(std::pow(sample_std(at10), 2) == doctest::Approx(10.0).epsilon(0.1));
  CHECK(std::pow(sample_std(at50), 2) == doctest::Approx(50.0).epsilon(0.1));
}

TEST_CASE("periodogram of a pure tone and of a power law") {
  const std::size_t n = 1024;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(2.0 * std::numbers::pi * 5.0 * i / 128.0);
  const Spectrum s = periodogram(x, 1.0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < s.power.size(); ++i) if (s.power[i] > s.power[best]) best = i;
  CHECK(s.frequency[best] == doctest::Approx(5.0 / 128.0).epsilon(1e-12));
  double rest = 0.0;
  for (std::size_t i = 0; i < s.power.size(); ++i) if (i != best) rest = std::max(rest, s.power[i]);
  CHECK(rest < 1e-12 * s.power[best]);

  Spectrum law;
  for (int k = 1; k <= 500; ++k) {
    law.frequency.push_back(k * 0.001);
    law.power.push_back(1.0 / (k * 0.001));
  }
  CHECK(std::abs(fit_psd_slope(law).beta - 1.0) < 1e-12);
  CHECK_THROWS_AS(periodogram(std::span<const double>(x.data(), 4)), DomainError);
}

TEST_CASE("allan deviation estimator") {
  std::vector<double> alt(64);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 ? -0.25 : 0.25;
  const auto a = allan_deviation(alt, 1.0, {1});
  CHECK(a[0].adev == doctest::Approx(0.25 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(allan_deviation(alt, 1.0, {40}), DomainError);

  Rng rng(21);
  const auto w = white_noise(1 << 14, 1.0, rng).samples;
  const auto f = octave_factors(w.size());
  const auto ad = allan_deviation(w, 1.0, f);
  for (const AdevPoint& p : ad) {
    if (p.m > 100) continue;
    CHECK(p.adev == doctest::Approx(theoretical_adev(0, 1.0, p.tau, 1.0) * std::sqrt(2.0)).epsilon(0.15));
  }
}

TEST_CASE("generator to allan slopes") {
  const std::size_t n = 1 << 14;
  const auto slope = [&](const std::vector<double>& y) {
    std::vector<int> f{1, 2, 4, 8, 16, 32};
    std::vector<double> x, v;
    for (const AdevPoint& p : allan_deviation(y, 1.0, f)) {
      x.push_back(p.tau);
      v.push_back(p.adev);
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += std::log(x[i]) / x.size(), my += std::log(v[i]) / x.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxy += (std::log(x[i]) - mx) * (std::log(v[i]) - my);
      sxx += std::pow(std::log(x[i]) - mx, 2);
    }
    return sxy / sxx;
  };
  Rng r1(31), r2(32), r3(33);
  CHECK(std::abs(slope(white_noise(n, 1.0, r1).samples) + 0.5) < 0.12);
  CHECK(std::abs(slope(flicker_noise(n, 1.0, r2).samples)) < 0.12);
  CHECK(std::abs(slope(random_walk_noise(n, 1.0, r3).samples) - 0.5) < 0.12);
}

TEST_CASE("model allan deviation scaling") {
  CHECK(theoretical_adev(1, 2.0, 5.0, 1.0) == doctest::Approx(std::sqrt(2.0 * std::log(2.0)) * 2.0));
  CHECK(theoretical_adev(1, 2.0, 50.0, 1.0) == doctest::Approx(theoretical_adev(1, 2.0, 5.0, 1.0)));
  CHECK(theoretical_adev(0, 1.0, 4.0, 1.0) == doctest::Approx(0.5 * theoretical_adev(0, 1.0, 1.0, 1.0)));
  CHECK(theoretical_adev(2, 1.0, 4.0, 1.0) == doctest::Approx(2.0 * theoretical_adev(2, 1.0, 1.0, 1.0)));
  CHECK_THROWS_AS(theoretical_adev(3, 1.0, 1.0, 1.0), DomainError);
}
