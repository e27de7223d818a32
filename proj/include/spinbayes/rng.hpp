#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <random>

namespace spinbayes {

/// Philox4x32-10 counter-based generator.
///
/// A stream is addressed by (seed, stream id): the seed is the 64-bit Philox key and the
/// stream id occupies the upper 64 bits of the 128-bit counter, the lower 64 bits count
/// blocks. Two streams with distinct ids never share a counter value, so independent
/// trials can draw from `Rng(seed, stream_id(trial, purpose))` in any order or on any
/// thread and still produce bit-identical sequences.
class Rng {
public:
  using result_type = std::uint64_t;

  /// Purpose tags that keep the sub-streams of one trial disjoint.
  enum class Purpose : std::uint64_t {
    measurement = 0,
    phase_noise = 1,
    depolarization = 2,
    lo_noise = 3,
    fringe = 4,
    generic = 15,
  };

  Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  static constexpr std::uint64_t stream_id(std::uint64_t trial, Purpose purpose) noexcept {
    return (trial << 4) | static_cast<std::uint64_t>(purpose);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Gaussian draw with the given mean and standard deviation (sigma may be 0).
  double normal(double mean = 0.0, double sigma = 1.0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  /// One raw Philox4x32-10 block, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> philox_block(std::array<std::uint32_t, 4> counter,
                                                   std::array<std::uint32_t, 2> key) noexcept;

private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  std::normal_distribution<double> gauss_;
};

}  // namespace spinbayes
