#pragma once

// Counter-based randomness. A draw is a pure function of
// (master_seed, stream_id, sample_index), so Monte Carlo results do not
// depend on how sample indices are distributed over threads.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "torlab/torus.hpp"

namespace torlab {

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
  std::uint64_t sample_index = 0;

  SeedSpec at(std::uint64_t index) const noexcept { return {master_seed, stream_id, index}; }
  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

/// Stable 64-bit stream id for a named logical experiment plus sub-keys.
std::uint64_t stream_id_for(std::string_view name, std::span<const std::uint64_t> keys = {});

/// SplitMix64 keyed by the hashed seed triple. Satisfies
/// UniformRandomBitGenerator, so <random> distributions can consume it.
class SampleRng {
 public:
  using result_type = std::uint64_t;

  explicit SampleRng(const SeedSpec& seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform on [0,1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on (0,1]; safe for log / negative powers.
  double uniform_pos() noexcept;
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) noexcept;
  double normal() noexcept;

 private:
  std::uint64_t state_;
};

/// Uniform k-subset of {0..n-1}, sorted (Floyd's algorithm).
std::vector<std::size_t> sample_subset(std::size_t n, std::size_t k, const SeedSpec& seed);
std::vector<std::size_t> sample_subset(std::size_t n, std::size_t k, SampleRng& rng);

/// Uniform coordinate subtorus: uniform axes, independent uniform base.
SubtorusSpec sample_subtorus(std::size_t n, std::size_t k, const SeedSpec& seed);
SubtorusSpec sample_subtorus(std::size_t n, std::size_t k, SampleRng& rng);

/// Uniform point of T^n.
TorusPoint sample_torus_point(std::size_t n, SampleRng& rng);

/// Uniform point in the Euclidean ball of the given radius in R^dim.
std::vector<double> sample_ball(std::size_t dim, double radius, const SeedSpec& seed);
std::vector<double> sample_ball(std::size_t dim, double radius, SampleRng& rng);

struct ChordSample {
  std::vector<double> point;  // (1-T) x + T z
  double t = 0.0;
};

/// Point on the chord [x, z] at a uniform parameter T.
ChordSample sample_chord_point(std::span<const double> x, std::span<const double> z,
                               const SeedSpec& seed);
ChordSample sample_chord_point(std::span<const double> x, std::span<const double> z,
                               SampleRng& rng);

}  // namespace torlab
