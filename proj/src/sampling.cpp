#include "torlab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string_view>

#include "torlab/error.hpp"

namespace torlab {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t stream_id_for(std::string_view name, std::span<const std::uint64_t> keys) {
  // FNV-1a over the name, then fold the keys through the mixer.
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  for (std::uint64_t k : keys) h = mix64(h ^ mix64(k + kGolden));
  return h;
}

SampleRng::SampleRng(const SeedSpec& seed) noexcept {
  std::uint64_t h = mix64(seed.master_seed + kGolden);
  h = mix64(h ^ (seed.stream_id + 2 * kGolden));
  h = mix64(h ^ (seed.sample_index + 3 * kGolden));
  state_ = h;
}

SampleRng::result_type SampleRng::operator()() noexcept {
  state_ += kGolden;
  return mix64(state_);
}

double SampleRng::uniform() noexcept {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double SampleRng::uniform_pos() noexcept {
  return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
}

std::uint64_t SampleRng::below(std::uint64_t bound) noexcept {
  // Lemire's nearly-divisionless rejection.
  unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>((*this)()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double SampleRng::normal() noexcept {
  // Box-Muller, one variate per call keeps the draw count per sample fixed.
  const double u1 = uniform_pos();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::vector<std::size_t> sample_subset(std::size_t n, std::size_t k, SampleRng& rng) {
  require(k >= 1 && k <= n, ErrorCode::InvalidInput, "sample_subset requires 1 <= k <= n");
  std::vector<std::size_t> chosen;
  chosen.reserve(k);
  for (std::size_t j = n - k; j < n; ++j) {
    const auto t = static_cast<std::size_t>(rng.below(j + 1));
    if (std::find(chosen.begin(), chosen.end(), t) == chosen.end())
      chosen.push_back(t);
    else
      chosen.push_back(j);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::vector<std::size_t> sample_subset(std::size_t n, std::size_t k, const SeedSpec& seed) {
  SampleRng rng(seed);
  return sample_subset(n, k, rng);
}

TorusPoint sample_torus_point(std::size_t n, SampleRng& rng) {
  std::vector<double> c(n);
  for (double& v : c) v = rng.uniform();
  return TorusPoint::wrap(c);
}

SubtorusSpec sample_subtorus(std::size_t n, std::size_t k, SampleRng& rng) {
  auto axes = sample_subset(n, k, rng);
  return SubtorusSpec::make(n, std::move(axes), sample_torus_point(n, rng));
}

SubtorusSpec sample_subtorus(std::size_t n, std::size_t k, const SeedSpec& seed) {
  SampleRng rng(seed);
  return sample_subtorus(n, k, rng);
}

std::vector<double> sample_ball(std::size_t dim, double radius, SampleRng& rng) {
  require(radius > 0.0 && std::isfinite(radius), ErrorCode::InvalidInput,
          "ball radius must be positive");
  std::vector<double> z(dim);
  if (dim == 0) return z;
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& c : z) {
      c = rng.normal();
      norm2 += c * c;
    }
  } while (norm2 == 0.0);
  const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
  const double scale = r / std::sqrt(norm2);
  for (double& c : z) c *= scale;
  return z;
}

std::vector<double> sample_ball(std::size_t dim, double radius, const SeedSpec& seed) {
  SampleRng rng(seed);
  return sample_ball(dim, radius, rng);
}

ChordSample sample_chord_point(std::span<const double> x, std::span<const double> z,
                               SampleRng& rng) {
  require(x.size() == z.size(), ErrorCode::InvalidInput, "chord endpoints differ in dimension");
  ChordSample s;
  s.t = rng.uniform();
  s.point.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s.point[i] = (1.0 - s.t) * x[i] + s.t * z[i];
  return s;
}

ChordSample sample_chord_point(std::span<const double> x, std::span<const double> z,
                               const SeedSpec& seed) {
  SampleRng rng(seed);
  return sample_chord_point(x, z, rng);
}

}  // namespace torlab
