#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include <boost/math/distributions/chi_squared.hpp>

#include "torlab/error.hpp"
#include "torlab/parallel.hpp"
#include "torlab/sampling.hpp"

using namespace torlab;

namespace {

// Asymptotic Kolmogorov distribution tail, P(K > t).
double ks_pvalue(std::vector<double> u, double (*cdf)(double)) {
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double f = cdf(u[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  const double t = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double p = 0.0;
  for (int j = 1; j <= 100; ++j) p += 2.0 * ((j % 2) ? 1.0 : -1.0) * std::exp(-2.0 * j * j * t * t);
  return std::clamp(p, 0.0, 1.0);
}

double chi_square_pvalue(const std::vector<double>& observed, double expected) {
  double chi = 0.0;
  for (double o : observed) chi += (o - expected) * (o - expected) / expected;
  boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, chi));
}

}  // namespace

TEST_CASE("seed triple determines the stream") {
  const SeedSpec s{42, 7, 3};
  SampleRng a(s), b(s);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());
  SampleRng c(SeedSpec{42, 7, 4});
  SampleRng d(s);
  bool differ = false;
  for (int i = 0; i < 4; ++i) differ = differ || c() != d();
  CHECK(differ);
  CHECK(stream_id_for("a") != stream_id_for("b"));
  CHECK(stream_id_for("a", std::array<std::uint64_t, 1>{1}) != stream_id_for("a", std::array<std::uint64_t, 1>{2}));
}

TEST_CASE("parallel_map is independent of thread count") {
  auto draw = [](std::size_t i) { return SampleRng(SeedSpec{5, 1, i}).uniform(); };
  const auto one = parallel_map(1000, 1, draw);
  const auto four = parallel_map(1000, 4, draw);
  CHECK(one == four);
}

TEST_CASE("below is unbiased for small bounds") {
  SampleRng rng(SeedSpec{1, 1, 1});
  std::vector<double> counts(7, 0.0);
  for (int i = 0; i < 70000; ++i) counts[rng.below(7)] += 1.0;
  CHECK(chi_square_pvalue(counts, 10000.0) > 0.001);
}

TEST_CASE("sample_subset examples") {
  const auto all = sample_subset(5, 5, SeedSpec{0, 0, 0});
  CHECK(all == std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK(sample_subset(20, 4, SeedSpec{3, 4, 5}) == sample_subset(20, 4, SeedSpec{3, 4, 5}));
  CHECK_THROWS_AS(sample_subset(3, 4, SeedSpec{}), Error);
  const auto s = sample_subset(100, 10, SeedSpec{1, 2, 3});
  CHECK(std::is_sorted(s.begin(), s.end()));
  CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
}

TEST_CASE("sample_subset is uniform (chi-square against exact enumeration)") {
  for (auto [n, k] : std::vector<std::pair<std::size_t, std::size_t>>{{6, 2}, {5, 3}, {7, 3}, {10, 2}}) {
    std::map<std::vector<std::size_t>, double> counts;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) counts[sample_subset(n, k, SeedSpec{17, n * 10 + k, static_cast<std::uint64_t>(i)})] += 1;
    std::size_t combos = 1;
    for (std::size_t j = 0; j < k; ++j) combos = combos * (n - j) / (j + 1);
    REQUIRE(counts.size() == combos);
    std::vector<double> obs;
    for (const auto& [_, c] : counts) obs.push_back(c);
    CHECK(chi_square_pvalue(obs, static_cast<double>(draws) / static_cast<double>(combos)) > 0.001);
  }
}

TEST_CASE("sample_subtorus membership marginal is k/n") {
  const std::size_t n = 10, k = 3;
  std::vector<double> member(n, 0.0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const auto s = sample_subtorus(n, k, SeedSpec{8, 8, static_cast<std::uint64_t>(i)});
    for (std::size_t a : s.free_axes()) member[a] += 1.0;
    if (i < 100)
      for (std::size_t a : s.free_axes()) CHECK(s.base()[a] == 0.0);
  }
  const double pr = static_cast<double>(k) / n;
  const double sigma = std::sqrt(draws * pr * (1 - pr));
  for (double m : member) CHECK(std::fabs(m - draws * pr) <= 3.5 * sigma);
  const auto full = sample_subtorus(4, 4, SeedSpec{});
  CHECK(full.dim() == 4);
}

TEST_CASE("sample_ball support and second moment") {
  CHECK(sample_ball(0, 1.0, SeedSpec{}).empty());
  CHECK_THROWS_AS(sample_ball(2, 0.0, SeedSpec{}), Error);
  const int draws = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const auto z = sample_ball(2, 0.5, SeedSpec{3, 3, static_cast<std::uint64_t>(i)});
    const double r2 = z[0] * z[0] + z[1] * z[1];
    CHECK(r2 <= 0.25 + 1e-15);
    sum += r2;
    sum2 += r2 * r2;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sum2 / draws - mean * mean) / draws);
  CHECK(std::fabs(mean - 0.125) <= 3.5 * se);
}

TEST_CASE("sample_ball radial law r^dim (KS)") {
  for (std::size_t dim = 1; dim <= 3; ++dim) {
    std::vector<double> u;
    for (int i = 0; i < 20000; ++i) {
      const auto z = sample_ball(dim, 2.0, SeedSpec{4, dim, static_cast<std::uint64_t>(i)});
      double r2 = 0.0;
      for (double c : z) r2 += c * c;
      // map through the radial CDF; the result should be uniform
      u.push_back(std::pow(std::sqrt(r2) / 2.0, static_cast<double>(dim)));
    }
    CHECK(ks_pvalue(u, [](double x) { return x; }) > 0.001);
  }
}

TEST_CASE("sample_chord_point") {
  const std::vector<double> x{0.1, 0.2}, z{0.3, -0.1};
  std::vector<double> ts;
  for (int i = 0; i < 100000; ++i) {
    const auto c = sample_chord_point(x, z, SeedSpec{5, 5, static_cast<std::uint64_t>(i)});
    ts.push_back(c.t);
    for (int j = 0; j < 2; ++j) CHECK(std::fabs(c.point[j] - ((1 - c.t) * x[j] + c.t * z[j])) <= 1e-12);
  }
  CHECK(ks_pvalue(ts, [](double t) { return t; }) > 0.001);
  const auto same = sample_chord_point(x, x, SeedSpec{});
  for (int j = 0; j < 2; ++j) CHECK(same.point[j] == doctest::Approx(x[j]).epsilon(1e-15));
}
