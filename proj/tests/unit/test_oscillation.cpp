#include <doctest.h>

#include <cmath>
#include <numbers>

#include "torlab/error.hpp"
#include "torlab/oscillation.hpp"
#include "torlab/sampling.hpp"

using namespace torlab;

namespace {

FunctionSpec sine_axis0(std::size_t n, double amplitude) {
  ZooParams p;
  TrigTerm t;
  t.amplitude = amplitude;
  t.frequency.assign(n, 0);
  t.frequency[0] = 1;
  p.terms.push_back(t);
  return zoo_construct(Family::TrigPoly, p, n);
}

}  // namespace

TEST_CASE("covering radius") {
  CHECK(lattice_covering_radius(1, 100) == doctest::Approx(0.005));
  CHECK(lattice_covering_radius(4, 10) == doctest::Approx(0.1));
}

TEST_CASE("grid_osc examples") {
  const auto zero = zoo_construct(Family::TrigPoly, ZooParams{}, 3);
  const auto c0 = grid_osc(zero, SubtorusSpec::make(3, {0, 2}, TorusPoint::origin(3)), 8);
  CHECK(c0.osc_lower == 0.0);
  CHECK(c0.osc_upper == doctest::Approx(2.0 * c0.lipschitz_used * lattice_covering_radius(2, 8)));

  ZooParams saw;
  saw.axis = 1;
  const auto s = zoo_construct(Family::CoordinateSawtooth, saw, 3);
  const auto cs = grid_osc(s, SubtorusSpec::make(3, {1}, TorusPoint::wrap({0.3, 0.0, 0.6})), 100);
  CHECK(cs.osc_lower == 0.5);
  CHECK(cs.osc_upper == doctest::Approx(0.51));
  CHECK(cs.evaluations == 100);
  CHECK(cs.mesh == doctest::Approx(0.01));

  const auto d = zoo_construct(Family::DistToPoint, ZooParams{}, 2);
  const auto cd = grid_osc(d, SubtorusSpec::full(2), 64);
  CHECK(cd.osc_lower >= std::sqrt(2.0) / 2 - 0.02);
  CHECK(cd.osc_lower <= std::sqrt(2.0) / 2 + 1e-15);
  CHECK(cd.osc_upper >= std::sqrt(2.0) / 2);

  CHECK_THROWS_AS(grid_osc(d, SubtorusSpec::full(2), 1), Error);
  CHECK_THROWS_AS(grid_osc(zoo_construct(Family::DistToPoint, ZooParams{}, 5), SubtorusSpec::full(5), 40), Error);
}

TEST_CASE("gap law on full grids") {
  SampleRng rng(SeedSpec{51, 0, 0});
  for (int t = 0; t < 20; ++t) {
    const std::size_t k = 1 + rng.below(3);
    const std::size_t m = 2 + rng.below(20);
    const auto f = random_trig_poly(5, 3, 2, 2, rng);
    const auto c = grid_osc(f, sample_subtorus(5, k, rng), m);
    CHECK(c.osc_upper - c.osc_lower ==
          doctest::Approx(2.0 * f.lipschitz_constant() * std::sqrt(static_cast<double>(k)) / (2.0 * m)).epsilon(1e-12));
  }
}

TEST_CASE("grid certificate is thread-count independent") {
  SampleRng rng(SeedSpec{52, 0, 0});
  const auto f = random_trig_poly(6, 4, 3, 3, rng);
  const auto sub = sample_subtorus(6, 3, rng);
  const auto a = grid_osc(f, sub, 30, 1);
  const auto b = grid_osc(f, sub, 30, 4);
  CHECK(a.osc_lower == b.osc_lower);
  CHECK(a.argmax == b.argmax);
  CHECK(a.argmin == b.argmin);
}

TEST_CASE("refine_osc examples") {
  const auto zero = zoo_construct(Family::TrigPoly, ZooParams{}, 2);
  const auto c0 = refine_osc(zero, SubtorusSpec::full(2), 1e-6);
  CHECK(c0.osc_upper == 0.0);
  CHECK_FALSE(c0.exhausted);

  ZooParams saw;
  const auto s = zoo_construct(Family::CoordinateSawtooth, saw, 2);
  const auto cs = refine_osc(s, SubtorusSpec::make(2, {0}, TorusPoint::wrap({0.0, 0.4})), 1e-3);
  CHECK(cs.osc_lower >= 0.499);
  CHECK(cs.osc_lower <= 0.5);
  CHECK(cs.osc_upper >= 0.5);
  CHECK(cs.osc_upper <= 0.501);
  CHECK(cs.gap() <= 1e-3);

  const auto tiny = refine_osc(sine_axis0(3, 0.1), SubtorusSpec::full(3), 1e-9, 200);
  CHECK(tiny.exhausted);
  CHECK(tiny.osc_lower <= 0.2);
  CHECK(tiny.osc_upper >= 0.2);
}

TEST_CASE("certificate nesting") {
  SampleRng rng(SeedSpec{53, 0, 0});
  for (int t = 0; t < 15; ++t) {
    const std::size_t k = 1 + rng.below(3);
    const auto f = random_trig_poly(4, 3, 2, 2, rng);
    const auto sub = sample_subtorus(4, k, rng);
    const auto g = grid_osc(f, sub, 16);
    const auto r = refine_osc(f, sub, 2e-3, 300000);
    CHECK(r.osc_lower <= g.osc_upper + 1e-12);
    CHECK(g.osc_lower <= r.osc_upper + 1e-12);
    const auto both = intersect(g, r);
    CHECK(both.osc_lower >= std::max(g.osc_lower, r.osc_lower));
    CHECK(both.osc_upper <= std::min(g.osc_upper, r.osc_upper));
  }
}

TEST_CASE("restriction monotonicity") {
  SampleRng rng(SeedSpec{54, 0, 0});
  for (int t = 0; t < 20; ++t) {
    const auto f = random_trig_poly(5, 3, 3, 2, rng);
    const TorusPoint base = sample_torus_point(5, rng);
    const auto big = SubtorusSpec::make(5, {0, 2, 3}, base);
    const auto small = SubtorusSpec::make(5, {2}, base);
    const auto cb = grid_osc(f, big, 24);
    const auto cs = grid_osc(f, small, 24);
    CHECK(cs.osc_lower <= cb.osc_upper + 2.0 * f.lipschitz_constant() * lattice_covering_radius(3, 24));
  }
}

TEST_CASE("translation invariance") {
  SampleRng rng(SeedSpec{55, 0, 0});
  const std::size_t m = 20;
  for (int t = 0; t < 10; ++t) {
    ZooParams p;
    p.center = sample_torus_point(4, rng);
    const auto f = zoo_construct(Family::SmoothedDistance, p, 4);
    const TorusPoint base = sample_torus_point(4, rng);
    const auto sub = SubtorusSpec::make(4, {1, 3}, base);
    // free-axis shifts are lattice multiples so the evaluation set is carried onto itself
    std::vector<double> shift{rng.uniform(), static_cast<double>(rng.below(m)) / m, rng.uniform(),
                              static_cast<double>(rng.below(m)) / m};
    std::vector<double> moved(base.coords().begin(), base.coords().end());
    for (std::size_t i = 0; i < 4; ++i) moved[i] += shift[i];
    const auto sub2 = SubtorusSpec::make(4, {1, 3}, TorusPoint::wrap(moved));
    const auto a = grid_osc(f, sub, m);
    const auto b = grid_osc(f.translated(shift), sub2, m);
    CHECK(a.osc_lower == doctest::Approx(b.osc_lower).epsilon(1e-12));
    CHECK(a.osc_upper == doctest::Approx(b.osc_upper).epsilon(1e-12));
  }
}

TEST_CASE("tri-state indicator") {
  const auto zero = zoo_construct(Family::TrigPoly, ZooParams{}, 3);
  CHECK(osc_success_indicator(zero, SubtorusSpec::full(3), 0.1, GapPolicy{}).decision == OscDecision::Success);

  ZooParams saw;
  const auto s = zoo_construct(Family::CoordinateSawtooth, saw, 3);
  const auto in = SubtorusSpec::make(3, {0}, TorusPoint::origin(3));
  CHECK(osc_success_indicator(s, in, 0.4, GapPolicy{}).decision == OscDecision::Failure);
  const auto out = SubtorusSpec::make(3, {1}, TorusPoint::wrap({0.2, 0.0, 0.0}));
  CHECK(osc_success_indicator(s, out, 0.4, GapPolicy{}).decision == OscDecision::Success);

  // oscillation 2a sits 5e-5 below eps
  const double a = 0.05;
  const auto f = sine_axis0(2, a);
  const double eps = 2.0 * a + 5e-5;
  GapPolicy grid_only;
  grid_only.refine = false;
  CHECK(osc_success_indicator(f, SubtorusSpec::full(2), eps, grid_only).decision == OscDecision::Undecided);
  GapPolicy tight;
  tight.target_gap = 2e-5;
  tight.budget = 2'000'000;
  const auto ind = osc_success_indicator(f, SubtorusSpec::full(2), eps, tight);
  CHECK(ind.decision == OscDecision::Success);
  CHECK(ind.certificate.osc_upper <= eps);
}
