// Acceptance suite: one PASS/FAIL line per criterion, each with its runtime limit.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "torlab/bounds.hpp"
#include "torlab/harness.hpp"
#include "torlab/morrey.hpp"
#include "torlab/oscillation.hpp"
#include "torlab/projection.hpp"
#include "torlab/stats.hpp"

using namespace torlab;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::vector<double> random_unit(std::size_t n, SampleRng& rng) {
  std::vector<double> v(n);
  double s = 0.0;
  for (double& x : v) {
    x = rng.normal();
    s += x * x;
  }
  for (double& x : v) x /= std::sqrt(s);
  return v;
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome projection_moments() {
  SampleRng rng(SeedSpec{1001, 0, 0});
  int agree = 0, total = 0;
  for (double p : {2.0, 4.0, 6.0}) {
    for (std::uint64_t t = 0; t < 20; ++t) {
      const auto v = random_unit(12, rng);
      const auto ex = exact_projection_moment(v, 3, p);
      const auto mc = mc_projection_moment(v, 3, p, 100000, SeedSpec{1001, static_cast<std::uint64_t>(p), t});
      ++total;
      agree += ex.terms == 220 && std::fabs(mc.value - ex.value) <= 4.0 * mc.std_error ? 1 : 0;
    }
  }
  return {agree * 100 >= 95 * total, fmt("%d/%d within 4 std errors", agree, total)};
}

Outcome closed_form_moment() {
  const std::vector<std::tuple<std::size_t, std::size_t, double>> triples = {
      {4, 2, 2.0}, {5, 1, 3.0}, {6, 3, 1.5}, {8, 2, 4.0}, {10, 5, 2.5},
      {12, 3, 6.0}, {15, 4, 8.0}, {16, 8, 3.0}, {20, 2, 5.0}, {9, 9, 2.0}};
  int ok = 0;
  double worst_rel = 0.0;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto [n, k, p] = triples[i];
    std::vector<double> e1(n, 0.0);
    e1[0] = 1.0;
    const double truth = std::pow(static_cast<double>(k) / static_cast<double>(n), 1.0 / p);
    const auto ex = exact_projection_moment(e1, k, p);
    const auto mc = mc_projection_moment(e1, k, p, 100000, SeedSpec{1002, i, 0});
    const double rel = std::fabs(ex.value - truth) / truth;
    worst_rel = std::max(worst_rel, rel);
    const bool mc_ok = mc.std_error == 0.0 ? mc.value == truth : std::fabs(mc.value - truth) <= 4.0 * mc.std_error;
    ok += rel <= 4 * 2.2e-16 && mc_ok ? 1 : 0;
  }
  return {ok == 10, fmt("%d/10 triples, worst enumeration relative error %.2e", ok, worst_rel)};
}

Outcome hypergeometric_chain() {
  std::size_t cases = 0, bad = 0;
  for (std::uint64_t n = 1; n <= 50; ++n)
    for (std::uint64_t k = 1; k <= std::min<std::uint64_t>(5, n); ++k)
      for (std::uint64_t m = 0; m + k <= n; ++m, ++cases) bad += avoid_chain_exact(n, k, m).ordered() ? 0 : 1;
  return {bad == 0, fmt("%zu cases checked in exact rationals, %zu violations", cases, bad)};
}

Outcome lemma_chain() {
  SampleRng rng(SeedSpec{1004, 0, 0});
  std::size_t admissible = 0, violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const Dimension n = Dimension::from_log(1.0L + rng.uniform() * 9999.0L);
    const double eps = rng.uniform_pos(), alpha = rng.uniform_pos();
    const int k = max_admissible_k(n, eps, alpha);
    if (k < 1) continue;
    ++admissible;
    const auto r = check_lemma1(n, eps, alpha, k);
    if (!r.admissible || !r.main.holds() || !r.half_n.holds()) ++violations;
  }
  std::size_t strong = 0, implication_fail = 0;
  for (int i = 0; i < 10000; ++i) {
    const Dimension n = Dimension::from_log(1.0L + rng.uniform() * 9999.0L);
    const double eps = rng.uniform_pos(), alpha = rng.uniform_pos();
    const int k = 1 + static_cast<int>(rng.below(30));
    const auto r = check_lemma1(n, eps, alpha, k);
    if (r.strong.holds()) {
      ++strong;
      if (!r.sufficient.holds()) ++implication_fail;
    }
  }
  return {admissible > 0 && strong > 0 && violations == 0 && implication_fail == 0,
          fmt("%zu admissible tuples, %zu violations; %zu tuples with the strong form, %zu implication failures",
              admissible, violations, strong, implication_fail)};
}

Outcome oscillation_oracles() {
  SampleRng rng(SeedSpec{1005, 0, 0});
  int enclosed = 0, tight = 0;
  double worst_gap = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t k = 1 + static_cast<std::size_t>(i % 3);
    const std::size_t n = k + rng.below(5);
    const SubtorusSpec sub = sample_subtorus(n, k, rng);
    FunctionSpec f;
    double truth = 0.0;
    switch ((i / 3) % 3) {
      case 0: f = zoo_construct(Family::TrigPoly, ZooParams{}, n); break;
      case 1: {
        ZooParams p;
        p.axis = rng.below(n);
        f = zoo_construct(Family::CoordinateSawtooth, p, n);
        truth = sub.is_free(p.axis) ? 0.5 : 0.0;
        break;
      }
      default: {
        ZooParams p;
        p.center = embed(sub, sample_torus_point(k, rng).coords());
        f = zoo_construct(Family::DistToPoint, p, n);
        truth = std::sqrt(static_cast<double>(k)) / 2.0;
      }
    }
    const std::size_t m = k == 1 ? 64 : (k == 2 ? 32 : 16);
    const auto grid = grid_osc(f, sub, m);
    const auto ref = refine_osc(f, sub, 1e-3, 1'000'000);
    const bool ok = grid.osc_lower <= truth + 1e-12 && truth <= grid.osc_upper + 1e-12 &&
                    ref.osc_lower <= truth + 1e-12 && truth <= ref.osc_upper + 1e-12;
    enclosed += ok ? 1 : 0;
    tight += ref.gap() <= 1e-3 && !ref.exhausted ? 1 : 0;
    worst_gap = std::max(worst_gap, ref.gap());
  }
  return {enclosed == 100 && tight == 100,
          fmt("%d/100 enclosed, %d/100 refined to gap <= 1e-3 (worst %.2e)", enclosed, tight, worst_gap)};
}

Outcome gradient_checks() {
  SampleRng rng(SeedSpec{1006, 0, 0});
  const std::size_t n = 5;
  ZooParams centred;
  centred.center = sample_torus_point(n, rng);
  ZooParams saw;
  saw.axis = 2;
  ZooParams maxsaw;
  maxsaw.axes = {0, 1, 3};
  ZooParams smooth = centred;
  smooth.smoothing = 0.05;
  const std::vector<FunctionSpec> zoo = {
      zoo_construct(Family::DistToPoint, centred, n), zoo_construct(Family::CoordinateSawtooth, saw, n),
      zoo_construct(Family::MaxSawtooth, maxsaw, n), random_trig_poly(n, 4, 3, 3, rng),
      zoo_construct(Family::SmoothedDistance, smooth, n)};
  int ok = 0, total = 0;
  double worst = 0.0;
  for (const auto& f : zoo) {
    for (int i = 0; i < 100; ++i) {
      const TorusPoint x = draw_smooth_point(f, rng);
      const auto g = f.grad(x.coords());
      const auto fd = zoo_grad_fd(f, x);
      double diff = 0.0, norm = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        diff += (g[j] - fd[j]) * (g[j] - fd[j]);
        norm += g[j] * g[j];
      }
      // relative to the gradient scale max(|g|, L)
      const double rel = std::sqrt(diff) / std::max(std::sqrt(norm), f.lipschitz_constant());
      worst = std::max(worst, rel);
      ++total;
      ok += rel <= 1e-5 ? 1 : 0;
    }
  }
  return {ok == total, fmt("%d/%d points, worst relative error %.2e", ok, total, worst)};
}

Outcome density_constant() {
  bool ok = true;
  std::ostringstream detail;
  for (std::size_t k : {2, 3}) {
    for (double alpha : {0.5, 1.0}) {
      const auto r = mc_density_identity(k, alpha, 100000, SeedSpec{1007, k, static_cast<std::uint64_t>(alpha * 10)});
      ok = ok && std::fabs(r.z_closed) <= 4.0;
      if (k == 3) ok = ok && std::fabs(r.z_printed) > 5.0;
      detail << fmt("k=%zu a=%.1f z=%.2f z_printed=%.1f; ", k, alpha, r.z_closed, r.z_printed);
    }
  }
  return {ok, detail.str()};
}

Outcome morrey_inequality() {
  SampleRng rng(SeedSpec{1008, 0, 0});
  const std::size_t n = 6;
  std::vector<FunctionSpec> zoo;
  for (int i = 0; i < 10; ++i) {
    ZooParams p;
    p.center = sample_torus_point(n, rng);
    p.axis = rng.below(n);
    p.axes = {0, 1 + rng.below(n - 1)};
    switch (i % 5) {
      case 0: zoo.push_back(zoo_construct(Family::DistToPoint, p, n)); break;
      case 1: zoo.push_back(zoo_construct(Family::CoordinateSawtooth, p, n)); break;
      case 2: zoo.push_back(zoo_construct(Family::MaxSawtooth, p, n)); break;
      case 3: zoo.push_back(random_trig_poly(n, 4, 3, 3, rng)); break;
      default: zoo.push_back(zoo_construct(Family::SmoothedDistance, p, n));
    }
  }
  int chord_ok = 0, chord_total = 0;
  for (std::size_t fi = 0; fi < zoo.size(); ++fi) {
    for (std::size_t k : {2, 3}) {
      const SubtorusSpec sub = sample_subtorus(n, k, rng);
      const TorusPoint x = sample_torus_point(k, rng);
      std::vector<double> dir(k);
      double nn = 0.0;
      for (double& d : dir) {
        d = rng.normal();
        nn += d * d;
      }
      const double len = 0.05 + 0.45 * rng.uniform();
      std::vector<double> y(x.coords().begin(), x.coords().end());
      for (std::size_t j = 0; j < k; ++j) y[j] += len * dir[j] / std::sqrt(nn);
      const auto r = mc_chord_verify(zoo[fi], sub, Segment::make(x, TorusPoint::wrap(y)), 1.0, 10000,
                                     SeedSpec{1008, fi * 10 + k, 0});
      ++chord_total;
      chord_ok += r.satisfied ? 1 : 0;
    }
  }
  int chain_ok = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const std::size_t k = 2 + t % 2;
    const FunctionSpec& f = zoo[t % zoo.size()];
    const SubtorusSpec sub = sample_subtorus(n, k, rng);
    const TorusPoint x = sample_torus_point(k, rng);
    const TorusPoint y = sample_torus_point(k, rng);
    const auto c = chained_osc_bound(f, sub, x, y, 1.0, 2000, SeedSpec{1009, t, 0});
    chain_ok += c.measured <= c.bound ? 1 : 0;
  }
  return {chord_ok == chord_total && chain_ok == 100,
          fmt("chord bound satisfied %d/%d, chained bound dominates %d/100", chord_ok, chord_total, chain_ok)};
}

Outcome path_construction() {
  SampleRng rng(SeedSpec{1010, 0, 0});
  int bad = 0, checked = 0;
  double worst_leg = 0.0;
  for (std::size_t k = 1; k <= 6; ++k) {
    for (int t = 0; t < 1000; ++t) {
      const TorusPoint x = sample_torus_point(k, rng);
      const TorusPoint y = sample_torus_point(k, rng);
      ++checked;
      bad += validate_path(build_path(x, y, PathMode::EqualSubdivision), x, y).empty() ? 0 : 1;
      if (k >= 2) {
        const auto p = build_path(x, y, PathMode::PaperIsosceles);
        ++checked;
        bad += validate_path(p, x, y).empty() ? 0 : 1;
        for (double len : p.segment_lengths) worst_leg = std::max(worst_leg, std::fabs(len - 0.5));
      }
    }
  }
  return {bad == 0 && worst_leg <= 1e-12,
          fmt("%d/%d paths valid, worst |leg - 1/2| = %.1e", checked - bad, checked, worst_leg)};
}

Outcome theorem_trend() {
  ExperimentConfig c;
  c.experiment = Experiment::TheoremVerify;
  c.functions = {Json{{"family", "dist-to-point"}}};
  c.n_values = {16, 64, 256, 1024};
  c.k_values = {1};
  c.eps = {0.2};
  c.trials = 200;
  c.timing = false;
  const auto records = run_theorem_verify(c);
  std::vector<BinomialInterval> ci;
  std::vector<double> frac;
  for (const auto& r : records)
    if (r.metric == "success_fraction") {
      ci.push_back(wilson_interval(*r.success, *r.trials, 0.95));
      frac.push_back(r.value);
    }
  bool ok = ci.size() == 4;
  for (std::size_t i = 1; i < ci.size(); ++i) ok = ok && ci[i].high >= ci[i - 1].low;
  ok = ok && frac.back() > 0.9;
  std::ostringstream d;
  for (double f : frac) d << fmt("%.3f ", f);
  return {ok, "success fractions at n = 16, 64, 256, 1024: " + d.str()};
}

Outcome sawtooth_rate() {
  ExperimentConfig c;
  c.experiment = Experiment::TheoremVerify;
  c.functions = {Json{{"family", "coordinate-sawtooth"}, {"axis", 0}}};
  c.n_values = {16};
  c.k_values = {1};
  c.eps = {0.4};
  c.trials = 1000;
  c.timing = false;
  const auto records = run_theorem_verify(c);
  const auto& r = records.front();
  const double p0 = 15.0 / 16.0;
  const double half = 2.5758293035489004 * std::sqrt(p0 * (1 - p0) / 1000.0);
  const bool ok = std::fabs(r.value - p0) <= half && *r.success + *r.failure + *r.undecided == 1000;
  return {ok, fmt("observed %.3f, 99%% interval [%.4f, %.4f], undecided %zu", r.value, p0 - half, p0 + half,
                  *r.undecided)};
}

Outcome reproducibility() {
  auto run_all = [](unsigned threads) {
    std::ostringstream os;
    ExperimentConfig tv;
    tv.experiment = Experiment::TheoremVerify;
    tv.functions = {Json{{"family", "trig-poly"}, {"random_terms", {{"terms", 3}, {"support", 2}}}},
                    Json{{"family", "smoothed-distance"}, {"center", "random"}}};
    tv.n_values = {8, 32};
    tv.k_values = {1, 2};
    tv.trials = 40;
    tv.samples = 2000;
    tv.master_seed = 77;
    tv.threads = threads;
    tv.timing = false;
    write_csv(os, run_theorem_verify(tv));

    ExperimentConfig l4;
    l4.experiment = Experiment::Lemma4Verify;
    l4.n_values = {10};
    l4.k_values = {3};
    l4.p_values = {4.0};
    l4.trials = 3;
    l4.samples = 20000;
    l4.master_seed = 77;
    l4.threads = threads;
    l4.timing = false;
    write_csv(os, run_lemma4_verify(l4));

    ExperimentConfig mv;
    mv.experiment = Experiment::MorreyVerify;
    mv.functions = {Json{{"family", "trig-poly"}, {"random_terms", {{"terms", 2}}}}};
    mv.n_values = {4};
    mv.k_values = {2};
    mv.trials = 2;
    mv.samples = 3000;
    mv.master_seed = 77;
    mv.threads = threads;
    mv.timing = false;
    write_csv(os, run_morrey_verify(mv));
    return os.str();
  };
  const std::string one = run_all(1);
  const std::string four = run_all(4);
  return {one == four && !one.empty(), fmt("%zu bytes of records, identical at 1 and 4 threads: %s", one.size(),
                                           one == four ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"projection moments: Monte Carlo vs exact enumeration", 10, projection_moments},
      {"closed-form moment for v = e1", 5, closed_form_moment},
      {"hypergeometric lower-bound chain", 5, hypergeometric_chain},
      {"lemma inequality chain in log space", 5, lemma_chain},
      {"oscillation certificates vs analytic values", 60, oscillation_oracles},
      {"analytic vs finite-difference gradients", 5, gradient_checks},
      {"chord density constant", 30, density_constant},
      {"Morrey inequality and chained bound", 60, morrey_inequality},
      {"path construction invariants", 5, path_construction},
      {"theorem trend experiment", 120, theorem_trend},
      {"sawtooth exact success rate", 60, sawtooth_rate},
      {"reproducibility across thread counts", 30, reproducibility},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < criteria[i].limit_s;
    const bool pass = o.passed && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s [%zu] %s (%.2fs / limit %.0fs%s): %s\n", pass ? "PASS" : "FAIL", i + 1, criteria[i].name, secs,
                criteria[i].limit_s, in_time ? "" : ", TOO SLOW", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
