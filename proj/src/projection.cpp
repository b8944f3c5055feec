#include "torlab/projection.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "torlab/error.hpp"
#include "torlab/parallel.hpp"

namespace torlab {

namespace {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void finish(MomentResult& r, double eps, double alpha, std::size_t k, double vnorm) {
  r.bound = lemma4_bound(eps, alpha, static_cast<int>(k), vnorm);
  r.satisfied = r.value <= r.bound + 1e-12;
}

}  // namespace

const char* to_string(MomentMethod m) noexcept {
  return m == MomentMethod::ExactEnumeration ? "exact-enumeration" : "monte-carlo";
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

double lemma4_bound(double eps, double alpha, int k, double vnorm) {
  require(eps > 0.0 && alpha > 0.0 && k >= 1 && vnorm >= 0.0, ErrorCode::InvalidInput,
          "invalid projection bound parameters");
  return alpha / (8.0 * (1.0 + alpha)) * eps / k * vnorm;
}

MomentResult exact_projection_moment(std::span<const double> v, std::size_t k, double p,
                                     double eps, double alpha) {
  const std::size_t n = v.size();
  require(k >= 1 && k <= n, ErrorCode::InvalidInput, "projection moment needs 1 <= k <= n");
  require(p >= 1.0, ErrorCode::InvalidInput, "p must be >= 1");
  const std::uint64_t total = binomial(n, k);
  require(total <= kEnumerationBudget, ErrorCode::BudgetExceeded,
          "C(n,k) exceeds the enumeration budget; use the Monte Carlo estimator");

  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = v[i] * v[i];

  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  CompensatedSum acc;
  for (;;) {
    double s = 0.0;
    for (std::size_t j : idx) s += sq[j];
    acc.add(std::pow(s, p / 2.0));
    // Advance to the next combination in lexicographic order.
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }

  MomentResult r;
  r.method = MomentMethod::ExactEnumeration;
  r.moment = acc.value() / static_cast<double>(total);
  r.value = std::pow(r.moment, 1.0 / p);
  r.terms = total;
  finish(r, eps, alpha, k, norm(v));
  return r;
}

MomentResult mc_projection_moment(std::span<const double> v, std::size_t k, double p,
                                  std::size_t samples, const SeedSpec& seed, double eps,
                                  double alpha, unsigned threads) {
  const std::size_t n = v.size();
  require(k >= 1 && k <= n, ErrorCode::InvalidInput, "projection moment needs 1 <= k <= n");
  require(p >= 1.0, ErrorCode::InvalidInput, "p must be >= 1");
  require(samples >= 1, ErrorCode::InvalidInput, "need at least one sample");
  const auto ys = parallel_map(samples, threads, [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t j : sample_subset(n, k, seed.at(i))) s += v[j] * v[j];
    return std::pow(s, p / 2.0);
  });
  const auto pm = power_mean_estimate(ys, p, seed.at(samples));
  MomentResult r;
  r.method = MomentMethod::MonteCarlo;
  r.moment = pm.moment;
  r.value = pm.value;
  r.std_error = pm.std_error;
  r.terms = samples;
  finish(r, eps, alpha, k, norm(v));
  return r;
}

double projection_split_bound(std::size_t n, std::size_t k, double p, double delta) {
  require(n >= 1 && k >= 1 && delta > 0.0, ErrorCode::InvalidInput, "invalid split bound input");
  const double kd = static_cast<double>(k);
  return 2.0 * kd / (delta * delta * static_cast<double>(n)) + std::pow(kd * delta * delta, p / 2.0);
}

double restricted_norm(const SubtorusSpec& sub, std::span<const double> g) {
  double s = 0.0;
  for (std::size_t a : sub.free_axes()) s += g[a] * g[a];
  return std::sqrt(s);
}

RestrictedPNorm restricted_grad_pnorm(const FunctionSpec& f, const SubtorusSpec& sub, double p,
                                      const Quadrature& quadrature, const SeedSpec& seed,
                                      unsigned threads) {
  require(p >= 1.0, ErrorCode::InvalidInput, "p must be >= 1");
  require(sub.ambient_dim() == f.ambient_dim(), ErrorCode::InvalidInput,
          "subtorus and function live on different tori");
  require(quadrature.size >= 1, ErrorCode::InvalidInput, "quadrature needs at least one point");
  const std::size_t k = sub.dim();

  struct Point {
    double value = 0.0;
    bool skipped = false;
    std::size_t redraws = 0;
  };
  std::vector<Point> pts;
  if (quadrature.kind == Quadrature::Kind::Grid) {
    const std::size_t m = quadrature.size;
    const double total = std::pow(static_cast<double>(m), static_cast<double>(k));
    require(total <= static_cast<double>(kGridBudget), ErrorCode::BudgetExceeded,
            "grid quadrature m^k exceeds the budget");
    pts = parallel_map(static_cast<std::size_t>(total), threads, [&](std::size_t flat) {
      std::vector<double> u(k);
      for (std::size_t j = k; j-- > 0;) {
        u[j] = (static_cast<double>(flat % m) + 0.5) / static_cast<double>(m);
        flat /= m;
      }
      const TorusPoint x = embed(sub, u);
      Point pt;
      if (!f.is_smooth_at(x.coords())) {
        pt.skipped = true;
        return pt;
      }
      pt.value = std::pow(restricted_norm(sub, f.grad(x.coords())), p);
      return pt;
    });
  } else {
    const std::size_t samples = quadrature.size;
    pts = parallel_map(samples, threads, [&](std::size_t i) {
      SampleRng rng(seed.at(i));
      Point pt;
      std::vector<double> u(k);
      for (int attempt = 0; attempt < 10; ++attempt) {
        for (double& c : u) c = rng.uniform();
        const TorusPoint x = embed(sub, u);
        if (f.is_smooth_at(x.coords())) {
          pt.value = std::pow(restricted_norm(sub, f.grad(x.coords())), p);
          return pt;
        }
        ++pt.redraws;
      }
      fail(ErrorCode::BudgetExceeded, "non-smooth points on a set of positive measure");
    });
  }

  std::vector<double> ys;
  ys.reserve(pts.size());
  RestrictedPNorm r;
  for (const auto& pt : pts) {
    r.skipped += pt.skipped ? 1 : pt.redraws;
    if (!pt.skipped) ys.push_back(pt.value);
  }
  require(!ys.empty(), ErrorCode::BudgetExceeded, "every quadrature point was non-smooth");
  const auto pm = power_mean_estimate(ys, p, seed.at(pts.size()));
  r.value = pm.value;
  r.std_error = quadrature.kind == Quadrature::Kind::Grid ? 0.0 : pm.std_error;
  r.moment = pm.moment;
  r.moment_std_error = quadrature.kind == Quadrature::Kind::Grid ? 0.0 : pm.moment_std_error;
  r.evaluations = pts.size();
  return r;
}

MeanEstimate averaged_projected_moment(const FunctionSpec& f, std::size_t k, double p,
                                       std::size_t samples, const SeedSpec& seed,
                                       unsigned threads) {
  const std::size_t n = f.ambient_dim();
  require(k >= 1 && k <= n, ErrorCode::InvalidInput, "need 1 <= k <= n");
  const auto ys = parallel_map(samples, threads, [&](std::size_t i) {
    SampleRng rng(seed.at(i));
    const TorusPoint x = draw_smooth_point(f, rng);
    const auto g = f.grad(x.coords());
    double s = 0.0;
    for (std::size_t j : sample_subset(n, k, rng)) s += g[j] * g[j];
    return std::pow(s, p / 2.0);
  });
  return mean_estimate(ys);
}

}  // namespace torlab
