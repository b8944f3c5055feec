#include "torlab/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "torlab/error.hpp"

namespace torlab {

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::fabs(sum_) >= std::fabs(x))
    comp_ += (sum_ - t) + x;
  else
    comp_ += (x - t) + sum_;
  sum_ = t;
}

MeanEstimate mean_estimate(std::span<const double> xs) {
  MeanEstimate e;
  e.count = xs.size();
  if (xs.empty()) return e;
  CompensatedSum s;
  for (double x : xs) s.add(x);
  e.mean = s.value() / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    CompensatedSum ss;
    for (double x : xs) ss.add((x - e.mean) * (x - e.mean));
    const double var = ss.value() / static_cast<double>(xs.size() - 1);
    e.std_error = std::sqrt(var / static_cast<double>(xs.size()));
  }
  return e;
}

PowerMeanEstimate power_mean_estimate(std::span<const double> pth_powers, double p,
                                      const SeedSpec& bootstrap_seed) {
  require(p >= 1.0, ErrorCode::InvalidInput, "power mean needs p >= 1");
  const MeanEstimate m = mean_estimate(pth_powers);
  PowerMeanEstimate r;
  r.moment = std::max(0.0, m.mean);
  r.moment_std_error = m.std_error;
  r.value = std::pow(r.moment, 1.0 / p);
  if (m.std_error == 0.0) return r;

  const double slope = p * std::pow(r.value, p - 1.0);
  if (r.value > 1e-12 && slope > 0.0 && std::isfinite(m.std_error / slope)) {
    r.std_error = m.std_error / slope;
    return r;
  }

  // Percentile bootstrap of the root; report half the central 95% width / 1.96.
  constexpr int kResamples = 100;
  SampleRng rng(bootstrap_seed);
  const std::size_t n = pth_powers.size();
  std::vector<double> roots(kResamples);
  for (double& root : roots) {
    CompensatedSum s;
    for (std::size_t i = 0; i < n; ++i) s.add(pth_powers[rng.below(n)]);
    root = std::pow(std::max(0.0, s.value() / static_cast<double>(n)), 1.0 / p);
  }
  std::sort(roots.begin(), roots.end());
  const double lo = roots[2];
  const double hi = roots[97];
  r.std_error = (hi - lo) / (2.0 * 1.959963984540054);
  r.bootstrapped = true;
  return r;
}

BinomialInterval wilson_interval(std::size_t successes, std::size_t trials, double confidence) {
  require(trials > 0 && successes <= trials, ErrorCode::InvalidInput, "bad binomial counts");
  require(confidence > 0.0 && confidence < 1.0, ErrorCode::InvalidInput, "bad confidence level");
  const double z =
      boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + confidence / 2.0);
  const double nt = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / nt;
  const double denom = 1.0 + z * z / nt;
  const double centre = (ph + z * z / (2.0 * nt)) / denom;
  const double half = z * std::sqrt(ph * (1.0 - ph) / nt + z * z / (4.0 * nt * nt)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double median(std::vector<double> xs) {
  require(!xs.empty(), ErrorCode::InvalidInput, "median of empty set");
  const std::size_t mid = xs.size() / 2;
  std::nth_element(xs.begin(), xs.begin() + mid, xs.end());
  const double upper = xs[mid];
  if (xs.size() % 2 == 1) return upper;
  const double lower = *std::max_element(xs.begin(), xs.begin() + mid);
  return 0.5 * (lower + upper);
}

}  // namespace torlab
