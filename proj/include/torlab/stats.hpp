#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "torlab/sampling.hpp"

namespace torlab {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // standard error of the mean
  std::size_t count = 0;
};

/// Sample mean and standard error, summed in index order.
MeanEstimate mean_estimate(std::span<const double> xs);

/// (mean of y)^(1/p) for nonnegative samples y = |.|^p, with the standard
/// error of the root from the delta method. When the root is ~0 the delta
/// method degenerates and a 100-resample percentile bootstrap is used.
struct PowerMeanEstimate {
  double value = 0.0;
  double std_error = 0.0;
  double moment = 0.0;
  double moment_std_error = 0.0;
  bool bootstrapped = false;
};

PowerMeanEstimate power_mean_estimate(std::span<const double> pth_powers, double p,
                                      const SeedSpec& bootstrap_seed = {});

struct BinomialInterval {
  double low = 0.0;
  double high = 1.0;
};

/// Wilson score interval for `successes` out of `trials` at two-sided level `confidence`.
BinomialInterval wilson_interval(std::size_t successes, std::size_t trials, double confidence);

double median(std::vector<double> xs);

}  // namespace torlab
