#pragma once

// Moments of coordinate projections |P_E v| for a uniformly random
// k-dimensional coordinate subspace E, by exact enumeration and by Monte
// Carlo, plus the restricted gradient norm of a zoo function on a subtorus.

#include <cstddef>
#include <cstdint>
#include <span>

#include "torlab/sampling.hpp"
#include "torlab/stats.hpp"
#include "torlab/torus.hpp"
#include "torlab/zoo.hpp"

namespace torlab {

inline constexpr std::uint64_t kEnumerationBudget = 10'000'000;
inline constexpr std::uint64_t kGridBudget = 10'000'000;

enum class MomentMethod { ExactEnumeration, MonteCarlo };

const char* to_string(MomentMethod m) noexcept;

struct MomentResult {
  double value = 0.0;      // (E |P_E v|^p)^{1/p}
  double std_error = 0.0;  // 0 for enumeration
  double moment = 0.0;     // E |P_E v|^p
  MomentMethod method = MomentMethod::ExactEnumeration;
  double bound = 0.0;      // alpha/(8(1+alpha)) * eps/k * |v|
  bool satisfied = false;  // value <= bound at 1e-12
  std::size_t terms = 0;   // subsets enumerated or samples drawn
};

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept;

/// alpha/(8(1+alpha)) * eps/k * vnorm
double lemma4_bound(double eps, double alpha, int k, double vnorm);

/// Averages (sum_{j in J} v_j^2)^{p/2} over all C(n,k) subsets J.
/// Throws BudgetExceeded above kEnumerationBudget subsets.
MomentResult exact_projection_moment(std::span<const double> v, std::size_t k, double p,
                                     double eps = 1.0, double alpha = 1.0);

MomentResult mc_projection_moment(std::span<const double> v, std::size_t k, double p,
                                  std::size_t samples, const SeedSpec& seed, double eps = 1.0,
                                  double alpha = 1.0, unsigned threads = 1);

/// 2k/(delta^2 n) + (k delta^2)^{p/2}: the split used to bound E|P_E v|^p for unit v.
double projection_split_bound(std::size_t n, std::size_t k, double p, double delta);

/// |P_J g| for the coordinate projection onto the free axes of `sub`.
double restricted_norm(const SubtorusSpec& sub, std::span<const double> g);

struct Quadrature {
  enum class Kind { Grid, MonteCarlo };
  Kind kind = Kind::MonteCarlo;
  std::size_t size = 0;  // points per axis (grid) or sample count

  static Quadrature grid(std::size_t m) { return {Kind::Grid, m}; }
  static Quadrature monte_carlo(std::size_t samples) { return {Kind::MonteCarlo, samples}; }
};

struct RestrictedPNorm {
  double value = 0.0;  // (int_M |grad_M f|^p)^{1/p}
  double std_error = 0.0;
  double moment = 0.0;  // int_M |grad_M f|^p
  double moment_std_error = 0.0;
  std::size_t evaluations = 0;
  std::size_t skipped = 0;  // non-smooth points skipped (grid) or redrawn (Monte Carlo)
};

/// Quadrature of |P_J grad f|^p over the subtorus. Grid quadrature uses cell
/// centres (i + 1/2)/m and skips detected kinks; Monte Carlo redraws them.
RestrictedPNorm restricted_grad_pnorm(const FunctionSpec& f, const SubtorusSpec& sub, double p,
                                      const Quadrature& quadrature, const SeedSpec& seed = {},
                                      unsigned threads = 1);

/// Joint Monte Carlo estimate of int_{T^n} E_E |P_E grad f|^p over uniform x
/// and uniform k-subsets E.
MeanEstimate averaged_projected_moment(const FunctionSpec& f, std::size_t k, double p,
                                       std::size_t samples, const SeedSpec& seed,
                                       unsigned threads = 1);

}  // namespace torlab
