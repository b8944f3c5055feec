#pragma once

// Locally-Lipschitz test functions on T^n with analytic gradients and
// declared (conservative) Lipschitz constants.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "torlab/sampling.hpp"
#include "torlab/torus.hpp"

namespace torlab {

enum class Family {
  DistToPoint,         // torus_dist(x, center)
  CoordinateSawtooth,  // dist_{T^1}(x_axis, 0)
  MaxSawtooth,         // max over an index set of coordinate sawtooths
  TrigPoly,            // sum_j a_j sin(2 pi m_j . x + phi_j)
  SmoothedDistance,    // softmin-smoothed distance to a center
};

std::string_view family_name(Family f) noexcept;
Family parse_family(std::string_view name);
std::vector<Family> all_families();

struct TrigTerm {
  double amplitude = 0.0;
  std::vector<int> frequency;  // integer vector of length n
  double phase = 0.0;
};

/// Family-specific construction parameters; only the fields the family
/// uses are read.
struct ZooParams {
  std::optional<TorusPoint> center;   // dist-to-point, smoothed-distance (default: origin)
  std::size_t axis = 0;               // coordinate-sawtooth
  std::vector<std::size_t> axes;      // max-sawtooth
  std::vector<TrigTerm> terms;        // trig-poly
  double smoothing = 0.05;            // smoothed-distance
};

/// Distance below which a point counts as sitting on a kink.
inline constexpr double kKinkTol = 1e-9;
inline constexpr double kFiniteDifferenceStep = 1e-6;

class FunctionSpec {
 public:
  Family family() const noexcept { return family_; }
  std::size_t ambient_dim() const noexcept { return n_; }
  double lipschitz_constant() const noexcept { return lipschitz_; }
  bool has_analytic_gradient() const noexcept { return true; }
  /// Trig-poly and smoothed-distance support amplitude rescaling.
  bool scalable() const noexcept;
  double scale() const noexcept { return scale_; }

  const ZooParams& params() const noexcept { return params_; }
  const TorusPoint& center() const noexcept { return *params_.center; }

  /// Multiplies the function (and its Lipschitz constant) by factor > 0.
  FunctionSpec scaled(double factor) const;

  /// Same function translated by t: g(x) = f(x - t).
  FunctionSpec translated(std::span<const double> t) const;

  double eval(std::span<const double> x) const;
  double eval(const TorusPoint& x) const { return eval(x.coords()); }

  /// False within kKinkTol of a cut locus, kink or argmax tie.
  bool is_smooth_at(std::span<const double> x) const;

  /// Analytic gradient; throws NonDifferentiable at detected kinks.
  std::vector<double> grad(std::span<const double> x) const;

  /// Per-axis bounds l_i >= sup |d_i f|, so |f(x) - f(y)| <= sum_i l_i |x_i - y_i|.
  std::vector<double> partial_bounds() const;

 private:
  friend FunctionSpec zoo_construct(Family, const ZooParams&, std::size_t);
  friend FunctionSpec with_scale(FunctionSpec, double);
  Family family_ = Family::TrigPoly;
  std::size_t n_ = 0;
  ZooParams params_;
  double scale_ = 1.0;
  double lipschitz_ = 0.0;
  double raw_lipschitz_ = 0.0;
};

/// Validates parameters and computes the declared Lipschitz constant.
/// Trig-polys whose raw bound sum |a_j| 2 pi |m_j| exceeds 1 are rescaled to 1.
FunctionSpec zoo_construct(Family family, const ZooParams& params, std::size_t n);

double zoo_eval(const FunctionSpec& f, const TorusPoint& x);
std::vector<double> zoo_grad(const FunctionSpec& f, const TorusPoint& x);
/// Central differences with step h on wrapped coordinates.
std::vector<double> zoo_grad_fd(const FunctionSpec& f, const TorusPoint& x,
                                double h = kFiniteDifferenceStep);

/// Draw a uniform point at which f is differentiable; non-smooth draws are
/// redrawn from the same stream (at most 10 attempts).
TorusPoint draw_smooth_point(const FunctionSpec& f, SampleRng& rng, std::size_t* redraws = nullptr);

struct GradPNormEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t sample_count = 0;
  double p = 1.0;
  std::size_t resampled = 0;
  bool used_finite_differences = false;
};

/// Monte Carlo estimate of (int_{T^n} |grad f|^p)^(1/p).
GradPNormEstimate estimate_grad_pnorm(const FunctionSpec& f, double p, std::size_t samples,
                                      const SeedSpec& seed, unsigned threads = 1);

struct NormalizedFunction {
  FunctionSpec function;
  double scale_factor = 1.0;
  GradPNormEstimate before;
};

inline constexpr double kNormalizeMargin = 0.99;

/// Rescale so the estimated gradient p-norm becomes 0.99. Zero functions are
/// returned unchanged. Throws Unsupported for non-scalable families.
NormalizedFunction normalize_to_unit_pnorm(const FunctionSpec& f, double p, std::size_t samples,
                                           const SeedSpec& seed, unsigned threads = 1);

/// A random trig-poly: `terms` terms, each touching `support` random axes with
/// nonzero frequencies in [-max_frequency, max_frequency].
FunctionSpec random_trig_poly(std::size_t n, std::size_t terms, std::size_t support,
                              int max_frequency, SampleRng& rng);

}  // namespace torlab
