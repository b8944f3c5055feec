#pragma once

// Morrey-type pointwise bounds on a coordinate subtorus: polygonal chaining
// paths, the chord-sampling density and its q-norm, the explicit bound, and
// Monte Carlo checks of each step. Points here are parameter coordinates
// on T^k (the subtorus chart), not ambient T^n points.

#include <cstddef>
#include <string>
#include <vector>

#include "torlab/projection.hpp"
#include "torlab/sampling.hpp"
#include "torlab/stats.hpp"
#include "torlab/torus.hpp"
#include "torlab/zoo.hpp"

namespace torlab {

enum class PathMode {
  EqualSubdivision,  // geodesic cut into ceil(2d) equal pieces
  PaperIsosceles,    // half-length geodesic steps closed by an isosceles pair of legs
};

const char* to_string(PathMode m) noexcept;
PathMode parse_path_mode(const std::string& text);

struct PathPolyline {
  std::vector<TorusPoint> vertices;
  std::vector<double> segment_lengths;
  PathMode mode = PathMode::EqualSubdivision;

  std::size_t segments() const noexcept { return segment_lengths.size(); }
};

/// ceil(sqrt(k)) + 1
std::size_t path_segment_limit(std::size_t k);

/// Throws Unsupported for PaperIsosceles with k = 1. x = y gives a path with no segments.
PathPolyline build_path(const TorusPoint& x, const TorusPoint& y, PathMode mode);

/// Empty string when the path satisfies every polyline invariant, else the first violation.
std::string validate_path(const PathPolyline& path, const TorusPoint& x, const TorusPoint& y);

/// (1 + alpha)/alpha * k^{1/(2(1+alpha))}
double c_alpha_k(std::size_t k, double alpha);

/// c_k = 1 / V_{k-1}(1) = Gamma((k+1)/2) / pi^{(k-1)/2}, the chord density constant.
double chord_density_constant(std::size_t k);

/// Volume of the unit Euclidean ball in R^dim.
double unit_ball_volume(std::size_t dim);

struct DensityQNorm {
  double p = 0.0;
  double q = 0.0;
  double value = 0.0;            // (int rho^q)^{1/q} with pi^{(k-1)/2}
  double integral = 0.0;         // int rho^q
  double printed_value = 0.0;    // same with pi^{k-1} in place of pi^{(k-1)/2}
  double printed_integral = 0.0;
  double c_alpha_k = 0.0;
  bool within_c_alpha_k = false;  // value <= C_{alpha,k}
};

/// Throws DivergentIntegral when p = (1+alpha) k <= k.
DensityQNorm density_qnorm(std::size_t k, double alpha);

struct DensityIdentityCheck {
  MeanEstimate estimate;  // Monte Carlo E_W[rho(W)^{q-1}]
  double closed_form = 0.0;
  double printed_closed_form = 0.0;
  double z_closed = 0.0;   // (estimate - closed) / std_error
  double z_printed = 0.0;
};

/// Samples W = (1-T) e_1 + T Z with Z uniform in the unit (k-1)-ball of e_1's
/// orthogonal complement and compares E[rho(W)^{q-1}] to int rho^q.
DensityIdentityCheck mc_density_identity(std::size_t k, double alpha, std::size_t samples,
                                         const SeedSpec& seed, unsigned threads = 1);

/// 4 C_{alpha,k} R^{1-k/p} * grad_pnorm_on_ball
double morrey_bound(std::size_t k, double alpha, double radius, double grad_pnorm_on_ball);

struct BallPNorm {
  double value = 0.0;  // (int_{B(centre,R)} |grad_M f|^p)^{1/p}
  double std_error = 0.0;
  std::size_t redraws = 0;
};

/// Monte Carlo over the geodesic ball of radius R <= 1/4 around `centre` in M.
BallPNorm ball_grad_pnorm(const FunctionSpec& f, const SubtorusSpec& sub, const TorusPoint& centre,
                          double radius, double p, std::size_t samples, const SeedSpec& seed,
                          unsigned threads = 1);

struct MorreyBoundReport {
  std::size_t k = 0;
  double alpha = 0.0;
  double p = 0.0;
  double radius = 0.0;
  double c_alpha_k = 0.0;
  double rho_qnorm = 0.0;
  double ball_pnorm = 0.0;
  double ball_pnorm_std_error = 0.0;
  double half_bound = 0.0;   // 2 C R^{1-k/p} ||grad||_p: bound on E|f(x) - f(Z)|
  double bound_value = 0.0;  // 4 C R^{1-k/p} ||grad||_p: bound on |f(x) - f(y)|
  double lhs_start = 0.0;    // E|f(x) - f(Z)|
  double lhs_start_std_error = 0.0;
  double lhs_end = 0.0;      // E|f(y) - f(Z)|
  double lhs_end_std_error = 0.0;
  double empirical_lhs = 0.0;  // max of the two expectations
  double std_error = 0.0;      // combined uncertainty of lhs and bound
  double endpoint_diff = 0.0;  // |f(x) - f(y)|
  double triangle_sum = 0.0;   // lhs_start + lhs_end
  bool satisfied = false;
};

/// Z uniform in the (k-1)-ball of radius R = |segment|/2 orthogonal to the
/// segment at its midpoint. `segment` holds parameter points of `sub`.
MorreyBoundReport mc_chord_verify(const FunctionSpec& f, const SubtorusSpec& sub,
                                  const Segment& segment, double alpha, std::size_t samples,
                                  const SeedSpec& seed, unsigned threads = 1);

struct ChainedBound {
  PathPolyline path;
  double pnorm = 0.0;  // (int_M |grad_M f|^p)^{1/p}
  double pnorm_std_error = 0.0;
  std::vector<double> per_segment;
  double bound = 0.0;  // sum of per-segment Morrey bounds with R = length/2
  double std_error = 0.0;
  double closed_form = 0.0;  // 8 (1+alpha)/alpha * k * pnorm
  double measured = 0.0;     // |f(x) - f(y)|
};

ChainedBound chained_osc_bound(const FunctionSpec& f, const SubtorusSpec& sub, const TorusPoint& x,
                               const TorusPoint& y, double alpha, std::size_t samples,
                               const SeedSpec& seed, PathMode mode = PathMode::EqualSubdivision,
                               unsigned threads = 1);

}  // namespace torlab
