#pragma once

// Certified two-sided enclosures of Osc(f; M) = sup_M f - inf_M f on a
// coordinate subtorus, from Lipschitz covering arguments.

#include <cstddef>

#include "torlab/torus.hpp"
#include "torlab/zoo.hpp"

namespace torlab {

inline constexpr std::size_t kOscGridBudget = 10'000'000;

struct OscCertificate {
  double osc_lower = 0.0;  // max observed - min observed
  double osc_upper = 0.0;  // sound upper bound on the true oscillation
  std::size_t evaluations = 0;
  double mesh = 0.0;       // grid spacing h, or the finest box width for refinement
  double lipschitz_used = 0.0;
  TorusPoint argmax;
  TorusPoint argmin;
  double max_value = 0.0;
  double min_value = 0.0;
  bool exhausted = false;  // refinement stopped on budget before reaching its target gap

  double gap() const noexcept { return osc_upper - osc_lower; }
};

/// Covering radius sqrt(k)/(2m) of the m^k lattice on T^k.
double lattice_covering_radius(std::size_t k, std::size_t m);

/// Evaluate f on the lattice {i/m}^k of M. Throws BudgetExceeded when m^k > 10^7.
OscCertificate grid_osc(const FunctionSpec& f, const SubtorusSpec& sub, std::size_t m,
                        unsigned threads = 1);

/// Branch and bound on subboxes of T^k: a box of half-diagonal r and half-widths
/// h_j whose centre takes value v holds only values within
/// min(L r, sum_j l_j h_j) of v, where l_j bounds the partial derivative on the
/// j-th free axis. Boxes are split along the axis with the largest l_j h_j.
/// Stops once osc_upper - osc_lower <= target_gap or after `budget` evaluations.
OscCertificate refine_osc(const FunctionSpec& f, const SubtorusSpec& sub, double target_gap,
                          std::size_t budget = 1'000'000);

/// Sound intersection of two certificates for the same (f, M).
OscCertificate intersect(const OscCertificate& a, const OscCertificate& b);

enum class OscDecision { Success, Failure, Undecided };

const char* to_string(OscDecision d) noexcept;

struct GapPolicy {
  std::size_t grid_m = 64;
  bool refine = true;
  double target_gap = 1e-3;
  std::size_t budget = 200'000;
};

struct OscIndicator {
  OscDecision decision = OscDecision::Undecided;
  OscCertificate certificate;
};

/// Success iff osc_upper <= eps, failure iff osc_lower > eps, otherwise undecided.
OscDecision decide(const OscCertificate& cert, double eps) noexcept;

/// Grid certificate first; refines only when the grid leaves the decision open.
OscIndicator osc_success_indicator(const FunctionSpec& f, const SubtorusSpec& sub, double eps,
                                   const GapPolicy& policy = {}, unsigned threads = 1);

}  // namespace torlab
