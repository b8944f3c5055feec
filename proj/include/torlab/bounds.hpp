#pragma once

// Parameter arithmetic for the oscillation theorem. Admissible n are
// astronomically large (c = 1/200 forces log n in the hundreds before k can
// reach 1), so every inequality is evaluated in log space on long doubles and
// n may be supplied either exactly or through log n.

#include <cstdint>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace torlab {

inline constexpr double kDefaultConstantC = 1.0 / 200.0;

using Rational = boost::multiprecision::cpp_rational;

/// The ambient dimension n, exact when small, always available as log n.
class Dimension {
 public:
  static Dimension exact(std::uint64_t n);
  static Dimension from_log(long double log_n);
  /// Parses "1000" or "log:345.6".
  static Dimension parse(const std::string& text);

  long double log_n() const noexcept { return log_n_; }
  std::optional<std::uint64_t> value() const noexcept { return exact_; }
  std::string to_string() const;

 private:
  long double log_n_ = 0.0L;
  std::optional<std::uint64_t> exact_;
};

struct BoundParams {
  Dimension n = Dimension::exact(1);
  double eps = 1.0;
  double alpha = 1.0;
  int k = 1;
  double p = 2.0;      // (1 + alpha) k
  double delta = 0.0;  // alpha / (16 (1 + alpha)) * eps / k^{3/2}
  double c = kDefaultConstantC;

  /// `delta_perturbation` multiplies delta; 1 everywhere except mutation tests.
  static BoundParams make(Dimension n, double eps, double alpha, int k,
                          double c = kDefaultConstantC, double delta_perturbation = 1.0);
};

/// floor(c log n / (log log(3n) + |log eps|)); 0 means no guarantee at this n.
int theorem1_k(const Dimension& n, double eps, double c = kDefaultConstantC);

/// c log n / (log log(5n) + |log eps| + |log alpha|), the admissible ceiling for k.
long double standing_k_limit(const Dimension& n, double eps, double alpha,
                             double c = kDefaultConstantC);

/// Largest integer k >= 1 below standing_k_limit, or 0 when none exists.
int max_admissible_k(const Dimension& n, double eps, double alpha, double c = kDefaultConstantC);

bool is_admissible(const Dimension& n, double eps, double alpha, int k,
                   double c = kDefaultConstantC);

double delta_of(double eps, double alpha, int k);

/// One inequality lhs <= rhs with both sides stored as logarithms.
struct LogInequality {
  long double log_lhs = 0.0L;
  long double log_rhs = 0.0L;
  bool holds() const noexcept { return log_lhs <= log_rhs; }
  long double slack() const noexcept { return log_rhs - log_lhs; }
};

struct Lemma1Report {
  BoundParams params;
  bool admissible = false;
  LogInequality main;        // (2k/(delta^2 n))^{1/p} <= sqrt(k) delta
  LogInequality half_n;      // k <= n/2
  LogInequality sufficient;  // (32 k / alpha)^{2p+8} <= n
  LogInequality strong;      // (32 k / alpha)^{12 k} <= n
  /// 2 sqrt(k) delta equals the projection bound alpha/(8(1+alpha)) eps/k.
  bool delta_identity = false;
  bool holds() const noexcept { return main.holds() && half_n.holds(); }
};

Lemma1Report check_lemma1(const Dimension& n, double eps, double alpha, int k,
                          double c = kDefaultConstantC, double delta_perturbation = 1.0);

/// P(I and J disjoint) for |I| = m and J a uniform k-subset of n:
/// prod_{j<k} (n-m-j)/(n-j). Exact rational arithmetic for n <= 64.
double avoid_probability(std::uint64_t n, std::uint64_t k, std::uint64_t m);
Rational avoid_probability_exact(std::uint64_t n, std::uint64_t k, std::uint64_t m);

/// max(0, 1 - 2k / (delta^2 n))
double avoid_bound(std::uint64_t n, std::uint64_t k, double delta);

/// The two lower-bounding steps of the avoidance estimate, exactly.
struct AvoidChain {
  Rational exact;       // the product
  Rational power_step;  // (1 - m/(n-k+1))^k
  Rational linear_step; // 1 - k m/(n-k+1)
  bool ordered() const { return exact >= power_step && power_step >= linear_step; }
};

AvoidChain avoid_chain_exact(std::uint64_t n, std::uint64_t k, std::uint64_t m);

}  // namespace torlab
