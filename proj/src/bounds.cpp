#include "torlab/bounds.hpp"

#include <cmath>
#include <sstream>

#include "torlab/error.hpp"

namespace torlab {

namespace {

void check_eps_alpha(double eps, double alpha) {
  require(std::isfinite(eps) && eps > 0.0 && eps <= 1.0, ErrorCode::InvalidInput,
          "eps must lie in (0, 1]");
  require(std::isfinite(alpha) && alpha > 0.0 && alpha <= 1.0, ErrorCode::InvalidInput,
          "alpha must lie in (0, 1]");
}

// log(log(a n)) for a constant a >= 3, so the inner log is positive.
long double loglog(const Dimension& n, long double a) {
  return std::log(std::log(a) + n.log_n());
}

long double abs_log(double x) { return std::fabs(std::log(static_cast<long double>(x))); }

}  // namespace

Dimension Dimension::exact(std::uint64_t n) {
  require(n >= 1, ErrorCode::InvalidInput, "n must be >= 1");
  Dimension d;
  d.exact_ = n;
  d.log_n_ = std::log(static_cast<long double>(n));
  return d;
}

Dimension Dimension::from_log(long double log_n) {
  require(std::isfinite(log_n) && log_n >= 0.0L, ErrorCode::InvalidInput,
          "log n must be finite and >= 0");
  Dimension d;
  d.log_n_ = log_n;
  return d;
}

Dimension Dimension::parse(const std::string& text) {
  try {
    if (text.rfind("log:", 0) == 0) return from_log(std::stold(text.substr(4)));
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    require(used == text.size(), ErrorCode::InvalidInput, "trailing characters in n");
    return exact(v);
  } catch (const std::logic_error&) {
    fail(ErrorCode::InvalidInput, "cannot parse dimension '" + text + "'");
  }
}

std::string Dimension::to_string() const {
  if (exact_) return std::to_string(*exact_);
  std::ostringstream os;
  os.precision(17);
  os << "log:" << static_cast<double>(log_n_);
  return os.str();
}

BoundParams BoundParams::make(Dimension n, double eps, double alpha, int k, double c,
                              double delta_perturbation) {
  check_eps_alpha(eps, alpha);
  require(k >= 1, ErrorCode::InvalidInput, "k must be >= 1");
  BoundParams b;
  b.n = n;
  b.eps = eps;
  b.alpha = alpha;
  b.k = k;
  b.p = (1.0 + alpha) * k;
  b.delta = delta_of(eps, alpha, k) * delta_perturbation;
  b.c = c;
  return b;
}

int theorem1_k(const Dimension& n, double eps, double c) {
  require(std::isfinite(eps) && eps > 0.0 && eps <= 1.0, ErrorCode::InvalidInput,
          "eps must lie in (0, 1]");
  require(c > 0.0, ErrorCode::InvalidInput, "c must be positive");
  const long double denom = loglog(n, 3.0L) + abs_log(eps);
  return static_cast<int>(std::floor(c * n.log_n() / denom));
}

long double standing_k_limit(const Dimension& n, double eps, double alpha, double c) {
  check_eps_alpha(eps, alpha);
  require(c > 0.0, ErrorCode::InvalidInput, "c must be positive");
  const long double denom = loglog(n, 5.0L) + abs_log(eps) + abs_log(alpha);
  return c * n.log_n() / denom;
}

int max_admissible_k(const Dimension& n, double eps, double alpha, double c) {
  const long double limit = standing_k_limit(n, eps, alpha, c);
  return limit >= 1.0L ? static_cast<int>(std::floor(limit)) : 0;
}

bool is_admissible(const Dimension& n, double eps, double alpha, int k, double c) {
  return k >= 1 && static_cast<long double>(k) <= standing_k_limit(n, eps, alpha, c);
}

double delta_of(double eps, double alpha, int k) {
  check_eps_alpha(eps, alpha);
  require(k >= 1, ErrorCode::InvalidInput, "k must be >= 1");
  return alpha / (16.0 * (1.0 + alpha)) * eps / std::pow(static_cast<double>(k), 1.5);
}

Lemma1Report check_lemma1(const Dimension& n, double eps, double alpha, int k, double c,
                          double delta_perturbation) {
  Lemma1Report r;
  r.params = BoundParams::make(n, eps, alpha, k, c, delta_perturbation);
  r.admissible = is_admissible(n, eps, alpha, k, c);

  const long double log_n = n.log_n();
  const long double lk = std::log(static_cast<long double>(k));
  const long double p = r.params.p;
  const long double log_delta = std::log(static_cast<long double>(r.params.delta));

  r.main.log_lhs = (std::log(2.0L) + lk - 2.0L * log_delta - log_n) / p;
  r.main.log_rhs = 0.5L * lk + log_delta;

  // For exact n, log(2k) and log(n) are computed from the same integers, so
  // the boundary case 2k = n compares equal.
  r.half_n.log_lhs = std::log(2.0L * k);
  r.half_n.log_rhs = log_n;

  const long double log_base = std::log(32.0L * k / alpha);
  r.sufficient.log_lhs = (2.0L * p + 8.0L) * log_base;
  r.sufficient.log_rhs = log_n;
  r.strong.log_lhs = 12.0L * k * log_base;
  r.strong.log_rhs = log_n;

  const double two_sqrt_k_delta = 2.0 * std::sqrt(static_cast<double>(k)) * r.params.delta;
  const double projection_bound = alpha / (8.0 * (1.0 + alpha)) * eps / k;
  r.delta_identity =
      std::fabs(two_sqrt_k_delta - projection_bound) <= 1e-12 * projection_bound;
  return r;
}

Rational avoid_probability_exact(std::uint64_t n, std::uint64_t k, std::uint64_t m) {
  require(k >= 1 && k <= n && m <= n, ErrorCode::InvalidInput,
          "avoid_probability requires 1 <= k <= n and 0 <= m <= n");
  if (m + k > n) return Rational(0);
  Rational prod(1);
  for (std::uint64_t j = 0; j < k; ++j) prod *= Rational(n - m - j, n - j);
  return prod;
}

double avoid_probability(std::uint64_t n, std::uint64_t k, std::uint64_t m) {
  if (n <= 64) return static_cast<double>(avoid_probability_exact(n, k, m));
  require(k >= 1 && k <= n && m <= n, ErrorCode::InvalidInput,
          "avoid_probability requires 1 <= k <= n and 0 <= m <= n");
  if (m + k > n) return 0.0;
  long double log_p = 0.0L;
  for (std::uint64_t j = 0; j < k; ++j)
    log_p += std::log1p(-static_cast<long double>(m) / static_cast<long double>(n - j));
  return static_cast<double>(std::exp(log_p));
}

double avoid_bound(std::uint64_t n, std::uint64_t k, double delta) {
  require(n >= 1 && k >= 1 && delta > 0.0, ErrorCode::InvalidInput, "invalid avoid_bound input");
  const double v = 1.0 - 2.0 * static_cast<double>(k) / (delta * delta * static_cast<double>(n));
  return v > 0.0 ? v : 0.0;
}

AvoidChain avoid_chain_exact(std::uint64_t n, std::uint64_t k, std::uint64_t m) {
  require(k >= 1 && m + k <= n, ErrorCode::InvalidInput, "avoid chain requires m <= n - k");
  AvoidChain c;
  c.exact = avoid_probability_exact(n, k, m);
  const Rational ratio(m, n - k + 1);
  Rational base = Rational(1) - ratio;
  c.power_step = 1;
  for (std::uint64_t j = 0; j < k; ++j) c.power_step *= base;
  c.linear_step = Rational(1) - Rational(k) * ratio;
  return c;
}

}  // namespace torlab
