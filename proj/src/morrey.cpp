#include "torlab/morrey.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "torlab/error.hpp"
#include "torlab/parallel.hpp"

namespace torlab {

namespace {

// Guard so that 2d landing a rounding error above an integer does not add a segment.
constexpr double kCeilSlack = 1e-12;

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

TorusPoint offset(const TorusPoint& x, std::span<const double> dir, double t) {
  std::vector<double> c(x.coords().begin(), x.coords().end());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += t * dir[i];
  return TorusPoint::wrap(c);
}

// Orthonormal basis of the complement of the unit vector `u` in R^k, from
// Gram-Schmidt over the coordinate axes in index order, run twice so the
// result stays orthogonal when u is close to an axis.
std::vector<std::vector<double>> orthogonal_basis(std::span<const double> u) {
  const std::size_t k = u.size();
  std::vector<std::vector<double>> basis;
  for (std::size_t a = 0; a < k && basis.size() + 1 < k; ++a) {
    std::vector<double> v(k, 0.0);
    v[a] = 1.0;
    auto remove = [&](std::span<const double> w) {
      double dot = 0.0;
      for (std::size_t i = 0; i < k; ++i) dot += v[i] * w[i];
      for (std::size_t i = 0; i < k; ++i) v[i] -= dot * w[i];
    };
    for (int pass = 0; pass < 2; ++pass) {
      remove(u);
      for (const auto& b : basis) remove(b);
    }
    const double len = norm(v);
    if (len < 1e-6) continue;
    for (double& c : v) c /= len;
    basis.push_back(std::move(v));
  }
  return basis;
}

double eval_param(const FunctionSpec& f, const SubtorusSpec& sub, const TorusPoint& u) {
  return f.eval(embed(sub, u.coords()));
}

}  // namespace

const char* to_string(PathMode m) noexcept {
  return m == PathMode::EqualSubdivision ? "equal" : "paper";
}

PathMode parse_path_mode(const std::string& text) {
  if (text == "equal" || text == "equal-subdivision") return PathMode::EqualSubdivision;
  if (text == "paper" || text == "paper-isosceles") return PathMode::PaperIsosceles;
  fail(ErrorCode::InvalidInput, "unknown path mode '" + text + "'");
}

std::size_t path_segment_limit(std::size_t k) {
  return static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(k)) - kCeilSlack)) + 1;
}

PathPolyline build_path(const TorusPoint& x, const TorusPoint& y, PathMode mode) {
  require(x.dim() == y.dim(), ErrorCode::InvalidInput, "path endpoints differ in dimension");
  const std::size_t k = x.dim();
  if (mode == PathMode::PaperIsosceles)
    require(k >= 2, ErrorCode::Unsupported,
            "isosceles closing needs an orthogonal direction; use equal subdivision for k = 1");

  PathPolyline path;
  path.mode = mode;
  path.vertices.push_back(x);
  const auto delta = displacement(x.coords(), y.coords());
  const double d = norm(delta);
  if (d == 0.0) return path;

  const auto steps = static_cast<std::size_t>(std::ceil(2.0 * d - kCeilSlack));
  if (mode == PathMode::EqualSubdivision) {
    const std::size_t s = std::max<std::size_t>(1, steps);
    for (std::size_t i = 1; i < s; ++i)
      path.vertices.push_back(offset(x, delta, static_cast<double>(i) / static_cast<double>(s)));
    path.vertices.push_back(y);
    path.segment_lengths.assign(s, d / static_cast<double>(s));
    return path;
  }

  std::vector<double> dir(delta);
  for (double& c : dir) c /= d;
  const std::size_t s = steps > 0 ? steps - 1 : 0;
  for (std::size_t j = 1; j <= s; ++j) {
    path.vertices.push_back(offset(x, dir, 0.5 * static_cast<double>(j)));
    path.segment_lengths.push_back(0.5);
  }
  const double gap = d - 0.5 * static_cast<double>(s);
  const double height = std::sqrt(std::max(0.0, 0.25 - 0.25 * gap * gap));
  const auto normal = orthogonal_basis(dir).front();
  std::vector<double> apex_step(k);
  for (std::size_t i = 0; i < k; ++i) apex_step[i] = 0.5 * gap * dir[i] + height * normal[i];
  path.vertices.push_back(offset(path.vertices.back(), apex_step, 1.0));
  path.segment_lengths.push_back(0.5);
  path.vertices.push_back(y);
  path.segment_lengths.push_back(0.5);
  return path;
}

std::string validate_path(const PathPolyline& path, const TorusPoint& x, const TorusPoint& y) {
  std::ostringstream os;
  if (path.vertices.empty() || !path.vertices.front().approx_equal(x)) return "path does not start at x";
  if (!path.vertices.back().approx_equal(y)) return "path does not end at y";
  if (path.vertices.size() != path.segment_lengths.size() + 1) return "vertex/segment count mismatch";
  const std::size_t k = x.dim();
  if (path.segments() > path_segment_limit(k)) {
    os << "segment count " << path.segments() << " exceeds ceil(sqrt(k)) + 1";
    return os.str();
  }
  for (std::size_t i = 0; i < path.segments(); ++i) {
    const double len = path.segment_lengths[i];
    const double actual = torus_dist(path.vertices[i], path.vertices[i + 1]);
    if (std::fabs(actual - len) > 1e-12) {
      os << "segment " << i << " recorded " << len << " but spans " << actual;
      return os.str();
    }
    if (len > 0.5 + 1e-12) {
      os << "segment " << i << " longer than 1/2";
      return os.str();
    }
    if (path.mode == PathMode::PaperIsosceles && std::fabs(len - 0.5) > 1e-12) {
      os << "segment " << i << " is not of length exactly 1/2";
      return os.str();
    }
  }
  return {};
}

double c_alpha_k(std::size_t k, double alpha) {
  require(k >= 1 && alpha > 0.0, ErrorCode::InvalidInput, "need k >= 1 and alpha > 0");
  return (1.0 + alpha) / alpha * std::pow(static_cast<double>(k), 1.0 / (2.0 * (1.0 + alpha)));
}

double chord_density_constant(std::size_t k) {
  require(k >= 1, ErrorCode::InvalidInput, "need k >= 1");
  const double kd = static_cast<double>(k);
  return std::tgamma((kd + 1.0) / 2.0) / std::pow(M_PI, (kd - 1.0) / 2.0);
}

double unit_ball_volume(std::size_t dim) {
  const double d = static_cast<double>(dim);
  return std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

DensityQNorm density_qnorm(std::size_t k, double alpha) {
  require(k >= 1, ErrorCode::InvalidInput, "need k >= 1");
  DensityQNorm r;
  r.p = (1.0 + alpha) * static_cast<double>(k);
  require(alpha > 0.0 && r.p > static_cast<double>(k), ErrorCode::DivergentIntegral,
          "int rho^q diverges unless p > k");
  r.q = r.p / (r.p - 1.0);
  const double kd = static_cast<double>(k);
  const double ratio = (r.p - 1.0) / (r.p - kd);
  const double ck = chord_density_constant(k);
  const double ck_printed = std::tgamma((kd + 1.0) / 2.0) / std::pow(M_PI, kd - 1.0);
  r.integral = ratio * std::pow(ck, r.q - 1.0);
  r.value = std::pow(ratio, 1.0 / r.q) * std::pow(ck, 1.0 / r.p);
  r.printed_integral = ratio * std::pow(ck_printed, r.q - 1.0);
  r.printed_value = std::pow(ratio, 1.0 / r.q) * std::pow(ck_printed, 1.0 / r.p);
  r.c_alpha_k = c_alpha_k(k, alpha);
  r.within_c_alpha_k = r.value <= r.c_alpha_k;
  return r;
}

DensityIdentityCheck mc_density_identity(std::size_t k, double alpha, std::size_t samples,
                                         const SeedSpec& seed, unsigned threads) {
  const DensityQNorm dq = density_qnorm(k, alpha);
  const double ck = chord_density_constant(k);
  std::vector<double> tip(k, 0.0);
  tip[0] = 1.0;
  const auto ys = parallel_map(samples, threads, [&](std::size_t i) {
    SampleRng rng(seed.at(i));
    for (;;) {
      const auto ball = sample_ball(k - 1, 1.0, rng);
      std::vector<double> z(k, 0.0);
      std::copy(ball.begin(), ball.end(), z.begin() + 1);
      const auto w = sample_chord_point(tip, z, rng);
      // The slice through W orthogonal to e_1 is a (k-1)-ball of radius r = 1 - W_1.
      const double r = 1.0 - w.point[0];
      if (r <= 0.0) continue;
      const double rho = ck / std::pow(r, static_cast<double>(k) - 1.0);
      return std::pow(rho, dq.q - 1.0);
    }
  });
  DensityIdentityCheck c;
  c.estimate = mean_estimate(ys);
  c.closed_form = dq.integral;
  c.printed_closed_form = dq.printed_integral;
  const double se = c.estimate.std_error > 0.0 ? c.estimate.std_error : 1e-300;
  c.z_closed = (c.estimate.mean - c.closed_form) / se;
  c.z_printed = (c.estimate.mean - c.printed_closed_form) / se;
  return c;
}

double morrey_bound(std::size_t k, double alpha, double radius, double grad_pnorm_on_ball) {
  require(radius > 0.0 && grad_pnorm_on_ball >= 0.0, ErrorCode::InvalidInput,
          "need R > 0 and a nonnegative gradient norm");
  const double p = (1.0 + alpha) * static_cast<double>(k);
  return 4.0 * c_alpha_k(k, alpha) * std::pow(radius, 1.0 - static_cast<double>(k) / p) *
         grad_pnorm_on_ball;
}

BallPNorm ball_grad_pnorm(const FunctionSpec& f, const SubtorusSpec& sub, const TorusPoint& centre,
                          double radius, double p, std::size_t samples, const SeedSpec& seed,
                          unsigned threads) {
  require(centre.dim() == sub.dim(), ErrorCode::InvalidInput, "ball centre must be a subtorus point");
  require(samples >= 1 && p >= 1.0, ErrorCode::InvalidInput, "need samples >= 1 and p >= 1");
  const Chart chart = lift_chart(centre, radius);
  const std::size_t k = sub.dim();
  const double volume = unit_ball_volume(k) * std::pow(radius, static_cast<double>(k));
  struct Draw {
    double value = 0.0;
    std::size_t redraws = 0;
  };
  const auto draws = parallel_map(samples, threads, [&](std::size_t i) {
    SampleRng rng(seed.at(i));
    Draw d;
    for (int attempt = 0; attempt < 10; ++attempt) {
      const auto u = sample_ball(k, radius, rng);
      const TorusPoint x = embed(sub, chart.project(u).coords());
      if (f.is_smooth_at(x.coords())) {
        d.value = volume * std::pow(restricted_norm(sub, f.grad(x.coords())), p);
        return d;
      }
      ++d.redraws;
    }
    fail(ErrorCode::BudgetExceeded, "non-smooth points on a set of positive measure");
  });
  std::vector<double> ys(samples);
  BallPNorm r;
  for (std::size_t i = 0; i < samples; ++i) {
    ys[i] = draws[i].value;
    r.redraws += draws[i].redraws;
  }
  const auto pm = power_mean_estimate(ys, p, seed.at(samples));
  r.value = pm.value;
  r.std_error = pm.std_error;
  return r;
}

MorreyBoundReport mc_chord_verify(const FunctionSpec& f, const SubtorusSpec& sub,
                                  const Segment& segment, double alpha, std::size_t samples,
                                  const SeedSpec& seed, unsigned threads) {
  const std::size_t k = sub.dim();
  require(segment.start.dim() == k && segment.end.dim() == k, ErrorCode::InvalidInput,
          "segment endpoints must be subtorus parameter points");
  require(samples >= 1 && alpha > 0.0, ErrorCode::InvalidInput, "need samples >= 1 and alpha > 0");
  const auto delta = displacement(segment.start.coords(), segment.end.coords());
  const double len = norm(delta);
  require(len <= 0.5 + kCoordTol, ErrorCode::ChartTooLarge, "segment longer than 1/2");

  MorreyBoundReport r;
  r.k = k;
  r.alpha = alpha;
  r.p = (1.0 + alpha) * static_cast<double>(k);
  r.radius = len / 2.0;
  r.c_alpha_k = c_alpha_k(k, alpha);
  r.rho_qnorm = density_qnorm(k, alpha).value;
  const double fx = eval_param(f, sub, segment.start);
  const double fy = eval_param(f, sub, segment.end);
  r.endpoint_diff = std::fabs(fx - fy);
  if (len == 0.0) {
    r.satisfied = true;
    return r;
  }

  const TorusPoint mid = offset(segment.start, delta, 0.5);
  const double radius = std::min(r.radius, kMaxChartRadius);
  const Chart chart = lift_chart(mid, radius);
  std::vector<double> dir(delta);
  for (double& c : dir) c /= len;
  const auto basis = orthogonal_basis(dir);

  struct Pair {
    double start = 0.0;
    double end = 0.0;
  };
  const auto pairs = parallel_map(samples, threads, [&](std::size_t i) {
    SampleRng rng(seed.at(i));
    const auto z = sample_ball(basis.size(), radius, rng);
    std::vector<double> local(k, 0.0);
    for (std::size_t b = 0; b < basis.size(); ++b)
      for (std::size_t j = 0; j < k; ++j) local[j] += z[b] * basis[b][j];
    const double fz = eval_param(f, sub, chart.project(local));
    return Pair{std::fabs(fx - fz), std::fabs(fy - fz)};
  });
  std::vector<double> a(samples), b(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    a[i] = pairs[i].start;
    b[i] = pairs[i].end;
  }
  const auto ea = mean_estimate(a);
  const auto eb = mean_estimate(b);
  r.lhs_start = ea.mean;
  r.lhs_start_std_error = ea.std_error;
  r.lhs_end = eb.mean;
  r.lhs_end_std_error = eb.std_error;
  r.empirical_lhs = std::max(ea.mean, eb.mean);
  r.triangle_sum = ea.mean + eb.mean;

  const SeedSpec ball_seed{seed.master_seed, stream_id_for("morrey-ball", std::array{seed.stream_id}), 0};
  const auto ball = ball_grad_pnorm(f, sub, mid, radius, r.p, samples, ball_seed, threads);
  r.ball_pnorm = ball.value;
  r.ball_pnorm_std_error = ball.std_error;
  const double factor = 2.0 * r.c_alpha_k * std::pow(radius, 1.0 - static_cast<double>(k) / r.p);
  r.half_bound = factor * ball.value;
  r.bound_value = 2.0 * r.half_bound;
  const double bound_se = factor * ball.std_error;
  const double se_a = std::hypot(ea.std_error, bound_se);
  const double se_b = std::hypot(eb.std_error, bound_se);
  r.std_error = std::max(se_a, se_b);
  r.satisfied = ea.mean <= r.half_bound + 4.0 * se_a && eb.mean <= r.half_bound + 4.0 * se_b &&
                r.endpoint_diff <= r.triangle_sum + 1e-12;
  return r;
}

ChainedBound chained_osc_bound(const FunctionSpec& f, const SubtorusSpec& sub, const TorusPoint& x,
                               const TorusPoint& y, double alpha, std::size_t samples,
                               const SeedSpec& seed, PathMode mode, unsigned threads) {
  const std::size_t k = sub.dim();
  require(x.dim() == k && y.dim() == k, ErrorCode::InvalidInput,
          "chained bound expects subtorus parameter points");
  require(alpha > 0.0, ErrorCode::InvalidInput, "alpha must be positive");
  const double p = (1.0 + alpha) * static_cast<double>(k);

  ChainedBound out;
  out.path = build_path(x, y, mode);
  const auto pn = restricted_grad_pnorm(f, sub, p, Quadrature::monte_carlo(samples), seed, threads);
  out.pnorm = pn.value;
  out.pnorm_std_error = pn.std_error;
  for (double len : out.path.segment_lengths) {
    const double b = morrey_bound(k, alpha, len / 2.0, pn.value);
    out.per_segment.push_back(b);
    out.bound += b;
    if (pn.value > 0.0) out.std_error += b / pn.value * pn.std_error;
  }
  out.closed_form = 8.0 * (1.0 + alpha) / alpha * static_cast<double>(k) * pn.value;
  out.measured = std::fabs(eval_param(f, sub, x) - eval_param(f, sub, y));
  return out;
}

}  // namespace torlab
