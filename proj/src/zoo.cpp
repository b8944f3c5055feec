#include "torlab/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "torlab/error.hpp"
#include "torlab/parallel.hpp"
#include "torlab/stats.hpp"

namespace torlab {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Distance to 0 on the circle, for a canonical or raw coordinate.
double sawtooth(double t) noexcept { return circle_dist(t, 0.0); }

// +1 on (0,1/2), -1 on (1/2,1).
double sawtooth_slope(double t) noexcept { return wrap_scalar(t) < 0.5 ? 1.0 : -1.0; }

bool near_sawtooth_kink(double t) noexcept {
  const double d = sawtooth(t);
  return d < kKinkTol || d > 0.5 - kKinkTol;
}

// Softmin of the two arcs from x0 to x on the circle, shifted to vanish at x = x0.
struct SmoothArc {
  double value;
  double slope;
};

SmoothArc smooth_arc(double x, double x0, double c) noexcept {
  const double delta = wrap_scalar(x - x0);
  const double a = delta;
  const double b = 1.0 - delta;
  const double softmin = std::min(a, b) - c * std::log1p(std::exp(-std::fabs(a - b) / c));
  const double offset = c * std::log1p(std::exp(-1.0 / c));
  return {softmin + offset, std::tanh((1.0 - 2.0 * delta) / (2.0 * c))};
}

double frequency_norm(const std::vector<int>& m) {
  double s = 0.0;
  for (int v : m) s += static_cast<double>(v) * v;
  return std::sqrt(s);
}

double phase_of(const TrigTerm& t, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (t.frequency[i] != 0) s += t.frequency[i] * x[i];
  return kTwoPi * s + t.phase;
}

}  // namespace

std::string_view family_name(Family f) noexcept {
  switch (f) {
    case Family::DistToPoint: return "dist-to-point";
    case Family::CoordinateSawtooth: return "coordinate-sawtooth";
    case Family::MaxSawtooth: return "max-sawtooth";
    case Family::TrigPoly: return "trig-poly";
    case Family::SmoothedDistance: return "smoothed-distance";
  }
  return "unknown";
}

std::vector<Family> all_families() {
  return {Family::DistToPoint, Family::CoordinateSawtooth, Family::MaxSawtooth, Family::TrigPoly,
          Family::SmoothedDistance};
}

Family parse_family(std::string_view name) {
  for (Family f : all_families())
    if (family_name(f) == name) return f;
  fail(ErrorCode::InvalidInput, "unknown function family '" + std::string(name) + "'");
}

bool FunctionSpec::scalable() const noexcept {
  return family_ == Family::TrigPoly || family_ == Family::SmoothedDistance;
}

FunctionSpec with_scale(FunctionSpec f, double scale) {
  f.scale_ = scale;
  f.lipschitz_ = scale * f.raw_lipschitz_;
  return f;
}

FunctionSpec FunctionSpec::scaled(double factor) const {
  require(scalable(), ErrorCode::Unsupported,
          std::string("family ") + std::string(family_name(family_)) + " is not scalable");
  require(std::isfinite(factor) && factor > 0.0, ErrorCode::InvalidInput,
          "scale factor must be positive");
  return with_scale(*this, scale_ * factor);
}

FunctionSpec FunctionSpec::translated(std::span<const double> t) const {
  require(t.size() == n_, ErrorCode::InvalidInput, "translation dimension mismatch");
  ZooParams p = params_;
  switch (family_) {
    case Family::DistToPoint:
    case Family::SmoothedDistance: {
      std::vector<double> c(p.center->coords().begin(), p.center->coords().end());
      for (std::size_t i = 0; i < n_; ++i) c[i] += t[i];
      p.center = TorusPoint::wrap(c);
      break;
    }
    case Family::TrigPoly:
      for (auto& term : p.terms) term.phase -= kTwoPi * std::inner_product(
                                                   t.begin(), t.end(), term.frequency.begin(), 0.0);
      break;
    case Family::CoordinateSawtooth:
    case Family::MaxSawtooth:
      fail(ErrorCode::Unsupported, "sawtooth families are anchored at 0 and cannot be translated");
  }
  FunctionSpec g = zoo_construct(family_, p, n_);
  return with_scale(g, scale_);
}

FunctionSpec zoo_construct(Family family, const ZooParams& params, std::size_t n) {
  require(n >= 1, ErrorCode::InvalidInput, "ambient dimension must be >= 1");
  FunctionSpec f;
  f.family_ = family;
  f.n_ = n;
  f.params_ = params;
  switch (family) {
    case Family::DistToPoint:
    case Family::SmoothedDistance:
      if (!f.params_.center) f.params_.center = TorusPoint::origin(n);
      require(f.params_.center->dim() == n, ErrorCode::InvalidInput,
              "center dimension must equal n");
      if (family == Family::SmoothedDistance)
        require(std::isfinite(params.smoothing) && params.smoothing > 0.0,
                ErrorCode::InvalidInput, "smoothing must be positive");
      f.raw_lipschitz_ = 1.0;
      break;
    case Family::CoordinateSawtooth:
      require(params.axis < n, ErrorCode::InvalidInput, "sawtooth axis out of range");
      f.raw_lipschitz_ = 1.0;
      break;
    case Family::MaxSawtooth: {
      auto& axes = f.params_.axes;
      require(!axes.empty(), ErrorCode::InvalidInput, "max-sawtooth needs a nonempty index set");
      std::sort(axes.begin(), axes.end());
      axes.erase(std::unique(axes.begin(), axes.end()), axes.end());
      require(axes.back() < n, ErrorCode::InvalidInput, "max-sawtooth axis out of range");
      f.raw_lipschitz_ = 1.0;
      break;
    }
    case Family::TrigPoly: {
      double bound = 0.0;
      for (const auto& t : f.params_.terms) {
        require(t.frequency.size() == n, ErrorCode::InvalidInput,
                "trig-poly frequency vectors must have length n");
        require(std::isfinite(t.amplitude) && std::isfinite(t.phase), ErrorCode::InvalidInput,
                "trig-poly amplitude and phase must be finite");
        const double m = frequency_norm(t.frequency);
        require(m > 0.0, ErrorCode::InvalidInput, "trig-poly frequency vectors must be nonzero");
        bound += std::fabs(t.amplitude) * kTwoPi * m;
      }
      if (bound > 1.0 + 1e-12) {
        for (auto& t : f.params_.terms) t.amplitude /= bound;
        bound = 1.0;
      }
      f.raw_lipschitz_ = bound;
      break;
    }
  }
  f.scale_ = 1.0;
  f.lipschitz_ = f.raw_lipschitz_;
  return f;
}

double FunctionSpec::eval(std::span<const double> x) const {
  require(x.size() == n_, ErrorCode::InvalidInput,
          "function expects dimension " + std::to_string(n_) + ", got " + std::to_string(x.size()));
  switch (family_) {
    case Family::DistToPoint: return torus_dist(x, params_.center->coords());
    case Family::CoordinateSawtooth: return sawtooth(x[params_.axis]);
    case Family::MaxSawtooth: {
      double m = 0.0;
      for (std::size_t a : params_.axes) m = std::max(m, sawtooth(x[a]));
      return m;
    }
    case Family::TrigPoly: {
      double s = 0.0;
      for (const auto& t : params_.terms) s += t.amplitude * std::sin(phase_of(t, x));
      return scale_ * s;
    }
    case Family::SmoothedDistance: {
      const double c = params_.smoothing;
      double s = c * c;
      for (std::size_t i = 0; i < n_; ++i) {
        const double g = smooth_arc(x[i], (*params_.center)[i], c).value;
        s += g * g;
      }
      return scale_ * (std::sqrt(s) - c);
    }
  }
  return 0.0;
}

bool FunctionSpec::is_smooth_at(std::span<const double> x) const {
  require(x.size() == n_, ErrorCode::InvalidInput, "dimension mismatch");
  switch (family_) {
    case Family::DistToPoint: {
      const auto c = params_.center->coords();
      if (torus_dist(x, c) < kKinkTol) return false;
      for (std::size_t i = 0; i < n_; ++i)
        if (circle_dist(x[i], c[i]) > 0.5 - kKinkTol) return false;
      return true;
    }
    case Family::CoordinateSawtooth: return !near_sawtooth_kink(x[params_.axis]);
    case Family::MaxSawtooth: {
      double best = -1.0, second = -1.0;
      std::size_t arg = 0;
      for (std::size_t a : params_.axes) {
        const double v = sawtooth(x[a]);
        if (v > best) {
          second = best;
          best = v;
          arg = a;
        } else if (v > second) {
          second = v;
        }
      }
      if (second >= 0.0 && best - second < kKinkTol) return false;
      return !near_sawtooth_kink(x[arg]);
    }
    case Family::TrigPoly:
    case Family::SmoothedDistance: return true;
  }
  return true;
}

std::vector<double> FunctionSpec::grad(std::span<const double> x) const {
  require(is_smooth_at(x), ErrorCode::NonDifferentiable,
          std::string(family_name(family_)) + " is not differentiable at the requested point");
  std::vector<double> g(n_, 0.0);
  switch (family_) {
    case Family::DistToPoint: {
      auto d = displacement(params_.center->coords(), x);
      double r = 0.0;
      for (double v : d) r += v * v;
      r = std::sqrt(r);
      for (std::size_t i = 0; i < n_; ++i) g[i] = d[i] / r;
      break;
    }
    case Family::CoordinateSawtooth:
      g[params_.axis] = sawtooth_slope(x[params_.axis]);
      break;
    case Family::MaxSawtooth: {
      std::size_t arg = params_.axes.front();
      for (std::size_t a : params_.axes)
        if (sawtooth(x[a]) > sawtooth(x[arg])) arg = a;
      g[arg] = sawtooth_slope(x[arg]);
      break;
    }
    case Family::TrigPoly:
      for (const auto& t : params_.terms) {
        const double w = scale_ * t.amplitude * kTwoPi * std::cos(phase_of(t, x));
        for (std::size_t i = 0; i < n_; ++i)
          if (t.frequency[i] != 0) g[i] += w * t.frequency[i];
      }
      break;
    case Family::SmoothedDistance: {
      const double c = params_.smoothing;
      std::vector<SmoothArc> arcs(n_);
      double s = c * c;
      for (std::size_t i = 0; i < n_; ++i) {
        arcs[i] = smooth_arc(x[i], (*params_.center)[i], c);
        s += arcs[i].value * arcs[i].value;
      }
      const double root = std::sqrt(s);
      for (std::size_t i = 0; i < n_; ++i) g[i] = scale_ * arcs[i].value * arcs[i].slope / root;
      break;
    }
  }
  return g;
}

std::vector<double> FunctionSpec::partial_bounds() const {
  std::vector<double> l(n_, 0.0);
  switch (family_) {
    case Family::DistToPoint:
    case Family::SmoothedDistance: std::fill(l.begin(), l.end(), scale_); break;
    case Family::CoordinateSawtooth: l[params_.axis] = 1.0; break;
    case Family::MaxSawtooth:
      for (std::size_t a : params_.axes) l[a] = 1.0;
      break;
    case Family::TrigPoly:
      for (const auto& t : params_.terms)
        for (std::size_t i = 0; i < n_; ++i)
          l[i] += scale_ * std::fabs(t.amplitude) * kTwoPi * std::abs(t.frequency[i]);
      break;
  }
  return l;
}

double zoo_eval(const FunctionSpec& f, const TorusPoint& x) { return f.eval(x); }

std::vector<double> zoo_grad(const FunctionSpec& f, const TorusPoint& x) {
  return f.grad(x.coords());
}

std::vector<double> zoo_grad_fd(const FunctionSpec& f, const TorusPoint& x, double h) {
  require(x.dim() == f.ambient_dim(), ErrorCode::InvalidInput, "dimension mismatch");
  require(h > 0.0, ErrorCode::InvalidInput, "finite-difference step must be positive");
  std::vector<double> g(x.dim());
  std::vector<double> probe(x.coords().begin(), x.coords().end());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const double xi = probe[i];
    probe[i] = wrap_scalar(xi + h);
    const double up = f.eval(probe);
    probe[i] = wrap_scalar(xi - h);
    const double down = f.eval(probe);
    probe[i] = xi;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

TorusPoint draw_smooth_point(const FunctionSpec& f, SampleRng& rng, std::size_t* redraws) {
  constexpr int kMaxAttempts = 10;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    TorusPoint x = sample_torus_point(f.ambient_dim(), rng);
    if (f.is_smooth_at(x.coords())) return x;
    if (redraws) ++*redraws;
  }
  fail(ErrorCode::BudgetExceeded, "non-smooth points on a set of positive measure");
}

GradPNormEstimate estimate_grad_pnorm(const FunctionSpec& f, double p, std::size_t samples,
                                      const SeedSpec& seed, unsigned threads) {
  require(p >= 1.0, ErrorCode::InvalidInput, "p must be >= 1");
  require(samples >= 1, ErrorCode::InvalidInput, "need at least one sample");
  struct Draw {
    double value = 0.0;
    std::size_t redraws = 0;
  };
  const auto draws = parallel_map(samples, threads, [&](std::size_t i) {
    SampleRng rng(seed.at(i));
    Draw d;
    const TorusPoint x = draw_smooth_point(f, rng, &d.redraws);
    const auto g = f.grad(x.coords());
    double s = 0.0;
    for (double v : g) s += v * v;
    d.value = std::pow(std::sqrt(s), p);
    return d;
  });
  std::vector<double> ys(samples);
  GradPNormEstimate est;
  for (std::size_t i = 0; i < samples; ++i) {
    ys[i] = draws[i].value;
    est.resampled += draws[i].redraws;
  }
  const auto pm = power_mean_estimate(ys, p, seed.at(samples));
  est.value = pm.value;
  est.std_error = pm.std_error;
  est.sample_count = samples;
  est.p = p;
  est.used_finite_differences = !f.has_analytic_gradient();
  return est;
}

NormalizedFunction normalize_to_unit_pnorm(const FunctionSpec& f, double p, std::size_t samples,
                                           const SeedSpec& seed, unsigned threads) {
  require(f.scalable(), ErrorCode::Unsupported,
          std::string("cannot normalize family ") + std::string(family_name(f.family())));
  NormalizedFunction out{f, 1.0, estimate_grad_pnorm(f, p, samples, seed, threads)};
  if (out.before.value > 0.0) {
    out.scale_factor = kNormalizeMargin / out.before.value;
    out.function = f.scaled(out.scale_factor);
  }
  return out;
}

FunctionSpec random_trig_poly(std::size_t n, std::size_t terms, std::size_t support,
                              int max_frequency, SampleRng& rng) {
  require(terms >= 1 && support >= 1 && support <= n && max_frequency >= 1,
          ErrorCode::InvalidInput, "invalid random trig-poly parameters");
  ZooParams p;
  for (std::size_t j = 0; j < terms; ++j) {
    TrigTerm t;
    t.frequency.assign(n, 0);
    for (std::size_t axis : sample_subset(n, support, rng)) {
      int m = 0;
      while (m == 0) m = static_cast<int>(rng.below(2 * max_frequency + 1)) - max_frequency;
      t.frequency[axis] = m;
    }
    t.amplitude = rng.uniform() * 2.0 - 1.0;
    t.phase = kTwoPi * rng.uniform();
    p.terms.push_back(std::move(t));
  }
  // Raw bound is normalized to exactly 1 here so random draws are comparable.
  double bound = 0.0;
  for (const auto& t : p.terms) bound += std::fabs(t.amplitude) * kTwoPi * frequency_norm(t.frequency);
  for (auto& t : p.terms) t.amplitude /= bound;
  return zoo_construct(Family::TrigPoly, p, n);
}

}  // namespace torlab
