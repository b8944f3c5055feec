#include "torlab/torus.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "torlab/error.hpp"

namespace torlab {

double wrap_scalar(double t) noexcept {
  double r = t - std::floor(t);
  // t slightly below an integer can round up to exactly 1.
  if (r >= 1.0) r = 0.0;
  return r;
}

double signed_delta(double a, double b) noexcept {
  double d = wrap_scalar(b - a);
  if (d >= 0.5) d -= 1.0;
  return d;
}

double circle_dist(double a, double b) noexcept {
  double d = std::fabs(b - a);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

TorusPoint TorusPoint::wrap(std::span<const double> raw) {
  require(!raw.empty(), ErrorCode::InvalidInput, "torus point must have dimension >= 1");
  std::vector<double> c(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    require(std::isfinite(raw[i]), ErrorCode::InvalidInput,
            "non-finite coordinate at index " + std::to_string(i));
    c[i] = wrap_scalar(raw[i]);
  }
  return TorusPoint(std::move(c));
}

TorusPoint TorusPoint::origin(std::size_t n) {
  require(n >= 1, ErrorCode::InvalidInput, "torus dimension must be >= 1");
  return TorusPoint(std::vector<double>(n, 0.0));
}

bool TorusPoint::approx_equal(const TorusPoint& other, double tol) const {
  if (dim() != other.dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i)
    if (circle_dist(coords_[i], other.coords_[i]) > tol) return false;
  return true;
}

TorusPoint wrap(std::span<const double> raw) { return TorusPoint::wrap(raw); }

double torus_dist(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), ErrorCode::InvalidInput, "dimension mismatch in torus_dist");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = circle_dist(x[i], y[i]);
    s += d * d;
  }
  return std::sqrt(s);
}

double torus_dist(const TorusPoint& x, const TorusPoint& y) {
  return torus_dist(x.coords(), y.coords());
}

std::vector<double> displacement(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), ErrorCode::InvalidInput, "dimension mismatch in displacement");
  std::vector<double> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = signed_delta(x[i], y[i]);
  return d;
}

SubtorusSpec SubtorusSpec::make(std::size_t ambient_dim, std::vector<std::size_t> free_axes,
                                const TorusPoint& base) {
  require(ambient_dim >= 1, ErrorCode::InvalidInput, "ambient dimension must be >= 1");
  require(base.dim() == ambient_dim, ErrorCode::InvalidInput, "base point dimension mismatch");
  require(!free_axes.empty() && free_axes.size() <= ambient_dim, ErrorCode::InvalidInput,
          "subtorus dimension must satisfy 1 <= k <= n");
  std::sort(free_axes.begin(), free_axes.end());
  require(std::adjacent_find(free_axes.begin(), free_axes.end()) == free_axes.end(),
          ErrorCode::InvalidInput, "free axes must be distinct");
  require(free_axes.back() < ambient_dim, ErrorCode::InvalidInput, "free axis out of range");

  std::vector<double> b(base.coords().begin(), base.coords().end());
  for (std::size_t a : free_axes) b[a] = 0.0;
  SubtorusSpec s;
  s.free_axes_ = std::move(free_axes);
  s.base_ = TorusPoint::wrap(b);
  return s;
}

SubtorusSpec SubtorusSpec::full(std::size_t n) {
  std::vector<std::size_t> axes(n);
  for (std::size_t i = 0; i < n; ++i) axes[i] = i;
  return make(n, std::move(axes), TorusPoint::origin(n));
}

bool SubtorusSpec::is_free(std::size_t axis) const noexcept {
  return std::binary_search(free_axes_.begin(), free_axes_.end(), axis);
}

std::vector<double> SubtorusSpec::restrict(const TorusPoint& x) const {
  require(x.dim() == ambient_dim(), ErrorCode::InvalidInput, "dimension mismatch in restrict");
  std::vector<double> u(dim());
  for (std::size_t j = 0; j < dim(); ++j) u[j] = x[free_axes_[j]];
  return u;
}

TorusPoint embed(const SubtorusSpec& sub, std::span<const double> u) {
  require(u.size() == sub.dim(), ErrorCode::InvalidInput,
          "embed expects " + std::to_string(sub.dim()) + " parameters, got " +
              std::to_string(u.size()));
  std::vector<double> c(sub.base().coords().begin(), sub.base().coords().end());
  const auto axes = sub.free_axes();
  for (std::size_t j = 0; j < axes.size(); ++j) c[axes[j]] = u[j];
  return TorusPoint::wrap(c);
}

Segment Segment::make(const TorusPoint& start, const TorusPoint& end) {
  const double len = torus_dist(start, end);
  require(len <= 0.5 + kCoordTol, ErrorCode::ChartTooLarge,
          "segment longer than 1/2 leaves a single chart");
  return Segment{start, end, len};
}

Chart lift_chart(const TorusPoint& center, double radius) {
  require(std::isfinite(radius) && radius > 0.0, ErrorCode::InvalidInput,
          "chart radius must be positive");
  require(radius <= kMaxChartRadius, ErrorCode::ChartTooLarge,
          "chart radius exceeds 1/4; isometry to a Euclidean ball is not guaranteed");
  return Chart(center, radius);
}

std::vector<double> Chart::lift(const TorusPoint& x) const {
  std::vector<double> v = displacement(center_.coords(), x.coords());
  double s = 0.0;
  for (double c : v) s += c * c;
  require(std::sqrt(s) <= radius_ + kCoordTol, ErrorCode::ChartTooLarge,
          "point lies outside the chart ball");
  return v;
}

TorusPoint Chart::project(std::span<const double> v) const {
  require(v.size() == dim(), ErrorCode::InvalidInput, "dimension mismatch in chart projection");
  double s = 0.0;
  std::vector<double> c(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    s += v[i] * v[i];
    c[i] = center_[i] + v[i];
  }
  require(std::sqrt(s) <= radius_ + kCoordTol, ErrorCode::ChartTooLarge,
          "vector lies outside the chart ball");
  return TorusPoint::wrap(c);
}

}  // namespace torlab
