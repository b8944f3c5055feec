#pragma once

// Flat torus T^n = R^n / Z^n: canonical coordinates, the quotient metric,
// coordinate subtori and local Euclidean charts.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace torlab {

/// Equality tolerance for canonical coordinates.
inline constexpr double kCoordTol = 1e-12;

/// Largest chart radius we hand out; strictly inside the injectivity radius 1/2.
inline constexpr double kMaxChartRadius = 0.25;

/// Reduce a real to its representative in [0,1).
double wrap_scalar(double t) noexcept;

/// Signed minimal-image difference b - a on R/Z, in [-1/2, 1/2).
double signed_delta(double a, double b) noexcept;

/// Geodesic distance on the circle R/Z.
double circle_dist(double a, double b) noexcept;

/// A point of T^n stored by its canonical coordinates in [0,1).
class TorusPoint {
 public:
  TorusPoint() = default;

  /// Canonicalizes every coordinate; throws InvalidInput on non-finite or empty input.
  static TorusPoint wrap(std::span<const double> raw);
  static TorusPoint wrap(std::initializer_list<double> raw) {
    return wrap(std::span<const double>(raw.begin(), raw.size()));
  }
  static TorusPoint origin(std::size_t n);

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const noexcept { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }

  /// Coordinatewise comparison at kCoordTol, seam-aware (0 and 1-1e-13 compare equal).
  bool approx_equal(const TorusPoint& other, double tol = kCoordTol) const;

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
  friend auto operator<=>(const TorusPoint&, const TorusPoint&) = default;

 private:
  explicit TorusPoint(std::vector<double> c) : coords_(std::move(c)) {}
  std::vector<double> coords_;
};

TorusPoint wrap(std::span<const double> raw);

/// sqrt(sum_i min(|x_i - y_i|, 1 - |x_i - y_i|)^2)
double torus_dist(const TorusPoint& x, const TorusPoint& y);

/// Same metric on raw coordinate vectors (need not be canonical).
double torus_dist(std::span<const double> x, std::span<const double> y);

/// Minimal-image displacement y - x, each component in [-1/2, 1/2).
std::vector<double> displacement(std::span<const double> x, std::span<const double> y);

/// A k-dimensional coordinate subtorus: free axes J plus the fixed values
/// of the other n-k coordinates. Base values on J are stored as 0.
class SubtorusSpec {
 public:
  SubtorusSpec() = default;

  /// Sorts and validates axes; zeroes the base on free axes.
  static SubtorusSpec make(std::size_t ambient_dim, std::vector<std::size_t> free_axes,
                           const TorusPoint& base);
  static SubtorusSpec full(std::size_t n);

  std::size_t ambient_dim() const noexcept { return base_.dim(); }
  std::size_t dim() const noexcept { return free_axes_.size(); }
  std::span<const std::size_t> free_axes() const noexcept { return free_axes_; }
  const TorusPoint& base() const noexcept { return base_; }
  bool is_free(std::size_t axis) const noexcept;

  /// Parameter coordinates of a point of M (its coordinates on J).
  std::vector<double> restrict(const TorusPoint& x) const;

  friend bool operator==(const SubtorusSpec&, const SubtorusSpec&) = default;

 private:
  std::vector<std::size_t> free_axes_;
  TorusPoint base_;
};

/// The point of M with parameter coordinates u (wrapped). Isometry T^k -> M.
TorusPoint embed(const SubtorusSpec& sub, std::span<const double> u);

/// A geodesic segment inside one chart.
struct Segment {
  TorusPoint start;
  TorusPoint end;
  double length = 0.0;

  /// Throws ChartTooLarge when the endpoints are more than 1/2 apart.
  static Segment make(const TorusPoint& start, const TorusPoint& end);
};

/// Isometric identification of the geodesic ball B(center, radius) on a
/// flat torus with the Euclidean ball of the same radius around the origin.
class Chart {
 public:
  const TorusPoint& center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }
  std::size_t dim() const noexcept { return center_.dim(); }

  /// Euclidean coordinates of a ball point relative to the center.
  std::vector<double> lift(const TorusPoint& x) const;
  /// Inverse of lift; the vector must lie in the closed Euclidean ball.
  TorusPoint project(std::span<const double> v) const;

 private:
  friend Chart lift_chart(const TorusPoint& center, double radius);
  Chart(TorusPoint c, double r) : center_(std::move(c)), radius_(r) {}
  TorusPoint center_;
  double radius_ = 0.0;
};

/// Throws ChartTooLarge for radius > 1/4 and InvalidInput for radius <= 0.
Chart lift_chart(const TorusPoint& center, double radius);

}  // namespace torlab
