#pragma once

#include <algorithm>
#include <cmath>

namespace mra {

constexpr double kPi = 3.14159265358979323846;

/// Normalize an angle into (-pi, pi].
inline double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
  double squared_norm() const { return x * x + y * y; }
};

inline Vec2 heading_dir(double theta) { return {std::cos(theta), std::sin(theta)}; }

/// Planar rigid pose; theta is kept normalized into (-pi, pi].
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Pose2() = default;
  Pose2(double px, double py, double pt) : x(px), y(py), theta(wrap_angle(pt)) {}

  Vec2 position() const { return {x, y}; }

  /// Apply this pose as a rigid transform to a point in its local frame.
  Vec2 apply(const Vec2& p) const {
    const double c = std::cos(theta), s = std::sin(theta);
    return {x + c * p.x - s * p.y, y + s * p.x + c * p.y};
  }

  /// Rigid composition: (this * o) maps o's local frame through this.
  Pose2 compose(const Pose2& o) const {
    const Vec2 p = apply({o.x, o.y});
    return Pose2(p.x, p.y, theta + o.theta);
  }

  Pose2 inverse() const {
    const double c = std::cos(theta), s = std::sin(theta);
    return Pose2(-(c * x + s * y), -(-s * x + c * y), -theta);
  }
};

inline bool operator==(const Pose2& a, const Pose2& b) {
  return a.x == b.x && a.y == b.y && a.theta == b.theta;
}

/// Axis-aligned rectangle.
struct Rect {
  Vec2 lo;
  Vec2 hi;

  bool contains(const Vec2& p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
  Vec2 center() const { return {(lo.x + hi.x) * 0.5, (lo.y + hi.y) * 0.5}; }
  Vec2 half_extent() const { return {(hi.x - lo.x) * 0.5, (hi.y - lo.y) * 0.5}; }
  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }

  /// Negative inside (depth to the nearest edge), positive outside.
  double signed_distance(const Vec2& p) const {
    const double dx = std::max({lo.x - p.x, p.x - hi.x});
    const double dy = std::max({lo.y - p.y, p.y - hi.y});
    if (dx <= 0.0 && dy <= 0.0) return std::max(dx, dy);
    return std::hypot(std::max(dx, 0.0), std::max(dy, 0.0));
  }
};

/// Rectangle with arbitrary planar orientation.
struct OrientedBox {
  Vec2 center;
  Vec2 half;  // half extents along the local axes
  double theta = 0.0;

  static OrientedBox from_rect(const Rect& r) {
    return {r.center(), r.half_extent(), 0.0};
  }

  Vec2 axis_x() const { return heading_dir(theta); }
  Vec2 axis_y() const { const Vec2 a = axis_x(); return {-a.y, a.x}; }
  double circumradius() const { return std::hypot(half.x, half.y); }

  /// Negative inside, positive is the exact distance outside.
  double signed_distance(const Vec2& p) const {
    const Vec2 d = p - center;
    const Vec2 ax = axis_x(), ay = axis_y();
    const double lx = std::abs(d.dot(ax)) - half.x;
    const double ly = std::abs(d.dot(ay)) - half.y;
    if (lx <= 0.0 && ly <= 0.0) return std::max(lx, ly);
    return std::hypot(std::max(lx, 0.0), std::max(ly, 0.0));
  }
};

// Separation values: negative means the shapes overlap by that depth
// (a lower bound for box pairs), positive is clearance (a lower bound
// for box pairs, exact for discs).

inline double separation_disc_disc(const Vec2& c1, double r1, const Vec2& c2, double r2) {
  return (c2 - c1).norm() - (r1 + r2);
}

inline double separation_disc_box(const Vec2& c, double r, const OrientedBox& b) {
  return b.signed_distance(c) - r;
}

namespace detail {
inline void project_box(const OrientedBox& b, const Vec2& axis, double& mn, double& mx) {
  const double c = b.center.dot(axis);
  const double e = std::abs(b.axis_x().dot(axis)) * b.half.x +
                   std::abs(b.axis_y().dot(axis)) * b.half.y;
  mn = c - e;
  mx = c + e;
}
}  // namespace detail

/// Separating-axis test over both boxes' axes; exact as an overlap
/// predicate, conservative as a distance bound.
inline double separation_box_box(const OrientedBox& a, const OrientedBox& b) {
  const Vec2 axes[4] = {a.axis_x(), a.axis_y(), b.axis_x(), b.axis_y()};
  double best = -1e300;  // max over axes of (gap); gap = -overlap
  double min_overlap = 1e300;
  bool separated = false;
  for (const Vec2& ax : axes) {
    double amin, amax, bmin, bmax;
    detail::project_box(a, ax, amin, amax);
    detail::project_box(b, ax, bmin, bmax);
    const double overlap = std::min(amax, bmax) - std::max(amin, bmin);
    if (overlap < 0.0) {
      separated = true;
      best = std::max(best, -overlap);
    }
    min_overlap = std::min(min_overlap, overlap);
  }
  if (separated) return best;
  return -min_overlap;
}

inline bool overlaps(const OrientedBox& a, const OrientedBox& b) {
  return separation_box_box(a, b) < 0.0;
}

}  // namespace mra
