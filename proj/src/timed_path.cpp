#include "mra/timed_path.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace mra {

Pose2 lerp_pose(const Pose2& a, const Pose2& b, double u) {
  const double dth = wrap_angle(b.theta - a.theta);
  return Pose2(a.x + (b.x - a.x) * u, a.y + (b.y - a.y) * u, a.theta + dth * u);
}

const Attachment* TimedPath::attachment_at(double t) const {
  for (const auto& att : attachments) {
    const double t0 = knots[static_cast<size_t>(att.first_knot)].t;
    const double t1 = knots[static_cast<size_t>(att.last_knot)].t;
    if (t >= t0 && t <= t1) return &att;
  }
  return nullptr;
}

Knot TimedPath::sample(double t) const {
  assert(!knots.empty());
  if (t <= knots.front().t) return knots.front();
  if (t >= knots.back().t) return knots.back();
  // first knot with time > t
  auto it = std::upper_bound(knots.begin(), knots.end(), t,
                             [](double v, const Knot& k) { return v < k.t; });
  const Knot& b = *it;
  const Knot& a = *(it - 1);
  const double u = (t - a.t) / (b.t - a.t);
  Knot out;
  out.t = t;
  out.pose = lerp_pose(a.pose, b.pose, u);
  out.grip = a.grip;
  return out;
}

void TimedPath::append(const Knot& k) {
  if (!knots.empty()) {
    const double last = knots.back().t;
    if (k.t < last) throw std::invalid_argument("timed_path: non-increasing knot time");
    if (k.t == last) {
      // coincident join point between committed stretches
      knots.back() = k;
      return;
    }
  }
  knots.push_back(k);
}

double TimedPath::max_segment_speed(double angle_weight) const {
  double worst = 0.0;
  for (size_t i = 1; i < knots.size(); ++i) {
    const double dt = knots[i].t - knots[i - 1].t;
    if (dt <= 0.0) continue;
    const double dx = knots[i].pose.x - knots[i - 1].pose.x;
    const double dy = knots[i].pose.y - knots[i - 1].pose.y;
    const double dth = wrap_angle(knots[i].pose.theta - knots[i - 1].pose.theta);
    const double d = std::sqrt(dx * dx + dy * dy + angle_weight * angle_weight * dth * dth);
    worst = std::max(worst, d / dt);
  }
  return worst;
}

}  // namespace mra
