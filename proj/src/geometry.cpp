#include "vcage/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vcage {

double normalize_angle(double theta) {
  double t = std::fmod(theta + kPi, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  return t - kPi;
}

Pose make_pose(double x, double y, double theta, int level) {
  if (level < 0) raise(ErrorCode::invalid_argument, "pose level must be >= 0");
  return Pose{x, y, normalize_angle(theta), level};
}

void validate_footprint(const Footprint& fp, std::string_view what) {
  if (!(fp.half_x > 0.0) || !(fp.half_y > 0.0) || !(fp.height > 0.0)) {
    raise(ErrorCode::invalid_argument,
          "footprint extents must be strictly positive (" + std::string(what) + ")");
  }
}

void validate_workspace(const WorkspaceBounds& ws) {
  if (!(ws.min_x < ws.max_x) || !(ws.min_y < ws.max_y)) {
    raise(ErrorCode::invalid_argument, "workspace bounds must be non-empty");
  }
  if (!(ws.reach_radius > 0.0)) {
    raise(ErrorCode::invalid_argument, "reach radius must be positive");
  }
}

std::array<Vec2, 4> box_corners(const Pose& pose, const Footprint& fp) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  const double ux = c * fp.half_x, uy = s * fp.half_x;
  const double vx = -s * fp.half_y, vy = c * fp.half_y;
  return {Vec2{pose.x + ux + vx, pose.y + uy + vy},
          Vec2{pose.x - ux + vx, pose.y - uy + vy},
          Vec2{pose.x - ux - vx, pose.y - uy - vy},
          Vec2{pose.x + ux - vx, pose.y + uy - vy}};
}

bool point_in_box(double px, double py, const Pose& pose, const Footprint& fp,
                  double eps) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  const double dx = px - pose.x;
  const double dy = py - pose.y;
  const double u = c * dx + s * dy;
  const double v = -s * dx + c * dy;
  return std::abs(u) <= fp.half_x + eps && std::abs(v) <= fp.half_y + eps;
}

namespace {

// Projection radius of an oriented box onto a unit axis.
double projection_radius(double cos_t, double sin_t, const Footprint& fp,
                         double ax, double ay) {
  const double ex = cos_t * fp.half_x, ey = sin_t * fp.half_x;
  const double fx = -sin_t * fp.half_y, fy = cos_t * fp.half_y;
  return std::abs(ax * ex + ay * ey) + std::abs(ax * fx + ay * fy);
}

}  // namespace

double penetration_depth(const Pose& pose_a, const Footprint& fp_a,
                         const Pose& pose_b, const Footprint& fp_b) {
  const double ca = std::cos(pose_a.theta), sa = std::sin(pose_a.theta);
  const double cb = std::cos(pose_b.theta), sb = std::sin(pose_b.theta);
  const double dx = pose_b.x - pose_a.x;
  const double dy = pose_b.y - pose_a.y;

  const double axes[4][2] = {{ca, sa}, {-sa, ca}, {cb, sb}, {-sb, cb}};
  double depth = std::numeric_limits<double>::infinity();
  for (const auto& axis : axes) {
    const double ra = projection_radius(ca, sa, fp_a, axis[0], axis[1]);
    const double rb = projection_radius(cb, sb, fp_b, axis[0], axis[1]);
    const double dist = std::abs(axis[0] * dx + axis[1] * dy);
    const double overlap = ra + rb - dist;
    if (overlap <= 0.0) return 0.0;  // separating axis
    depth = std::min(depth, overlap);
  }
  return depth;
}

bool in_workspace(const Pose& pose, const Footprint& fp, const WorkspaceBounds& ws) {
  for (const Vec2& c : box_corners(pose, fp)) {
    if (c.x < ws.min_x || c.x > ws.max_x || c.y < ws.min_y || c.y > ws.max_y) {
      return false;
    }
  }
  const double rx = pose.x - ws.reach_x;
  const double ry = pose.y - ws.reach_y;
  return rx * rx + ry * ry <= ws.reach_radius * ws.reach_radius;
}

bool ProhibitedVolumeMap::contains(std::string_view id) const {
  return find(id) != nullptr;
}

const MapEntry* ProhibitedVolumeMap::find(std::string_view id) const {
  for (const MapEntry& e : entries_) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

void ProhibitedVolumeMap::insert(std::string id, const Pose& pose, const Footprint& fp) {
  if (contains(id)) {
    raise(ErrorCode::duplicate_id, "object '" + id + "' already placed");
  }
  if (!in_workspace(pose, fp, workspace_)) {
    raise(ErrorCode::placement_conflict, "object '" + id + "' outside workspace");
  }
  const auto hits = conflicts(pose, fp, pose.level);
  if (!hits.empty()) {
    raise(ErrorCode::placement_conflict,
          "object '" + id + "' overlaps '" + hits.front().first + "'");
  }
  entries_.push_back(MapEntry{std::move(id), pose, fp});
}

void ProhibitedVolumeMap::insert_unchecked(std::string id, const Pose& pose,
                                           const Footprint& fp) {
  if (contains(id)) {
    raise(ErrorCode::duplicate_id, "object '" + id + "' already placed");
  }
  entries_.push_back(MapEntry{std::move(id), pose, fp});
}

void ProhibitedVolumeMap::erase(std::string_view id) {
  std::erase_if(entries_, [&](const MapEntry& e) { return e.id == id; });
}

std::vector<std::pair<std::string, double>> ProhibitedVolumeMap::conflicts(
    const Pose& pose, const Footprint& fp, int level, double inflation) const {
  Footprint query = fp;
  query.half_x += inflation;
  query.half_y += inflation;
  std::vector<std::pair<std::string, double>> out;
  for (const MapEntry& e : entries_) {
    if (e.pose.level != level) continue;
    const double depth = penetration_depth(pose, query, e.pose, e.footprint);
    if (depth > kPenetrationTolerance) out.emplace_back(e.id, depth);
  }
  return out;
}

Pose ProhibitedVolumeMap::sample_free_pose(const Footprint& fp, const Rect& region,
                                           Rng& rng, int max_attempts, int level,
                                           double inflation) const {
  if (max_attempts < 1) {
    raise(ErrorCode::invalid_argument, "max_attempts must be >= 1");
  }
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const double x = rng.uniform(region.min_x, region.max_x);
    const double y = rng.uniform(region.min_y, region.max_y);
    const double theta = rng.uniform(-kPi, kPi);
    const Pose pose = Pose{x, y, theta, level};
    if (!in_workspace(pose, fp, workspace_)) continue;
    if (!conflicts(pose, fp, level, inflation).empty()) continue;
    return pose;
  }
  raise(ErrorCode::placement_exhausted,
        "no free pose after " + std::to_string(max_attempts) + " attempts");
}

}  // namespace vcage
