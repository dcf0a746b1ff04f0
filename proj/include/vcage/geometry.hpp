#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vcage/error.hpp"
#include "vcage/rng.hpp"

namespace vcage {

inline constexpr double kPi = 3.14159265358979323846;

// Same-level overlaps at or below this depth count as touching and are
// permitted everywhere in the engine.
inline constexpr double kPenetrationTolerance = 1e-9;

// Wrap into [-pi, pi).
double normalize_angle(double theta);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Planar oriented pose plus a discrete stacking layer (0 = tabletop).
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // radians, kept in [-pi, pi)
  int level = 0;

  bool operator==(const Pose&) const = default;
};

Pose make_pose(double x, double y, double theta, int level = 0);

// Oriented-box half extents; height only matters for stacking metadata.
struct Footprint {
  double half_x = 0.0;
  double half_y = 0.0;
  double height = 0.0;

  bool operator==(const Footprint&) const = default;
};

void validate_footprint(const Footprint& fp, std::string_view what);

struct Rect {
  double min_x = 0.0;
  double max_x = 0.0;
  double min_y = 0.0;
  double max_y = 0.0;
};

// Axis-aligned table extent plus a reachability disk around the robot base.
struct WorkspaceBounds {
  double min_x = -0.6;
  double max_x = 0.6;
  double min_y = -0.4;
  double max_y = 0.4;
  double reach_x = 0.0;
  double reach_y = -0.5;
  double reach_radius = 1.1;

  Rect rect() const { return Rect{min_x, max_x, min_y, max_y}; }
};

void validate_workspace(const WorkspaceBounds& ws);

// World-frame corners of an oriented box, counter-clockwise.
std::array<Vec2, 4> box_corners(const Pose& pose, const Footprint& fp);

// Point membership in an oriented box, inflated by eps.
bool point_in_box(double px, double py, const Pose& pose, const Footprint& fp,
                  double eps = 0.0);

// Minimum translation distance separating two oriented rectangles;
// 0 iff disjoint or touching. Separating-axis construction over both
// boxes' edge normals (exact for convex polygons). Level-agnostic.
double penetration_depth(const Pose& pose_a, const Footprint& fp_a,
                         const Pose& pose_b, const Footprint& fp_b);

// All four corners inside the table rect and the center inside the reach disk.
bool in_workspace(const Pose& pose, const Footprint& fp, const WorkspaceBounds& ws);

struct MapEntry {
  std::string id;
  Pose pose;
  Footprint footprint;
};

// Occupied regions of the workspace, updated after each object placement.
// Value semantics: copies are independent; one map per generation episode.
class ProhibitedVolumeMap {
 public:
  ProhibitedVolumeMap() = default;
  explicit ProhibitedVolumeMap(const WorkspaceBounds& ws) : workspace_(ws) {}

  const WorkspaceBounds& workspace() const { return workspace_; }
  const std::vector<MapEntry>& entries() const { return entries_; }
  bool contains(std::string_view id) const;
  const MapEntry* find(std::string_view id) const;

  // Throws DuplicateId if the id is present, PlacementConflict if the box
  // overlaps a same-level entry beyond tolerance or leaves the workspace.
  void insert(std::string id, const Pose& pose, const Footprint& fp);

  // Same bookkeeping with the conflict/containment checks skipped; used for
  // slip drops where overlap is deliberately permitted and flagged upstream.
  void insert_unchecked(std::string id, const Pose& pose, const Footprint& fp);

  void erase(std::string_view id);

  // Same-level entries whose penetration against the query box exceeds
  // tolerance, with depths. `inflation` grows the query footprint to model
  // an optional clearance margin (default none).
  std::vector<std::pair<std::string, double>> conflicts(const Pose& pose,
                                                        const Footprint& fp,
                                                        int level,
                                                        double inflation = 0.0) const;

  // Rejection-samples (x, y, theta) uniformly over `region` until the pose is
  // conflict-free and inside the workspace. Throws PlacementExhausted after
  // max_attempts failed draws; the caller re-samples the scene.
  Pose sample_free_pose(const Footprint& fp, const Rect& region, Rng& rng,
                        int max_attempts = 256, int level = 0,
                        double inflation = 0.0) const;

 private:
  std::vector<MapEntry> entries_;
  WorkspaceBounds workspace_;
};

}  // namespace vcage
