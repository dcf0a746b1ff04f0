#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vcage/assets.hpp"
#include "vcage/geometry.hpp"

namespace vcage {

enum class RelationKind {
  inside,
  on,
  left_of,
  right_of,
  behind,
  in_front_of,
  near,
};

std::string_view to_string(RelationKind kind);
RelationKind relation_kind_from_string(std::string_view s);

// Directional conventions, world frame: left_of means subject.x + margin <=
// reference.x; right_of the mirror; behind means subject.y >= reference.y +
// margin; in_front_of the mirror. near bounds the center distance by margin.
struct SpatialRelation {
  RelationKind kind;
  std::string subject;
  std::string reference;
  double margin = 0.0;
};

struct SceneDescription {
  std::vector<SpatialRelation> relations;
  std::string prose;
};

struct PlacedObject {
  ObjectInstance instance;
  Pose pose;
};

// Placed objects plus the prohibited-volume map that tracks them. Objects
// keep placement order; the map is kept in sync by the mutators below.
class Scene {
 public:
  Scene() : map_(WorkspaceBounds{}) {}
  explicit Scene(const WorkspaceBounds& bounds) : map_(bounds) {}

  const WorkspaceBounds& bounds() const { return map_.workspace(); }
  const ProhibitedVolumeMap& map() const { return map_; }
  const std::vector<PlacedObject>& objects() const { return objects_; }

  const PlacedObject* find(std::string_view id) const;
  const PlacedObject& at(std::string_view id) const;  // throws MissingObject
  bool has(std::string_view id) const { return find(id) != nullptr; }

  // Checked placement of a new object (DuplicateId / PlacementConflict).
  void place(ObjectInstance instance, const Pose& pose);

  // Placement without conflict/containment checks; for reconstructing
  // mid-episode states that may legitimately contain flagged overlap.
  void place_unchecked(ObjectInstance instance, const Pose& pose);

  // Remove the object's volume from the map while it is carried.
  void lift(std::string_view id);

  // Put a lifted object back down. Unchecked placements permit overlap for
  // degenerate slip drops.
  void set_down(std::string_view id, const Pose& pose, bool checked = true);

 private:
  std::vector<PlacedObject> objects_;
  ProhibitedVolumeMap map_;
};

// Places every instance at level 0 via rejection sampling over the full
// workspace. Propagates PlacementExhausted for over-cluttered inputs.
Scene scatter_initial(const std::vector<ObjectInstance>& instances,
                      const WorkspaceBounds& bounds, Rng& rng,
                      int max_attempts = 256);

using PoseMap = std::map<std::string, Pose>;

struct ObjectShape {
  Footprint footprint;
  std::optional<Vec2> interior_half;
};

using ShapeMap = std::map<std::string, ObjectShape>;

ShapeMap scene_shapes(const Scene& scene);

// Greedy goal-layout proposal: every relation's subject is re-sampled inside
// the relation's feasible region (references keep their latest pose).
// Residual violations are left for refine. Throws UnsatisfiableRelation when
// a feasible region is geometrically empty.
PoseMap propose_layout(const Scene& scene, const SceneDescription& description,
                       Rng& rng, int max_attempts = 256);

// Sum of squared penetration depths over unordered same-level pairs.
double collision_loss(const PoseMap& poses, const ShapeMap& shapes);

// Sum of squared relation violations; see relation_violation for the
// per-kind distances. Zero iff every relation is satisfied.
double semantic_loss(const PoseMap& poses, const SceneDescription& description,
                     const ShapeMap& shapes);

// Violation distance of one relation given candidate poses (0 = satisfied).
double relation_violation(const SpatialRelation& relation, const PoseMap& poses,
                          const ShapeMap& shapes);

// Wrong-stacking-level penalty for `on` relations; dominates metric terms so
// level errors are never traded against sliding.
inline constexpr double kLevelPenalty = 1.0;

struct RefineConfig {
  double lambda = 1.0;     // semantic weight
  int max_iters = 500;     // sweeps over all objects
  double step_init = 0.05; // meters
  double step_decay = 0.9;
  uint64_t seed = 0;
};

struct RefineResult {
  PoseMap poses;
  double cost = 0.0;
  double collision = 0.0;
  double semantic = 0.0;
  bool not_collision_free = false;
  int accepted_moves = 0;
  std::vector<double> cost_trace;  // cost after each accepted move, strictly decreasing
};

// Seeded stochastic local search minimizing
//   collision_loss + lambda * semantic_loss.
// Per-object (x, y, theta) perturbations; a move is accepted only if the
// total cost strictly decreases and the pose stays in the workspace. The
// step shrinks by step_decay after any sweep with no accepted move.
RefineResult refine(const PoseMap& poses, const SceneDescription& description,
                    const ShapeMap& shapes, const WorkspaceBounds& bounds,
                    const RefineConfig& cfg);

// Rebuilds a scene with the same objects at new poses (checked inserts).
Scene apply_poses(const Scene& scene, const PoseMap& poses);

// Top-down label raster: 0 = free, else 1-based index into object_ids.
struct Raster {
  int width = 0;
  int height = 0;
  double scale = 0.0;     // meters per pixel
  double origin_x = 0.0;  // world position of pixel (0, 0)'s corner
  double origin_y = 0.0;
  std::vector<uint8_t> pixels;  // row-major, pixels[v * width + u]
  std::vector<std::string> object_ids;

  uint8_t at(int u, int v) const { return pixels[static_cast<size_t>(v) * width + u]; }

  bool operator==(const Raster&) const = default;
};

// Each pixel is labeled by the topmost (highest level) object covering its
// center; same-level ties go to the later-placed object. `skip_id` leaves one
// object unrendered (used for a held object) while keeping its label slot.
Raster rasterize(const Scene& scene, double scale, std::string_view skip_id = {});

// Largest per-axis exceedance of the subject box outside the container
// interior, measured in the container frame; 0 iff fully contained.
double containment_violation(const Pose& subject, const Footprint& subject_fp,
                             const Pose& container, const Vec2& interior_half);

// Centroid of each object's label mask in `goal`, exact because labels carry
// ids. Requires identical scale/origin; throws MissingObject for ids with an
// empty mask.
std::map<std::string, std::pair<double, double>> match_templates(const Raster& goal,
                                                                 const Raster& init);

// Pixel-center back-projection: origin + scale * (u + 0.5, v + 0.5).
// Throws OutOfBounds outside the raster.
std::pair<double, double> project_to_world(double u, double v, const Raster& raster);

// Binary PGM (P5). An optional single-line comment is embedded in the header
// (used by the critic wire protocol to carry machine-readable context).
std::string encode_pgm(const Raster& raster, const std::string& comment = "");
void write_pgm(const Raster& raster, const std::filesystem::path& path,
               const std::string& comment = "");

// Sidecar metadata JSON text ({scale, origin, ids}).
std::string raster_meta_json(const Raster& raster);

}  // namespace vcage
