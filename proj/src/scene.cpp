#include "vcage/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"

namespace vcage {

std::string_view to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::inside: return "inside";
    case RelationKind::on: return "on";
    case RelationKind::left_of: return "left_of";
    case RelationKind::right_of: return "right_of";
    case RelationKind::behind: return "behind";
    case RelationKind::in_front_of: return "in_front_of";
    case RelationKind::near: return "near";
  }
  return "unknown";
}

RelationKind relation_kind_from_string(std::string_view s) {
  if (s == "inside") return RelationKind::inside;
  if (s == "on") return RelationKind::on;
  if (s == "left_of") return RelationKind::left_of;
  if (s == "right_of") return RelationKind::right_of;
  if (s == "behind") return RelationKind::behind;
  if (s == "in_front_of") return RelationKind::in_front_of;
  if (s == "near") return RelationKind::near;
  raise(ErrorCode::parse_error, "unknown relation kind '" + std::string(s) + "'");
}

const PlacedObject* Scene::find(std::string_view id) const {
  for (const PlacedObject& o : objects_) {
    if (o.instance.id == id) return &o;
  }
  return nullptr;
}

const PlacedObject& Scene::at(std::string_view id) const {
  const PlacedObject* o = find(id);
  if (o == nullptr) {
    raise(ErrorCode::missing_object, "no object '" + std::string(id) + "' in scene");
  }
  return *o;
}

void Scene::place(ObjectInstance instance, const Pose& pose) {
  if (find(instance.id) != nullptr) {
    raise(ErrorCode::duplicate_id, "object '" + instance.id + "' already in scene");
  }
  map_.insert(instance.id, pose, instance.cls->footprint);
  objects_.push_back(PlacedObject{std::move(instance), pose});
}

void Scene::place_unchecked(ObjectInstance instance, const Pose& pose) {
  if (find(instance.id) != nullptr) {
    raise(ErrorCode::duplicate_id, "object '" + instance.id + "' already in scene");
  }
  map_.insert_unchecked(instance.id, pose, instance.cls->footprint);
  objects_.push_back(PlacedObject{std::move(instance), pose});
}

void Scene::lift(std::string_view id) {
  at(id);  // existence check
  map_.erase(id);
}

void Scene::set_down(std::string_view id, const Pose& pose, bool checked) {
  PlacedObject* target = nullptr;
  for (PlacedObject& o : objects_) {
    if (o.instance.id == id) target = &o;
  }
  if (target == nullptr) {
    raise(ErrorCode::missing_object, "no object '" + std::string(id) + "' in scene");
  }
  if (checked) {
    map_.insert(target->instance.id, pose, target->instance.cls->footprint);
  } else {
    map_.insert_unchecked(target->instance.id, pose, target->instance.cls->footprint);
  }
  target->pose = pose;
}

Scene scatter_initial(const std::vector<ObjectInstance>& instances,
                      const WorkspaceBounds& bounds, Rng& rng, int max_attempts) {
  if (instances.empty()) {
    raise(ErrorCode::invalid_argument, "cannot scatter an empty instance list");
  }
  Scene scene(bounds);
  for (const ObjectInstance& inst : instances) {
    const Pose pose = scene.map().sample_free_pose(inst.cls->footprint, bounds.rect(),
                                                   rng, max_attempts, /*level=*/0);
    scene.place(inst, pose);
  }
  return scene;
}

ShapeMap scene_shapes(const Scene& scene) {
  ShapeMap shapes;
  for (const PlacedObject& o : scene.objects()) {
    shapes[o.instance.id] = ObjectShape{o.instance.cls->footprint,
                                        o.instance.cls->interior_half};
  }
  return shapes;
}

namespace {

Vec2 to_world(const Pose& frame, double du, double dv) {
  const double c = std::cos(frame.theta), s = std::sin(frame.theta);
  return Vec2{frame.x + c * du - s * dv, frame.y + s * du + c * dv};
}

// Chebyshev distance of a point outside an oriented box (0 inside).
double point_outside_box(double px, double py, const Pose& box, const Footprint& fp) {
  const double c = std::cos(box.theta), s = std::sin(box.theta);
  const double dx = px - box.x;
  const double dy = py - box.y;
  const double u = c * dx + s * dy;
  const double v = -s * dx + c * dy;
  return std::max({0.0, std::abs(u) - fp.half_x, std::abs(v) - fp.half_y});
}

const ObjectShape& shape_at(const ShapeMap& shapes, const std::string& id) {
  const auto it = shapes.find(id);
  if (it == shapes.end()) {
    raise(ErrorCode::missing_object, "no shape for object '" + id + "'");
  }
  return it->second;
}

const Pose& pose_at(const PoseMap& poses, const std::string& id) {
  const auto it = poses.find(id);
  if (it == poses.end()) {
    raise(ErrorCode::missing_object, "no pose for object '" + id + "'");
  }
  return it->second;
}

}  // namespace

double containment_violation(const Pose& subject, const Footprint& subject_fp,
                             const Pose& container, const Vec2& interior_half) {
  const double c = std::cos(container.theta), s = std::sin(container.theta);
  double worst = 0.0;
  for (const Vec2& corner : box_corners(subject, subject_fp)) {
    const double dx = corner.x - container.x;
    const double dy = corner.y - container.y;
    const double u = c * dx + s * dy;
    const double v = -s * dx + c * dy;
    worst = std::max({worst, std::abs(u) - interior_half.x, std::abs(v) - interior_half.y});
  }
  return worst;
}

double relation_violation(const SpatialRelation& relation, const PoseMap& poses,
                          const ShapeMap& shapes) {
  const Pose& subj = pose_at(poses, relation.subject);
  const Pose& ref = pose_at(poses, relation.reference);
  const ObjectShape& subj_shape = shape_at(shapes, relation.subject);
  const ObjectShape& ref_shape = shape_at(shapes, relation.reference);

  switch (relation.kind) {
    case RelationKind::inside:
      if (!ref_shape.interior_half) return kLevelPenalty;  // not a container
      return std::max(0.0, containment_violation(subj, subj_shape.footprint, ref,
                                                 *ref_shape.interior_half));
    case RelationKind::on:
      if (subj.level != ref.level + 1) return kLevelPenalty;
      return point_outside_box(subj.x, subj.y, ref, ref_shape.footprint);
    case RelationKind::left_of:
      return std::max(0.0, subj.x + relation.margin - ref.x);
    case RelationKind::right_of:
      return std::max(0.0, ref.x + relation.margin - subj.x);
    case RelationKind::behind:
      return std::max(0.0, ref.y + relation.margin - subj.y);
    case RelationKind::in_front_of:
      return std::max(0.0, subj.y + relation.margin - ref.y);
    case RelationKind::near: {
      const double dist = std::hypot(subj.x - ref.x, subj.y - ref.y);
      return std::max(0.0, dist - relation.margin);
    }
  }
  return 0.0;
}

double collision_loss(const PoseMap& poses, const ShapeMap& shapes) {
  double total = 0.0;
  for (auto a = poses.begin(); a != poses.end(); ++a) {
    const Footprint& fa = shape_at(shapes, a->first).footprint;
    for (auto b = std::next(a); b != poses.end(); ++b) {
      if (a->second.level != b->second.level) continue;
      const Footprint& fb = shape_at(shapes, b->first).footprint;
      const double depth = penetration_depth(a->second, fa, b->second, fb);
      total += depth * depth;
    }
  }
  return total;
}

double semantic_loss(const PoseMap& poses, const SceneDescription& description,
                     const ShapeMap& shapes) {
  double total = 0.0;
  for (const SpatialRelation& rel : description.relations) {
    const double v = relation_violation(rel, poses, shapes);
    total += v * v;
  }
  return total;
}

namespace {

// Rebuild a prohibited map from a pose set, skipping one id.
ProhibitedVolumeMap build_map(const Scene& scene, const PoseMap& poses,
                              std::string_view skip) {
  ProhibitedVolumeMap map(scene.bounds());
  for (const PlacedObject& o : scene.objects()) {
    if (o.instance.id == skip) continue;
    map.insert_unchecked(o.instance.id, pose_at(poses, o.instance.id),
                         o.instance.cls->footprint);
  }
  return map;
}

Rect intersect(const Rect& a, const Rect& b) {
  return Rect{std::max(a.min_x, b.min_x), std::min(a.max_x, b.max_x),
              std::max(a.min_y, b.min_y), std::min(a.max_y, b.max_y)};
}

bool empty_rect(const Rect& r) { return !(r.min_x < r.max_x) || !(r.min_y < r.max_y); }

}  // namespace

PoseMap propose_layout(const Scene& scene, const SceneDescription& description,
                       Rng& rng, int max_attempts) {
  PoseMap poses;
  for (const PlacedObject& o : scene.objects()) poses[o.instance.id] = o.pose;
  const ShapeMap shapes = scene_shapes(scene);

  for (const SpatialRelation& rel : description.relations) {
    if (rel.subject == rel.reference) {
      raise(ErrorCode::invalid_argument, "relation subject equals reference");
    }
    const PlacedObject& subject = scene.at(rel.subject);
    scene.at(rel.reference);  // existence check
    const Footprint& fp = subject.instance.cls->footprint;
    const Pose ref = pose_at(poses, rel.reference);
    const ProhibitedVolumeMap map = build_map(scene, poses, rel.subject);

    switch (rel.kind) {
      case RelationKind::inside: {
        const ObjectShape& ref_shape = shape_at(shapes, rel.reference);
        if (!ref_shape.interior_half) {
          raise(ErrorCode::unsatisfiable_relation,
                "'" + rel.reference + "' is not a container");
        }
        const double slack_u = ref_shape.interior_half->x - fp.half_x;
        const double slack_v = ref_shape.interior_half->y - fp.half_y;
        if (slack_u < 0.0 || slack_v < 0.0) {
          raise(ErrorCode::unsatisfiable_relation,
                "'" + rel.subject + "' does not fit inside '" + rel.reference + "'");
        }
        const int level = ref.level + 1;
        bool placed = false;
        for (int attempt = 0; attempt < max_attempts && !placed; ++attempt) {
          const double du = rng.uniform(-slack_u, slack_u);
          const double dv = rng.uniform(-slack_v, slack_v);
          const Vec2 w = to_world(ref, du, dv);
          const Pose candidate{w.x, w.y, ref.theta, level};
          if (!in_workspace(candidate, fp, scene.bounds())) continue;
          if (!map.conflicts(candidate, fp, level).empty()) continue;
          poses[rel.subject] = candidate;
          placed = true;
        }
        if (!placed) {
          raise(ErrorCode::placement_exhausted,
                "no free pose inside '" + rel.reference + "'");
        }
        break;
      }
      case RelationKind::on: {
        const Footprint& support = scene.at(rel.reference).instance.cls->footprint;
        const int level = ref.level + 1;
        bool placed = false;
        for (int attempt = 0; attempt < max_attempts && !placed; ++attempt) {
          const double du = rng.uniform(-support.half_x, support.half_x);
          const double dv = rng.uniform(-support.half_y, support.half_y);
          const Vec2 w = to_world(ref, du, dv);
          const Pose candidate{w.x, w.y, ref.theta, level};
          if (!in_workspace(candidate, fp, scene.bounds())) continue;
          if (!map.conflicts(candidate, fp, level).empty()) continue;
          poses[rel.subject] = candidate;
          placed = true;
        }
        if (!placed) {
          raise(ErrorCode::placement_exhausted, "no free pose on '" + rel.reference + "'");
        }
        break;
      }
      case RelationKind::near: {
        const double half = rel.margin / std::sqrt(2.0);  // square inscribed in the disk
        const Rect region = intersect(
            Rect{ref.x - half, ref.x + half, ref.y - half, ref.y + half},
            scene.bounds().rect());
        if (rel.margin <= 0.0 || empty_rect(region)) {
          raise(ErrorCode::unsatisfiable_relation,
                "empty near-region around '" + rel.reference + "'");
        }
        Pose candidate = map.sample_free_pose(fp, region, rng, max_attempts, ref.level);
        poses[rel.subject] = candidate;
        break;
      }
      default: {  // directional
        Rect region = scene.bounds().rect();
        switch (rel.kind) {
          case RelationKind::left_of: region.max_x = ref.x - rel.margin; break;
          case RelationKind::right_of: region.min_x = ref.x + rel.margin; break;
          case RelationKind::behind: region.min_y = ref.y + rel.margin; break;
          case RelationKind::in_front_of: region.max_y = ref.y - rel.margin; break;
          default: break;
        }
        if (empty_rect(region)) {
          raise(ErrorCode::unsatisfiable_relation,
                std::string(to_string(rel.kind)) + "('" + rel.subject + "', '" +
                    rel.reference + "') has an empty feasible region");
        }
        const Pose current = pose_at(poses, rel.subject);
        Pose candidate = map.sample_free_pose(fp, region, rng, max_attempts, current.level);
        poses[rel.subject] = candidate;
        break;
      }
    }
  }
  return poses;
}

RefineResult refine(const PoseMap& poses, const SceneDescription& description,
                    const ShapeMap& shapes, const WorkspaceBounds& bounds,
                    const RefineConfig& cfg) {
  if (cfg.max_iters < 1 || !(cfg.step_init > 0.0) || !(cfg.step_decay > 0.0) ||
      !(cfg.step_decay < 1.0) || cfg.lambda < 0.0) {
    raise(ErrorCode::invalid_argument, "invalid refine config");
  }
  constexpr int kProposalsPerObject = 8;
  constexpr double kThetaPerMeter = 6.0;  // rad of rotation per meter of step
  constexpr double kMinStep = 1e-6;

  RefineResult result;
  result.poses = poses;

  // Containment subjects get one frame-aligned proposal per sweep: snapping
  // theta to the container escapes the tight-packing minima that small
  // isotropic perturbations cannot cross.
  std::map<std::string, std::string> alignment_frame;
  for (const SpatialRelation& rel : description.relations) {
    if (rel.kind == RelationKind::inside || rel.kind == RelationKind::on) {
      alignment_frame.emplace(rel.subject, rel.reference);
    }
  }

  const auto cost_of = [&](const PoseMap& p) {
    return collision_loss(p, shapes) + cfg.lambda * semantic_loss(p, description, shapes);
  };
  double best_cost = cost_of(result.poses);

  Rng rng(cfg.seed);
  double step = cfg.step_init;
  for (int sweep = 0; sweep < cfg.max_iters && best_cost > 0.0; ++sweep) {
    int accepted_this_sweep = 0;
    for (auto& [id, pose] : result.poses) {
      const Footprint& fp = shape_at(shapes, id).footprint;
      const auto frame = alignment_frame.find(id);
      for (int k = 0; k < kProposalsPerObject; ++k) {
        const double dx = rng.uniform(-step, step);
        const double dy = rng.uniform(-step, step);
        const double dtheta = rng.uniform(-step, step) * kThetaPerMeter;
        Pose candidate{pose.x + dx, pose.y + dy,
                       normalize_angle(pose.theta + dtheta), pose.level};
        if (k + 1 == kProposalsPerObject && frame != alignment_frame.end()) {
          const auto ref = result.poses.find(frame->second);
          if (ref != result.poses.end()) candidate.theta = ref->second.theta;
        }
        if (!in_workspace(candidate, fp, bounds)) continue;
        const Pose saved = pose;
        pose = candidate;
        const double cost = cost_of(result.poses);
        if (cost < best_cost) {
          best_cost = cost;
          result.cost_trace.push_back(cost);
          ++result.accepted_moves;
          ++accepted_this_sweep;
        } else {
          pose = saved;
        }
      }
    }
    if (accepted_this_sweep == 0) {
      step *= cfg.step_decay;
      if (step < kMinStep) break;
    }
  }

  result.collision = collision_loss(result.poses, shapes);
  result.semantic = semantic_loss(result.poses, description, shapes);
  result.cost = result.collision + cfg.lambda * result.semantic;
  result.not_collision_free = result.collision > 0.0;
  return result;
}

Scene apply_poses(const Scene& scene, const PoseMap& poses) {
  Scene out(scene.bounds());
  for (const PlacedObject& o : scene.objects()) {
    out.place(o.instance, pose_at(poses, o.instance.id));
  }
  return out;
}

Raster rasterize(const Scene& scene, double scale, std::string_view skip_id) {
  if (!(scale > 0.0)) raise(ErrorCode::invalid_argument, "raster scale must be positive");
  if (scene.objects().size() > 255) {
    raise(ErrorCode::invalid_argument, "raster labels support at most 255 objects");
  }
  const WorkspaceBounds& ws = scene.bounds();
  Raster raster;
  raster.scale = scale;
  raster.origin_x = ws.min_x;
  raster.origin_y = ws.min_y;
  raster.width = static_cast<int>(std::ceil((ws.max_x - ws.min_x) / scale - 1e-12));
  raster.height = static_cast<int>(std::ceil((ws.max_y - ws.min_y) / scale - 1e-12));
  raster.pixels.assign(static_cast<size_t>(raster.width) * raster.height, 0);
  for (const PlacedObject& o : scene.objects()) raster.object_ids.push_back(o.instance.id);

  std::vector<int> best_level(raster.pixels.size(), -1);
  for (size_t idx = 0; idx < scene.objects().size(); ++idx) {
    const PlacedObject& o = scene.objects()[idx];
    if (!skip_id.empty() && o.instance.id == skip_id) continue;
    // pixel AABB of the oriented box
    double min_x = 1e30, max_x = -1e30, min_y = 1e30, max_y = -1e30;
    for (const Vec2& c : box_corners(o.pose, o.instance.cls->footprint)) {
      min_x = std::min(min_x, c.x); max_x = std::max(max_x, c.x);
      min_y = std::min(min_y, c.y); max_y = std::max(max_y, c.y);
    }
    const int u0 = std::max(0, static_cast<int>(std::floor((min_x - raster.origin_x) / scale)));
    const int u1 = std::min(raster.width - 1,
                            static_cast<int>(std::floor((max_x - raster.origin_x) / scale)));
    const int v0 = std::max(0, static_cast<int>(std::floor((min_y - raster.origin_y) / scale)));
    const int v1 = std::min(raster.height - 1,
                            static_cast<int>(std::floor((max_y - raster.origin_y) / scale)));
    for (int v = v0; v <= v1; ++v) {
      const double py = raster.origin_y + scale * (v + 0.5);
      for (int u = u0; u <= u1; ++u) {
        const double px = raster.origin_x + scale * (u + 0.5);
        if (!point_in_box(px, py, o.pose, o.instance.cls->footprint)) continue;
        const size_t cell = static_cast<size_t>(v) * raster.width + u;
        if (o.pose.level >= best_level[cell]) {  // later placement wins ties
          best_level[cell] = o.pose.level;
          raster.pixels[cell] = static_cast<uint8_t>(idx + 1);
        }
      }
    }
  }
  return raster;
}

std::map<std::string, std::pair<double, double>> match_templates(const Raster& goal,
                                                                 const Raster& init) {
  if (goal.width != init.width || goal.height != init.height ||
      goal.scale != init.scale || goal.origin_x != init.origin_x ||
      goal.origin_y != init.origin_y) {
    raise(ErrorCode::invalid_argument, "goal/init rasters have different geometry");
  }
  for (const std::string& id : goal.object_ids) {
    if (std::find(init.object_ids.begin(), init.object_ids.end(), id) ==
        init.object_ids.end()) {
      raise(ErrorCode::invalid_argument, "goal object '" + id + "' not present in init");
    }
  }
  std::vector<double> sum_u(goal.object_ids.size(), 0.0);
  std::vector<double> sum_v(goal.object_ids.size(), 0.0);
  std::vector<uint64_t> count(goal.object_ids.size(), 0);
  for (int v = 0; v < goal.height; ++v) {
    for (int u = 0; u < goal.width; ++u) {
      const uint8_t label = goal.at(u, v);
      if (label == 0) continue;
      sum_u[label - 1] += u;
      sum_v[label - 1] += v;
      ++count[label - 1];
    }
  }
  std::map<std::string, std::pair<double, double>> centroids;
  for (size_t i = 0; i < goal.object_ids.size(); ++i) {
    if (count[i] == 0) {
      raise(ErrorCode::missing_object,
            "object '" + goal.object_ids[i] + "' has no pixels in the goal raster");
    }
    centroids[goal.object_ids[i]] = {sum_u[i] / count[i], sum_v[i] / count[i]};
  }
  return centroids;
}

std::pair<double, double> project_to_world(double u, double v, const Raster& raster) {
  if (u < 0.0 || u >= raster.width || v < 0.0 || v >= raster.height) {
    raise(ErrorCode::out_of_bounds, "pixel outside raster");
  }
  return {raster.origin_x + raster.scale * (u + 0.5),
          raster.origin_y + raster.scale * (v + 0.5)};
}

std::string encode_pgm(const Raster& raster, const std::string& comment) {
  std::string out = "P5\n";
  if (!comment.empty()) {
    if (comment.find('\n') != std::string::npos) {
      raise(ErrorCode::invalid_argument, "PGM comment must be a single line");
    }
    out += "# " + comment + "\n";
  }
  out += std::to_string(raster.width) + " " + std::to_string(raster.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(raster.pixels.data()), raster.pixels.size());
  return out;
}

void write_pgm(const Raster& raster, const std::filesystem::path& path,
               const std::string& comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::io_error, "cannot open '" + path.string() + "' for writing");
  const std::string data = encode_pgm(raster, comment);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) raise(ErrorCode::io_error, "short write to '" + path.string() + "'");
}

std::string raster_meta_json(const Raster& raster) {
  nlohmann::json meta;
  meta["scale"] = raster.scale;
  meta["origin"] = {raster.origin_x, raster.origin_y};
  meta["width"] = raster.width;
  meta["height"] = raster.height;
  meta["ids"] = raster.object_ids;
  return meta.dump();
}

}  // namespace vcage
