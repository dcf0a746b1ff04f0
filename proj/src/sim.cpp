#include "vcage/sim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace vcage {

std::string_view to_string(Primitive p) {
  switch (p) {
    case Primitive::pick: return "pick";
    case Primitive::place_at: return "place_at";
    case Primitive::place_in: return "place_in";
    case Primitive::stack_on: return "stack_on";
    case Primitive::toggle: return "toggle";
    case Primitive::press: return "press";
  }
  return "unknown";
}

Primitive primitive_from_string(std::string_view s) {
  if (s == "pick") return Primitive::pick;
  if (s == "place_at") return Primitive::place_at;
  if (s == "place_in") return Primitive::place_in;
  if (s == "stack_on") return Primitive::stack_on;
  if (s == "toggle") return Primitive::toggle;
  if (s == "press") return Primitive::press;
  raise(ErrorCode::parse_error, "unknown primitive '" + std::string(s) + "'");
}

std::string_view to_string(SimHardError e) {
  switch (e) {
    case SimHardError::hand_occupied: return "hand_occupied";
    case SimHardError::not_holding: return "not_holding";
    case SimHardError::object_missing: return "object_missing";
    case SimHardError::target_missing: return "target_missing";
    case SimHardError::unsupported_affordance: return "unsupported_affordance";
    case SimHardError::unreachable: return "unreachable";
    case SimHardError::target_occupied: return "target_occupied";
    case SimHardError::does_not_fit: return "does_not_fit";
  }
  return "unknown";
}

SimState make_sim_state(Scene scene) {
  SimState state;
  state.scene = std::move(scene);
  for (const PlacedObject& o : state.scene.objects()) {
    if (o.instance.cls->has(Affordance::toggleable)) state.switches[o.instance.id] = false;
    if (o.instance.cls->has(Affordance::pressable)) state.pressed[o.instance.id] = 0;
  }
  return state;
}

Pose resolve_place_target(const SimState& state, const Subtask& subtask) {
  if (subtask.target) return *subtask.target;
  if (subtask.relative) {
    const Pose& ref = state.scene.at(subtask.relative->reference).pose;
    return Pose{ref.x + subtask.relative->dx, ref.y + subtask.relative->dy,
                normalize_angle(ref.theta + subtask.relative->dtheta), ref.level};
  }
  raise(ErrorCode::invalid_argument, "place_at subtask has no target");
}

namespace {

constexpr double kEps = 1e-9;

// Deterministic ring search around `center`: radii inner..outer in kRings
// steps, kAngles candidates per ring, ordered by radius then angle. Returns
// the first candidate satisfying `ok`.
template <typename Pred>
std::optional<Pose> ring_search(const Pose& center, double inner, double outer,
                                const Pred& ok) {
  constexpr int kRings = 16;
  constexpr int kAngles = 16;
  for (int j = 1; j <= kRings; ++j) {
    const double r = inner + (outer - inner) * j / kRings;
    for (int a = 0; a < kAngles; ++a) {
      const double phi = 2.0 * kPi * a / kAngles;
      const Pose candidate{center.x + r * std::cos(phi), center.y + r * std::sin(phi),
                           center.theta, center.level};
      if (ok(candidate)) return candidate;
    }
  }
  return std::nullopt;
}

// Grid of offsets in the reference frame keeping (du, dv) inside the slack
// box, ordered by distance from the commanded center.
template <typename Pred>
std::optional<Pose> frame_search(const Pose& frame, double slack_u, double slack_v,
                                 int level, const Pred& ok) {
  constexpr int kSteps = 8;  // per half-axis
  struct Candidate {
    double du, dv, r2;
  };
  std::vector<Candidate> candidates;
  candidates.reserve((2 * kSteps + 1) * (2 * kSteps + 1));
  for (int i = -kSteps; i <= kSteps; ++i) {
    for (int j = -kSteps; j <= kSteps; ++j) {
      const double du = slack_u * i / kSteps;
      const double dv = slack_v * j / kSteps;
      candidates.push_back({du, dv, du * du + dv * dv});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.r2 < b.r2; });
  const double c = std::cos(frame.theta), s = std::sin(frame.theta);
  for (const Candidate& cand : candidates) {
    const Pose pose{frame.x + c * cand.du - s * cand.dv,
                    frame.y + s * cand.du + c * cand.dv, frame.theta, level};
    if (ok(pose)) return pose;
  }
  return std::nullopt;
}

}  // namespace

StepOutcome execute_primitive(const SimState& state, const Subtask& subtask,
                              const FailureModel& fm, const EpisodeStream& stream,
                              const SimParams& params) {
  const uint64_t step = static_cast<uint64_t>(state.tick);
  const uint64_t base = stream.seed() ^ (fm.seed_stream * 0x9e3779b97f4a7c15ULL);
  const auto draw = [&](uint64_t tag) { return Rng(derive_seed(base, step, tag)); };
  const auto hard = [&](SimHardError e) { return StepOutcome{state, e, false}; };

  switch (subtask.primitive) {
    case Primitive::pick: {
      if (state.held) return hard(SimHardError::hand_occupied);
      const PlacedObject* obj = state.scene.find(subtask.object);
      if (obj == nullptr) return hard(SimHardError::object_missing);
      if (!obj->instance.cls->has(Affordance::graspable)) {
        return hard(SimHardError::unsupported_affordance);
      }
      SimState ns = state;
      ns.scene.lift(subtask.object);
      ns.held = subtask.object;
      ns.last_effect = {};
      ++ns.tick;
      return StepOutcome{std::move(ns), std::nullopt, false};
    }

    case Primitive::place_at:
    case Primitive::place_in:
    case Primitive::stack_on: {
      if (!state.held || *state.held != subtask.object) {
        return hard(SimHardError::not_holding);
      }
      const PlacedObject& obj = state.scene.at(subtask.object);
      const Footprint& fp = obj.instance.cls->footprint;

      Pose commanded;
      const PlacedObject* ref = nullptr;
      if (subtask.primitive == Primitive::place_at) {
        if (!subtask.target && !subtask.relative) return hard(SimHardError::target_missing);
        if (subtask.relative && state.scene.find(subtask.relative->reference) == nullptr) {
          return hard(SimHardError::target_missing);
        }
        commanded = resolve_place_target(state, subtask);
      } else {
        ref = state.scene.find(subtask.reference);
        if (ref == nullptr) return hard(SimHardError::target_missing);
        if (subtask.primitive == Primitive::place_in) {
          if (!ref->instance.cls->has(Affordance::container)) {
            return hard(SimHardError::unsupported_affordance);
          }
          const Vec2& interior = *ref->instance.cls->interior_half;
          if (fp.half_x > interior.x || fp.half_y > interior.y) {
            return hard(SimHardError::does_not_fit);
          }
        } else {
          if (!ref->instance.cls->has(Affordance::stackable) &&
              !ref->instance.cls->has(Affordance::surface)) {
            return hard(SimHardError::unsupported_affordance);
          }
        }
        commanded = Pose{ref->pose.x, ref->pose.y, ref->pose.theta, ref->pose.level + 1};
      }
      if (!in_workspace(commanded, fp, state.scene.bounds())) {
        return hard(SimHardError::unreachable);
      }

      const bool slipped = draw(stream_tag::slip_decision).uniform() < fm.slip_prob;
      const ProhibitedVolumeMap& map = state.scene.map();
      const auto free_at = [&](const Pose& p) {
        return in_workspace(p, fp, state.scene.bounds()) &&
               map.conflicts(p, fp, p.level).empty();
      };

      SimState ns = state;
      if (!slipped) {
        std::optional<Pose> final_pose;
        if (free_at(commanded)) {
          final_pose = commanded;
        } else if (subtask.primitive == Primitive::place_at) {
          // stay within the success radius of the commanded target
          final_pose = ring_search(commanded, 0.0, 0.95 * params.delta_pos, free_at);
        } else if (subtask.primitive == Primitive::place_in) {
          const Vec2& interior = *ref->instance.cls->interior_half;
          final_pose = frame_search(commanded, interior.x - fp.half_x,
                                    interior.y - fp.half_y, commanded.level, free_at);
        } else {
          const Footprint& support = ref->instance.cls->footprint;
          final_pose = frame_search(commanded, support.half_x, support.half_y,
                                    commanded.level, free_at);
        }
        if (!final_pose) return hard(SimHardError::target_occupied);
        ns.scene.set_down(subtask.object, *final_pose);
        ns.held.reset();
        ns.last_effect = {};
        ++ns.tick;
        return StepOutcome{std::move(ns), std::nullopt, false};
      }

      // Injected slip: the motion completes without error but the semantic
      // goal is missed. place_at keeps its level and lands strictly outside
      // the success radius; place_in/stack_on drop the object to the
      // reference's level, so the level predicate fails regardless of where
      // the landing resolves.
      Rng offset_rng = draw(stream_tag::slip_offset);
      Pose landing = commanded;
      double sigma;
      std::function<bool(const Pose&)> valid;
      if (subtask.primitive == Primitive::place_at) {
        sigma = std::max(fm.slip_offset_sigma, 0.5 * params.delta_pos);
        bool found = false;
        for (int t = 0; t < 64 && !found; ++t) {
          const double dx = offset_rng.normal(sigma);
          const double dy = offset_rng.normal(sigma);
          if (std::hypot(dx, dy) > params.delta_pos * (1.0 + 1e-6)) {
            landing.x = commanded.x + dx;
            landing.y = commanded.y + dy;
            found = true;
          }
        }
        if (!found) {  // push just past the success radius
          const double phi = offset_rng.uniform(0.0, 2.0 * kPi);
          landing.x = commanded.x + 1.01 * params.delta_pos * std::cos(phi);
          landing.y = commanded.y + 1.01 * params.delta_pos * std::sin(phi);
        }
        valid = [&, commanded](const Pose& p) {
          return free_at(p) &&
                 std::hypot(p.x - commanded.x, p.y - commanded.y) > params.delta_pos;
        };
      } else {
        sigma = std::max(fm.slip_offset_sigma, 0.01);
        landing.x = commanded.x + offset_rng.normal(sigma);
        landing.y = commanded.y + offset_rng.normal(sigma);
        landing.level = ref->pose.level;  // fell off / beside the reference
        valid = [&](const Pose& p) { return free_at(p); };
      }

      std::optional<Pose> final_pose;
      if (valid(landing)) {
        final_pose = landing;
      } else {
        // Nudge to the nearest coherent free pose near the landing. For the
        // level-drop cases the search must clear the reference's own box.
        double outer = 3.0 * sigma;
        if (subtask.primitive != Primitive::place_at) {
          const Footprint& rfp = ref->instance.cls->footprint;
          outer = std::max(outer, std::hypot(rfp.half_x + fp.half_x, rfp.half_y + fp.half_y) +
                                      3.0 * sigma);
        }
        final_pose = ring_search(landing, 0.0, outer, valid);
      }

      if (final_pose) {
        ns.scene.set_down(subtask.object, *final_pose);
      } else {
        // Unresolvable drop: overlap permitted, scene flagged degenerate and
        // the episode is excluded at finalization.
        ns.scene.set_down(subtask.object, landing, /*checked=*/false);
        ns.degenerate = true;
      }
      ns.held.reset();
      ns.last_effect = {};
      ++ns.tick;
      return StepOutcome{std::move(ns), std::nullopt, true};
    }

    case Primitive::toggle: {
      const PlacedObject* obj = state.scene.find(subtask.object);
      if (obj == nullptr) return hard(SimHardError::object_missing);
      if (!obj->instance.cls->has(Affordance::toggleable)) {
        return hard(SimHardError::unsupported_affordance);
      }
      const bool miss = draw(stream_tag::toggle_miss).uniform() < fm.toggle_miss_prob;
      SimState ns = state;
      ns.last_effect = {};
      if (!miss) {
        auto it = ns.switches.find(subtask.object);
        ns.switches[subtask.object] = it == ns.switches.end() ? true : !it->second;
        ns.last_effect.toggled = subtask.object;
      }
      ++ns.tick;
      return StepOutcome{std::move(ns), std::nullopt, miss};
    }

    case Primitive::press: {
      const PlacedObject* obj = state.scene.find(subtask.object);
      if (obj == nullptr) return hard(SimHardError::object_missing);
      if (!obj->instance.cls->has(Affordance::pressable)) {
        return hard(SimHardError::unsupported_affordance);
      }
      const bool miss = draw(stream_tag::press_miss).uniform() < fm.press_miss_prob;
      SimState ns = state;
      ns.last_effect = {};
      if (!miss) {
        ++ns.pressed[subtask.object];
        ns.last_effect.pressed = subtask.object;
      }
      ++ns.tick;
      return StepOutcome{std::move(ns), std::nullopt, miss};
    }
  }
  raise(ErrorCode::invalid_argument, "unknown primitive");
}

bool check_postcondition(const SimState& state, const Subtask& subtask,
                         const SimParams& params) {
  switch (subtask.primitive) {
    case Primitive::pick:
      return state.held && *state.held == subtask.object;

    case Primitive::place_at: {
      if (state.held && *state.held == subtask.object) return false;  // never put down
      const PlacedObject* obj = state.scene.find(subtask.object);
      if (obj == nullptr) return false;
      Pose target;
      try {
        target = resolve_place_target(state, subtask);
      } catch (const Error&) {
        return false;
      }
      if (obj->pose.level != target.level) return false;
      return std::hypot(obj->pose.x - target.x, obj->pose.y - target.y) <=
             params.delta_pos;
    }

    case Primitive::place_in: {
      if (state.held && *state.held == subtask.object) return false;
      const PlacedObject* obj = state.scene.find(subtask.object);
      const PlacedObject* ref = state.scene.find(subtask.reference);
      if (obj == nullptr || ref == nullptr || !ref->instance.cls->interior_half) {
        return false;
      }
      if (obj->pose.level != ref->pose.level + 1) return false;
      return containment_violation(obj->pose, obj->instance.cls->footprint, ref->pose,
                                   *ref->instance.cls->interior_half) <= kEps;
    }

    case Primitive::stack_on: {
      if (state.held && *state.held == subtask.object) return false;
      const PlacedObject* obj = state.scene.find(subtask.object);
      const PlacedObject* ref = state.scene.find(subtask.reference);
      if (obj == nullptr || ref == nullptr) return false;
      if (obj->pose.level != ref->pose.level + 1) return false;
      return point_in_box(obj->pose.x, obj->pose.y, ref->pose,
                          ref->instance.cls->footprint, kEps);
    }

    case Primitive::toggle:
      return state.last_effect.toggled == subtask.object;

    case Primitive::press:
      return state.last_effect.pressed == subtask.object;
  }
  return false;
}

Snapshot take_snapshot(const SimState& state, int subtask_index, bool with_raster,
                       double scale) {
  Snapshot snap;
  snap.state = state;
  snap.subtask_index = subtask_index;
  if (with_raster) snap.raster = rasterize(state, scale);
  return snap;
}

Raster rasterize(const SimState& state, double scale) {
  return rasterize(state.scene, scale, state.held ? *state.held : std::string_view{});
}

}  // namespace vcage
