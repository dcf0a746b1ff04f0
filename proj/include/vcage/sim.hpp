#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "vcage/scene.hpp"

namespace vcage {

enum class Primitive { pick, place_at, place_in, stack_on, toggle, press };

std::string_view to_string(Primitive p);
Primitive primitive_from_string(std::string_view s);

// Target expressed relative to another object's pose at execution time.
struct RelativeTarget {
  std::string reference;
  double dx = 0.0;
  double dy = 0.0;
  double dtheta = 0.0;

  bool operator==(const RelativeTarget&) const = default;
};

// Parameterized skill primitive. `object` is the manipulated object;
// `reference` names the container (place_in) or support (stack_on); place_at
// takes exactly one of `target` (absolute) or `relative`.
struct Subtask {
  Primitive primitive = Primitive::pick;
  std::string object;
  std::string reference;
  std::optional<Pose> target;
  std::optional<RelativeTarget> relative;
  std::string text;

  bool operator==(const Subtask&) const = default;
};

// Stochastic silent-failure injection. Slips apply to the place family
// (place_at, place_in, stack_on); toggle/press misses leave the discrete
// state unchanged. All draws come from per-(step, purpose) substreams, so an
// injected failure never raises a hard error and never shifts other draws.
struct FailureModel {
  double slip_prob = 0.0;
  double slip_offset_sigma = 0.02;  // meters
  double toggle_miss_prob = 0.0;
  double press_miss_prob = 0.0;
  uint64_t seed_stream = 0;  // salt added to the episode seed
};

struct SimParams {
  double delta_pos = 0.02;  // place_at success radius, meters
  double raster_scale = 0.005;
};

// What the immediately preceding step changed; lets postconditions for
// toggle/press compare against the pre-step state.
struct LastEffect {
  std::optional<std::string> toggled;
  std::optional<std::string> pressed;
};

struct SimState {
  Scene scene;
  std::optional<std::string> held;
  std::map<std::string, bool> switches;    // toggleable objects, start off
  std::map<std::string, int> pressed;      // pressable objects, press counts
  LastEffect last_effect;
  int tick = 0;
  bool degenerate = false;  // unresolved slip drop; episode discarded at finalization
};

// Seeds the switch/press maps from the scene's affordances.
SimState make_sim_state(Scene scene);

enum class SimHardError {
  hand_occupied,
  not_holding,
  object_missing,
  target_missing,
  unsupported_affordance,
  unreachable,
  target_occupied,
  does_not_fit,
};

std::string_view to_string(SimHardError e);

struct StepOutcome {
  SimState new_state;
  std::optional<SimHardError> hard_error;  // set => new_state equals the input state
  bool injected_failure = false;           // ground-truth annotation, oracle-only
};

// Per-episode counter-based stream; substreams are derived from
// (episode_seed, step_index, purpose-tag).
class EpisodeStream {
 public:
  explicit EpisodeStream(uint64_t episode_seed) : seed_(episode_seed) {}
  uint64_t seed() const { return seed_; }
  Rng fork(uint64_t step_index, uint64_t tag) const {
    return Rng(derive_seed(seed_, step_index, tag));
  }

 private:
  uint64_t seed_;
};

// Resolve a place_at target (absolute or relative) against the current state.
Pose resolve_place_target(const SimState& state, const Subtask& subtask);

// Execute one primitive kinematically. Hard errors cover programmatic
// impossibilities only (missing object, occupied hand, target outside the
// workspace); injected failures complete without error but leave the
// semantic postcondition unsatisfied.
StepOutcome execute_primitive(const SimState& state, const Subtask& subtask,
                              const FailureModel& fm, const EpisodeStream& stream,
                              const SimParams& params = {});

// Ground-truth predicate for the step that just executed on `state`.
bool check_postcondition(const SimState& state, const Subtask& subtask,
                         const SimParams& params = {});

struct Snapshot {
  SimState state;
  std::optional<Raster> raster;
  int subtask_index = 0;
};

Snapshot take_snapshot(const SimState& state, int subtask_index,
                       bool with_raster = false, double scale = 0.005);

// Top-down label raster of the state; a held object casts no footprint.
Raster rasterize(const SimState& state, double scale);

}  // namespace vcage
