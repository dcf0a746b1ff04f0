#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vcage/assets.hpp"
#include "vcage/sim.hpp"

namespace vcage {

struct Instruction {
  std::string text;
  std::optional<std::string> template_id;
  std::map<std::string, std::string> bindings;  // slot -> extra tag constraint
};

// Requirements a slot places on its asset class.
struct SlotSpec {
  std::string name;
  std::vector<std::string> tags;
  std::vector<Affordance> affordances;
};

// One expansion step; slots are substituted with instance ids at grounding
// time. dx/dy parameterize relative place_at targets.
struct SubtaskSpec {
  Primitive primitive = Primitive::pick;
  std::string object_slot;
  std::string reference_slot;
  double dx = 0.0;
  double dy = 0.0;
  std::string text;  // "{slot}" markers are replaced with instance ids
};

struct RelationSpec {
  RelationKind kind;
  std::string subject_slot;
  std::string reference_slot;
  double margin = 0.0;
};

struct TaskTemplate {
  std::string id;
  std::vector<std::string> aliases;  // exact-match instruction phrases
  std::vector<SlotSpec> slots;
  std::vector<SubtaskSpec> expansion;
  std::vector<RelationSpec> initial_relations;  // optional start-scene layout
};

// Bundled skill-template library; composite tasks are stored pre-flattened.
class TemplateLibrary {
 public:
  static const TemplateLibrary& bundled();

  explicit TemplateLibrary(std::vector<TaskTemplate> templates);

  const std::vector<TaskTemplate>& templates() const { return templates_; }
  const TaskTemplate* find(std::string_view id) const;

  // Exact match of the normalized instruction text against template ids and
  // aliases (lowercased, punctuation collapsed to '_').
  const TaskTemplate* match_instruction(std::string_view text) const;

 private:
  std::vector<TaskTemplate> templates_;
};

std::string normalize_instruction(std::string_view text);

enum class PlanSource { rule_engine, remote };

struct Plan {
  std::vector<Subtask> subtasks;
  PlanSource source = PlanSource::rule_engine;
};

// Slot resolution produced by grounding: which class was retrieved for each
// slot and the instance id the plan references.
struct SlotBinding {
  std::string slot;
  std::vector<std::string> tags;
  std::vector<Affordance> affordances;
  std::string class_name;
  std::string instance_id;
};

struct AssetRequest {
  std::vector<SlotBinding> slots;
};

struct GroundResult {
  Plan plan;
  AssetRequest request;
  SceneDescription initial_description;  // slot-free, instance ids substituted
};

// Rule-engine grounding: resolve the template (template_id or exact keyword
// match), fill each slot with the first retrieve() match, and expand the
// subtask list. Deterministic in (instruction, catalog).
// Throws GroundingError (no template) or BindingError (slot unfillable).
GroundResult ground(const Instruction& instruction, const AssetCatalog& catalog);

// Static plan checks against a scene: referenced objects exist and carry the
// required affordances, pick/place alternation is well-formed, absolute
// targets are reachable. Returns the plan unchanged; throws ValidationError
// naming the offending subtask index.
Plan validate_plan(const Plan& plan, const Scene& scene);

// Compact text listing object ids, classes, and poses rounded to 1 mm; sent
// to remote planners.
std::string scene_summary(const Scene& scene);

struct WireOptions {
  double timeout_sec = 30.0;
  int retries = 2;  // attempts = retries + 1
};

// POST /plan {instruction, scene} -> {schema:"v1", subtasks:[...]}.
// Non-200 and transport failures raise TransportError after the retry
// budget; malformed bodies raise ProtocolError.
Plan remote_plan(const std::string& endpoint, const Instruction& instruction,
                 const std::string& scene_summary, const WireOptions& options = {});

// Subtask <-> wire/dataset JSON (shared by the planner protocol and the
// dataset schema).
std::string subtask_to_json_text(const Subtask& subtask);

}  // namespace vcage
