#include "vcage/grounding.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "vcage/serde.hpp"

namespace vcage {

std::string normalize_instruction(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!out.empty() && out.back() != '_') {
      out.push_back('_');
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

TemplateLibrary::TemplateLibrary(std::vector<TaskTemplate> templates)
    : templates_(std::move(templates)) {
  std::vector<std::string> seen;
  for (const TaskTemplate& tpl : templates_) {
    if (std::find(seen.begin(), seen.end(), tpl.id) != seen.end()) {
      raise(ErrorCode::invalid_argument, "duplicate template id '" + tpl.id + "'");
    }
    seen.push_back(tpl.id);
    const auto declared = [&](const std::string& slot) {
      return std::any_of(tpl.slots.begin(), tpl.slots.end(),
                         [&](const SlotSpec& s) { return s.name == slot; });
    };
    for (const SubtaskSpec& spec : tpl.expansion) {
      if (!declared(spec.object_slot) ||
          (!spec.reference_slot.empty() && !declared(spec.reference_slot))) {
        raise(ErrorCode::invalid_argument,
              "template '" + tpl.id + "' expansion references an undeclared slot");
      }
    }
    for (const RelationSpec& rs : tpl.initial_relations) {
      if (!declared(rs.subject_slot) || !declared(rs.reference_slot)) {
        raise(ErrorCode::invalid_argument,
              "template '" + tpl.id + "' relations reference an undeclared slot");
      }
    }
    if (tpl.expansion.empty()) {
      raise(ErrorCode::invalid_argument, "template '" + tpl.id + "' has no expansion");
    }
  }
}

const TaskTemplate* TemplateLibrary::find(std::string_view id) const {
  for (const TaskTemplate& tpl : templates_) {
    if (tpl.id == id) return &tpl;
  }
  return nullptr;
}

const TaskTemplate* TemplateLibrary::match_instruction(std::string_view text) const {
  const std::string key = normalize_instruction(text);
  for (const TaskTemplate& tpl : templates_) {
    if (normalize_instruction(tpl.id) == key) return &tpl;
    for (const std::string& alias : tpl.aliases) {
      if (normalize_instruction(alias) == key) return &tpl;
    }
  }
  return nullptr;
}

namespace {

std::string substitute_slots(std::string text,
                             const std::map<std::string, std::string>& slot_to_id) {
  for (const auto& [slot, id] : slot_to_id) {
    const std::string marker = "{" + slot + "}";
    size_t pos = 0;
    while ((pos = text.find(marker, pos)) != std::string::npos) {
      text.replace(pos, marker.size(), id);
      pos += id.size();
    }
  }
  return text;
}

}  // namespace

GroundResult ground(const Instruction& instruction, const AssetCatalog& catalog) {
  const TemplateLibrary& lib = TemplateLibrary::bundled();
  const TaskTemplate* tpl = nullptr;
  if (instruction.template_id) {
    tpl = lib.find(*instruction.template_id);
    if (tpl == nullptr) {
      raise(ErrorCode::grounding_error,
            "unknown template '" + *instruction.template_id + "'");
    }
  } else {
    tpl = lib.match_instruction(instruction.text);
    if (tpl == nullptr) {
      raise(ErrorCode::grounding_error,
            "no template matches instruction '" + instruction.text + "'");
    }
  }

  for (const auto& [slot_name, tag] : instruction.bindings) {
    const bool declared =
        std::any_of(tpl->slots.begin(), tpl->slots.end(),
                    [&, name = slot_name](const SlotSpec& s) { return s.name == name; });
    if (!declared) {
      raise(ErrorCode::binding_error,
            "binding '" + slot_name + "' does not name a slot of '" + tpl->id + "'");
    }
  }

  GroundResult result;
  std::map<std::string, std::string> slot_to_id;
  std::map<std::string, int> class_counters;
  for (const SlotSpec& slot : tpl->slots) {
    std::vector<std::string> tags = slot.tags;
    if (const auto it = instruction.bindings.find(slot.name);
        it != instruction.bindings.end()) {
      tags = {it->second};  // binding overrides the template's tag requirement
    }
    std::vector<const AssetClass*> matches;
    try {
      matches = retrieve(catalog, tags, slot.affordances, 1, 1);
    } catch (const Error& e) {
      raise(ErrorCode::binding_error,
            "slot '" + slot.name + "' of '" + tpl->id + "' unfillable: " + e.what());
    }
    const AssetClass* cls = matches.front();
    const int k = class_counters[cls->name]++;
    std::string id = cls->name + "_" + std::to_string(k);
    slot_to_id[slot.name] = id;
    result.request.slots.push_back(
        SlotBinding{slot.name, tags, slot.affordances, cls->name, std::move(id)});
  }

  const auto id_of = [&](const std::string& slot) -> const std::string& {
    const auto it = slot_to_id.find(slot);
    if (it == slot_to_id.end()) {
      raise(ErrorCode::binding_error,
            "template '" + tpl->id + "' references undeclared slot '" + slot + "'");
    }
    return it->second;
  };

  for (const SubtaskSpec& spec : tpl->expansion) {
    Subtask t;
    t.primitive = spec.primitive;
    t.object = id_of(spec.object_slot);
    if (!spec.reference_slot.empty()) {
      if (spec.primitive == Primitive::place_at) {
        t.relative = RelativeTarget{id_of(spec.reference_slot), spec.dx, spec.dy, 0.0};
      } else {
        t.reference = id_of(spec.reference_slot);
      }
    }
    t.text = substitute_slots(spec.text, slot_to_id);
    result.plan.subtasks.push_back(std::move(t));
  }
  result.plan.source = PlanSource::rule_engine;

  for (const RelationSpec& rs : tpl->initial_relations) {
    result.initial_description.relations.push_back(SpatialRelation{
        rs.kind, id_of(rs.subject_slot), id_of(rs.reference_slot), rs.margin});
  }
  result.initial_description.prose = instruction.text.empty() ? tpl->id : instruction.text;
  return result;
}

Plan validate_plan(const Plan& plan, const Scene& scene) {
  if (plan.subtasks.empty()) {
    raise(ErrorCode::validation_error, "plan has no subtasks");
  }
  std::optional<std::string> held;
  for (size_t i = 0; i < plan.subtasks.size(); ++i) {
    const Subtask& t = plan.subtasks[i];
    const auto fail = [&](const std::string& msg) {
      raise(ErrorCode::validation_error, "subtask " + std::to_string(i) + ": " + msg);
    };
    const auto require_object = [&](const std::string& id,
                                    Affordance affordance) -> const PlacedObject& {
      const PlacedObject* obj = scene.find(id);
      if (obj == nullptr) fail("unknown object '" + id + "'");
      if (!obj->instance.cls->has(affordance)) {
        fail("object '" + id + "' lacks affordance '" +
             std::string(to_string(affordance)) + "'");
      }
      return *obj;
    };

    switch (t.primitive) {
      case Primitive::pick:
        require_object(t.object, Affordance::graspable);
        if (held) fail("hand occupied by '" + *held + "'");
        held = t.object;
        break;
      case Primitive::place_at: {
        if (!held || *held != t.object) fail("not holding '" + t.object + "'");
        if (static_cast<bool>(t.target) == static_cast<bool>(t.relative)) {
          fail("place_at needs exactly one of target/relative");
        }
        const PlacedObject& obj = scene.at(t.object);
        if (t.target && !in_workspace(*t.target, obj.instance.cls->footprint,
                                      scene.bounds())) {
          fail("target outside workspace");
        }
        if (t.relative) {
          if (t.relative->reference == t.object) fail("relative target references itself");
          if (scene.find(t.relative->reference) == nullptr) {
            fail("unknown reference '" + t.relative->reference + "'");
          }
        }
        held.reset();
        break;
      }
      case Primitive::place_in: {
        if (!held || *held != t.object) fail("not holding '" + t.object + "'");
        const PlacedObject& ref = require_object(t.reference, Affordance::container);
        const Footprint& fp = scene.at(t.object).instance.cls->footprint;
        const Vec2& interior = *ref.instance.cls->interior_half;
        if (fp.half_x > interior.x || fp.half_y > interior.y) {
          fail("'" + t.object + "' does not fit inside '" + t.reference + "'");
        }
        held.reset();
        break;
      }
      case Primitive::stack_on: {
        if (!held || *held != t.object) fail("not holding '" + t.object + "'");
        const PlacedObject* ref = scene.find(t.reference);
        if (ref == nullptr) fail("unknown object '" + t.reference + "'");
        if (!ref->instance.cls->has(Affordance::stackable) &&
            !ref->instance.cls->has(Affordance::surface)) {
          fail("object '" + t.reference + "' cannot support a stack");
        }
        held.reset();
        break;
      }
      case Primitive::toggle:
        require_object(t.object, Affordance::toggleable);
        break;
      case Primitive::press:
        require_object(t.object, Affordance::pressable);
        break;
    }
  }
  return plan;
}

std::string scene_summary(const Scene& scene) {
  std::string out;
  char line[160];
  for (const PlacedObject& o : scene.objects()) {
    std::snprintf(line, sizeof(line), "%s %s x=%.3f y=%.3f theta=%.3f level=%d\n",
                  o.instance.id.c_str(), o.instance.cls->name.c_str(), o.pose.x,
                  o.pose.y, o.pose.theta, o.pose.level);
    out += line;
  }
  return out;
}

std::string subtask_to_json_text(const Subtask& subtask) {
  return subtask_to_json(subtask).dump();
}

}  // namespace vcage
