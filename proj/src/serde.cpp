#include "vcage/serde.hpp"

#include <memory>

namespace vcage {

using nlohmann::json;

nlohmann::json pose_to_json(const Pose& pose) {
  return json{{"x", pose.x}, {"y", pose.y}, {"theta", pose.theta}, {"level", pose.level}};
}

Pose pose_from_json(const json& j, ErrorCode on_error) {
  try {
    Pose pose;
    pose.x = j.at("x").get<double>();
    pose.y = j.at("y").get<double>();
    pose.theta = j.at("theta").get<double>();
    pose.level = j.value("level", 0);
    if (pose.level < 0) raise(on_error, "pose level must be >= 0");
    return pose;
  } catch (const json::exception& e) {
    raise(on_error, std::string("bad pose: ") + e.what());
  }
}

nlohmann::json subtask_to_json(const Subtask& subtask) {
  json args;
  args["object"] = subtask.object;
  switch (subtask.primitive) {
    case Primitive::place_at:
      if (subtask.target) {
        args["target"] = pose_to_json(*subtask.target);
      } else if (subtask.relative) {
        args["relative_to"] = subtask.relative->reference;
        args["dx"] = subtask.relative->dx;
        args["dy"] = subtask.relative->dy;
        args["dtheta"] = subtask.relative->dtheta;
      }
      break;
    case Primitive::place_in:
      args["container"] = subtask.reference;
      break;
    case Primitive::stack_on:
      args["support"] = subtask.reference;
      break;
    default:
      break;
  }
  return json{{"primitive", std::string(to_string(subtask.primitive))},
              {"args", args},
              {"text", subtask.text}};
}

Subtask subtask_from_json(const json& j, ErrorCode on_error) {
  try {
    Subtask t;
    t.primitive = primitive_from_string(j.at("primitive").get<std::string>());
    const json& args = j.at("args");
    t.object = args.at("object").get<std::string>();
    t.text = j.value("text", "");
    switch (t.primitive) {
      case Primitive::place_at:
        if (args.contains("target")) {
          t.target = pose_from_json(args.at("target"), on_error);
        } else if (args.contains("relative_to")) {
          RelativeTarget rel;
          rel.reference = args.at("relative_to").get<std::string>();
          rel.dx = args.value("dx", 0.0);
          rel.dy = args.value("dy", 0.0);
          rel.dtheta = args.value("dtheta", 0.0);
          t.relative = rel;
        } else {
          raise(on_error, "place_at needs 'target' or 'relative_to'");
        }
        break;
      case Primitive::place_in:
        t.reference = args.at("container").get<std::string>();
        break;
      case Primitive::stack_on:
        t.reference = args.at("support").get<std::string>();
        break;
      default:
        break;
    }
    return t;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    raise(on_error, std::string("bad subtask: ") + e.what());
  }
}

nlohmann::json state_digest(const SimState& state) {
  json objects = json::object();
  for (const PlacedObject& o : state.scene.objects()) {
    objects[o.instance.id] = pose_to_json(o.pose);
  }
  json digest;
  digest["held"] = state.held ? json(*state.held) : json(nullptr);
  digest["tick"] = state.tick;
  digest["degenerate"] = state.degenerate;
  digest["last_toggled"] =
      state.last_effect.toggled ? json(*state.last_effect.toggled) : json(nullptr);
  digest["last_pressed"] =
      state.last_effect.pressed ? json(*state.last_effect.pressed) : json(nullptr);
  digest["objects"] = objects;
  digest["switches"] = state.switches;
  digest["pressed"] = state.pressed;
  return digest;
}

nlohmann::json wire_state(const SimState& state) {
  json shapes = json::object();
  for (const PlacedObject& o : state.scene.objects()) {
    const AssetClass& cls = *o.instance.cls;
    json s;
    s["half_x"] = cls.footprint.half_x;
    s["half_y"] = cls.footprint.half_y;
    s["height"] = cls.footprint.height;
    s["interior"] = cls.interior_half
                        ? json::array({cls.interior_half->x, cls.interior_half->y})
                        : json(nullptr);
    json affs = json::array();
    for (Affordance a : {Affordance::graspable, Affordance::container, Affordance::surface,
                         Affordance::toggleable, Affordance::pressable, Affordance::stackable}) {
      if (cls.has(a)) affs.push_back(std::string(to_string(a)));
    }
    s["affordances"] = affs;
    shapes[o.instance.id] = s;
  }
  const WorkspaceBounds& ws = state.scene.bounds();
  json out;
  out["digest"] = state_digest(state);
  out["shapes"] = shapes;
  out["workspace"] = {{"min_x", ws.min_x}, {"max_x", ws.max_x}, {"min_y", ws.min_y},
                      {"max_y", ws.max_y}, {"reach_x", ws.reach_x},
                      {"reach_y", ws.reach_y}, {"reach_radius", ws.reach_radius}};
  return out;
}

SimState state_from_wire(const json& j) {
  constexpr ErrorCode err = ErrorCode::protocol_error;
  try {
    const json& wsj = j.at("workspace");
    WorkspaceBounds ws;
    ws.min_x = wsj.at("min_x").get<double>();
    ws.max_x = wsj.at("max_x").get<double>();
    ws.min_y = wsj.at("min_y").get<double>();
    ws.max_y = wsj.at("max_y").get<double>();
    ws.reach_x = wsj.at("reach_x").get<double>();
    ws.reach_y = wsj.at("reach_y").get<double>();
    ws.reach_radius = wsj.at("reach_radius").get<double>();

    const json& digest = j.at("digest");
    const json& shapes = j.at("shapes");

    Scene scene(ws);
    for (const auto& [id, pj] : digest.at("objects").items()) {
      const json& s = shapes.at(id);
      auto cls = std::make_shared<AssetClass>();
      cls->name = id;
      cls->footprint = Footprint{s.at("half_x").get<double>(), s.at("half_y").get<double>(),
                                 s.at("height").get<double>()};
      for (const json& a : s.at("affordances")) {
        cls->affordances |=
            static_cast<uint8_t>(affordance_from_string(a.get<std::string>()));
      }
      if (!s.at("interior").is_null()) {
        cls->interior_half =
            Vec2{s.at("interior")[0].get<double>(), s.at("interior")[1].get<double>()};
      }
      scene.place_unchecked(ObjectInstance{id, std::move(cls)}, pose_from_json(pj, err));
    }

    SimState state;
    state.scene = std::move(scene);
    if (!digest.at("held").is_null()) {
      state.held = digest.at("held").get<std::string>();
      state.scene.lift(*state.held);
    }
    state.tick = digest.at("tick").get<int>();
    state.degenerate = digest.at("degenerate").get<bool>();
    if (!digest.at("last_toggled").is_null()) {
      state.last_effect.toggled = digest.at("last_toggled").get<std::string>();
    }
    if (!digest.at("last_pressed").is_null()) {
      state.last_effect.pressed = digest.at("last_pressed").get<std::string>();
    }
    for (const auto& [id, v] : digest.at("switches").items()) {
      state.switches[id] = v.get<bool>();
    }
    for (const auto& [id, v] : digest.at("pressed").items()) {
      state.pressed[id] = v.get<int>();
    }
    return state;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    raise(err, std::string("bad wire state: ") + e.what());
  }
}

}  // namespace vcage
