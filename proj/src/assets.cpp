#include "vcage/assets.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace vcage {

using nlohmann::json;

std::string_view to_string(Affordance a) {
  switch (a) {
    case Affordance::graspable: return "graspable";
    case Affordance::container: return "container";
    case Affordance::surface: return "surface";
    case Affordance::toggleable: return "toggleable";
    case Affordance::pressable: return "pressable";
    case Affordance::stackable: return "stackable";
  }
  return "unknown";
}

Affordance affordance_from_string(std::string_view s) {
  if (s == "graspable") return Affordance::graspable;
  if (s == "container") return Affordance::container;
  if (s == "surface") return Affordance::surface;
  if (s == "toggleable") return Affordance::toggleable;
  if (s == "pressable") return Affordance::pressable;
  if (s == "stackable") return Affordance::stackable;
  raise(ErrorCode::parse_error, "unknown affordance '" + std::string(s) + "'");
}

const AssetClass* AssetCatalog::find(std::string_view name) const {
  for (const AssetClass& c : classes) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

void validate_class(const AssetClass& cls) {
  if (cls.name.empty()) {
    raise(ErrorCode::validation_error, "asset class with empty name");
  }
  try {
    validate_footprint(cls.footprint, cls.name);
  } catch (const Error&) {
    raise(ErrorCode::validation_error,
          "class '" + cls.name + "' has non-positive footprint extents");
  }
  if (cls.affordances == 0) {
    raise(ErrorCode::validation_error, "class '" + cls.name + "' has no affordances");
  }
  if (cls.has(Affordance::container)) {
    if (!cls.interior_half) {
      raise(ErrorCode::validation_error,
            "container class '" + cls.name + "' is missing its interior");
    }
    const Vec2& in = *cls.interior_half;
    if (!(in.x > 0.0) || !(in.y > 0.0) || in.x > cls.footprint.half_x ||
        in.y > cls.footprint.half_y) {
      raise(ErrorCode::validation_error,
            "container class '" + cls.name + "' interior not within its footprint");
    }
  } else if (cls.interior_half) {
    raise(ErrorCode::validation_error,
          "class '" + cls.name + "' has an interior but no container affordance");
  }
}

AssetClass class_from_json(const json& j) {
  AssetClass cls;
  cls.name = j.at("name").get<std::string>();
  const json& fp = j.at("footprint");
  cls.footprint.half_x = fp.at("half_x").get<double>();
  cls.footprint.half_y = fp.at("half_y").get<double>();
  cls.footprint.height = fp.at("height").get<double>();
  for (const json& a : j.at("affordances")) {
    cls.affordances |= static_cast<uint8_t>(affordance_from_string(a.get<std::string>()));
  }
  if (j.contains("tags")) {
    for (const json& t : j.at("tags")) cls.tags.push_back(t.get<std::string>());
  }
  if (j.contains("interior") && !j.at("interior").is_null()) {
    const json& in = j.at("interior");
    cls.interior_half = Vec2{in.at("half_x").get<double>(), in.at("half_y").get<double>()};
  }
  return cls;
}

json class_to_json(const AssetClass& cls) {
  json j;
  j["name"] = cls.name;
  j["footprint"] = {{"half_x", cls.footprint.half_x},
                    {"half_y", cls.footprint.half_y},
                    {"height", cls.footprint.height}};
  json affs = json::array();
  for (Affordance a : {Affordance::graspable, Affordance::container, Affordance::surface,
                       Affordance::toggleable, Affordance::pressable, Affordance::stackable}) {
    if (cls.has(a)) affs.push_back(std::string(to_string(a)));
  }
  j["affordances"] = affs;
  j["tags"] = cls.tags;
  if (cls.interior_half) {
    j["interior"] = {{"half_x", cls.interior_half->x}, {"half_y", cls.interior_half->y}};
  }
  return j;
}

}  // namespace

AssetCatalog parse_catalog(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    raise(ErrorCode::parse_error, e.what());
  }
  AssetCatalog catalog;
  try {
    catalog.version = doc.value("version", "1");
    for (const json& jc : doc.at("classes")) {
      catalog.classes.push_back(class_from_json(jc));
    }
  } catch (const json::exception& e) {
    raise(ErrorCode::parse_error, e.what());
  }
  std::set<std::string> names;
  for (const AssetClass& cls : catalog.classes) {
    validate_class(cls);
    if (!names.insert(cls.name).second) {
      raise(ErrorCode::validation_error, "duplicate class name '" + cls.name + "'");
    }
  }
  return catalog;
}

AssetCatalog load_catalog(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    raise(ErrorCode::io_error, "cannot open catalog file '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_catalog(buf.str());
}

std::string write_catalog(const AssetCatalog& catalog) {
  json doc;
  doc["version"] = catalog.version;
  json classes = json::array();
  for (const AssetClass& cls : catalog.classes) classes.push_back(class_to_json(cls));
  doc["classes"] = classes;
  return doc.dump(2);
}

std::shared_ptr<const AssetCatalog> default_catalog() {
  static const std::shared_ptr<const AssetCatalog> catalog =
      std::make_shared<const AssetCatalog>(parse_catalog(default_catalog_text()));
  return catalog;
}

std::vector<const AssetClass*> retrieve(const AssetCatalog& catalog,
                                        const std::vector<std::string>& required_tags,
                                        const std::vector<Affordance>& required_affordances,
                                        size_t count_min, size_t count_max) {
  if (count_min > count_max) {
    raise(ErrorCode::invalid_argument, "empty count range");
  }
  std::vector<const AssetClass*> out;
  for (const AssetClass& cls : catalog.classes) {
    const bool affs_ok = std::all_of(
        required_affordances.begin(), required_affordances.end(),
        [&](Affordance a) { return cls.has(a); });
    if (!affs_ok) continue;
    const bool tags_ok =
        required_tags.empty() ||
        std::any_of(required_tags.begin(), required_tags.end(), [&](const std::string& t) {
          return std::find(cls.tags.begin(), cls.tags.end(), t) != cls.tags.end();
        });
    if (!tags_ok) continue;
    out.push_back(&cls);
    if (out.size() == count_max) break;
  }
  if (out.size() < count_min) {
    raise(ErrorCode::retrieval_error,
          "only " + std::to_string(out.size()) + " classes match, need " +
              std::to_string(count_min));
  }
  return out;
}

InstancePool::InstancePool(std::shared_ptr<const AssetCatalog> catalog)
    : catalog_(std::move(catalog)) {}

ObjectInstance InstancePool::instantiate(std::string_view class_name, std::string id) {
  const AssetClass* cls = catalog_->find(class_name);
  if (cls == nullptr) {
    raise(ErrorCode::missing_object, "unknown asset class '" + std::string(class_name) + "'");
  }
  if (!used_ids_.insert(id).second) {
    raise(ErrorCode::duplicate_id, "instance id '" + id + "' already used");
  }
  return ObjectInstance{std::move(id),
                        std::shared_ptr<const AssetClass>(catalog_, cls)};
}

ObjectInstance InstancePool::instantiate_auto(std::string_view class_name) {
  auto it = class_counters_.find(class_name);
  if (it == class_counters_.end()) {
    it = class_counters_.emplace(std::string(class_name), 0).first;
  }
  std::string id;
  do {  // skip ids claimed explicitly (grounded slots)
    id = std::string(class_name) + "_" + std::to_string(it->second++);
  } while (used_ids_.contains(id));
  return instantiate(class_name, std::move(id));
}

}  // namespace vcage
