#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vcage/geometry.hpp"

namespace vcage {

enum class Affordance : uint8_t {
  graspable = 1u << 0,
  container = 1u << 1,
  surface = 1u << 2,
  toggleable = 1u << 3,
  pressable = 1u << 4,
  stackable = 1u << 5,
};

std::string_view to_string(Affordance a);
Affordance affordance_from_string(std::string_view s);  // throws ParseError

// Object class with placement footprint and interaction metadata. Containers
// carry a centered interior rectangle (half extents, box frame) that bounds
// what fits inside.
struct AssetClass {
  std::string name;
  Footprint footprint;
  uint8_t affordances = 0;
  std::vector<std::string> tags;
  std::optional<Vec2> interior_half;

  bool has(Affordance a) const {
    return (affordances & static_cast<uint8_t>(a)) != 0;
  }
};

struct AssetCatalog {
  std::vector<AssetClass> classes;
  std::string version;

  const AssetClass* find(std::string_view name) const;
};

// Throws ParseError on malformed JSON, ValidationError on invariant breaks
// (duplicate names, non-positive extents, container without interior, ...).
AssetCatalog parse_catalog(const std::string& text);
AssetCatalog load_catalog(const std::filesystem::path& path);
std::string write_catalog(const AssetCatalog& catalog);

// The catalog shipped with the engine; parse_catalog(default_catalog_text())
// round-trips it.
const std::string& default_catalog_text();
std::shared_ptr<const AssetCatalog> default_catalog();

// Pure filter in catalog order: every returned class carries all required
// affordances and at least one required tag (an empty tag list matches all).
// Throws RetrievalError when fewer than count_min classes match; the result
// is truncated to count_max.
std::vector<const AssetClass*> retrieve(const AssetCatalog& catalog,
                                        const std::vector<std::string>& required_tags,
                                        const std::vector<Affordance>& required_affordances,
                                        size_t count_min = 1,
                                        size_t count_max = SIZE_MAX);

// Instance = class reference + episode-unique id; pose is assigned later by
// scene synthesis. The shared_ptr aliases into the owning catalog.
struct ObjectInstance {
  std::string id;
  std::shared_ptr<const AssetClass> cls;
};

// Per-episode id registry.
class InstancePool {
 public:
  explicit InstancePool(std::shared_ptr<const AssetCatalog> catalog);

  const AssetCatalog& catalog() const { return *catalog_; }

  // Throws DuplicateId on id reuse, MissingObject for unknown classes.
  ObjectInstance instantiate(std::string_view class_name, std::string id);

  // "<class>_<k>" with a per-class counter.
  ObjectInstance instantiate_auto(std::string_view class_name);

 private:
  std::shared_ptr<const AssetCatalog> catalog_;
  std::set<std::string, std::less<>> used_ids_;
  std::map<std::string, int, std::less<>> class_counters_;
};

}  // namespace vcage
