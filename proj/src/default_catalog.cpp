#include "vcage/assets.hpp"

namespace vcage {

// Desk-scale object classes; half extents in meters. Kept in sync with
// data/default_catalog.json (a unit test diffs the two).
const std::string& default_catalog_text() {
  static const std::string text = R"json({
  "version": "1",
  "classes": [
    {"name": "mouse", "footprint": {"half_x": 0.030, "half_y": 0.045, "height": 0.040}, "affordances": ["graspable"], "tags": ["mouse", "office", "electronics"]},
    {"name": "pad", "footprint": {"half_x": 0.080, "half_y": 0.080, "height": 0.006}, "affordances": ["container", "surface"], "interior": {"half_x": 0.065, "half_y": 0.065}, "tags": ["pad", "office"]},
    {"name": "mouse_pad", "footprint": {"half_x": 0.090, "half_y": 0.110, "height": 0.006}, "affordances": ["container", "surface"], "interior": {"half_x": 0.075, "half_y": 0.095}, "tags": ["mouse_pad", "pad", "office"]},
    {"name": "alarmclock", "footprint": {"half_x": 0.045, "half_y": 0.045, "height": 0.090}, "affordances": ["pressable"], "tags": ["alarmclock", "clock", "desk"]},
    {"name": "bell", "footprint": {"half_x": 0.035, "half_y": 0.035, "height": 0.060}, "affordances": ["pressable"], "tags": ["bell", "desk"]},
    {"name": "stapler", "footprint": {"half_x": 0.025, "half_y": 0.060, "height": 0.035}, "affordances": ["graspable", "pressable"], "tags": ["stapler", "office"]},
    {"name": "block_red", "footprint": {"half_x": 0.020, "half_y": 0.020, "height": 0.040}, "affordances": ["graspable", "stackable"], "tags": ["block", "red", "toy"]},
    {"name": "block_green", "footprint": {"half_x": 0.020, "half_y": 0.020, "height": 0.040}, "affordances": ["graspable", "stackable"], "tags": ["block", "green", "toy"]},
    {"name": "block_blue", "footprint": {"half_x": 0.020, "half_y": 0.020, "height": 0.040}, "affordances": ["graspable", "stackable"], "tags": ["block", "blue", "toy"]},
    {"name": "block_small", "footprint": {"half_x": 0.015, "half_y": 0.015, "height": 0.030}, "affordances": ["graspable", "stackable"], "tags": ["block", "small", "toy"]},
    {"name": "block_medium", "footprint": {"half_x": 0.022, "half_y": 0.022, "height": 0.044}, "affordances": ["graspable", "stackable"], "tags": ["block", "medium", "toy"]},
    {"name": "block_large", "footprint": {"half_x": 0.030, "half_y": 0.030, "height": 0.060}, "affordances": ["graspable", "stackable"], "tags": ["block", "large", "toy"]},
    {"name": "bowl", "footprint": {"half_x": 0.070, "half_y": 0.070, "height": 0.040}, "affordances": ["graspable", "container", "stackable"], "interior": {"half_x": 0.055, "half_y": 0.055}, "tags": ["bowl", "kitchen", "tableware"]},
    {"name": "cup", "footprint": {"half_x": 0.035, "half_y": 0.035, "height": 0.080}, "affordances": ["graspable", "container"], "interior": {"half_x": 0.028, "half_y": 0.028}, "tags": ["cup", "kitchen", "tableware"]},
    {"name": "saucer", "footprint": {"half_x": 0.055, "half_y": 0.055, "height": 0.012}, "affordances": ["container", "surface", "stackable"], "interior": {"half_x": 0.045, "half_y": 0.045}, "tags": ["saucer", "kitchen", "tableware"]},
    {"name": "bread", "footprint": {"half_x": 0.040, "half_y": 0.055, "height": 0.035}, "affordances": ["graspable"], "tags": ["bread", "food", "kitchen"]},
    {"name": "basket", "footprint": {"half_x": 0.100, "half_y": 0.130, "height": 0.050}, "affordances": ["container"], "interior": {"half_x": 0.085, "half_y": 0.115}, "tags": ["basket", "kitchen", "storage"]},
    {"name": "box", "footprint": {"half_x": 0.090, "half_y": 0.090, "height": 0.060}, "affordances": ["container", "stackable"], "interior": {"half_x": 0.075, "half_y": 0.075}, "tags": ["box", "storage"]},
    {"name": "tray", "footprint": {"half_x": 0.110, "half_y": 0.140, "height": 0.015}, "affordances": ["container", "surface"], "interior": {"half_x": 0.095, "half_y": 0.125}, "tags": ["tray", "storage", "office"]},
    {"name": "pot", "footprint": {"half_x": 0.080, "half_y": 0.080, "height": 0.070}, "affordances": ["graspable", "container"], "interior": {"half_x": 0.065, "half_y": 0.065}, "tags": ["pot", "kitchen", "cookware"]},
    {"name": "can", "footprint": {"half_x": 0.028, "half_y": 0.028, "height": 0.060}, "affordances": ["graspable"], "tags": ["can", "food", "kitchen"]},
    {"name": "pillbottle", "footprint": {"half_x": 0.022, "half_y": 0.022, "height": 0.055}, "affordances": ["graspable"], "tags": ["pillbottle", "medicine"]},
    {"name": "playingcard", "footprint": {"half_x": 0.030, "half_y": 0.045, "height": 0.004}, "affordances": ["graspable"], "tags": ["playingcard", "card", "toy"]},
    {"name": "shoe", "footprint": {"half_x": 0.040, "half_y": 0.090, "height": 0.050}, "affordances": ["graspable"], "tags": ["shoe", "wear"]},
    {"name": "shoebox", "footprint": {"half_x": 0.140, "half_y": 0.160, "height": 0.070}, "affordances": ["container"], "interior": {"half_x": 0.125, "half_y": 0.145}, "tags": ["shoebox", "storage", "wear"]},
    {"name": "phone", "footprint": {"half_x": 0.035, "half_y": 0.070, "height": 0.010}, "affordances": ["graspable"], "tags": ["phone", "electronics"]},
    {"name": "phone_stand", "footprint": {"half_x": 0.050, "half_y": 0.080, "height": 0.020}, "affordances": ["container", "surface"], "interior": {"half_x": 0.042, "half_y": 0.074}, "tags": ["phone_stand", "stand", "office"]},
    {"name": "fan", "footprint": {"half_x": 0.060, "half_y": 0.060, "height": 0.120}, "affordances": ["graspable", "toggleable"], "tags": ["fan", "electronics", "appliance"]},
    {"name": "fan_stand", "footprint": {"half_x": 0.075, "half_y": 0.075, "height": 0.020}, "affordances": ["container", "surface"], "interior": {"half_x": 0.065, "half_y": 0.065}, "tags": ["fan_stand", "stand"]},
    {"name": "desk_lamp", "footprint": {"half_x": 0.050, "half_y": 0.050, "height": 0.180}, "affordances": ["toggleable"], "tags": ["desk_lamp", "lamp", "light", "electronics", "desk"]},
    {"name": "monitor", "footprint": {"half_x": 0.110, "half_y": 0.030, "height": 0.200}, "affordances": ["toggleable"], "tags": ["monitor", "office", "electronics"]},
    {"name": "heater", "footprint": {"half_x": 0.070, "half_y": 0.050, "height": 0.120}, "affordances": ["toggleable"], "tags": ["heater", "appliance"]},
    {"name": "roller", "footprint": {"half_x": 0.025, "half_y": 0.070, "height": 0.025}, "affordances": ["graspable"], "tags": ["roller", "tool"]},
    {"name": "stamp", "footprint": {"half_x": 0.025, "half_y": 0.025, "height": 0.050}, "affordances": ["graspable", "pressable"], "tags": ["stamp", "office"]},
    {"name": "ink_pad", "footprint": {"half_x": 0.050, "half_y": 0.050, "height": 0.015}, "affordances": ["container", "surface"], "interior": {"half_x": 0.040, "half_y": 0.040}, "tags": ["ink_pad", "office"]},
    {"name": "bottle", "footprint": {"half_x": 0.030, "half_y": 0.030, "height": 0.110}, "affordances": ["graspable"], "tags": ["bottle", "drink", "kitchen"]}
  ]
}
)json";
  return text;
}

}  // namespace vcage
