#include <utility>

#include "vcage/grounding.hpp"

namespace vcage {

namespace {

using A = Affordance;

SlotSpec slot(std::string name, std::vector<std::string> tags,
              std::vector<Affordance> affordances) {
  return SlotSpec{std::move(name), std::move(tags), std::move(affordances)};
}

SubtaskSpec pick(std::string obj) {
  SubtaskSpec s;
  s.primitive = Primitive::pick;
  s.object_slot = obj;
  s.text = "pick up {" + obj + "}";
  return s;
}

SubtaskSpec place_in(std::string obj, std::string container) {
  SubtaskSpec s;
  s.primitive = Primitive::place_in;
  s.object_slot = obj;
  s.reference_slot = container;
  s.text = "place {" + obj + "} inside {" + container + "}";
  return s;
}

SubtaskSpec stack_on(std::string obj, std::string support) {
  SubtaskSpec s;
  s.primitive = Primitive::stack_on;
  s.object_slot = obj;
  s.reference_slot = support;
  s.text = "stack {" + obj + "} on {" + support + "}";
  return s;
}

SubtaskSpec place_right_of(std::string obj, std::string anchor, double dx) {
  SubtaskSpec s;
  s.primitive = Primitive::place_at;
  s.object_slot = obj;
  s.reference_slot = anchor;
  s.dx = dx;
  s.text = "place {" + obj + "} to the right of {" + anchor + "}";
  return s;
}

SubtaskSpec toggle(std::string obj) {
  SubtaskSpec s;
  s.primitive = Primitive::toggle;
  s.object_slot = obj;
  s.text = "toggle {" + obj + "}";
  return s;
}

SubtaskSpec press(std::string obj) {
  SubtaskSpec s;
  s.primitive = Primitive::press;
  s.object_slot = obj;
  s.text = "press {" + obj + "}";
  return s;
}

RelationSpec near(std::string subject, std::string reference, double margin) {
  return RelationSpec{RelationKind::near, std::move(subject), std::move(reference), margin};
}

// Concatenate child templates into one long-horizon task. Slot names are
// prefixed per child so identical child slots stay independent.
TaskTemplate compose(std::string id, std::vector<std::string> aliases,
                     const std::vector<const TaskTemplate*>& children) {
  TaskTemplate tpl;
  tpl.id = std::move(id);
  tpl.aliases = std::move(aliases);
  for (size_t c = 0; c < children.size(); ++c) {
    const std::string prefix = "c" + std::to_string(c) + "_";
    for (SlotSpec s : children[c]->slots) {
      s.name = prefix + s.name;
      tpl.slots.push_back(std::move(s));
    }
    for (SubtaskSpec s : children[c]->expansion) {
      s.object_slot = prefix + s.object_slot;
      if (!s.reference_slot.empty()) s.reference_slot = prefix + s.reference_slot;
      size_t pos = 0;  // rewrite "{slot}" markers in the step text
      while ((pos = s.text.find('{', pos)) != std::string::npos) {
        s.text.insert(pos + 1, prefix);
        pos += prefix.size() + 1;
      }
      tpl.expansion.push_back(std::move(s));
    }
    for (RelationSpec r : children[c]->initial_relations) {
      r.subject_slot = prefix + r.subject_slot;
      r.reference_slot = prefix + r.reference_slot;
      tpl.initial_relations.push_back(std::move(r));
    }
  }
  return tpl;
}

std::vector<TaskTemplate> build_bundled() {
  std::vector<TaskTemplate> out;
  const auto add = [&](TaskTemplate tpl) { out.push_back(std::move(tpl)); };

  add({"toggle_desk_lamp",
       {"turn on the desk lamp"},
       {slot("lamp", {"desk_lamp"}, {A::toggleable})},
       {toggle("lamp")},
       {}});

  add({"place_mouse_pad",
       {"place the mouse on the pad"},
       {slot("mouse", {"mouse"}, {A::graspable}),
        slot("pad", {"mouse_pad"}, {A::container})},
       {pick("mouse"), place_in("mouse", "pad")},
       {near("mouse", "pad", 0.35)}});

  add({"click_alarmclock",
       {"click the alarm clock"},
       {slot("clock", {"alarmclock"}, {A::pressable})},
       {press("clock")},
       {}});

  add({"click_bell",
       {"ring the bell"},
       {slot("bell", {"bell"}, {A::pressable})},
       {press("bell")},
       {}});

  add({"press_stapler",
       {"press the stapler"},
       {slot("stapler", {"stapler"}, {A::pressable})},
       {press("stapler")},
       {}});

  add({"move_stapler_pad",
       {"move the stapler onto the pad"},
       {slot("stapler", {"stapler"}, {A::graspable}),
        slot("pad", {"pad"}, {A::container})},
       {pick("stapler"), place_in("stapler", "pad")},
       {}});

  add({"move_pillbottle_pad",
       {"move the pill bottle onto the pad"},
       {slot("pillbottle", {"pillbottle"}, {A::graspable}),
        slot("pad", {"pad"}, {A::container})},
       {pick("pillbottle"), place_in("pillbottle", "pad")},
       {}});

  add({"move_and_press_stapler",
       {"move the stapler to the pad and press it"},
       {slot("stapler", {"stapler"}, {A::graspable, A::pressable}),
        slot("pad", {"pad"}, {A::container})},
       {pick("stapler"), place_in("stapler", "pad"), press("stapler")},
       {}});

  add({"place_bread_basket",
       {"put the bread in the basket"},
       {slot("bread", {"bread"}, {A::graspable}),
        slot("basket", {"basket"}, {A::container})},
       {pick("bread"), place_in("bread", "basket")},
       {}});

  add({"place_a2b_right",
       {"place a to the right of b"},
       {slot("mover", {"block"}, {A::graspable}),
        slot("anchor", {"block"}, {})},
       {pick("mover"), place_right_of("mover", "anchor", 0.12)},
       {}});

  add({"move_playingcard_away",
       {"move the playing card away"},
       {slot("card", {"playingcard"}, {A::graspable}),
        slot("box", {"box"}, {A::container})},
       {pick("card"), place_in("card", "box")},
       {}});

  add({"move_can_pot",
       {"move the can into the pot"},
       {slot("can", {"can"}, {A::graspable}),
        slot("pot", {"pot"}, {A::container})},
       {pick("can"), place_in("can", "pot")},
       {near("can", "pot", 0.30)}});

  add({"lift_pot",
       {"lift the pot"},
       {slot("pot", {"pot"}, {A::graspable})},
       {pick("pot")},
       {}});

  add({"grab_roller",
       {"grab the roller"},
       {slot("roller", {"roller"}, {A::graspable})},
       {pick("roller")},
       {}});

  add({"stack_blocks_two",
       {"stack two blocks"},
       {slot("bottom", {"block"}, {A::stackable}),
        slot("top", {"block"}, {A::graspable, A::stackable})},
       {pick("top"), stack_on("top", "bottom")},
       {}});

  add({"stack_bowls_three",
       {"stack the three bowls"},
       {slot("bowl_a", {"bowl"}, {A::stackable}),
        slot("bowl_b", {"bowl"}, {A::graspable, A::stackable}),
        slot("bowl_c", {"bowl"}, {A::graspable, A::stackable})},
       {pick("bowl_b"), stack_on("bowl_b", "bowl_a"), pick("bowl_c"),
        stack_on("bowl_c", "bowl_b")},
       {}});

  add({"place_empty_cup",
       {"place the empty cup on the saucer"},
       {slot("cup", {"cup"}, {A::graspable}),
        slot("saucer", {"saucer"}, {A::container})},
       {pick("cup"), place_in("cup", "saucer")},
       {}});

  add({"place_dual_shoes",
       {"put both shoes in the shoe box"},
       {slot("shoe_left", {"shoe"}, {A::graspable}),
        slot("shoe_right", {"shoe"}, {A::graspable}),
        slot("shoebox", {"shoebox"}, {A::container})},
       {pick("shoe_left"), place_in("shoe_left", "shoebox"), pick("shoe_right"),
        place_in("shoe_right", "shoebox")},
       {}});

  add({"place_phone_stand",
       {"put the phone on the stand"},
       {slot("phone", {"phone"}, {A::graspable}),
        slot("stand", {"phone_stand"}, {A::container})},
       {pick("phone"), place_in("phone", "stand")},
       {}});

  add({"place_fan",
       {"place the fan on its stand"},
       {slot("fan", {"fan"}, {A::graspable}),
        slot("stand", {"fan_stand"}, {A::container})},
       {pick("fan"), place_in("fan", "stand")},
       {}});

  add({"stamp_seal",
       {"stamp the seal"},
       {slot("stamp", {"stamp"}, {A::graspable, A::pressable}),
        slot("inkpad", {"ink_pad"}, {A::container})},
       {pick("stamp"), place_in("stamp", "inkpad"), press("stamp")},
       {}});

  add({"blocks_ranking_rgb",
       {"arrange the blocks red green blue"},
       {slot("red", {"red"}, {A::graspable}),
        slot("green", {"green"}, {A::graspable}),
        slot("blue", {"blue"}, {A::graspable})},
       {pick("green"), place_right_of("green", "red", 0.10), pick("blue"),
        place_right_of("blue", "green", 0.10)},
       {}});

  add({"blocks_ranking_size",
       {"arrange the blocks by size"},
       {slot("small", {"small"}, {A::graspable}),
        slot("medium", {"medium"}, {A::graspable}),
        slot("large", {"large"}, {A::graspable})},
       {pick("medium"), place_right_of("medium", "small", 0.10), pick("large"),
        place_right_of("large", "medium", 0.12)},
       {}});

  add({"power_on_desk",
       {"power on the desk devices"},
       {slot("lamp", {"desk_lamp"}, {A::toggleable}),
        slot("monitor", {"monitor"}, {A::toggleable}),
        slot("fan", {"fan"}, {A::toggleable})},
       {toggle("lamp"), toggle("monitor"), toggle("fan")},
       {}});

  add({"power_on_office",
       {"power on the office"},
       {slot("lamp", {"desk_lamp"}, {A::toggleable}),
        slot("monitor", {"monitor"}, {A::toggleable}),
        slot("fan", {"fan"}, {A::toggleable}),
        slot("heater", {"heater"}, {A::toggleable})},
       {toggle("lamp"), toggle("monitor"), toggle("fan"), toggle("heater")},
       {}});

  const auto by_id = [&](std::string_view id) -> const TaskTemplate* {
    for (const TaskTemplate& t : out) {
      if (t.id == id) return &t;
    }
    return nullptr;
  };
  out.push_back(compose("get_ready_for_work", {"get ready for work"},
                        {by_id("toggle_desk_lamp"), by_id("place_mouse_pad"),
                         by_id("move_stapler_pad"), by_id("click_alarmclock")}));
  out.push_back(compose("organize_breakfast_table", {"organize the breakfast table"},
                        {by_id("place_bread_basket"), by_id("place_empty_cup"),
                         by_id("move_can_pot")}));
  return out;
}

}  // namespace

const TemplateLibrary& TemplateLibrary::bundled() {
  static const TemplateLibrary library(build_bundled());
  return library;
}

}  // namespace vcage
