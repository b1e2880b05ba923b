#include "miron/core/definition.hpp"

#include <algorithm>

namespace miron::core {

std::string_view to_string(Direction d) { return d == Direction::inner ? "inner" : "outer"; }

std::optional<Direction> parse_direction(std::string_view text) {
  if (text == "inner") return Direction::inner;
  if (text == "outer") return Direction::outer;
  return std::nullopt;
}

const SlotDecl* MironDefinition::find_slot(std::string_view slot) const {
  const auto it = std::find_if(slots.begin(), slots.end(), [&](const SlotDecl& s) { return s.name == slot; });
  return it == slots.end() ? nullptr : &*it;
}

std::set<std::string> MironDefinition::slot_names() const {
  std::set<std::string> names;
  for (const auto& s : slots) names.insert(s.name);
  return names;
}

void finalize_definition(MironDefinition& def) {
  if (def.template_sources.empty()) def.template_sources.push_back(def.name);
  const auto names = def.slot_names();
  def.templates.clear();
  for (const auto& source : def.template_sources) def.templates.push_back(parse_template(source, names));
}

MironDefinition make_definition(std::string name, std::vector<std::string> templates, std::vector<SlotDecl> slots,
                                Direction direction, std::string modality) {
  MironDefinition def;
  def.name = std::move(name);
  def.template_sources = std::move(templates);
  def.slots = std::move(slots);
  def.direction = direction;
  def.modality = std::move(modality);
  finalize_definition(def);
  return def;
}

}  // namespace miron::core
