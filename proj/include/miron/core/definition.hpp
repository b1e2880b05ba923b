#pragma once

#include "miron/core/template.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace miron::core {

enum class Direction { inner, outer };

std::string_view to_string(Direction d);
std::optional<Direction> parse_direction(std::string_view text);

struct SlotDecl {
  std::string name;
  /// Regular expression restricting what the slot captures; empty means the default token capture.
  std::string pattern;
  /// Representative values used for training-data export and random binding generation.
  std::vector<std::string> examples;

  bool operator==(const SlotDecl&) const = default;
};

/// A Miron: one intent with the templates used both to recognize and to produce it.
struct MironDefinition {
  std::string name;
  std::string modality = "speech";
  Direction direction = Direction::outer;
  std::vector<std::string> template_sources;
  std::vector<TemplateAst> templates;
  std::vector<SlotDecl> slots;
  std::map<std::string, std::string> data_slots;

  const SlotDecl* find_slot(std::string_view slot) const;
  std::set<std::string> slot_names() const;

  bool operator==(const MironDefinition&) const = default;
};

/// Parses `template_sources` into `templates`. A definition without templates gets
/// its own name as the single literal template.
void finalize_definition(MironDefinition& def);

MironDefinition make_definition(std::string name, std::vector<std::string> templates,
                                std::vector<SlotDecl> slots = {}, Direction direction = Direction::outer,
                                std::string modality = "speech");

using Bindings = std::map<std::string, std::string>;

}  // namespace miron::core
