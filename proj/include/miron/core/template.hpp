#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace miron::core {

struct TemplateNode;

/// Ordered sequence of template nodes; the root of every parsed template.
struct TemplateAst {
  std::vector<TemplateNode> nodes;

  bool operator==(const TemplateAst& other) const;
};

struct Literal {
  std::string text;
  bool operator==(const Literal&) const = default;
};

/// `( ... )` part that may be left out.
struct Optional {
  TemplateAst children;
  bool operator==(const Optional&) const = default;
};

/// `< a | b | c >` alternative formulations.
struct GrammarField {
  std::vector<TemplateAst> alternatives;
  bool operator==(const GrammarField&) const = default;
};

/// `{Surface:SlotName}` or `{SlotName}`.
struct SlotRef {
  std::string slot_name;
  std::string surface_hint;
  bool operator==(const SlotRef&) const = default;
};

struct TemplateNode {
  std::variant<Literal, Optional, GrammarField, SlotRef> value;
  bool operator==(const TemplateNode&) const = default;
};

inline bool TemplateAst::operator==(const TemplateAst& other) const { return nodes == other.nodes; }

class TemplateError : public std::runtime_error {
 public:
  enum class Kind { unbalanced_bracket, unknown_slot, empty_alternative, empty_template, bad_slot };

  TemplateError(Kind kind, std::size_t position, std::string detail);

  Kind kind() const noexcept { return kind_; }
  std::size_t position() const noexcept { return position_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  Kind kind_;
  std::size_t position_;
  std::string detail_;
};

/// Parses the template DSL. `declared_slots` lists every slot name a SlotRef may use.
/// A backslash escapes the next character so brackets can appear literally.
TemplateAst parse_template(std::string_view source, const std::set<std::string>& declared_slots);

/// Renders an AST back to DSL source (canonical spacing).
std::string to_source(const TemplateAst& ast);

/// Slot names referenced anywhere in the tree, in first-occurrence order.
std::vector<std::string> referenced_slots(const TemplateAst& ast);

bool is_identifier(std::string_view text);

}  // namespace miron::core
