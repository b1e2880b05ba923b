#pragma once

#include "miron/model/behavior_model.hpp"
#include "miron/model/lexer.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace miron::compiler {

using model::SyntaxError;

class DuplicateMironName : public SyntaxError {
 public:
  DuplicateMironName(int line, const std::string& name)
      : SyntaxError(line, "duplicate Miron '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class UnknownReference : public SyntaxError {
 public:
  UnknownReference(int line, const std::string& name, const std::string& what)
      : SyntaxError(line, "unknown " + what + " '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Parses a behavior model document (see docs/model_format.md). Rule ids are assigned in
/// declaration order from 100; `after` links are resolved and successors derived.
model::BehaviorModel parse_model(std::string_view source);

/// Parses the body of a `miron NAME { ... }` block; shared with the scenario format.
core::MironDefinition parse_miron_block(model::TokenStream& in);

}  // namespace miron::compiler
