#pragma once

#include "miron/core/definition.hpp"
#include "miron/core/expansion.hpp"
#include "miron/model/lexer.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace miron::sim {

using model::SyntaxError;

/// `user [modality] "text"`
struct FixedUtterance {
  std::string text;
  std::string modality = "speech";
};

/// `user as NAME slot="value" ... [index N | seed N]`: the utterance is produced from a
/// user-side definition with the same template machinery the system uses.
struct ProduceAs {
  std::string miron;
  core::Bindings bindings;
  core::ProductionCriterion criterion;
};

/// `expect INTENT`, `expect text "..."` or `expect none`, checked against the outputs of
/// the tick that followed the latest user step.
struct ExpectOutput {
  enum class Kind { intent, text, none };
  Kind kind = Kind::intent;
  std::string value;
};

struct ScriptStep {
  std::variant<FixedUtterance, ProduceAs, ExpectOutput> step;
  int line = 0;
};

/// Final-state predicate over the snapshot, transcript and counters.
struct Assertion {
  enum class Kind { state, variable, outbound, outputs, transcript_contains };
  Kind kind = Kind::state;
  std::string name;                  // state or variable
  std::optional<std::string> value;  // state: true|false (nullopt: unset); variable: nullopt = empty
  std::size_t count = 0;
  int line = 0;

  std::string describe() const;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  std::optional<std::string> clock;
  std::optional<std::filesystem::path> kv_file;
  std::vector<core::MironDefinition> user_mirons;
  std::vector<ScriptStep> steps;
  std::vector<Assertion> assertions;

  const core::MironDefinition* find_user_miron(std::string_view name) const;
};

/// Parses one `scenario NAME { ... }` document. `mirons "file"` imports every Miron of a
/// model file as user-side definitions; relative paths resolve against `base_dir`.
Scenario parse_scenario(std::string_view source, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& file);

}  // namespace miron::sim
