#pragma once

#include "miron/compiler/artifacts.hpp"
#include "miron/core/recognizer.hpp"
#include "miron/model/behavior_model.hpp"
#include "miron/model/lexer.hpp"

#include <memory>
#include <stdexcept>

namespace miron::runtime {

class ArtifactMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Loaded artifacts plus everything a session derives from them once: recognizers and the
/// parsed condition and action atoms. Immutable and shared between sessions.
struct RuntimeModel {
  compiler::Artifacts artifacts;
  std::shared_ptr<const engine::WeightSet> weights;
  std::vector<core::Recognizer> recognizers;
  std::vector<model::ConditionAtom> conditions;
  std::vector<model::ActionAtom> actions;

  const core::MironDefinition* find_miron(std::string_view name) const;
  const engine::Dictionary& dictionary() const { return artifacts.dictionary; }
};

/// Throws ArtifactMismatch when dictionary and weights disagree or a dictionary entry
/// names a Miron the definitions lack.
std::shared_ptr<const RuntimeModel> make_runtime_model(compiler::Artifacts artifacts);

}  // namespace miron::runtime
