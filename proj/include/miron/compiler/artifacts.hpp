#pragma once

#include "miron/core/definition.hpp"
#include "miron/engine/params.hpp"
#include "miron/engine/weights.hpp"
#include "miron/model/behavior_model.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace miron::compiler {

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kMironFile = "mirons.json";
inline constexpr const char* kRuleFile = "rules.json";
inline constexpr const char* kDictionaryFile = "dictionary.json";

class ArtifactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public ArtifactError {
 public:
  using ArtifactError::ArtifactError;
};

/// A document that is not a valid artifact of the current schema.
class SchemaError : public ArtifactError {
 public:
  using ArtifactError::ArtifactError;
};

class SchemaVersionMismatch : public SchemaError {
 public:
  using SchemaError::SchemaError;
};

struct Artifacts {
  std::vector<core::MironDefinition> mirons;
  engine::WeightSet weights;
  engine::Dictionary dictionary;
  engine::EngineParams params;

  bool operator==(const Artifacts&) const = default;
};

/// The three documents in canonical form: sorted keys, two-space indent, LF, final newline.
struct ArtifactTexts {
  std::string mirons;
  std::string rules;
  std::string dictionary;

  bool operator==(const ArtifactTexts&) const = default;
};

/// Lowers a model; throws CompileError (or a subclass) on invalid input.
Artifacts build_artifacts(const model::BehaviorModel& m, const engine::EngineParams& p = {});

ArtifactTexts serialize(const Artifacts& a);
/// Throws SchemaError (SchemaVersionMismatch for a foreign version).
Artifacts deserialize(const ArtifactTexts& texts);

std::vector<std::filesystem::path> emit_artifacts(const Artifacts& a, const std::filesystem::path& dir);
Artifacts load_artifacts(const std::filesystem::path& dir);

/// True if `dir` holds the three artifact files.
bool is_artifact_dir(const std::filesystem::path& dir);

}  // namespace miron::compiler
