#pragma once

#include "miron/core/definition.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace miron::core {

inline constexpr std::size_t kDefaultExpansionCap = 10'000;

class ExpansionError : public std::runtime_error {
 public:
  enum class Kind { explosion, no_complete_utterance, bad_index, unknown_slot };

  ExpansionError(Kind kind, std::string message) : std::runtime_error(std::move(message)), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// One surface string together with the slot values it actually contains.
struct Expansion {
  std::string text;
  Bindings slots;

  bool operator==(const Expansion&) const = default;
};

/// Number of raw combinations (before suppression and deduplication), saturating at `limit + 1`.
std::uint64_t count_combinations(const TemplateAst& ast, std::uint64_t limit = UINT64_MAX - 1);
std::uint64_t count_combinations(const MironDefinition& def, std::uint64_t limit = UINT64_MAX - 1);

/// Joins fragments with single spaces; no space is put before a fragment that starts with
/// `, . ; : ! ?`.
std::string join_fragments(const std::vector<std::string>& fragments);

/// Every complete utterance of `def` under `bindings`, in enumeration order, deduplicated.
/// Expansions referencing an unbound or empty slot are suppressed.
std::vector<Expansion> expand_detailed(const MironDefinition& def, const Bindings& bindings,
                                       std::size_t cap = kDefaultExpansionCap);

std::vector<std::string> expand(const MironDefinition& def, const Bindings& bindings,
                                std::size_t cap = kDefaultExpansionCap);

struct ProductionCriterion {
  enum class Mode { uniform_random, seeded_random, indexed };

  Mode mode = Mode::uniform_random;
  std::optional<std::size_t> index;
  std::optional<std::uint64_t> rng_seed;

  static ProductionCriterion uniform() { return {}; }
  static ProductionCriterion seeded(std::uint64_t seed) { return {Mode::seeded_random, std::nullopt, seed}; }
  static ProductionCriterion indexed(std::size_t i) { return {Mode::indexed, i, std::nullopt}; }

  bool operator==(const ProductionCriterion&) const = default;
};

using Rng = std::mt19937_64;

/// Selects one expansion. `uniform_random` draws from `rng` when given, otherwise from a
/// nondeterministically seeded generator; `seeded_random` always uses its own seed.
std::string produce(const MironDefinition& def, const Bindings& bindings, const ProductionCriterion& criterion,
                    Rng* rng = nullptr, std::size_t cap = kDefaultExpansionCap);

struct TrainingSample {
  std::string sentence;
  std::string intent;
  Bindings slots;

  bool operator==(const TrainingSample&) const = default;
};

/// Candidate values for a slot: declared examples, else the words of a plain alternation
/// pattern, else the surface hints used in the templates.
std::vector<std::string> representative_values(const MironDefinition& def, const std::string& slot);

/// Labeled sentences from all expansions over the cartesian product of representative values.
std::vector<TrainingSample> export_training_data(const std::vector<MironDefinition>& defs,
                                                 std::size_t cap = kDefaultExpansionCap);

}  // namespace miron::core
