#pragma once

#include "miron/engine/params.hpp"
#include "miron/engine/sparse.hpp"
#include "miron/model/behavior_model.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace miron::engine {

/// The four weight matrices. Dimensions: N conditions, K AND cells, M rules, Q actions.
struct WeightSet {
  SparseMatrix w_cond;  // K×N
  SparseMatrix w_rule;  // K×M
  SparseMatrix w_or;    // M×K, entries ±1
  SparseMatrix w_act;   // Q×M, entries 1

  std::size_t conditions() const { return w_cond.cols(); }
  std::size_t cells() const { return w_cond.rows(); }
  std::size_t rules() const { return w_or.rows(); }
  std::size_t actions() const { return w_act.rows(); }

  /// Checks shapes, positive AND weights that sum to exactly 1 per cell, ±1 OR weights and
  /// unit action weights. Throws std::invalid_argument.
  void validate() const;

  bool operator==(const WeightSet&) const = default;
};

/// Name ↔ index tables for conditions, rules and actions.
struct Dictionary {
  struct Rule {
    int id = 0;
    std::string label;
    std::vector<std::uint32_t> and_cells;
    std::uint32_t or_index = 0;
    bool operator==(const Rule&) const = default;
  };

  std::vector<std::string> conditions;
  std::vector<model::ConditionSegment> condition_segments;
  std::vector<std::string> actions;
  std::vector<model::ActionSegment> action_segments;
  std::vector<Rule> rules;  // ordered by or_index

  std::optional<std::uint32_t> condition_index(std::string_view name) const;
  std::optional<std::uint32_t> action_index(std::string_view name) const;
  const Rule* rule_by_id(int id) const;
  const Rule* rule_by_label(std::string_view label) const;
  /// Rule owning AND cell k.
  const Rule& rule_of_cell(std::uint32_t k) const;

  /// Rebuilds the reverse lookups; throws std::invalid_argument if a table is not a
  /// bijection onto dense indices.
  void reindex();
  /// Throws std::invalid_argument when the tables disagree with the weight dimensions.
  void check_against(const WeightSet& w) const;

  bool operator==(const Dictionary& o) const {
    return conditions == o.conditions && condition_segments == o.condition_segments && actions == o.actions &&
           action_segments == o.action_segments && rules == o.rules;
  }

 private:
  std::map<std::string, std::uint32_t, std::less<>> condition_lookup_;
  std::map<std::string, std::uint32_t, std::less<>> action_lookup_;
  std::vector<std::uint32_t> cell_owner_;
};

}  // namespace miron::engine
