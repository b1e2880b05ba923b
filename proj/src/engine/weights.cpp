#include "miron/engine/weights.hpp"

#include <algorithm>

namespace miron::engine {

namespace {

std::string dims(const SparseMatrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

}  // namespace

void WeightSet::validate() const {
  const std::size_t K = w_cond.rows();
  if (w_rule.rows() != K || w_or.cols() != K) {
    throw std::invalid_argument("AND-cell count disagrees: w_cond " + dims(w_cond) + ", w_rule " + dims(w_rule) +
                                ", w_or " + dims(w_or));
  }
  if (w_rule.cols() != w_or.rows() || w_act.cols() != w_or.rows()) {
    throw std::invalid_argument("rule count disagrees: w_rule " + dims(w_rule) + ", w_or " + dims(w_or) + ", w_act " +
                                dims(w_act));
  }

  std::vector<Rational> sums(K, Rational{0, 1});
  for (const SparseMatrix* m : {&w_cond, &w_rule}) {
    for (const auto& e : m->entries()) {
      if (e.value.num <= 0) throw std::invalid_argument("AND weights must be positive");
      sums[e.row] = sums[e.row] + e.value;
    }
  }
  for (std::size_t k = 0; k < K; ++k) {
    if (!(sums[k] == Rational{1, 1})) {
      throw std::invalid_argument("AND cell " + std::to_string(k) + " weights sum to " + std::to_string(sums[k].num) +
                                  "/" + std::to_string(sums[k].den) + ", not 1");
    }
  }
  for (const auto& e : w_or.entries()) {
    if (e.value.den != 1 || (e.value.num != 1 && e.value.num != -1)) {
      throw std::invalid_argument("w_or entries must be +1 or -1");
    }
  }
  for (const auto& e : w_act.entries()) {
    if (e.value.den != 1 || e.value.num != 1) throw std::invalid_argument("w_act entries must be 1");
  }
}

std::optional<std::uint32_t> Dictionary::condition_index(std::string_view name) const {
  const auto it = condition_lookup_.find(name);
  if (it == condition_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> Dictionary::action_index(std::string_view name) const {
  const auto it = action_lookup_.find(name);
  if (it == action_lookup_.end()) return std::nullopt;
  return it->second;
}

const Dictionary::Rule* Dictionary::rule_by_id(int id) const {
  const auto it = std::find_if(rules.begin(), rules.end(), [&](const Rule& r) { return r.id == id; });
  return it == rules.end() ? nullptr : &*it;
}

const Dictionary::Rule* Dictionary::rule_by_label(std::string_view label) const {
  const auto it = std::find_if(rules.begin(), rules.end(), [&](const Rule& r) { return r.label == label; });
  return it == rules.end() ? nullptr : &*it;
}

const Dictionary::Rule& Dictionary::rule_of_cell(std::uint32_t k) const { return rules[cell_owner_.at(k)]; }

void Dictionary::reindex() {
  if (condition_segments.size() != conditions.size() || action_segments.size() != actions.size()) {
    throw std::invalid_argument("dictionary segment tables have the wrong length");
  }
  condition_lookup_.clear();
  action_lookup_.clear();
  for (std::uint32_t i = 0; i < conditions.size(); ++i) {
    if (!condition_lookup_.emplace(conditions[i], i).second) {
      throw std::invalid_argument("duplicate condition name '" + conditions[i] + "'");
    }
  }
  for (std::uint32_t i = 0; i < actions.size(); ++i) {
    if (!action_lookup_.emplace(actions[i], i).second) {
      throw std::invalid_argument("duplicate action name '" + actions[i] + "'");
    }
  }

  std::size_t cells = 0;
  for (const Rule& r : rules) cells += r.and_cells.size();
  cell_owner_.assign(cells, UINT32_MAX);
  std::map<int, int> ids;
  for (std::uint32_t m = 0; m < rules.size(); ++m) {
    const Rule& r = rules[m];
    if (r.or_index != m) throw std::invalid_argument("rule '" + r.label + "' has a non-dense OR index");
    if (!ids.emplace(r.id, 0).second) throw std::invalid_argument("duplicate rule id " + std::to_string(r.id));
    for (std::uint32_t k : r.and_cells) {
      if (k >= cells || cell_owner_[k] != UINT32_MAX) {
        throw std::invalid_argument("AND cell " + std::to_string(k) + " of rule '" + r.label + "' is invalid or shared");
      }
      cell_owner_[k] = m;
    }
  }
}

void Dictionary::check_against(const WeightSet& w) const {
  if (conditions.size() != w.conditions() || actions.size() != w.actions() || rules.size() != w.rules() ||
      cell_owner_.size() != w.cells()) {
    throw std::invalid_argument("dictionary (" + std::to_string(conditions.size()) + " conditions, " +
                                std::to_string(cell_owner_.size()) + " cells, " + std::to_string(rules.size()) +
                                " rules, " + std::to_string(actions.size()) + " actions) disagrees with weights (" +
                                std::to_string(w.conditions()) + ", " + std::to_string(w.cells()) + ", " +
                                std::to_string(w.rules()) + ", " + std::to_string(w.actions()) + ")");
  }
}

}  // namespace miron::engine
