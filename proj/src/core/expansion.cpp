#include "miron/core/expansion.hpp"

#include <algorithm>
#include <regex>
#include <set>
#include <unordered_set>

namespace miron::core {

namespace {

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b, std::uint64_t limit) {
  return (a > limit || b > limit - a) ? limit + 1 : a + b;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b, std::uint64_t limit) {
  if (a == 0 || b == 0) return 0;
  return (a > limit / b) ? limit + 1 : a * b;
}

struct Partial {
  std::vector<std::string> fragments;
  Bindings slots;
};

std::vector<Partial> enumerate(const TemplateAst& ast, const Bindings& bindings);

std::vector<Partial> node_options(const TemplateNode& node, const Bindings& bindings) {
  return std::visit(
      [&](const auto& n) -> std::vector<Partial> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Literal>) {
          return {Partial{{n.text}, {}}};
        } else if constexpr (std::is_same_v<T, SlotRef>) {
          const auto it = bindings.find(n.slot_name);
          if (it == bindings.end() || it->second.empty()) return {};  // suppressed
          return {Partial{{it->second}, {{n.slot_name, it->second}}}};
        } else if constexpr (std::is_same_v<T, Optional>) {
          auto out = enumerate(n.children, bindings);
          out.push_back(Partial{});
          return out;
        } else {
          std::vector<Partial> out;
          for (const auto& alt : n.alternatives) {
            auto part = enumerate(alt, bindings);
            out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
          }
          return out;
        }
      },
      node.value);
}

std::vector<Partial> enumerate(const TemplateAst& ast, const Bindings& bindings) {
  std::vector<Partial> acc{Partial{}};
  for (const auto& node : ast.nodes) {
    const auto options = node_options(node, bindings);
    std::vector<Partial> next;
    next.reserve(acc.size() * options.size());
    for (const auto& prefix : acc) {
      for (const auto& option : options) {
        Partial p = prefix;
        p.fragments.insert(p.fragments.end(), option.fragments.begin(), option.fragments.end());
        p.slots.insert(option.slots.begin(), option.slots.end());
        next.push_back(std::move(p));
      }
    }
    acc = std::move(next);
    if (acc.empty()) break;
  }
  return acc;
}

// Odometer step over value indices, last slot fastest.
bool advance(std::vector<std::size_t>& cursor, const std::vector<std::vector<std::string>>& values) {
  for (std::size_t i = cursor.size(); i-- > 0;) {
    if (++cursor[i] < std::max<std::size_t>(values[i].size(), 1)) return true;
    cursor[i] = 0;
  }
  return false;
}

bool starts_with_punctuation(const std::string& s) {
  if (s.empty()) return false;
  switch (s.front()) {
    case ',': case '.': case ';': case ':': case '!': case '?': return true;
    default: return false;
  }
}

}  // namespace

std::uint64_t count_combinations(const TemplateAst& ast, std::uint64_t limit) {
  std::uint64_t total = 1;
  for (const auto& node : ast.nodes) {
    const std::uint64_t n = std::visit(
        [&](const auto& v) -> std::uint64_t {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Optional>) {
            return saturating_add(count_combinations(v.children, limit), 1, limit);
          } else if constexpr (std::is_same_v<T, GrammarField>) {
            std::uint64_t sum = 0;
            for (const auto& alt : v.alternatives) sum = saturating_add(sum, count_combinations(alt, limit), limit);
            return sum;
          } else {
            return 1;
          }
        },
        node.value);
    total = saturating_mul(total, n, limit);
  }
  return total;
}

std::uint64_t count_combinations(const MironDefinition& def, std::uint64_t limit) {
  std::uint64_t total = 0;
  for (const auto& t : def.templates) total = saturating_add(total, count_combinations(t, limit), limit);
  return total;
}

std::string join_fragments(const std::vector<std::string>& fragments) {
  std::string out;
  for (const auto& f : fragments) {
    if (f.empty()) continue;
    if (!out.empty() && !starts_with_punctuation(f)) out += ' ';
    out += f;
  }
  return out;
}

std::vector<Expansion> expand_detailed(const MironDefinition& def, const Bindings& bindings, std::size_t cap) {
  for (const auto& [slot, value] : bindings) {
    if (!def.find_slot(slot)) {
      throw ExpansionError(ExpansionError::Kind::unknown_slot, "binding for undeclared slot '" + slot + "' of " + def.name);
    }
  }
  if (count_combinations(def, cap) > cap) {
    throw ExpansionError(ExpansionError::Kind::explosion,
                         "expansion of " + def.name + " exceeds the cap of " + std::to_string(cap));
  }

  std::vector<Expansion> out;
  std::unordered_set<std::string> seen;
  for (const auto& tmpl : def.templates) {
    for (auto& partial : enumerate(tmpl, bindings)) {
      std::string text = join_fragments(partial.fragments);
      if (text.empty() || !seen.insert(text).second) continue;
      out.push_back(Expansion{std::move(text), std::move(partial.slots)});
    }
  }
  return out;
}

std::vector<std::string> expand(const MironDefinition& def, const Bindings& bindings, std::size_t cap) {
  std::vector<std::string> out;
  for (auto& e : expand_detailed(def, bindings, cap)) out.push_back(std::move(e.text));
  return out;
}

std::string produce(const MironDefinition& def, const Bindings& bindings, const ProductionCriterion& criterion,
                    Rng* rng, std::size_t cap) {
  const auto options = expand(def, bindings, cap);
  if (options.empty()) {
    throw ExpansionError(ExpansionError::Kind::no_complete_utterance,
                         "no complete utterance of " + def.name + " with the given slots");
  }
  switch (criterion.mode) {
    case ProductionCriterion::Mode::indexed: {
      const std::size_t i = criterion.index.value_or(0);
      if (i >= options.size()) {
        throw ExpansionError(ExpansionError::Kind::bad_index, "index " + std::to_string(i) + " out of range for " +
                                                                  def.name + " (" + std::to_string(options.size()) +
                                                                  " expansions)");
      }
      return options[i];
    }
    case ProductionCriterion::Mode::seeded_random: {
      Rng local(criterion.rng_seed.value_or(0));
      std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
      return options[pick(local)];
    }
    case ProductionCriterion::Mode::uniform_random: {
      std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
      if (rng) return options[pick(*rng)];
      Rng local{std::random_device{}()};
      return options[pick(local)];
    }
  }
  return options.front();
}

std::vector<std::string> representative_values(const MironDefinition& def, const std::string& slot) {
  const SlotDecl* decl = def.find_slot(slot);
  if (decl && !decl->examples.empty()) return decl->examples;

  if (decl && !decl->pattern.empty()) {
    static const std::regex plain_alternation(R"(^\(?(?:\?:)?([A-Za-z0-9 ]+(?:\|[A-Za-z0-9 ]+)*)\)?$)");
    std::smatch m;
    if (std::regex_match(decl->pattern, m, plain_alternation)) {
      std::vector<std::string> values;
      std::string body = m[1].str();
      std::size_t start = 0;
      while (true) {
        const auto bar = body.find('|', start);
        values.push_back(body.substr(start, bar - start));
        if (bar == std::string::npos) break;
        start = bar + 1;
      }
      return values;
    }
  }

  std::vector<std::string> hints;
  auto visit_ast = [&](auto&& self, const TemplateAst& ast) -> void {
    for (const auto& node : ast.nodes) {
      if (const auto* s = std::get_if<SlotRef>(&node.value)) {
        if (s->slot_name == slot && std::find(hints.begin(), hints.end(), s->surface_hint) == hints.end()) {
          hints.push_back(s->surface_hint);
        }
      } else if (const auto* o = std::get_if<Optional>(&node.value)) {
        self(self, o->children);
      } else if (const auto* g = std::get_if<GrammarField>(&node.value)) {
        for (const auto& alt : g->alternatives) self(self, alt);
      }
    }
  };
  for (const auto& t : def.templates) visit_ast(visit_ast, t);
  return hints;
}

std::vector<TrainingSample> export_training_data(const std::vector<MironDefinition>& defs, std::size_t cap) {
  std::vector<TrainingSample> out;
  for (const auto& def : defs) {
    std::vector<std::string> slots;
    for (const auto& t : def.templates) {
      for (auto& s : referenced_slots(t)) {
        if (std::find(slots.begin(), slots.end(), s) == slots.end()) slots.push_back(std::move(s));
      }
    }
    std::vector<std::vector<std::string>> values;
    std::uint64_t product = 1;
    for (const auto& s : slots) {
      values.push_back(representative_values(def, s));
      product = saturating_mul(product, std::max<std::size_t>(values.back().size(), 1), cap);
    }
    if (product > cap) {
      throw ExpansionError(ExpansionError::Kind::explosion,
                           "training data for " + def.name + " exceeds the cap of " + std::to_string(cap));
    }

    std::unordered_set<std::string> seen;
    std::vector<std::size_t> cursor(slots.size(), 0);
    while (true) {
      Bindings b;
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (!values[i].empty()) b[slots[i]] = values[i][cursor[i]];
      }
      for (auto& e : expand_detailed(def, b, cap)) {
        if (!seen.insert(e.text).second) continue;
        out.push_back(TrainingSample{std::move(e.text), def.name, std::move(e.slots)});
      }
      if (!advance(cursor, values)) break;
    }
  }
  return out;
}

}  // namespace miron::core
