#include "miron/compiler/artifacts.hpp"

#include "miron/compiler/lower.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace miron::compiler {

using nlohmann::json;

namespace {

std::string canonical(const json& j) { return j.dump(2) + "\n"; }

json parse_document(const std::string& text, const char* file) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string(file) + ": " + e.what());
  }
  if (!j.is_object()) throw SchemaError(std::string(file) + ": top level must be an object");
  const auto it = j.find("schema_version");
  if (it == j.end() || !it->is_string()) throw SchemaError(std::string(file) + ": missing schema_version");
  if (*it != kSchemaVersion) {
    throw SchemaVersionMismatch(std::string(file) + ": schema_version " + it->get<std::string>() + ", expected " +
                                kSchemaVersion);
  }
  return j;
}

template <typename Segment>
Segment segment_named(std::string_view name, std::initializer_list<Segment> all, const char* file) {
  for (Segment s : all) {
    if (model::to_string(s) == name) return s;
  }
  throw SchemaError(std::string(file) + ": unknown segment '" + std::string(name) + "'");
}

json matrix_json(const engine::SparseMatrix& m, bool signed_ints) {
  json rows = json::array();
  for (const auto& e : m.entries()) {
    if (signed_ints) rows.push_back({e.row, e.col, e.value.num});
    else rows.push_back({e.row, e.col, e.value.num, e.value.den});
  }
  return rows;
}

engine::SparseMatrix matrix_from(const json& rows, std::size_t r, std::size_t c, std::size_t arity, const char* name) {
  std::vector<engine::SparseMatrix::Entry> entries;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != arity) {
      throw SchemaError(std::string("rules.json: malformed ") + name + " entry " + row.dump());
    }
    engine::SparseMatrix::Entry e;
    e.row = row[0].get<std::uint32_t>();
    e.col = row[1].get<std::uint32_t>();
    if (arity == 4) e.value = {row[2].get<std::int64_t>(), row[3].get<std::int64_t>()};
    else if (arity == 3) e.value = {row[2].get<std::int64_t>(), 1};
    else e.value = {1, 1};
    entries.push_back(e);
  }
  try {
    return engine::SparseMatrix(r, c, std::move(entries));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("rules.json: ") + name + ": " + e.what());
  }
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + p.string());
  out << text;
  if (!out.flush()) throw IoError("cannot write " + p.string());
}

}  // namespace

Artifacts build_artifacts(const model::BehaviorModel& m, const engine::EngineParams& p) {
  p.validate();
  auto lowered = lower_model(m, p);
  return Artifacts{m.mirons, std::move(lowered.weights), std::move(lowered.dictionary), p};
}

ArtifactTexts serialize(const Artifacts& a) {
  ArtifactTexts out;

  json mirons = json::array();
  for (const auto& d : a.mirons) {
    json slots = json::array();
    for (const auto& s : d.slots) slots.push_back({{"name", s.name}, {"pattern", s.pattern}, {"examples", s.examples}});
    mirons.push_back({{"name", d.name},
                      {"modality", d.modality},
                      {"direction", core::to_string(d.direction)},
                      {"templates", d.template_sources},
                      {"slots", slots},
                      {"data_slots", d.data_slots}});
  }
  out.mirons = canonical({{"schema_version", kSchemaVersion}, {"mirons", mirons}});

  const auto& w = a.weights;
  json act = json::array();
  for (const auto& e : w.w_act.entries()) act.push_back({e.row, e.col});
  out.rules = canonical({{"schema_version", kSchemaVersion},
                         {"params", {{"epsilon", a.params.epsilon}, {"eta_max", a.params.eta_max}, {"rng_seed", a.params.rng_seed}}},
                         {"dims", {{"conditions", w.conditions()}, {"cells", w.cells()}, {"rules", w.rules()}, {"actions", w.actions()}}},
                         {"w_cond", matrix_json(w.w_cond, false)},
                         {"w_rule", matrix_json(w.w_rule, false)},
                         {"w_or", matrix_json(w.w_or, true)},
                         {"w_act", act}});

  const auto& dict = a.dictionary;
  json conditions = json::object();
  for (auto s : {model::ConditionSegment::miron_intent, model::ConditionSegment::named_entity,
                 model::ConditionSegment::action_feedback, model::ConditionSegment::working_memory}) {
    conditions[std::string(model::to_string(s))] = json::array();
  }
  for (std::size_t i = 0; i < dict.conditions.size(); ++i) {
    conditions[std::string(model::to_string(dict.condition_segments[i]))].push_back(dict.conditions[i]);
  }
  json actions = json::object();
  for (auto s : {model::ActionSegment::inner_miron, model::ActionSegment::outer_miron, model::ActionSegment::internal_action,
                 model::ActionSegment::wm_change}) {
    actions[std::string(model::to_string(s))] = json::array();
  }
  for (std::size_t i = 0; i < dict.actions.size(); ++i) {
    actions[std::string(model::to_string(dict.action_segments[i]))].push_back(dict.actions[i]);
  }
  json rules = json::array();
  for (const auto& r : dict.rules) {
    rules.push_back({{"id", r.id}, {"label", r.label}, {"and_cells", r.and_cells}, {"or_index", r.or_index}});
  }
  out.dictionary = canonical({{"schema_version", kSchemaVersion},
                              {"segment_order",
                               {{"conditions", {"miron_intent", "named_entity", "action_feedback", "working_memory"}},
                                {"actions", {"inner_miron", "outer_miron", "internal_action", "wm_change"}}}},
                              {"conditions", conditions},
                              {"actions", actions},
                              {"rules", rules}});
  return out;
}

Artifacts deserialize(const ArtifactTexts& texts) {
  Artifacts a;
  try {
    const json mirons = parse_document(texts.mirons, kMironFile);
    for (const auto& j : mirons.at("mirons")) {
      core::MironDefinition d;
      d.name = j.at("name").get<std::string>();
      d.modality = j.at("modality").get<std::string>();
      const auto dir = core::parse_direction(j.at("direction").get<std::string>());
      if (!dir) throw SchemaError("mirons.json: bad direction for '" + d.name + "'");
      d.direction = *dir;
      d.template_sources = j.at("templates").get<std::vector<std::string>>();
      for (const auto& s : j.at("slots")) {
        d.slots.push_back({s.at("name").get<std::string>(), s.at("pattern").get<std::string>(),
                           s.at("examples").get<std::vector<std::string>>()});
      }
      d.data_slots = j.at("data_slots").get<std::map<std::string, std::string>>();
      try {
        core::finalize_definition(d);
      } catch (const core::TemplateError& e) {
        throw SchemaError("mirons.json: Miron '" + d.name + "': " + e.what());
      }
      a.mirons.push_back(std::move(d));
    }

    const json rules = parse_document(texts.rules, kRuleFile);
    const auto& p = rules.at("params");
    a.params.epsilon = p.at("epsilon").get<double>();
    a.params.eta_max = p.at("eta_max").get<double>();
    a.params.rng_seed = p.at("rng_seed").get<std::uint64_t>();
    try {
      a.params.validate();
    } catch (const std::invalid_argument& e) {
      throw SchemaError(std::string("rules.json: ") + e.what());
    }
    const auto& dims = rules.at("dims");
    const auto N = dims.at("conditions").get<std::size_t>();
    const auto K = dims.at("cells").get<std::size_t>();
    const auto M = dims.at("rules").get<std::size_t>();
    const auto Q = dims.at("actions").get<std::size_t>();
    a.weights.w_cond = matrix_from(rules.at("w_cond"), K, N, 4, "w_cond");
    a.weights.w_rule = matrix_from(rules.at("w_rule"), K, M, 4, "w_rule");
    a.weights.w_or = matrix_from(rules.at("w_or"), M, K, 3, "w_or");
    a.weights.w_act = matrix_from(rules.at("w_act"), Q, M, 2, "w_act");
    try {
      a.weights.validate();
    } catch (const std::invalid_argument& e) {
      throw SchemaError(std::string("rules.json: ") + e.what());
    }

    const json dict = parse_document(texts.dictionary, kDictionaryFile);
    for (const auto& seg : dict.at("segment_order").at("conditions")) {
      const auto s = segment_named(seg.get<std::string>(),
                                   {model::ConditionSegment::miron_intent, model::ConditionSegment::named_entity,
                                    model::ConditionSegment::action_feedback, model::ConditionSegment::working_memory},
                                   kDictionaryFile);
      for (const auto& name : dict.at("conditions").at(seg.get<std::string>())) {
        a.dictionary.conditions.push_back(name.get<std::string>());
        a.dictionary.condition_segments.push_back(s);
      }
    }
    for (const auto& seg : dict.at("segment_order").at("actions")) {
      const auto s = segment_named(seg.get<std::string>(),
                                   {model::ActionSegment::inner_miron, model::ActionSegment::outer_miron,
                                    model::ActionSegment::internal_action, model::ActionSegment::wm_change},
                                   kDictionaryFile);
      for (const auto& name : dict.at("actions").at(seg.get<std::string>())) {
        a.dictionary.actions.push_back(name.get<std::string>());
        a.dictionary.action_segments.push_back(s);
      }
    }
    for (const auto& r : dict.at("rules")) {
      a.dictionary.rules.push_back({r.at("id").get<int>(), r.at("label").get<std::string>(),
                                    r.at("and_cells").get<std::vector<std::uint32_t>>(), r.at("or_index").get<std::uint32_t>()});
    }
    try {
      a.dictionary.reindex();
      a.dictionary.check_against(a.weights);
      for (const auto& name : a.dictionary.conditions) model::parse_condition(name);
      for (const auto& name : a.dictionary.actions) model::parse_action(name);
    } catch (const std::exception& e) {
      throw SchemaError(std::string("dictionary.json: ") + e.what());
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed artifact: ") + e.what());
  }
  return a;
}

std::vector<std::filesystem::path> emit_artifacts(const Artifacts& a, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const auto texts = serialize(a);
  std::vector<std::filesystem::path> paths{dir / kMironFile, dir / kRuleFile, dir / kDictionaryFile};
  write_file(paths[0], texts.mirons);
  write_file(paths[1], texts.rules);
  write_file(paths[2], texts.dictionary);
  return paths;
}

Artifacts load_artifacts(const std::filesystem::path& dir) {
  return deserialize({read_file(dir / kMironFile), read_file(dir / kRuleFile), read_file(dir / kDictionaryFile)});
}

bool is_artifact_dir(const std::filesystem::path& dir) {
  return std::filesystem::is_regular_file(dir / kMironFile) && std::filesystem::is_regular_file(dir / kRuleFile) &&
         std::filesystem::is_regular_file(dir / kDictionaryFile);
}

}  // namespace miron::compiler
