#include "miron/runtime/model.hpp"

#include <algorithm>

namespace miron::runtime {

const core::MironDefinition* RuntimeModel::find_miron(std::string_view name) const {
  const auto& ms = artifacts.mirons;
  const auto it = std::find_if(ms.begin(), ms.end(), [&](const auto& m) { return m.name == name; });
  return it == ms.end() ? nullptr : &*it;
}

std::shared_ptr<const RuntimeModel> make_runtime_model(compiler::Artifacts artifacts) {
  auto m = std::make_shared<RuntimeModel>();
  m->artifacts = std::move(artifacts);
  auto& dict = m->artifacts.dictionary;
  try {
    m->artifacts.weights.validate();
    dict.reindex();
    dict.check_against(m->artifacts.weights);
  } catch (const std::invalid_argument& e) {
    throw ArtifactMismatch(e.what());
  }
  m->weights = std::make_shared<engine::WeightSet>(m->artifacts.weights);
  for (const auto& def : m->artifacts.mirons) m->recognizers.push_back(core::compile_recognizer(def));
  try {
    for (const auto& name : dict.conditions) m->conditions.push_back(model::parse_condition(name));
    for (const auto& name : dict.actions) m->actions.push_back(model::parse_action(name));
  } catch (const model::SyntaxError& e) {
    throw ArtifactMismatch(std::string("dictionary entry does not parse: ") + e.what());
  }
  for (const auto& a : m->actions) {
    if (const auto* say = std::get_if<model::ProduceMiron>(&a)) {
      if (!m->find_miron(say->name)) throw ArtifactMismatch("dictionary produces unknown Miron '" + say->name + "'");
    }
  }
  return m;
}

}  // namespace miron::runtime
