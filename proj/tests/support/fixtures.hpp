#pragma once

#include "miron/compiler/artifacts.hpp"
#include "miron/compiler/model_parser.hpp"
#include "miron/runtime/model.hpp"
#include "miron/runtime/session.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace miron::testing {

inline std::filesystem::path source_dir() { return MIRON_SOURCE_DIR; }

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::filesystem::path model_path(const std::string& name) {
  return source_dir() / "models" / name / (name + ".model");
}

inline compiler::Artifacts artifacts_from_source(const std::string& source) {
  return compiler::build_artifacts(compiler::parse_model(source));
}

inline std::shared_ptr<const runtime::RuntimeModel> runtime_from_source(const std::string& source) {
  return runtime::make_runtime_model(artifacts_from_source(source));
}

inline std::shared_ptr<const runtime::RuntimeModel> runtime_fixture(const std::string& name) {
  return runtime_from_source(read_text(model_path(name)));
}

inline runtime::RuntimeConfig fixture_config(std::string clock = "10:30") {
  runtime::RuntimeConfig c;
  c.clock = std::move(clock);
  c.kv_file = source_dir() / "models" / "receptionist" / "kv.json";
  return c;
}

}  // namespace miron::testing
