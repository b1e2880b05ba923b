#include "miron/cli/cli.hpp"

#include "miron/compiler/artifacts.hpp"
#include "miron/compiler/lower.hpp"
#include "miron/compiler/model_parser.hpp"
#include "miron/compiler/validate.hpp"
#include "miron/runtime/config.hpp"
#include "miron/runtime/session.hpp"
#include "miron/service/server.hpp"
#include "miron/sim/runner.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

namespace miron::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::optional<fs::path> config;
  fs::path model;
  fs::path out_dir;
  fs::path artifacts;
  std::optional<std::uint64_t> seed;
  bool verbose = false;
  std::string listen = "127.0.0.1:8080";
  fs::path scenario;
  bool quiet = false;
};

class IoProblem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoProblem("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int compile(const Options& o, std::ostream& out, std::ostream& err) {
  const std::string source = read_file(o.model);
  model::BehaviorModel m;
  try {
    m = compiler::parse_model(source);
  } catch (const model::SyntaxError& e) {
    err << o.model.string() << ": " << e.what() << "\n";
    return kFailure;
  }
  const auto diagnostics = compiler::validate_model(m);
  for (const auto& d : diagnostics) err << o.model.string() << ": " << compiler::to_string(d) << "\n";
  if (compiler::has_errors(diagnostics)) return kFailure;
  compiler::Artifacts artifacts;
  try {
    artifacts = compiler::build_artifacts(m);
  } catch (const compiler::CompileError& e) {
    err << o.model.string() << ": " << e.what() << "\n";
    return kFailure;
  }
  for (const auto& p : compiler::emit_artifacts(artifacts, o.out_dir)) out << p.string() << "\n";
  return kOk;
}

std::shared_ptr<const runtime::RuntimeModel> load_model(const fs::path& dir) {
  return runtime::make_runtime_model(compiler::load_artifacts(dir));
}

void print_outputs(const std::vector<runtime::EmittedOutput>& outputs, std::ostream& out) {
  for (const auto& o : outputs) out << o.text << "\n";
}

// REPL input: a plain line is speech; "@modality text" uses another modality.
int run(const Options& o, const runtime::RuntimeConfig& config, std::istream& in, std::ostream& out,
        std::ostream& err) {
  auto model = load_model(o.artifacts);
  auto options = runtime::SessionOptions::from(config);
  if (o.seed) options.seed = *o.seed;
  runtime::Session session(model, runtime::builtin_registry(config), options);
  if (o.verbose) {
    session.set_observer([&](const runtime::EngineEvent& e) {
      if (e.kind == "rule_fired") out << "  [rule] " << e.detail["rule"].get<std::string>() << "\n";
      else if (e.kind == "inner_speech") out << "  [inner] " << e.detail["text"].get<std::string>() << "\n";
      else if (e.kind == "outbound") out << "  [message] " << e.detail["message"].get<std::string>() << "\n";
      else if (e.kind == "action_failed") out << "  [failed] " << e.detail.dump() << "\n";
    });
  }
  auto guarded = [&](auto&& body) {
    try {
      print_outputs(body(), out);
    } catch (const runtime::IterationLimitExceeded& e) {
      err << "engine fault: " << e.what() << "\n";
      for (const auto& line : e.trace()) err << "  " << line << "\n";
    }
    out.flush();
  };
  guarded([&] { return session.start(); });
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == ":quit") break;
    if (line == ":state") {
      out << session.snapshot().to_json().dump(2) << "\n";
      continue;
    }
    if (line.empty()) continue;
    std::string modality = "speech";
    std::string text = line;
    if (line.front() == '@') {
      const auto space = line.find(' ');
      modality = line.substr(1, space == std::string::npos ? std::string::npos : space - 1);
      text = space == std::string::npos ? "" : line.substr(space + 1);
    }
    guarded([&] {
      session.ingest_utterance(text, modality);
      return session.tick();
    });
  }
  return kOk;
}

int serve(const Options& o, const runtime::RuntimeConfig& config, std::ostream& out) {
  auto hub = std::make_shared<service::SessionHub>(service::load_served_models(o.artifacts), config);
  const auto address = service::parse_listen(o.listen);
  // Block the stop signals before any worker exists so only this thread receives them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  service::Server server(hub, address);
  server.start();
  out << "listening on " << address.host << ":" << server.port() << " (";
  for (std::size_t i = 0; i < hub->models().size(); ++i) out << (i ? ", " : "") << hub->models()[i].id;
  out << ")" << std::endl;
  int sig = 0;
  sigwait(&signals, &sig);
  server.stop();
  return kOk;
}

int simulate(const Options& o, const runtime::RuntimeConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<fs::path> files;
  if (fs::is_directory(o.scenario)) {
    for (const auto& e : fs::directory_iterator(o.scenario)) {
      if (e.path().extension() == ".scn") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IoProblem("no .scn files in " + o.scenario.string());
  } else {
    if (!fs::exists(o.scenario)) throw IoProblem("cannot read " + o.scenario.string());
    files.push_back(o.scenario);
  }
  auto model = load_model(o.artifacts);
  bool all = true;
  for (const auto& f : files) {
    sim::Scenario sc;
    try {
      sc = sim::load_scenario(f);
    } catch (const model::SyntaxError& e) {
      err << f.string() << ": " << e.what() << "\n";
      all = false;
      continue;
    }
    const auto report = sim::run_scenario(sc, model, config);
    if (o.quiet) {
      const std::string jsonl = report.to_jsonl();
      const auto last = jsonl.rfind('\n', jsonl.size() - 2);
      out << jsonl.substr(last == std::string::npos ? 0 : last + 1);
    } else {
      out << report.to_jsonl();
    }
    all = all && report.passed();
  }
  return all ? kOk : kFailure;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Miron dialog engine: compile behavior models, talk to them, serve and simulate them.", "miron"};
  app.require_subcommand(1);
  Options o;
  std::string config_path;
  app.add_option("--config", config_path, "Runtime configuration file (default: $MIRON_CONFIG)");

  auto* compile_cmd = app.add_subcommand("compile", "Compile a model into its three artifact files");
  compile_cmd->add_option("model", o.model, "Model file")->required();
  compile_cmd->add_option("-o,--out", o.out_dir, "Output directory")->required();

  auto* run_cmd = app.add_subcommand("run", "Interactive terminal dialog (:state, :quit, @modality text)");
  run_cmd->add_option("--artifacts", o.artifacts, "Compiled model directory")->required();
  run_cmd->add_option("--seed", o.seed, "Session seed");
  run_cmd->add_flag("--verbose", o.verbose, "Also print rule activations and inner speech");

  auto* serve_cmd = app.add_subcommand("serve", "Serve sessions over WebSocket");
  serve_cmd->add_option("--artifacts", o.artifacts, "Compiled model directory, or a directory of them")->required();
  serve_cmd->add_option("--listen", o.listen, "host:port")->capture_default_str();

  auto* sim_cmd = app.add_subcommand("simulate", "Run scenario files against a compiled model");
  sim_cmd->add_option("scenario", o.scenario, "Scenario file or directory of .scn files")->required();
  sim_cmd->add_option("--artifacts", o.artifacts, "Compiled model directory")->required();
  sim_cmd->add_flag("--quiet", o.quiet, "Print only the summary line of each scenario");

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  if (!config_path.empty()) o.config = config_path;

  try {
    if (*compile_cmd) return compile(o, out, err);
    const auto config = runtime::resolve_config(o.config);
    if (*run_cmd) return run(o, config, in, out, err);
    if (*serve_cmd) return serve(o, config, out);
    if (*sim_cmd) return simulate(o, config, out, err);
  } catch (const IoProblem& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const compiler::ArtifactError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const runtime::ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const runtime::ArtifactMismatch& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace miron::cli
