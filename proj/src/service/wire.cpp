#include "miron/service/wire.hpp"

#include <set>

namespace miron::service {

namespace {

json parse_object(std::string_view frame) {
  json j;
  try {
    j = json::parse(frame);
  } catch (const json::parse_error& e) {
    throw BadMessage(std::string("not JSON: ") + e.what());
  }
  if (!j.is_object()) throw BadMessage("message must be a JSON object");
  if (!j.contains("type") || !j["type"].is_string()) throw BadMessage("missing string field 'type'");
  return j;
}

void only_keys(const json& j, std::initializer_list<std::string_view> allowed) {
  const std::set<std::string_view> ok(allowed);
  for (const auto& [k, _] : j.items()) {
    if (k != "type" && !ok.count(k)) throw BadMessage("unexpected field '" + k + "'");
  }
}

std::string str(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) throw BadMessage(std::string("missing string field '") + key + "'");
  return j[key].get<std::string>();
}

std::optional<std::string> opt_str(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return str(j, key);
}

std::uint64_t uint(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_unsigned()) {
    throw BadMessage(std::string("missing non-negative integer field '") + key + "'");
  }
  return j[key].get<std::uint64_t>();
}

std::optional<std::uint64_t> opt_uint(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return uint(j, key);
}

const json& member(const json& j, const char* key) {
  if (!j.contains(key)) throw BadMessage(std::string("missing field '") + key + "'");
  return j[key];
}

}  // namespace

std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::unknown_session: return "unknown_session";
    case ErrorCode::bad_message: return "bad_message";
    case ErrorCode::engine_fault: return "engine_fault";
  }
  return "bad_message";
}

ClientMessage parse_client_message(std::string_view frame) {
  const json j = parse_object(frame);
  const std::string type = j["type"];
  if (type == "create_session") {
    only_keys(j, {"model_id", "seed"});
    return CreateSession{opt_str(j, "model_id"), opt_uint(j, "seed")};
  }
  if (type == "user_utterance") {
    only_keys(j, {"session", "text", "modality"});
    return UserUtterance{str(j, "session"), str(j, "text"), opt_str(j, "modality").value_or("speech")};
  }
  if (type == "get_snapshot") {
    only_keys(j, {"session"});
    return GetSnapshot{str(j, "session")};
  }
  throw BadMessage("unknown message type '" + type + "'");
}

std::string_view type_of(const ClientMessage& m) {
  static constexpr std::string_view names[] = {"create_session", "user_utterance", "get_snapshot"};
  return names[m.index()];
}

std::string_view type_of(const ServerMessage& m) {
  static constexpr std::string_view names[] = {"session_created", "system_utterance", "state_snapshot",
                                               "engine_event", "error"};
  return names[m.index()];
}

json to_json(const ClientMessage& m) {
  json j = {{"type", type_of(m)}};
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, CreateSession>) {
          if (x.model_id) j["model_id"] = *x.model_id;
          if (x.seed) j["seed"] = *x.seed;
        } else if constexpr (std::is_same_v<T, UserUtterance>) {
          j["session"] = x.session;
          j["text"] = x.text;
          j["modality"] = x.modality;
        } else {
          j["session"] = x.session;
        }
      },
      m);
  return j;
}

json to_json(const ServerMessage& m) {
  json j = {{"type", type_of(m)}};
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ErrorMessage>) {
          j["code"] = to_string(x.code);
          j["message"] = x.message;
          if (x.session) j["session"] = *x.session;
          if (x.seq) j["seq"] = *x.seq;
          if (!x.detail.is_null()) j["detail"] = x.detail;
        } else {
          j["session"] = x.session;
          j["seq"] = x.seq;
          if constexpr (std::is_same_v<T, SessionCreated>) {
            j["model_id"] = x.model_id;
          } else if constexpr (std::is_same_v<T, SystemUtterance>) {
            j["text"] = x.text;
            j["intent"] = x.intent;
            j["modality"] = x.modality;
          } else if constexpr (std::is_same_v<T, StateSnapshotMessage>) {
            j["snapshot"] = x.snapshot;
          } else {
            j["kind"] = x.kind;
            j["detail"] = x.detail;
          }
        }
      },
      m);
  return j;
}

ServerMessage parse_server_message(std::string_view frame) {
  const json j = parse_object(frame);
  const std::string type = j["type"];
  if (type == "error") {
    only_keys(j, {"code", "message", "session", "seq", "detail"});
    ErrorMessage e;
    const std::string code = str(j, "code");
    if (code == "unknown_session") e.code = ErrorCode::unknown_session;
    else if (code == "bad_message") e.code = ErrorCode::bad_message;
    else if (code == "engine_fault") e.code = ErrorCode::engine_fault;
    else throw BadMessage("unknown error code '" + code + "'");
    e.message = str(j, "message");
    e.session = opt_str(j, "session");
    e.seq = opt_uint(j, "seq");
    if (j.contains("detail")) e.detail = j["detail"];
    return e;
  }
  const std::string session = str(j, "session");
  const std::uint64_t seq = uint(j, "seq");
  if (seq == 0) throw BadMessage("seq starts at 1");
  if (type == "session_created") {
    only_keys(j, {"session", "seq", "model_id"});
    return SessionCreated{session, seq, str(j, "model_id")};
  }
  if (type == "system_utterance") {
    only_keys(j, {"session", "seq", "text", "intent", "modality"});
    return SystemUtterance{session, seq, str(j, "text"), str(j, "intent"), str(j, "modality")};
  }
  if (type == "state_snapshot") {
    only_keys(j, {"session", "seq", "snapshot"});
    const json& snap = member(j, "snapshot");
    for (const char* key : {"step", "active_rules", "fired_rules", "working_memory", "named_entities", "conditions",
                            "actions"}) {
      if (!snap.is_object() || !snap.contains(key)) throw BadMessage(std::string("snapshot lacks '") + key + "'");
    }
    return StateSnapshotMessage{session, seq, snap};
  }
  if (type == "engine_event") {
    only_keys(j, {"session", "seq", "kind", "detail"});
    return EngineEventMessage{session, seq, str(j, "kind"), member(j, "detail")};
  }
  throw BadMessage("unknown message type '" + type + "'");
}

}  // namespace miron::service
