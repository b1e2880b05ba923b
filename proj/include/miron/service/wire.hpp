#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace miron::service {

using nlohmann::json;

/// Malformed frame: not JSON, unknown type, missing or mistyped field.
class BadMessage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- client -> server ------------------------------------------------------

struct CreateSession {
  std::optional<std::string> model_id;  // may be omitted when exactly one model is served
  std::optional<std::uint64_t> seed;
  bool operator==(const CreateSession&) const = default;
};

struct UserUtterance {
  std::string session;
  std::string text;
  std::string modality = "speech";
  bool operator==(const UserUtterance&) const = default;
};

struct GetSnapshot {
  std::string session;
  bool operator==(const GetSnapshot&) const = default;
};

using ClientMessage = std::variant<CreateSession, UserUtterance, GetSnapshot>;

ClientMessage parse_client_message(std::string_view frame);
json to_json(const ClientMessage& m);

// --- server -> client ------------------------------------------------------
// Every message about a session carries `session` and that session's `seq`, which starts
// at 1 and increases by one per message.

struct SessionCreated {
  std::string session;
  std::uint64_t seq = 0;
  std::string model_id;
  bool operator==(const SessionCreated&) const = default;
};

struct SystemUtterance {
  std::string session;
  std::uint64_t seq = 0;
  std::string text;
  std::string intent;
  std::string modality;
  bool operator==(const SystemUtterance&) const = default;
};

struct StateSnapshotMessage {
  std::string session;
  std::uint64_t seq = 0;
  json snapshot;
  bool operator==(const StateSnapshotMessage&) const = default;
};

/// kind: rule_fired | inner_speech | action_failed | outbound | iteration_limit | closed
struct EngineEventMessage {
  std::string session;
  std::uint64_t seq = 0;
  std::string kind;
  json detail;
  bool operator==(const EngineEventMessage&) const = default;
};

enum class ErrorCode { unknown_session, bad_message, engine_fault };

std::string_view to_string(ErrorCode c);

struct ErrorMessage {
  ErrorCode code = ErrorCode::bad_message;
  std::string message;
  std::optional<std::string> session;
  std::optional<std::uint64_t> seq;
  json detail;  // engine_fault: {"trace": [...]}
  bool operator==(const ErrorMessage&) const = default;
};

using ServerMessage =
    std::variant<SessionCreated, SystemUtterance, StateSnapshotMessage, EngineEventMessage, ErrorMessage>;

json to_json(const ServerMessage& m);
/// Strict inverse of to_json(ServerMessage); used by clients and contract tests.
ServerMessage parse_server_message(std::string_view frame);

std::string_view type_of(const ClientMessage& m);
std::string_view type_of(const ServerMessage& m);

}  // namespace miron::service
