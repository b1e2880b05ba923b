#pragma once

#include "miron/core/definition.hpp"

#include <boost/regex.hpp>

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace miron::core {

inline constexpr std::size_t kDefaultPatternLimit = 64 * 1024;

class PatternTooLarge : public std::runtime_error {
 public:
  PatternTooLarge(std::string miron, std::size_t size, std::size_t limit);
};

/// Collapses whitespace runs to one space and trims both ends. Case is preserved so slot
/// values keep the speaker's spelling; matching itself is case-insensitive.
std::string normalize_utterance(std::string_view text);

struct RecognitionResult {
  std::string intent;
  Bindings slots;
  /// [begin, end) in the normalized utterance; always the full string.
  std::size_t span_begin = 0;
  std::size_t span_end = 0;
  std::string modality;
  std::map<std::string, std::string> data_slots;

  bool operator==(const RecognitionResult&) const = default;
};

/// Regular-expression matcher compiled from one Miron definition.
class Recognizer {
 public:
  explicit Recognizer(const MironDefinition& def, std::size_t pattern_limit = kDefaultPatternLimit);

  const MironDefinition& definition() const noexcept { return *def_; }

  /// Full-string, case-insensitive match of an already normalized utterance.
  std::optional<RecognitionResult> match(std::string_view normalized) const;

  /// Source of the compiled pattern for template `i` (diagnostics and tests).
  const std::string& pattern(std::size_t i) const { return compiled_.at(i).source; }
  std::size_t template_count() const noexcept { return compiled_.size(); }

 private:
  struct Compiled {
    std::string source;
    boost::regex re;
    std::vector<std::string> group_slots;  // capture group index -> slot name, "" for inner groups
  };

  std::shared_ptr<const MironDefinition> def_;
  std::vector<Compiled> compiled_;
};

Recognizer compile_recognizer(const MironDefinition& def, std::size_t pattern_limit = kDefaultPatternLimit);

/// All definitions of `channel` direction whose templates match `utterance`, in definition
/// order. When `modality` is given only definitions of that modality take part.
std::vector<RecognitionResult> recognize(std::string_view utterance, std::span<const Recognizer> recognizers,
                                         Direction channel, std::optional<std::string_view> modality = std::nullopt);

/// Same, over every recognizer regardless of direction.
std::vector<RecognitionResult> recognize_any(std::string_view utterance, std::span<const Recognizer> recognizers);

}  // namespace miron::core
