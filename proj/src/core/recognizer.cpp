#include "miron/core/recognizer.hpp"

#include <cctype>

namespace miron::core {

namespace {

// Token capture used when a slot declares no pattern: one or more characters, no
// leading or trailing whitespace, as short as the rest of the template allows.
constexpr std::string_view kDefaultSlotPattern = R"(\S(?:.*?\S)??)";
constexpr std::string_view kWordSeparator = R"((?:^|\s+))";
constexpr std::string_view kPunctSeparator = R"(\s*)";

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool starts_with_punctuation(std::string_view s) {
  if (s.empty()) return false;
  switch (s.front()) {
    case ',': case '.': case ';': case ':': case '!': case '?': return true;
    default: return false;
  }
}

void append_escaped(std::string_view text, std::string& out) {
  bool in_space = false;
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (is_space(c)) {
      if (!in_space) out += R"(\s+)";
      in_space = true;
      continue;
    }
    in_space = false;
    // Only true metacharacters: in Perl syntax \' \` \< \> are anchors, not literals.
    if (u < 0x80 && std::string_view(R"(.^$|()[]{}*+?\)").find(c) != std::string_view::npos) out += '\\';
    out += c;
  }
}

class PatternBuilder {
 public:
  explicit PatternBuilder(const MironDefinition& def) : def_(def) {}

  void sequence(const TemplateAst& ast) {
    for (const auto& node : ast.nodes) {
      std::visit(
          [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Literal>) {
              out += starts_with_punctuation(n.text) ? kPunctSeparator : kWordSeparator;
              append_escaped(n.text, out);
            } else if constexpr (std::is_same_v<T, SlotRef>) {
              slot(n);
            } else if constexpr (std::is_same_v<T, Optional>) {
              out += "(?:";
              sequence(n.children);
              out += ")?";
            } else {
              out += "(?:";
              for (std::size_t i = 0; i < n.alternatives.size(); ++i) {
                if (i) out += '|';
                sequence(n.alternatives[i]);
              }
              out += ')';
            }
          },
          node.value);
    }
  }

  std::string out;
  std::vector<std::string> groups{""};  // group 0 is the whole match

 private:
  void slot(const SlotRef& ref) {
    out += kWordSeparator;
    const SlotDecl* decl = def_.find_slot(ref.slot_name);
    out += '(';
    groups.push_back(ref.slot_name);
    if (decl && !decl->pattern.empty()) {
      out += "(?:";
      out += decl->pattern;
      out += ')';
      const boost::regex inner(decl->pattern, boost::regex::perl);
      for (std::size_t i = 0; i < inner.mark_count(); ++i) groups.emplace_back();
    } else {
      out += kDefaultSlotPattern;
    }
    out += ')';
  }

  const MironDefinition& def_;
};

}  // namespace

PatternTooLarge::PatternTooLarge(std::string miron, std::size_t size, std::size_t limit)
    : std::runtime_error("compiled pattern for " + miron + " is " + std::to_string(size) + " bytes (limit " +
                         std::to_string(limit) + ")") {}

std::string normalize_utterance(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

Recognizer::Recognizer(const MironDefinition& def, std::size_t pattern_limit)
    : def_(std::make_shared<const MironDefinition>(def)) {
  std::size_t total = 0;
  for (const auto& tmpl : def_->templates) {
    PatternBuilder builder(*def_);
    builder.sequence(tmpl);
    total += builder.out.size();
    if (total > pattern_limit) throw PatternTooLarge(def_->name, total, pattern_limit);
    boost::regex re(builder.out, boost::regex::perl | boost::regex::icase);
    compiled_.push_back(Compiled{std::move(builder.out), std::move(re), std::move(builder.groups)});
  }
}

std::optional<RecognitionResult> Recognizer::match(std::string_view normalized) const {
  for (const auto& c : compiled_) {
    boost::match_results<std::string_view::const_iterator> m;
    bool ok = false;
    try {
      ok = boost::regex_match(normalized.begin(), normalized.end(), m, c.re);
    } catch (const std::runtime_error&) {
      ok = false;  // backtracking limit hit; treated as no match
    }
    if (!ok) continue;

    RecognitionResult result;
    result.intent = def_->name;
    result.modality = def_->modality;
    result.data_slots = def_->data_slots;
    result.span_begin = 0;
    result.span_end = normalized.size();
    for (std::size_t g = 1; g < m.size() && g < c.group_slots.size(); ++g) {
      if (c.group_slots[g].empty() || !m[g].matched) continue;
      result.slots.try_emplace(c.group_slots[g], m[g].str());
    }
    return result;
  }
  return std::nullopt;
}

Recognizer compile_recognizer(const MironDefinition& def, std::size_t pattern_limit) {
  return Recognizer(def, pattern_limit);
}

std::vector<RecognitionResult> recognize(std::string_view utterance, std::span<const Recognizer> recognizers,
                                         Direction channel, std::optional<std::string_view> modality) {
  const std::string normalized = normalize_utterance(utterance);
  std::vector<RecognitionResult> out;
  if (normalized.empty()) return out;
  for (const auto& r : recognizers) {
    const auto& def = r.definition();
    if (def.direction != channel) continue;
    if (modality && def.modality != *modality) continue;
    if (auto result = r.match(normalized)) out.push_back(std::move(*result));
  }
  return out;
}

std::vector<RecognitionResult> recognize_any(std::string_view utterance, std::span<const Recognizer> recognizers) {
  const std::string normalized = normalize_utterance(utterance);
  std::vector<RecognitionResult> out;
  if (normalized.empty()) return out;
  for (const auto& r : recognizers) {
    if (auto result = r.match(normalized)) out.push_back(std::move(*result));
  }
  return out;
}

}  // namespace miron::core
