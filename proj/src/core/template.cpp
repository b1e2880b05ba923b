#include "miron/core/template.hpp"

#include <algorithm>
#include <cctype>

namespace miron::core {

namespace {

const char* kind_name(TemplateError::Kind kind) {
  switch (kind) {
    case TemplateError::Kind::unbalanced_bracket: return "unbalanced bracket";
    case TemplateError::Kind::unknown_slot: return "unknown slot";
    case TemplateError::Kind::empty_alternative: return "empty alternative";
    case TemplateError::Kind::empty_template: return "empty template";
    case TemplateError::Kind::bad_slot: return "malformed slot";
  }
  return "template error";
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string trim(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && is_space(text[begin])) ++begin;
  while (end > begin && is_space(text[end - 1])) --end;
  return std::string(text.substr(begin, end - begin));
}

class Parser {
 public:
  Parser(std::string_view source, const std::set<std::string>& slots) : src_(source), slots_(slots) {}

  TemplateAst parse() {
    TemplateAst ast = sequence('\0');
    if (pos_ < src_.size()) {
      throw TemplateError(TemplateError::Kind::unbalanced_bracket, pos_,
                          std::string("unexpected '") + src_[pos_] + "'");
    }
    return ast;
  }

 private:
  // Reads nodes until `close` (or end of input when close == '\0'). Inside a
  // grammar field, '|' also terminates the sequence.
  TemplateAst sequence(char close) {
    TemplateAst out;
    std::string literal;
    auto flush = [&] {
      std::string text = trim(literal);
      literal.clear();
      if (!text.empty()) out.nodes.push_back(TemplateNode{Literal{std::move(text)}});
    };

    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\\' && pos_ + 1 < src_.size()) {
        literal += src_[pos_ + 1];
        pos_ += 2;
        continue;
      }
      if (c == ')' || c == '>' || c == '}') {
        if (c == close) break;
        throw TemplateError(TemplateError::Kind::unbalanced_bracket, pos_,
                            std::string("unexpected '") + c + "'");
      }
      if (c == '|' && close == '>') break;
      if (c == '(') {
        flush();
        const std::size_t open = pos_++;
        TemplateAst children = sequence(')');
        expect_close(')', open);
        if (children.nodes.empty()) {
          throw TemplateError(TemplateError::Kind::empty_alternative, open, "empty optional part");
        }
        out.nodes.push_back(TemplateNode{Optional{std::move(children)}});
        continue;
      }
      if (c == '<') {
        flush();
        out.nodes.push_back(TemplateNode{grammar_field()});
        continue;
      }
      if (c == '{') {
        flush();
        out.nodes.push_back(TemplateNode{slot()});
        continue;
      }
      literal += c;
      ++pos_;
    }
    flush();
    return out;
  }

  GrammarField grammar_field() {
    const std::size_t open = pos_++;
    GrammarField field;
    while (true) {
      const std::size_t alt_start = pos_;
      TemplateAst alt = sequence('>');
      if (alt.nodes.empty()) {
        throw TemplateError(TemplateError::Kind::empty_alternative, alt_start, "empty grammar-field alternative");
      }
      field.alternatives.push_back(std::move(alt));
      if (pos_ < src_.size() && src_[pos_] == '|') {
        ++pos_;
        continue;
      }
      break;
    }
    expect_close('>', open);
    return field;
  }

  SlotRef slot() {
    const std::size_t open = pos_++;
    std::string body;
    while (pos_ < src_.size() && src_[pos_] != '}') {
      const char c = src_[pos_];
      if (c == '{' || c == '(' || c == '<' || c == ')' || c == '>' || c == '|') {
        throw TemplateError(TemplateError::Kind::bad_slot, pos_, "brackets are not allowed inside a slot");
      }
      if (c == '\\' && pos_ + 1 < src_.size()) {
        body += src_[pos_ + 1];
        pos_ += 2;
        continue;
      }
      body += c;
      ++pos_;
    }
    expect_close('}', open);

    SlotRef ref;
    const auto colon = body.rfind(':');
    if (colon == std::string::npos) {
      ref.slot_name = trim(body);
      ref.surface_hint = ref.slot_name;
    } else {
      ref.surface_hint = trim(std::string_view(body).substr(0, colon));
      ref.slot_name = trim(std::string_view(body).substr(colon + 1));
    }
    if (!is_identifier(ref.slot_name)) {
      throw TemplateError(TemplateError::Kind::bad_slot, open, "slot name '" + ref.slot_name + "' is not an identifier");
    }
    if (!slots_.contains(ref.slot_name)) {
      throw TemplateError(TemplateError::Kind::unknown_slot, open, ref.slot_name);
    }
    return ref;
  }

  void expect_close(char close, std::size_t open) {
    if (pos_ >= src_.size() || src_[pos_] != close) {
      throw TemplateError(TemplateError::Kind::unbalanced_bracket, open,
                          std::string("missing '") + close + "'");
    }
    ++pos_;
  }

  std::string_view src_;
  const std::set<std::string>& slots_;
  std::size_t pos_ = 0;
};

std::string escape_literal(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '(' || c == ')' || c == '<' || c == '>' || c == '{' || c == '}' || c == '|' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

void render(const TemplateAst& ast, std::string& out) {
  bool first = true;
  for (const auto& node : ast.nodes) {
    if (!first) out += ' ';
    first = false;
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Literal>) {
            out += escape_literal(n.text);
          } else if constexpr (std::is_same_v<T, Optional>) {
            out += '(';
            render(n.children, out);
            out += ')';
          } else if constexpr (std::is_same_v<T, GrammarField>) {
            out += '<';
            for (std::size_t i = 0; i < n.alternatives.size(); ++i) {
              if (i) out += '|';
              render(n.alternatives[i], out);
            }
            out += '>';
          } else {
            out += '{';
            if (n.surface_hint != n.slot_name) out += escape_literal(n.surface_hint) + ':';
            out += n.slot_name;
            out += '}';
          }
        },
        node.value);
  }
}

void collect_slots(const TemplateAst& ast, std::vector<std::string>& out) {
  for (const auto& node : ast.nodes) {
    if (const auto* slot = std::get_if<SlotRef>(&node.value)) {
      if (std::find(out.begin(), out.end(), slot->slot_name) == out.end()) out.push_back(slot->slot_name);
    } else if (const auto* opt = std::get_if<Optional>(&node.value)) {
      collect_slots(opt->children, out);
    } else if (const auto* field = std::get_if<GrammarField>(&node.value)) {
      for (const auto& alt : field->alternatives) collect_slots(alt, out);
    }
  }
}

}  // namespace

TemplateError::TemplateError(Kind kind, std::size_t position, std::string detail)
    : std::runtime_error(std::string(kind_name(kind)) + " at " + std::to_string(position) + ": " + detail),
      kind_(kind),
      position_(position),
      detail_(std::move(detail)) {}

TemplateAst parse_template(std::string_view source, const std::set<std::string>& declared_slots) {
  if (trim(source).empty()) throw TemplateError(TemplateError::Kind::empty_template, 0, "template source is empty");
  TemplateAst ast = Parser(source, declared_slots).parse();
  if (ast.nodes.empty()) throw TemplateError(TemplateError::Kind::empty_template, 0, "template has no content");
  return ast;
}

std::string to_source(const TemplateAst& ast) {
  std::string out;
  render(ast, out);
  return out;
}

std::vector<std::string> referenced_slots(const TemplateAst& ast) {
  std::vector<std::string> out;
  collect_slots(ast, out);
  return out;
}

bool is_identifier(std::string_view text) {
  if (text.empty()) return false;
  const auto head = static_cast<unsigned char>(text.front());
  if (!std::isalpha(head) && head != '_') return false;
  return std::all_of(text.begin(), text.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u == '_';
  });
}

}  // namespace miron::core
