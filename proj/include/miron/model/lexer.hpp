#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace miron::model {

/// Error in a model or scenario document, with its 1-based line.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct Token {
  enum class Kind { identifier, number, string, symbol, newline, end };

  Kind kind = Kind::end;
  std::string text;
  int line = 0;

  bool is(std::string_view word) const { return (kind == Kind::identifier || kind == Kind::symbol) && text == word; }
};

/// Tokenizes the structured-text family shared by model and scenario files. `#` starts a
/// comment; strings are double quoted with `\"`, `\\`, `\n` escapes.
std::vector<Token> tokenize(std::string_view source);

/// Cursor over a token stream with the usual expect/accept helpers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == Token::Kind::end; }
  bool accept(std::string_view word);
  void expect(std::string_view word);
  std::string identifier(std::string_view what);
  std::string string_literal(std::string_view what);
  long long integer(std::string_view what);
  /// Consumes the end of a statement (one or more newlines, or the end of input).
  void end_statement();
  void skip_newlines();
  int line() const { return peek().line; }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string quote(std::string_view text);

}  // namespace miron::model
