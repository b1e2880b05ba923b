#include "miron/model/lexer.hpp"

#include <cctype>

namespace miron::model {

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  std::size_t i = 0;
  auto push = [&](Token::Kind kind, std::string text) { out.push_back(Token{kind, std::move(text), line}); };

  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      push(Token::Kind::newline, "\n");
      ++line;
      ++i;
    } else if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '"') {
      const int start_line = line;
      std::string text;
      ++i;
      bool closed = false;
      while (i < src.size()) {
        const char d = src[i];
        if (d == '"') {
          closed = true;
          ++i;
          break;
        }
        if (d == '\n') break;
        if (d == '\\' && i + 1 < src.size()) {
          const char e = src[i + 1];
          text += e == 'n' ? '\n' : e == 't' ? '\t' : e;
          i += 2;
          continue;
        }
        text += d;
        ++i;
      }
      if (!closed) throw SyntaxError(start_line, "unterminated string");
      out.push_back(Token{Token::Kind::string, std::move(text), start_line});
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      push(Token::Kind::identifier, std::string(src.substr(i, j - i)));
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i + 1;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      push(Token::Kind::number, std::string(src.substr(i, j - i)));
      i = j;
    } else if (c == '{' || c == '}' || c == ',' || c == '=' || c == ';') {
      push(Token::Kind::symbol, std::string(1, c));
      ++i;
    } else {
      throw SyntaxError(line, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back(Token{Token::Kind::end, "", line});
  return out;
}

const Token& TokenStream::peek(std::size_t ahead) const {
  const std::size_t i = pos_ + ahead;
  return i < tokens_.size() ? tokens_[i] : tokens_.back();
}

const Token& TokenStream::next() {
  const Token& t = peek();
  if (pos_ < tokens_.size() - 1) ++pos_;
  return t;
}

bool TokenStream::accept(std::string_view word) {
  if (!peek().is(word)) return false;
  next();
  return true;
}

void TokenStream::expect(std::string_view word) {
  if (!accept(word)) {
    const Token& t = peek();
    throw SyntaxError(t.line, "expected '" + std::string(word) + "' but found " +
                                  (t.kind == Token::Kind::newline ? std::string("end of line")
                                   : t.kind == Token::Kind::end   ? std::string("end of input")
                                                                  : "'" + t.text + "'"));
  }
}

std::string TokenStream::identifier(std::string_view what) {
  const Token& t = peek();
  if (t.kind != Token::Kind::identifier) throw SyntaxError(t.line, "expected " + std::string(what));
  return next().text;
}

std::string TokenStream::string_literal(std::string_view what) {
  const Token& t = peek();
  if (t.kind != Token::Kind::string) throw SyntaxError(t.line, "expected " + std::string(what) + " as a quoted string");
  return next().text;
}

long long TokenStream::integer(std::string_view what) {
  const Token& t = peek();
  if (t.kind != Token::Kind::number) throw SyntaxError(t.line, "expected " + std::string(what));
  return std::stoll(next().text);
}

void TokenStream::end_statement() {
  const Token& t = peek();
  if (t.kind == Token::Kind::end) return;
  if (t.is("}")) return;
  if (t.kind != Token::Kind::newline && !t.is(";")) {
    throw SyntaxError(t.line, "unexpected '" + t.text + "' at end of statement");
  }
  skip_newlines();
}

void TokenStream::skip_newlines() {
  while (peek().kind == Token::Kind::newline || peek().is(";")) next();
}

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else if (c == '\t') {
      out += "\\t";
    } else {
      out += c;
    }
  }
  out += '"';
  return out;
}

}  // namespace miron::model
