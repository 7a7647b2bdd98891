#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "force/error.hpp"

namespace force::io {

inline constexpr std::string_view kFormatHeader = "force-format v1";

struct Token {
  enum Kind { kIdent, kNumber, kPunct, kNewline, kEnd } kind = kEnd;
  std::string text;
  int line = 1;
  int column = 1;

  bool is(std::string_view s) const { return (kind == kPunct || kind == kIdent) && text == s; }
};

// Splits text into identifiers (letters, digits, '_', '-'), numbers and single
// punctuation characters. '#' comments run to the end of the line. Newlines
// are kept as tokens; callers that ignore layout skip them.
inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    i += n;
    col += static_cast<int>(n);
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      out.push_back({Token::kNewline, "\n", line, col});
      ++i, ++line, col = 1;
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
    } else if (c == ' ' || c == '\t' || c == '\r') {
      advance(1);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j < text.size() && (std::isalpha(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        throw ParseError(line, col, "malformed number");
      out.push_back({Token::kNumber, std::string(text.substr(i, j - i)), line, col});
      advance(j - i);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' || text[j] == '-'))
        ++j;
      out.push_back({Token::kIdent, std::string(text.substr(i, j - i)), line, col});
      advance(j - i);
    } else if (std::string_view("():,;.|&~=").find(c) != std::string_view::npos) {
      out.push_back({Token::kPunct, std::string(1, c), line, col});
      advance(1);
    } else {
      throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Token::kEnd, "", line, col});
  return out;
}

// Cursor over a token list. `skip_newlines` makes layout insignificant.
class TokenStream {
 public:
  TokenStream(std::vector<Token> tokens, bool skip_newlines) : tokens_(std::move(tokens)), skip_(skip_newlines) {
    settle();
  }

  const Token& peek() const { return tokens_[pos_]; }
  // Token after the current one, honouring newline skipping.
  const Token& peek2() const {
    std::size_t p = pos_ + 1;
    while (skip_ && p < tokens_.size() && tokens_[p].kind == Token::kNewline) ++p;
    return tokens_[std::min(p, tokens_.size() - 1)];
  }
  bool at_end() const { return peek().kind == Token::kEnd; }

  Token next() {
    Token t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    settle();
    return t;
  }

  bool accept(std::string_view s) {
    if (!peek().is(s)) return false;
    next();
    return true;
  }

  Token expect(std::string_view s) {
    if (!peek().is(s)) fail("expected '" + std::string(s) + "'");
    return next();
  }

  Token expect_ident(std::string_view what) {
    if (peek().kind != Token::kIdent) fail("expected " + std::string(what));
    return next();
  }

  long long expect_number(std::string_view what) {
    if (peek().kind != Token::kNumber) fail("expected " + std::string(what));
    const Token t = next();
    if (t.text.size() > 9) throw ParseError(t.line, t.column, "number too large");
    return std::stoll(t.text);
  }

  void expect_newline() {
    if (peek().kind == Token::kEnd) return;
    if (peek().kind != Token::kNewline) fail("expected end of line");
    next();
  }

  void skip_blank_lines() {
    while (peek().kind == Token::kNewline) next();
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string found = t.kind == Token::kEnd ? "end of input" : t.kind == Token::kNewline ? "end of line" : "'" + t.text + "'";
    throw ParseError(t.line, t.column, msg + ", found " + found);
  }

 private:
  void settle() {
    while (skip_ && tokens_[pos_].kind == Token::kNewline) ++pos_;
  }

  std::vector<Token> tokens_;
  bool skip_;
  std::size_t pos_ = 0;
};

// Drops an optional leading version line; any other version is an error.
inline std::string_view strip_header(std::string_view text, bool required) {
  std::size_t start = 0;
  int line = 1;
  // Leading blank and comment lines do not count.
  for (;;) {
    std::size_t eol = text.find('\n', start);
    std::string_view l = text.substr(start, eol == std::string_view::npos ? std::string_view::npos : eol - start);
    std::size_t first = l.find_first_not_of(" \t\r");
    if (first != std::string_view::npos && l[first] != '#') break;
    if (eol == std::string_view::npos) {
      start = text.size();
      break;
    }
    start = eol + 1;
    ++line;
  }
  std::string_view rest = text.substr(start);
  if (rest.starts_with("force-format")) {
    std::size_t eol = rest.find('\n');
    std::string_view l = rest.substr(0, eol);
    while (!l.empty() && (l.back() == '\r' || l.back() == ' ' || l.back() == '\t')) l.remove_suffix(1);
    if (l != kFormatHeader) throw ParseError(line, 1, "unsupported format version '" + std::string(l) + "'");
    // Keep the newline so line numbers stay aligned.
    return text.substr(start + (eol == std::string_view::npos ? rest.size() : eol));
  }
  if (required) throw ParseError(line, 1, "missing '" + std::string(kFormatHeader) + "' header");
  return text;
}

// Line numbers shift when a header and leading lines are cut off; counting
// the removed newlines restores them.
inline std::vector<Token> tokenize_body(std::string_view text, bool header_required) {
  std::string_view body = strip_header(text, header_required);
  int removed = 0;
  for (char c : text.substr(0, text.size() - body.size()))
    if (c == '\n') ++removed;
  auto tokens = tokenize(body);
  for (auto& t : tokens) t.line += removed;
  return tokens;
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace force::io
