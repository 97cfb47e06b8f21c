#pragma once

// Line tokenizer shared by the scene and protocol readers.

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "taunav/error.hpp"

namespace taunav::text {

struct Token {
  std::string text;
  int column{0};  // 1-based
};

/// Splits on whitespace, commas and parentheses. Parentheses are kept as
/// their own tokens, commas are dropped, '#' starts a comment.
inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      ++i;
      continue;
    }
    if (c == '(' || c == ')') {
      out.push_back({std::string(1, c), static_cast<int>(i + 1)});
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size()) {
      const char d = line[i];
      if (std::isspace(static_cast<unsigned char>(d)) || d == ',' || d == '(' || d == ')' ||
          d == '#')
        break;
      ++i;
    }
    out.push_back({std::string(line.substr(start, i - start)), static_cast<int>(start + 1)});
  }
  return out;
}

inline bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'))
      return false;
  }
  return true;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> split_lines(const std::string& content) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : content) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(std::move(cur));
  return lines;
}

/// Cursor over one tokenized line with error reporting.
class LineReader {
 public:
  LineReader(std::string source, int line, std::vector<Token> tokens, int end_column)
      : source_(std::move(source)), line_(line), tokens_(std::move(tokens)), end_(end_column) {}

  bool done() const { return pos_ >= tokens_.size(); }
  const Token& peek() const { return tokens_.at(pos_); }
  int column() const { return done() ? end_ : tokens_[pos_].column; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(source_, line_, column(), msg); }
  [[noreturn]] void fail_at(const Token& t, const std::string& msg) const {
    throw ParseError(source_, line_, t.column, msg);
  }

  const Token& next(const char* what) {
    if (done()) fail(std::string("expected ") + what);
    return tokens_[pos_++];
  }
  std::string identifier(const char* what) {
    const Token& t = next(what);
    if (!is_identifier(t.text)) fail_at(t, std::string("expected ") + what + ", got '" + t.text + "'");
    return t.text;
  }
  double number(const char* what) {
    const Token& t = next(what);
    double v = 0.0;
    if (!parse_double(t.text, v)) fail_at(t, std::string("expected ") + what + ", got '" + t.text + "'");
    return v;
  }
  void expect(const char* literal) {
    const Token& t = next(literal);
    if (t.text != literal) fail_at(t, std::string("expected '") + literal + "', got '" + t.text + "'");
  }
  bool accept(const char* literal) {
    if (!done() && tokens_[pos_].text == literal) {
      ++pos_;
      return true;
    }
    return false;
  }
  void finish() {
    if (!done()) fail("unexpected '" + tokens_[pos_].text + "'");
  }

 private:
  std::string source_;
  int line_;
  std::vector<Token> tokens_;
  int end_;
  std::size_t pos_{0};
};

}  // namespace taunav::text
