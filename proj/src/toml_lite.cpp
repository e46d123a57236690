#include "pcbot/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "pcbot/errors.hpp"

namespace pcbot::toml {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  Document run() {
    Document doc;
    doc[""];
    std::string section;
    while (true) {
      skip_blank_lines();
      if (at_end()) break;
      if (peek() == '[') {
        section = header();
        if (doc.count(section) && !doc[section].empty())
          fail("duplicate section [" + section + "]");
        doc[section];
      } else {
        const std::string key = bare_key();
        skip_inline_space();
        expect('=');
        skip_inline_space();
        const int line = line_;
        Value v = value();
        v.line = line;
        auto& table = doc[section];
        if (table.count(key)) fail("duplicate key '" + key + "'");
        table.emplace(key, std::move(v));
      }
      end_of_line();
    }
    return doc;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream msg;
    msg << "config line " << line_ << ": " << what;
    throw ConfigError(msg.str());
  }

  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  char get() {
    const char c = s_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }

  void skip_inline_space() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) get();
  }
  void skip_comment() {
    if (peek() == '#')
      while (!at_end() && peek() != '\n') get();
  }
  // Whitespace, newlines and comments, as allowed inside arrays.
  void skip_all_space() {
    while (!at_end()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        get();
      } else if (c == '#') {
        skip_comment();
      } else {
        break;
      }
    }
  }
  void skip_blank_lines() { skip_all_space(); }

  void end_of_line() {
    skip_inline_space();
    skip_comment();
    if (peek() == '\r') get();
    if (!at_end() && peek() != '\n') fail("unexpected trailing characters");
  }

  static bool key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  }

  std::string bare_key() {
    std::string k;
    while (key_char(peek())) k += get();
    if (k.empty()) fail("expected a key");
    return k;
  }

  std::string header() {
    expect('[');
    skip_inline_space();
    std::string name = bare_key();
    while (peek() == '.') {
      get();
      name += '.';
      name += bare_key();
    }
    skip_inline_space();
    expect(']');
    return name;
  }

  Value value() {
    const char c = peek();
    if (c == '"') return Value{string_value()};
    if (c == '[') return Value{array_value()};
    if (s_.compare(pos_, 4, "true") == 0) {
      pos_ += 4;
      return Value{true};
    }
    if (s_.compare(pos_, 5, "false") == 0) {
      pos_ += 5;
      return Value{false};
    }
    return Value{number_value()};
  }

  std::string string_value() {
    expect('"');
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      const char c = get();
      if (c == '"') break;
      if (c == '\\') {
        const char e = at_end() ? '\0' : get();
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail("unsupported escape sequence");
        }
      } else {
        out += c;
      }
    }
    return out;
  }

  double number_value() {
    std::string token;
    while (!at_end()) {
      const char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.' ||
          c == '_') {
        get();
        if (c != '_') token += c;
      } else {
        break;
      }
    }
    if (token.empty()) fail("expected a value");
    const char* first = token.data();
    if (*first == '+') ++first;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size())
      fail("invalid number '" + token + "'");
    return v;
  }

  Array array_value() {
    expect('[');
    Array out;
    skip_all_space();
    while (peek() != ']') {
      const int line = line_;
      Value v = value();
      v.line = line;
      out.push_back(std::move(v));
      skip_all_space();
      if (peek() == ',') {
        get();
        skip_all_space();
      } else if (peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
    expect(']');
    return out;
  }

  const std::string& s_;
  std::size_t pos_{0};
  int line_{1};
};

}  // namespace

Document parse(const std::string& text) { return Parser(text).run(); }

Document parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

}  // namespace pcbot::toml
