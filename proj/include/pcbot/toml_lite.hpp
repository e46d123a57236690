#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace pcbot::toml {

struct Value;
using Array = std::vector<Value>;

/// Scalars and homogeneous-or-not arrays. Integers are read as doubles.
struct Value {
  std::variant<double, bool, std::string, Array> data;
  int line{0};
};

/// section name ("" for top level) -> key -> value
using Document = std::map<std::string, std::map<std::string, Value>>;

/// Parses the TOML subset used by experiment files: [section] and
/// [section.sub] headers, key = value pairs, decimal numbers (with
/// exponents and underscores), basic strings, booleans, arrays that may
/// span lines, and # comments. Throws ConfigError with a line number.
Document parse(const std::string& text);
Document parse_file(const std::string& path);

}  // namespace pcbot::toml
