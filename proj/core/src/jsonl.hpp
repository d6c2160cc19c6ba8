#pragma once

// Shared helpers for the line-oriented JSON record formats.

#include <cstddef>
#include <initializer_list>
#include <istream>
#include <string>
#include <string_view>

#include "json.hpp"
#include "statecap/errors.hpp"
#include "statecap/model.hpp"

namespace statecap::detail {

using Json = nlohmann::ordered_json;

/// Calls fn(line_number, record) for every non-blank line.
template <typename Fn>
void for_each_record(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Json record;
    try {
      record = Json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!record.is_object()) throw ParseError(line_no, "record must be a JSON object");
    fn(line_no, record);
  }
}

inline void require_known_fields(std::size_t line_no, const Json& record,
                                 std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : record.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ParseError(line_no, "unknown field '" + key + "'");
  }
}

inline const Json& require_field(std::size_t line_no, const Json& record, const char* name) {
  auto it = record.find(name);
  if (it == record.end()) throw ParseError(line_no, std::string("missing field '") + name + "'");
  return *it;
}

inline std::string get_string(std::size_t line_no, const Json& record, const char* name) {
  const Json& v = require_field(line_no, record, name);
  if (!v.is_string()) throw ParseError(line_no, std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

inline double get_number(std::size_t line_no, const Json& v, const char* name) {
  if (!v.is_number()) throw ParseError(line_no, std::string("field '") + name + "' must be a number");
  return v.get<double>();
}

inline double get_number_field(std::size_t line_no, const Json& record, const char* name) {
  return get_number(line_no, require_field(line_no, record, name), name);
}

inline FrameIndex get_integer(std::size_t line_no, const Json& v, const char* name) {
  if (!v.is_number_integer()) {
    throw ParseError(line_no, std::string("field '") + name + "' must be an integer");
  }
  return v.get<FrameIndex>();
}

inline FrameIndex get_integer_field(std::size_t line_no, const Json& record, const char* name) {
  return get_integer(line_no, require_field(line_no, record, name), name);
}

inline bool get_bool(std::size_t line_no, const Json& v, const char* name) {
  if (!v.is_boolean()) throw ParseError(line_no, std::string("field '") + name + "' must be a boolean");
  return v.get<bool>();
}

inline void write_record(std::ostream& out, const Json& record) {
  out << record.dump() << '\n';
}

/// Rethrows a ValidationError/ConflictError raised while handling a record
/// with the line number prepended, preserving its type.
template <typename Fn>
void with_line_context(std::size_t line_no, Fn&& fn) {
  const std::string prefix = "line " + std::to_string(line_no) + ": ";
  try {
    fn();
  } catch (const ValidationError& e) {
    throw ValidationError(prefix + e.what());
  } catch (const ConflictError& e) {
    throw ConflictError(prefix + e.what());
  } catch (const BoundsError& e) {
    throw ValidationError(prefix + e.what());
  } catch (const DomainError& e) {
    throw ValidationError(prefix + e.what());
  }
}

}  // namespace statecap::detail
