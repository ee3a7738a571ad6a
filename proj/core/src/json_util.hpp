#pragma once

// JSON helpers shared by the loaders and dumpers.  Not installed.

#include <algorithm>
#include <istream>
#include <iterator>
#include <nlohmann/json.hpp>
#include <string>

#include "discocirc/errors.hpp"
#include "discocirc/pregroup.hpp"

namespace discocirc::detail {

using json = nlohmann::ordered_json;

[[noreturn]] inline void bad(const std::string& where, const std::string& what) {
  throw FormatError(where + ": " + what);
}

inline SimpleType simple_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_number_integer())
    bad(where, "expected [base, z] pair");
  try {
    return SimpleType{parse_base(j[0].get<std::string>()), j[1].get<int>()};
  } catch (const FormatError& e) {
    bad(where, e.what());
  }
}

inline PregroupType type_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array of [base, z] pairs");
  PregroupType t;
  for (std::size_t i = 0; i < j.size(); ++i)
    t.factors.push_back(simple_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return t;
}

inline json type_to_json(const PregroupType& t) {
  json arr = json::array();
  for (const auto& f : t.factors) arr.push_back(json::array({std::string(base_name(f.base)), f.z}));
  return arr;
}

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line number.
    std::size_t line = 1 + static_cast<std::size_t>(
                               std::count(text.begin(),
                                          text.begin() + static_cast<std::ptrdiff_t>(
                                                             std::min(e.byte, text.size())),
                                          '\n'));
    throw FormatError("line " + std::to_string(line) + ": " + e.what());
  }
}

inline std::string slurp(std::istream& in) {
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}


/// Reads a JSON document from `in`; parse errors become FormatError with a line number.
inline json read_json(std::istream& in) { return parse_json(slurp(in)); }

}  // namespace discocirc::detail

namespace discocirc {
struct DiagramElement;
namespace detail {
/// Defined with the diagram types; shared by every dumper of diagrams.
nlohmann::ordered_json element_to_json(const DiagramElement& e);
DiagramElement element_from_json(const nlohmann::ordered_json& j, const std::string& where);
}  // namespace detail
}  // namespace discocirc
