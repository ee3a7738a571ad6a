#include "discocirc/pregroup.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "discocirc/errors.hpp"

namespace discocirc {

std::string_view base_name(Base b) {
  switch (b) {
    case Base::n: return "n";
    case Base::s: return "s";
    case Base::t: return "t";
  }
  return "?";
}

Base parse_base(std::string_view name) {
  if (name == "n") return Base::n;
  if (name == "s") return Base::s;
  if (name == "t") return Base::t;
  throw FormatError("unknown base type '" + std::string(name) + "'");
}

SimpleType adjoint(SimpleType t, Direction d) {
  t.z += d == Direction::left ? -1 : 1;
  return t;
}

bool can_contract(SimpleType a, SimpleType b) {
  return a.base == b.base && b.z == a.z + 1;
}

PregroupType concat(const PregroupType& a, const PregroupType& b) {
  PregroupType out = a;
  out.factors.insert(out.factors.end(), b.factors.begin(), b.factors.end());
  return out;
}

PregroupType adjoint(const PregroupType& t, Direction d) {
  PregroupType out;
  out.factors.reserve(t.size());
  for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it)
    out.factors.push_back(adjoint(*it, d));
  return out;
}

std::string to_string(SimpleType t) {
  std::string out(base_name(t.base));
  for (int i = 0; i < t.z; ++i) out += ".r";
  for (int i = 0; i > t.z; --i) out += ".l";
  return out;
}

std::string to_string(const PregroupType& t) {
  if (t.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += " @ ";
    out += to_string(t[i]);
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const PregroupType& t) {
  return os << to_string(t);
}

std::size_t PregroupDiagram::wire_count() const {
  std::size_t n = 0;
  for (const auto& tok : tokens) n += tok.type.size();
  return n;
}

std::vector<std::size_t> PregroupDiagram::token_offsets() const {
  std::vector<std::size_t> out;
  out.reserve(tokens.size());
  std::size_t off = 0;
  for (const auto& tok : tokens) {
    out.push_back(off);
    off += tok.type.size();
  }
  return out;
}

std::vector<std::size_t> PregroupDiagram::wire_owners() const {
  std::vector<std::size_t> out;
  out.reserve(wire_count());
  for (std::size_t i = 0; i < tokens.size(); ++i)
    out.insert(out.end(), tokens[i].type.size(), i);
  return out;
}

SimpleType PregroupDiagram::wire_type(std::size_t offset) const {
  for (const auto& tok : tokens) {
    if (offset < tok.type.size()) return tok.type[offset];
    offset -= tok.type.size();
  }
  throw InvalidDiagram("wire offset out of range");
}

std::string ValidationReport::describe() const {
  std::ostringstream os;
  for (const auto& c : illegal_cups)
    os << "illegal cup (" << c.left << "," << c.right << "); ";
  for (const auto& [a, b] : crossings)
    os << "crossing cups (" << a.left << "," << a.right << ") and (" << b.left << ","
       << b.right << "); ";
  for (auto w : enclosed_free_wires) os << "free wire " << w << " lies under a cup; ";
  return os.str();
}

ValidationReport validate_diagram(const PregroupDiagram& d) {
  ValidationReport report;
  const std::size_t wires = d.wire_count();
  std::vector<SimpleType> wire_types;
  wire_types.reserve(wires);
  for (const auto& tok : d.tokens)
    wire_types.insert(wire_types.end(), tok.type.factors.begin(), tok.type.factors.end());

  std::vector<bool> used(wires, false);
  std::vector<Cup> legal;
  for (const auto& c : d.cups) {
    const bool in_range = c.left < c.right && c.right < wires;
    if (!in_range || used[c.left] || used[c.right] ||
        !can_contract(wire_types[c.left], wire_types[c.right])) {
      report.illegal_cups.push_back(c);
      continue;
    }
    used[c.left] = used[c.right] = true;
    legal.push_back(c);
  }

  std::sort(legal.begin(), legal.end());
  for (std::size_t a = 0; a < legal.size(); ++a) {
    for (std::size_t b = a + 1; b < legal.size(); ++b) {
      if (legal[b].left > legal[a].right) break;
      if (legal[b].right > legal[a].right) report.crossings.emplace_back(legal[a], legal[b]);
    }
  }

  // Nesting depth of every wire position; a free wire must sit at depth zero.
  std::vector<int> delta(wires + 1, 0);
  for (const auto& c : legal) {
    delta[c.left + 1] += 1;
    delta[c.right] -= 1;
  }
  int depth = 0;
  for (std::size_t w = 0; w < wires; ++w) {
    depth += delta[w];
    if (used[w]) continue;
    report.free_wires.push_back(w);
    report.free_type.factors.push_back(wire_types[w]);
    if (depth > 0) report.enclosed_free_wires.push_back(w);
  }
  return report;
}

PregroupType reduce(const PregroupDiagram& d) {
  auto report = validate_diagram(d);
  if (!report.valid()) throw InvalidDiagram(report.describe());
  return report.free_type;
}

}  // namespace discocirc
