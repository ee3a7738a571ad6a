#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace discocirc {

/// Generators of the pregroup.  `t` is the text wire produced by the merge box.
enum class Base { n, s, t };

std::string_view base_name(Base b);
Base parse_base(std::string_view name);  // throws FormatError

enum class Direction { left, right };

/// A generator with an integer adjoint order: -1 is the left adjoint, +1 the
/// right adjoint, 0 the plain type.  Iterated adjoints are representable.
struct SimpleType {
  Base base = Base::n;
  int z = 0;

  friend auto operator<=>(const SimpleType&, const SimpleType&) = default;
};

SimpleType adjoint(SimpleType t, Direction d);

/// True when `a` immediately followed by `b` reduces to the unit.
bool can_contract(SimpleType a, SimpleType b);

/// Ordered product of simple types; the empty product is the monoid unit.
struct PregroupType {
  std::vector<SimpleType> factors;

  PregroupType() = default;
  PregroupType(std::initializer_list<SimpleType> f) : factors(f) {}
  explicit PregroupType(std::vector<SimpleType> f) : factors(std::move(f)) {}

  std::size_t size() const { return factors.size(); }
  bool empty() const { return factors.empty(); }
  const SimpleType& operator[](std::size_t i) const { return factors[i]; }

  friend auto operator<=>(const PregroupType&, const PregroupType&) = default;
  friend bool operator==(const PregroupType&, const PregroupType&) = default;
};

PregroupType concat(const PregroupType& a, const PregroupType& b);

/// Adjoint of a product: (xy)^l = y^l x^l, and likewise for ^r.
PregroupType adjoint(const PregroupType& t, Direction d);

/// "n", "n.r", "s.l.l", products joined by " @ ".  The unit prints as "1".
std::string to_string(SimpleType t);
std::string to_string(const PregroupType& t);
std::ostream& operator<<(std::ostream& os, const PregroupType& t);

/// Convenience constructors used by the builtin lexicon and tests.
namespace types {
inline constexpr SimpleType n{Base::n, 0};
inline constexpr SimpleType s{Base::s, 0};
inline constexpr SimpleType t{Base::t, 0};
inline constexpr SimpleType nl{Base::n, -1};
inline constexpr SimpleType nr{Base::n, 1};
inline constexpr SimpleType sl{Base::s, -1};
inline constexpr SimpleType sr{Base::s, 1};
}  // namespace types

struct Token {
  std::string word;
  PregroupType type;

  friend bool operator==(const Token&, const Token&) = default;
};

/// A wire contraction between two global wire offsets, `left < right`.
struct Cup {
  std::size_t left = 0;
  std::size_t right = 0;

  friend auto operator<=>(const Cup&, const Cup&) = default;
};

/// Sentence-level IR: tokens with compound types and cups over the global wire
/// offsets obtained by concatenating every token's factors left to right.
struct PregroupDiagram {
  std::vector<Token> tokens;
  std::vector<Cup> cups;

  std::size_t wire_count() const;
  /// Global offset of the first factor of each token.
  std::vector<std::size_t> token_offsets() const;
  /// Owning token of every global wire.
  std::vector<std::size_t> wire_owners() const;
  SimpleType wire_type(std::size_t offset) const;

  friend bool operator==(const PregroupDiagram&, const PregroupDiagram&) = default;
};

struct ValidationReport {
  /// Cups that are out of range, reversed, reuse an offset, or join
  /// non-contractible types.
  std::vector<Cup> illegal_cups;
  /// Interleaving cup pairs (i < k < j < l).
  std::vector<std::pair<Cup, Cup>> crossings;
  /// Free wires lying under a cup; they cannot reach the output planarly.
  std::vector<std::size_t> enclosed_free_wires;
  std::vector<std::size_t> free_wires;
  PregroupType free_type;

  bool valid() const {
    return illegal_cups.empty() && crossings.empty() && enclosed_free_wires.empty();
  }
  std::string describe() const;
};

ValidationReport validate_diagram(const PregroupDiagram& d);

/// Free-wire types of a valid diagram.  Throws InvalidDiagram otherwise.
PregroupType reduce(const PregroupDiagram& d);

inline bool is_sentence(const PregroupType& t) {
  return t.size() == 1 && t[0] == types::s;
}

}  // namespace discocirc
