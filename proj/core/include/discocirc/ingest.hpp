#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "discocirc/pregroup.hpp"

namespace discocirc {

/// A (sentence, token) position in a document.
struct Mention {
  int sentence = 0;
  int token = 0;

  friend auto operator<=>(const Mention&, const Mention&) = default;
};

using Chain = std::vector<Mention>;

/// Coreference chains.  Chains are disjoint and each is sorted.
struct CorefMap {
  std::vector<Chain> chains;

  /// Index of the chain containing `m`, if any.
  std::optional<int> chain_of(Mention m) const;
  std::size_t mention_count() const;
  /// Sorts mentions within chains and checks disjointness; throws FormatError.
  void normalize();

  friend bool operator==(const CorefMap&, const CorefMap&) = default;
};

struct Document {
  std::vector<PregroupDiagram> sentences;
  CorefMap corefs;
  std::string text;

  friend bool operator==(const Document&, const Document&) = default;
};

struct Agreement {
  std::string gender;  // empty = unspecified
  std::string number;

  friend bool operator==(const Agreement&, const Agreement&) = default;
};

struct LexiconEntry {
  std::vector<PregroupType> types;
  std::optional<Agreement> features;
  std::optional<bool> is_noun;
};

/// Word -> candidate types, plus agreement features for pronoun resolution.
class Lexicon {
 public:
  void add(const std::string& word, PregroupType type);
  void set_features(const std::string& word, Agreement features);
  void set_noun(const std::string& word, bool is_noun);
  void add_pronoun(const std::string& word, Agreement features);

  /// Lookup is case-insensitive; keys are stored lowercased.
  const LexiconEntry* find(const std::string& word) const;
  bool is_pronoun(const std::string& word) const;
  std::optional<Agreement> pronoun_features(const std::string& word) const;
  /// Explicit noun tag if present.
  std::optional<bool> noun_tag(const std::string& word) const;
  std::optional<Agreement> features(const std::string& word) const;

  std::size_t size() const { return entries_.size(); }

  /// Small English lexicon covering the bundled fixtures and demo corpora.
  static Lexicon standard();

 private:
  std::map<std::string, LexiconEntry> entries_;
  std::map<std::string, Agreement> pronouns_;
};

std::string lowercase(std::string s);

// Interchange format --------------------------------------------------------

Document load_document(std::istream& in);
Document load_document_file(const std::string& path);
Document parse_document(const std::string& json_text);
void save_document(const Document& doc, std::ostream& out);
std::string document_to_json(const Document& doc);

/// Lexicon JSON: {"word": [[["n",0]], ...]} or
/// {"word": {"types": [...], "features": {"gender": "...", "number": "..."},
///           "is_noun": true, "pronoun": false}}.
Lexicon load_lexicon(std::istream& in);
Lexicon load_lexicon_file(const std::string& path);

/// Throws FormatError when a mention points outside the document.
void check_document(const Document& doc);

// Mini parser ---------------------------------------------------------------

inline constexpr std::size_t kMaxParseTokens = 12;

struct ParseOptions {
  bool all_parses = false;
  std::size_t max_parses = 64;
};

/// Exhaustive search over type assignments (lexicon order) and non-crossing
/// matchings leaving exactly one free `s`; cups are tried shortest span first.
/// Throws NoParse.
PregroupDiagram lexicon_parse(const std::vector<std::string>& tokens, const Lexicon& lex);
std::vector<PregroupDiagram> lexicon_parse_all(const std::vector<std::string>& tokens,
                                               const Lexicon& lex, std::size_t max_parses = 64);

/// Parses whitespace-separated sentences, one per line, then resolves pronouns.
Document parse_text(const std::string& text, const Lexicon& lex,
                    std::vector<std::string>* warnings = nullptr);

// Pronoun resolution ----------------------------------------------------------

struct PronounReport {
  CorefMap corefs;
  /// Pronoun mentions with no compatible antecedent; each is a singleton chain.
  std::vector<Mention> unresolved;
};

/// Nearest compatible preceding noun wins; every noun and pronoun ends up in
/// exactly one chain.
PronounReport resolve_pronouns(const Document& doc, const Lexicon& lex);

/// Tokens whose compound type is exactly `n` and not tagged otherwise by the
/// lexicon; coreference mentions always count.
std::set<Mention> noun_mentions(const Document& doc, const Lexicon* lex = nullptr);

/// Adds a singleton chain for every noun mention not covered by `doc.corefs`.
CorefMap complete_corefs(const Document& doc, const std::set<Mention>& nouns);

}  // namespace discocirc
