#include "discocirc/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <istream>
#include <iterator>
#include <nlohmann/json.hpp>
#include <sstream>

#include "discocirc/errors.hpp"
#include "json_util.hpp"

namespace discocirc {

using json = nlohmann::ordered_json;
using namespace detail;

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// CorefMap ---------------------------------------------------------------------

std::optional<int> CorefMap::chain_of(Mention m) const {
  for (std::size_t c = 0; c < chains.size(); ++c)
    if (std::binary_search(chains[c].begin(), chains[c].end(), m)) return static_cast<int>(c);
  return std::nullopt;
}

std::size_t CorefMap::mention_count() const {
  std::size_t n = 0;
  for (const auto& c : chains) n += c.size();
  return n;
}

void CorefMap::normalize() {
  std::set<Mention> seen;
  for (auto& c : chains) {
    std::sort(c.begin(), c.end());
    for (const auto& m : c) {
      if (!seen.insert(m).second) {
        throw FormatError("mention (" + std::to_string(m.sentence) + "," +
                          std::to_string(m.token) + ") appears in two chains");
      }
    }
  }
}

// Lexicon ----------------------------------------------------------------------

void Lexicon::add(const std::string& word, PregroupType type) {
  if (type.empty()) throw FormatError("lexicon entry '" + word + "' has an empty type");
  entries_[lowercase(word)].types.push_back(std::move(type));
}

void Lexicon::set_features(const std::string& word, Agreement features) {
  entries_[lowercase(word)].features = std::move(features);
}

void Lexicon::set_noun(const std::string& word, bool is_noun) {
  entries_[lowercase(word)].is_noun = is_noun;
}

void Lexicon::add_pronoun(const std::string& word, Agreement features) {
  pronouns_[lowercase(word)] = std::move(features);
}

const LexiconEntry* Lexicon::find(const std::string& word) const {
  auto it = entries_.find(lowercase(word));
  return it == entries_.end() ? nullptr : &it->second;
}

bool Lexicon::is_pronoun(const std::string& word) const {
  return pronouns_.count(lowercase(word)) != 0;
}

std::optional<Agreement> Lexicon::pronoun_features(const std::string& word) const {
  auto it = pronouns_.find(lowercase(word));
  if (it == pronouns_.end()) return std::nullopt;
  return it->second;
}

std::optional<bool> Lexicon::noun_tag(const std::string& word) const {
  const auto* e = find(word);
  return e ? e->is_noun : std::nullopt;
}

std::optional<Agreement> Lexicon::features(const std::string& word) const {
  const auto* e = find(word);
  return e ? e->features : std::nullopt;
}

Lexicon Lexicon::standard() {
  using namespace types;
  Lexicon lex;
  const PregroupType noun{n};
  const PregroupType transitive{nr, s, nl};
  const PregroupType intransitive{nr, s};
  const PregroupType modifier{n, nl};
  const PregroupType sentence_prep{sr, s, nl};

  auto nouns = [&](std::initializer_list<const char*> words, const char* gender) {
    for (const char* w : words) {
      lex.add(w, noun);
      lex.set_noun(w, true);
      lex.set_features(w, Agreement{gender, ""});
    }
  };
  nouns({"alice", "woman", "girl", "mary"}, "fem");
  nouns({"bob", "man", "boy", "john", "chef"}, "masc");
  nouns({"programmer", "person", "student", "teacher", "friend"}, "");
  nouns({"books", "book", "bikes", "bike", "map", "clues", "treasure", "basket", "groceries",
         "music", "piano", "dog", "cat", "lunch", "dinner", "meal", "meals", "recipes",
         "recipe", "soup", "bread", "cake", "kitchen", "program", "code", "software", "bugs",
         "problems", "computer", "laptop", "server", "database", "app", "apps", "class",
         "park", "garden", "house", "letter", "song", "river", "tree", "sauce", "pasta"},
        "neut");

  for (const char* w : {"reads", "read", "loves", "found", "followed", "bought", "has", "puts",
                        "led", "likes", "plays", "saw", "prepares", "cooks", "bakes", "eats",
                        "tastes", "enjoys", "serves", "writes", "fixes", "debugs", "tests",
                        "builds", "runs", "solves", "deploys", "codes", "wants", "needs",
                        "is", "makes", "uses", "loved", "rode", "sees", "visits", "hates"})
    lex.add(w, transitive);
  for (const char* w : {"reads", "runs", "led", "plays", "sleeps", "barks", "sings", "dances", "smiles",
                        "works", "cooks", "codes", "eats", "laughs"})
    lex.add(w, intransitive);
  for (const char* w : {"a", "an", "the", "her", "his", "its", "their", "my", "fast", "blue",
                        "large", "big", "small", "red", "beautiful", "tasty", "fresh", "hot",
                        "sweet", "spicy", "efficient", "new", "hard", "clean", "good", "great",
                        "old", "slow", "buggy", "secure", "modern", "delicious",
                        "healthy", "quick", "complex", "simple", "digital", "green"})
    lex.add(w, modifier);
  for (const char* w : {"to", "in", "on", "with", "at", "from"}) lex.add(w, sentence_prep);
  lex.add("quickly", PregroupType{sr, s});
  lex.add("often", PregroupType{sr, s});
  lex.add("today", PregroupType{sr, s});

  const std::pair<const char*, Agreement> pronouns[] = {
      {"she", {"fem", "sg"}},     {"her", {"fem", "sg"}},   {"herself", {"fem", "sg"}},
      {"he", {"masc", "sg"}},     {"him", {"masc", "sg"}},  {"himself", {"masc", "sg"}},
      {"it", {"neut", "sg"}},     {"itself", {"neut", "sg"}}, {"they", {"", "pl"}},
      {"them", {"", "pl"}},       {"themselves", {"", "pl"}}};
  for (const auto& [w, f] : pronouns) {
    lex.add_pronoun(w, f);
    lex.add(w, noun);
  }
  return lex;
}

// JSON helpers -----------------------------------------------------------------

Document parse_document(const std::string& json_text) {
  const json root = parse_json(json_text);
  if (!root.is_object()) bad("document", "expected a JSON object");
  Document doc;
  if (root.contains("text")) {
    if (!root["text"].is_string()) bad("text", "expected a string");
    doc.text = root["text"].get<std::string>();
  }
  const json sentences = root.value("sentences", json::array());
  if (!sentences.is_array()) bad("sentences", "expected an array");
  for (std::size_t si = 0; si < sentences.size(); ++si) {
    const std::string where = "sentences[" + std::to_string(si) + "]";
    const json& js = sentences[si];
    if (!js.is_object()) bad(where, "expected an object");
    if (!js.contains("tokens") || !js["tokens"].is_array()) bad(where + ".tokens", "missing array");
    if (!js.contains("types") || !js["types"].is_array()) bad(where + ".types", "missing array");
    const json& toks = js["tokens"];
    const json& tys = js["types"];
    if (toks.size() != tys.size()) bad(where, "tokens and types differ in length");
    PregroupDiagram d;
    for (std::size_t ti = 0; ti < toks.size(); ++ti) {
      if (!toks[ti].is_string()) bad(where + ".tokens[" + std::to_string(ti) + "]", "expected string");
      d.tokens.push_back(Token{toks[ti].get<std::string>(),
                               type_from_json(tys[ti], where + ".types[" + std::to_string(ti) + "]")});
    }
    const json cups = js.value("cups", json::array());
    for (std::size_t ci = 0; ci < cups.size(); ++ci) {
      const json& c = cups[ci];
      if (!c.is_array() || c.size() != 2 || !c[0].is_number_unsigned() || !c[1].is_number_unsigned())
        bad(where + ".cups[" + std::to_string(ci) + "]", "expected [i, j] with i, j >= 0");
      d.cups.push_back(Cup{c[0].get<std::size_t>(), c[1].get<std::size_t>()});
    }
    auto report = validate_diagram(d);
    if (!report.valid()) throw InvalidDiagram(where + ": " + report.describe());
    doc.sentences.push_back(std::move(d));
  }
  const json corefs = root.value("corefs", json::array());
  if (!corefs.is_array()) bad("corefs", "expected an array");
  for (std::size_t ci = 0; ci < corefs.size(); ++ci) {
    const std::string where = "corefs[" + std::to_string(ci) + "]";
    if (!corefs[ci].is_array()) bad(where, "expected an array of mentions");
    Chain chain;
    for (std::size_t mi = 0; mi < corefs[ci].size(); ++mi) {
      const json& m = corefs[ci][mi];
      if (!m.is_array() || m.size() != 2 || !m[0].is_number_integer() || !m[1].is_number_integer())
        bad(where + "[" + std::to_string(mi) + "]", "expected [sentence, token]");
      chain.push_back(Mention{m[0].get<int>(), m[1].get<int>()});
    }
    doc.corefs.chains.push_back(std::move(chain));
  }
  doc.corefs.normalize();
  check_document(doc);
  return doc;
}

Document load_document(std::istream& in) { return parse_document(slurp(in)); }

Document load_document_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path + ": cannot open file");
  try {
    return load_document(in);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

std::string document_to_json(const Document& doc) {
  json root = json::object();
  json sentences = json::array();
  for (const auto& d : doc.sentences) {
    json js = json::object();
    json toks = json::array();
    json tys = json::array();
    for (const auto& t : d.tokens) {
      toks.push_back(t.word);
      tys.push_back(type_to_json(t.type));
    }
    json cups = json::array();
    for (const auto& c : d.cups) cups.push_back(json::array({c.left, c.right}));
    js["tokens"] = std::move(toks);
    js["types"] = std::move(tys);
    js["cups"] = std::move(cups);
    sentences.push_back(std::move(js));
  }
  root["sentences"] = std::move(sentences);
  json corefs = json::array();
  for (const auto& chain : doc.corefs.chains) {
    json jc = json::array();
    for (const auto& m : chain) jc.push_back(json::array({m.sentence, m.token}));
    corefs.push_back(std::move(jc));
  }
  root["corefs"] = std::move(corefs);
  if (!doc.text.empty()) root["text"] = doc.text;
  return root.dump(2) + "\n";
}

void save_document(const Document& doc, std::ostream& out) { out << document_to_json(doc); }

void check_document(const Document& doc) {
  for (const auto& chain : doc.corefs.chains) {
    for (const auto& m : chain) {
      const bool ok = m.sentence >= 0 && m.sentence < static_cast<int>(doc.sentences.size()) &&
                      m.token >= 0 &&
                      m.token < static_cast<int>(doc.sentences[m.sentence].tokens.size());
      if (!ok)
        throw FormatError("corefs: mention (" + std::to_string(m.sentence) + "," +
                          std::to_string(m.token) + ") does not name a token");
    }
  }
}

Lexicon load_lexicon(std::istream& in) {
  const json root = parse_json(slurp(in));
  if (!root.is_object()) bad("lexicon", "expected a JSON object");
  Lexicon lex;
  for (const auto& [word, entry] : root.items()) {
    const std::string where = "lexicon." + word;
    json types_json;
    if (entry.is_array()) {
      types_json = entry;
    } else if (entry.is_object()) {
      types_json = entry.value("types", json::array());
      if (entry.contains("features")) {
        const json& f = entry["features"];
        if (!f.is_object()) bad(where + ".features", "expected an object");
        Agreement a{f.value("gender", std::string()), f.value("number", std::string())};
        if (entry.value("pronoun", false))
          lex.add_pronoun(word, a);
        else
          lex.set_features(word, a);
      } else if (entry.value("pronoun", false)) {
        lex.add_pronoun(word, Agreement{});
      }
      if (entry.contains("is_noun")) {
        if (!entry["is_noun"].is_boolean()) bad(where + ".is_noun", "expected a boolean");
        lex.set_noun(word, entry["is_noun"].get<bool>());
      }
    } else {
      bad(where, "expected a type list or an object");
    }
    for (std::size_t i = 0; i < types_json.size(); ++i)
      lex.add(word, type_from_json(types_json[i], where + "[" + std::to_string(i) + "]"));
    if (types_json.empty()) bad(where, "no types");
  }
  return lex;
}

Lexicon load_lexicon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path + ": cannot open file");
  return load_lexicon(in);
}

// Mini parser ------------------------------------------------------------------

namespace {

class Matcher {
 public:
  Matcher(std::vector<SimpleType> wires, std::vector<std::size_t> owners)
      : wires_(std::move(wires)), owners_(std::move(owners)), m_(wires_.size()),
        memo_(m_ * (m_ + 1), -1) {}

  /// Appends up to `limit` complete matchings (one free `s`) to `out`.
  void solve(std::size_t limit, std::vector<std::vector<Cup>>& out) {
    std::vector<Cup> acc;
    top(0, false, limit, acc, out);
  }

 private:
  bool pairable(std::size_t i, std::size_t j) const {
    return owners_[i] != owners_[j] && can_contract(wires_[i], wires_[j]);
  }

  bool perfect(std::size_t a, std::size_t b) {
    if (a >= b) return a == b;
    if ((b - a) % 2) return false;
    int& slot = memo_[a * (m_ + 1) + b];
    if (slot >= 0) return slot;
    bool ok = false;
    for (std::size_t j = a + 1; j < b && !ok; j += 2)
      ok = pairable(a, j) && perfect(a + 1, j) && perfect(j + 1, b);
    slot = ok;
    return ok;
  }

  // Enumerates perfect matchings of [a, b), calling `k` with each.
  bool each_perfect(std::size_t a, std::size_t b, std::vector<Cup>& acc,
                    const std::function<bool()>& k) {
    if (a == b) return k();
    for (std::size_t j = a + 1; j < b; j += 2) {
      if (!pairable(a, j) || !perfect(a + 1, j) || !perfect(j + 1, b)) continue;
      acc.push_back(Cup{a, j});
      const bool stop = each_perfect(a + 1, j, acc, [&] { return each_perfect(j + 1, b, acc, k); });
      acc.pop_back();
      if (stop) return true;
    }
    return false;
  }

  bool top(std::size_t i, bool free_used, std::size_t limit, std::vector<Cup>& acc,
           std::vector<std::vector<Cup>>& out) {
    if (i == m_) {
      if (!free_used) return false;
      auto cups = acc;
      std::sort(cups.begin(), cups.end());
      out.push_back(std::move(cups));
      return out.size() >= limit;
    }
    for (std::size_t j = i + 1; j < m_; ++j) {
      if (!pairable(i, j) || !perfect(i + 1, j)) continue;
      acc.push_back(Cup{i, j});
      const bool stop =
          each_perfect(i + 1, j, acc, [&] { return top(j + 1, free_used, limit, acc, out); });
      acc.pop_back();
      if (stop) return true;
    }
    if (!free_used && wires_[i] == types::s) return top(i + 1, true, limit, acc, out);
    return false;
  }

  std::vector<SimpleType> wires_;
  std::vector<std::size_t> owners_;
  std::size_t m_;
  std::vector<int> memo_;
};

}  // namespace

std::vector<PregroupDiagram> lexicon_parse_all(const std::vector<std::string>& tokens,
                                               const Lexicon& lex, std::size_t max_parses) {
  if (tokens.empty()) throw NoParse("empty sentence");
  if (tokens.size() > kMaxParseTokens)
    throw NoParse("sentence has " + std::to_string(tokens.size()) + " tokens; the mini parser caps at " +
                  std::to_string(kMaxParseTokens));
  std::vector<const LexiconEntry*> entries;
  for (const auto& t : tokens) {
    const auto* e = lex.find(t);
    if (!e || e->types.empty()) throw NoParse("no lexicon entry for '" + t + "'");
    entries.push_back(e);
  }

  std::vector<PregroupDiagram> found;
  std::vector<std::size_t> choice(tokens.size(), 0);
  while (true) {
    PregroupDiagram d;
    std::vector<SimpleType> wires;
    std::vector<std::size_t> owners;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const auto& ty = entries[i]->types[choice[i]];
      d.tokens.push_back(Token{tokens[i], ty});
      wires.insert(wires.end(), ty.factors.begin(), ty.factors.end());
      owners.insert(owners.end(), ty.size(), i);
    }
    if (wires.size() % 2 == 1) {
      Matcher matcher(std::move(wires), std::move(owners));
      std::vector<std::vector<Cup>> solutions;
      matcher.solve(max_parses - found.size(), solutions);
      for (auto& cups : solutions) {
        d.cups = std::move(cups);
        found.push_back(d);
      }
      if (found.size() >= max_parses) break;
    }
    // Odometer over type choices; the last token varies fastest.
    bool advanced = false;
    for (std::size_t k = tokens.size(); k-- > 0;) {
      if (++choice[k] < entries[k]->types.size()) {
        advanced = true;
        break;
      }
      choice[k] = 0;
    }
    if (!advanced) break;
  }
  if (found.empty()) throw NoParse("no type assignment reduces to s");
  return found;
}

PregroupDiagram lexicon_parse(const std::vector<std::string>& tokens, const Lexicon& lex) {
  return lexicon_parse_all(tokens, lex, 1).front();
}

Document parse_text(const std::string& text, const Lexicon& lex,
                    std::vector<std::string>* warnings) {
  Document doc;
  doc.text = text;
  std::istringstream lines(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    std::istringstream words(line);
    std::vector<std::string> tokens{std::istream_iterator<std::string>(words),
                                    std::istream_iterator<std::string>()};
    if (tokens.empty()) continue;
    try {
      doc.sentences.push_back(lexicon_parse(tokens, lex));
    } catch (const NoParse& e) {
      throw NoParse("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  auto report = resolve_pronouns(doc, lex);
  doc.corefs = std::move(report.corefs);
  if (warnings) {
    for (const auto& m : report.unresolved)
      warnings->push_back("UnresolvedPronoun: '" + doc.sentences[m.sentence].tokens[m.token].word +
                          "' at (" + std::to_string(m.sentence) + "," + std::to_string(m.token) +
                          ")");
  }
  return doc;
}

// Pronoun resolution -------------------------------------------------------------

namespace {

bool is_noun_type(const PregroupType& t) { return t.size() == 1 && t[0] == types::n; }

bool agrees(const Agreement& pronoun, const Agreement& noun) {
  const std::string noun_gender = noun.gender.empty() ? "neut" : noun.gender;
  if (!pronoun.gender.empty() && pronoun.gender != noun_gender) return false;
  if (!pronoun.number.empty() && !noun.number.empty() && pronoun.number != noun.number) return false;
  return true;
}

}  // namespace

PronounReport resolve_pronouns(const Document& doc, const Lexicon& lex) {
  PronounReport report;
  struct Antecedent {
    Mention at;
    Agreement features;
    int chain;
  };
  std::vector<Antecedent> antecedents;  // nouns in reading order
  for (int si = 0; si < static_cast<int>(doc.sentences.size()); ++si) {
    const auto& d = doc.sentences[si];
    for (int ti = 0; ti < static_cast<int>(d.tokens.size()); ++ti) {
      const auto& tok = d.tokens[ti];
      if (!is_noun_type(tok.type)) continue;
      const Mention here{si, ti};
      if (auto pf = lex.pronoun_features(tok.word)) {
        auto it = std::find_if(antecedents.rbegin(), antecedents.rend(),
                               [&](const Antecedent& a) { return agrees(*pf, a.features); });
        if (it != antecedents.rend()) {
          report.corefs.chains[it->chain].push_back(here);
        } else {
          report.unresolved.push_back(here);
          report.corefs.chains.push_back({here});
        }
        continue;
      }
      if (lex.noun_tag(tok.word) == false) continue;
      antecedents.push_back(Antecedent{here, lex.features(tok.word).value_or(Agreement{}),
                                       static_cast<int>(report.corefs.chains.size())});
      report.corefs.chains.push_back({here});
    }
  }
  return report;
}

std::set<Mention> noun_mentions(const Document& doc, const Lexicon* lex) {
  std::set<Mention> out;
  for (int si = 0; si < static_cast<int>(doc.sentences.size()); ++si) {
    const auto& d = doc.sentences[si];
    for (int ti = 0; ti < static_cast<int>(d.tokens.size()); ++ti) {
      if (!is_noun_type(d.tokens[ti].type)) continue;
      if (lex && lex->noun_tag(d.tokens[ti].word) == false) continue;
      out.insert(Mention{si, ti});
    }
  }
  for (const auto& chain : doc.corefs.chains) out.insert(chain.begin(), chain.end());
  return out;
}

CorefMap complete_corefs(const Document& doc, const std::set<Mention>& nouns) {
  CorefMap out = doc.corefs;
  std::set<Mention> covered;
  for (const auto& c : out.chains) covered.insert(c.begin(), c.end());
  for (const auto& m : nouns)
    if (!covered.count(m)) out.chains.push_back({m});
  return out;
}

}  // namespace discocirc
