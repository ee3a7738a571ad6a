#include "discocirc/rewrite.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>

#include "discocirc/errors.hpp"
#include "json_util.hpp"

namespace discocirc {

using namespace detail;

std::string_view merger_name(WordMerger m) {
  switch (m) {
    case WordMerger::merge: return "merge";
    case WordMerger::first: return "first";
    case WordMerger::last: return "last";
  }
  return "last";
}

WordMerger parse_merger(std::string_view name) {
  if (name == "merge") return WordMerger::merge;
  if (name == "first") return WordMerger::first;
  if (name == "last") return WordMerger::last;
  throw FormatError("unknown word_merger '" + std::string(name) + "'");
}

bool RewriteRule::matches(const PregroupTreeNode& node) const {
  if (std::find(match_types.begin(), match_types.end(), node.out_type) == match_types.end())
    return false;
  return any_word || match_words.count(lowercase(node.word)) > 0;
}

namespace {

struct Walk {
  const RewriteRule& rule;
  int merges = 0;

  // Returns the rewritten node and the number of merges along the chain that
  // ends in it.
  std::pair<PregroupTreeNode, int> run(const PregroupTreeNode& node) {
    PregroupTreeNode out = node;
    std::vector<int> depths;
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      auto [child, depth] = run(node.children[i]);
      out.children[i] = std::move(child);
      depths.push_back(depth);
    }
    if (out.children.size() == 1 && rule.matches(out) &&
        out.children[0].out_type == out.out_type && depths[0] < rule.max_depth) {
      PregroupTreeNode survivor = std::move(out.children[0]);
      switch (rule.word_merger) {
        case WordMerger::merge: survivor.word = node.word + " " + survivor.word; break;
        case WordMerger::first: survivor.word = node.word; break;
        case WordMerger::last: break;
      }
      // The survivor takes over the node's position, including any free wires.
      survivor.free_slots = out.free_slots;
      ++merges;
      return {std::move(survivor), depths[0] + 1};
    }
    return {std::move(out), 0};
  }
};

}  // namespace

RewriteReport rewrite_tree(const PregroupTreeNode& root, const RewriteRule& rule) {
  Walk w{rule};
  auto [tree, depth] = w.run(root);
  return RewriteReport{std::move(tree), w.merges};
}

RewriteReport rewrite_forest(std::vector<PregroupTreeNode>& forest,
                             const std::vector<RewriteRule>& rules) {
  RewriteReport total;
  for (const auto& rule : rules) {
    for (auto& tree : forest) {
      auto r = rewrite_tree(tree, rule);
      tree = std::move(r.tree);
      total.merges += r.merges;
    }
  }
  return total;
}

RewriteRule determiner_rule() {
  return RewriteRule{"determiner_rule", {"a", "an", "the"}, false, {PregroupType{types::n}},
                     WordMerger::last};
}

RewriteRule auxiliary_rule() {
  return RewriteRule{"auxiliary_rule",
                     {"has", "have", "had", "does", "do", "did", "will", "would", "can",
                      "could", "should", "shall", "may", "might", "must"},
                     false,
                     {PregroupType{types::s}},
                     WordMerger::last};
}

RewriteRule noun_modification(int max_depth) {
  return RewriteRule{"noun_modification", {}, true, {PregroupType{types::n}}, WordMerger::merge,
                     max_depth};
}

std::vector<RewriteRule> builtin_rules() {
  return {determiner_rule(), auxiliary_rule(), noun_modification()};
}

RewriteRule builtin_rule(const std::string& name) {
  if (name == "determiner" || name == "determiner_rule") return determiner_rule();
  if (name == "auxiliary" || name == "auxiliary_rule") return auxiliary_rule();
  if (name == "noun_modification" || name == "noun_modification_rule") return noun_modification();
  throw FormatError("unknown rewrite rule '" + name + "'");
}

RewriteRule load_rule(std::istream& in) {
  const json j = read_json(in);
  if (!j.is_object()) bad("rule", "expected an object");
  RewriteRule r;
  r.name = j.value("name", std::string("custom"));
  if (!j.contains("match_words")) bad("rule.match_words", "missing");
  const json& words = j["match_words"];
  if (words.is_string() && words.get<std::string>() == "*") {
    r.any_word = true;
  } else if (words.is_array()) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (!words[i].is_string()) bad("rule.match_words[" + std::to_string(i) + "]", "expected a string");
      r.match_words.insert(lowercase(words[i].get<std::string>()));
    }
  } else {
    bad("rule.match_words", "expected an array of words or \"*\"");
  }
  if (!j.contains("match_types") || !j["match_types"].is_array() || j["match_types"].empty())
    bad("rule.match_types", "expected a non-empty array of types");
  for (std::size_t i = 0; i < j["match_types"].size(); ++i)
    r.match_types.push_back(
        type_from_json(j["match_types"][i], "rule.match_types[" + std::to_string(i) + "]"));
  if (j.contains("word_merger")) {
    if (!j["word_merger"].is_string()) bad("rule.word_merger", "expected a string");
    try {
      r.word_merger = parse_merger(j["word_merger"].get<std::string>());
    } catch (const FormatError& e) {
      bad("rule.word_merger", e.what());
    }
  }
  if (j.contains("max_depth")) {
    if (!j["max_depth"].is_number_integer() || j["max_depth"].get<int>() < 1)
      bad("rule.max_depth", "expected an integer >= 1");
    r.max_depth = j["max_depth"].get<int>();
  }
  return r;
}

RewriteRule load_rule_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path + ": cannot open");
  try {
    return load_rule(in);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

std::string rule_to_json(const RewriteRule& rule) {
  json j;
  j["name"] = rule.name;
  if (rule.any_word) {
    j["match_words"] = "*";
  } else {
    j["match_words"] = json::array();
    for (const auto& w : rule.match_words) j["match_words"].push_back(w);
  }
  j["match_types"] = json::array();
  for (const auto& t : rule.match_types) j["match_types"].push_back(type_to_json(t));
  j["word_merger"] = std::string(merger_name(rule.word_merger));
  if (rule.max_depth != std::numeric_limits<int>::max()) j["max_depth"] = rule.max_depth;
  return j.dump(2);
}

std::vector<RewriteRule> resolve_rules(const std::vector<std::string>& items) {
  std::vector<RewriteRule> out;
  for (const auto& item : items) {
    if (item.empty()) continue;
    try {
      out.push_back(builtin_rule(item));
    } catch (const FormatError&) {
      if (!std::ifstream(item)) throw FormatError("unknown rewrite rule '" + item + "'");
      out.push_back(load_rule_file(item));
    }
  }
  return out;
}

// Coordination -------------------------------------------------------------------

bool is_conjunction_type(const PregroupType& t) {
  if (t.empty() || t.size() % 3 != 0) return false;
  const std::size_t k = t.size() / 3;
  PregroupType y{std::vector<SimpleType>(t.factors.begin() + static_cast<std::ptrdiff_t>(k),
                                         t.factors.begin() + static_cast<std::ptrdiff_t>(2 * k))};
  return concat(concat(adjoint(y, Direction::right), y), adjoint(y, Direction::left)) == t;
}

namespace {

[[noreturn]] void not_coordination(const std::string& why) { throw NotACoordination(why); }

}  // namespace

CoordinationResult coordination_rewrite(const PregroupDiagram& d, const CorefMap& corefs,
                                        int sentence_index) {
  using namespace types;
  std::vector<std::size_t> conj;
  for (std::size_t i = 0; i < d.tokens.size(); ++i)
    if (is_conjunction_type(d.tokens[i].type)) conj.push_back(i);
  if (conj.empty()) return {{d}, corefs};
  if (conj.size() > 1) not_coordination("more than one conjunction; only binary coordination is handled");

  const std::size_t c = conj[0];
  const PregroupType x{nr, s};
  const PregroupType expected =
      concat(concat(adjoint(x, Direction::right), x), adjoint(x, Direction::left));
  if (d.tokens[c].type != expected)
    not_coordination("conjunction '" + d.tokens[c].word + "' does not join verb phrases");

  const auto offsets = d.token_offsets();
  const auto owners = d.wire_owners();
  std::vector<std::optional<std::size_t>> partner(d.wire_count());
  for (const auto& cup : d.cups) {
    partner[cup.left] = cup.right;
    partner[cup.right] = cup.left;
  }
  const std::size_t c0 = offsets[c];
  const std::size_t c_end = c0 + 6;
  auto need = [&](std::size_t w, bool before) {
    if (!partner[w]) not_coordination("conjunction wire " + std::to_string(w) + " is not connected");
    const std::size_t p = *partner[w];
    if (before ? p >= c0 : p < c_end) not_coordination("conjunction is not between its phrases");
    return p;
  };
  const std::size_t left_s = need(c0, true);
  const std::size_t left_nr = need(c0 + 1, true);
  const std::size_t subj_wire = need(c0 + 2, true);
  const std::size_t right_s = need(c0 + 4, false);
  const std::size_t right_nr = need(c0 + 5, false);
  if (partner[c0 + 3]) not_coordination("conjunction output is not free");
  (void)left_s;
  (void)right_s;

  const std::size_t subj = owners[subj_wire];
  if (owners[left_nr] <= subj) not_coordination("no verb phrase between subject and conjunction");

  auto in_range = [&](std::size_t w, std::size_t lo_tok, std::size_t hi_tok) {
    return owners[w] >= lo_tok && owners[w] < hi_tok;
  };

  PregroupDiagram left;
  left.tokens.assign(d.tokens.begin(), d.tokens.begin() + static_cast<std::ptrdiff_t>(c));
  for (const auto& cup : d.cups)
    if (in_range(cup.left, 0, c) && in_range(cup.right, 0, c)) left.cups.push_back(cup);
  left.cups.push_back({subj_wire, left_nr});

  PregroupDiagram right;
  right.tokens.assign(d.tokens.begin(), d.tokens.begin() + static_cast<std::ptrdiff_t>(subj + 1));
  right.tokens.insert(right.tokens.end(), d.tokens.begin() + static_cast<std::ptrdiff_t>(c + 1),
                      d.tokens.end());
  const std::size_t subj_end = offsets[subj] + d.tokens[subj].type.size();
  const std::size_t shift = c_end - subj_end;
  auto map_right = [&](std::size_t w) { return w - shift; };
  for (const auto& cup : d.cups) {
    if (in_range(cup.left, 0, subj + 1) && in_range(cup.right, 0, subj + 1))
      right.cups.push_back(cup);
    else if (cup.left >= c_end && cup.right >= c_end)
      right.cups.push_back({map_right(cup.left), map_right(cup.right)});
  }
  right.cups.push_back({subj_wire, map_right(right_nr)});

  for (auto* part : {&left, &right}) {
    std::sort(part->cups.begin(), part->cups.end(),
              [](const Cup& a, const Cup& b) { return a.left < b.left; });
    auto report = validate_diagram(*part);
    if (!report.valid() || !is_sentence(report.free_type))
      not_coordination("coordinated phrases do not form sentences");
  }

  const int si = sentence_index;
  const int subj_i = static_cast<int>(subj);
  const int c_i = static_cast<int>(c);
  CorefMap out;
  bool subject_chained = false;
  for (const auto& chain : corefs.chains) {
    Chain mapped;
    for (const auto& m : chain) {
      if (m.sentence < si) {
        mapped.push_back(m);
      } else if (m.sentence > si) {
        mapped.push_back({m.sentence + 1, m.token});
      } else if (m.token <= subj_i) {
        mapped.push_back(m);
        mapped.push_back({si + 1, m.token});
        if (m.token == subj_i) subject_chained = true;
      } else if (m.token < c_i) {
        mapped.push_back(m);
      } else if (m.token > c_i) {
        mapped.push_back({si + 1, m.token - c_i - 1 + subj_i + 1});
      }
    }
    if (!mapped.empty()) out.chains.push_back(std::move(mapped));
  }
  if (!subject_chained) out.chains.push_back({{si, subj_i}, {si + 1, subj_i}});
  out.normalize();
  std::sort(out.chains.begin(), out.chains.end());
  return {{std::move(left), std::move(right)}, std::move(out)};
}

Document split_coordinations(const Document& doc, std::vector<int>* skipped) {
  Document out;
  out.text = doc.text;
  out.corefs = doc.corefs;
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    const int at = static_cast<int>(out.sentences.size());
    try {
      auto r = coordination_rewrite(doc.sentences[i], out.corefs, at);
      out.corefs = std::move(r.corefs);
      for (auto& p : r.parts) out.sentences.push_back(std::move(p));
    } catch (const NotACoordination&) {
      if (skipped) skipped->push_back(static_cast<int>(i));
      out.sentences.push_back(doc.sentences[i]);
    }
  }
  return out;
}

}  // namespace discocirc
