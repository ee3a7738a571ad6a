#pragma once

#include <iosfwd>
#include <limits>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "discocirc/ingest.hpp"
#include "discocirc/treeize.hpp"

namespace discocirc {

enum class WordMerger { merge, first, last };

std::string_view merger_name(WordMerger m);
WordMerger parse_merger(std::string_view name);  // throws FormatError

/// Contracts a node into its single child when the node's word and output type
/// match.  An empty `match_words` with `any_word` unset matches nothing.
struct RewriteRule {
  std::string name;
  std::set<std::string> match_words;  // compared lowercased
  bool any_word = false;
  std::vector<PregroupType> match_types;
  WordMerger word_merger = WordMerger::last;
  int max_depth = std::numeric_limits<int>::max();

  bool matches(const PregroupTreeNode& node) const;
};

struct RewriteReport {
  PregroupTreeNode tree;
  int merges = 0;
};

RewriteReport rewrite_tree(const PregroupTreeNode& root, const RewriteRule& rule);

/// Applies `rules` in order to every tree of the forest.
RewriteReport rewrite_forest(std::vector<PregroupTreeNode>& forest,
                             const std::vector<RewriteRule>& rules);

RewriteRule determiner_rule();
RewriteRule auxiliary_rule();
RewriteRule noun_modification(int max_depth = 2);
std::vector<RewriteRule> builtin_rules();

/// Looks up a builtin by name ("determiner" or "determiner_rule", ...).
/// Throws FormatError for unknown names.
RewriteRule builtin_rule(const std::string& name);

/// Rule files: {name, match_words, match_types, word_merger, max_depth}.
/// "match_words": "*" selects every word.
RewriteRule load_rule(std::istream& in);
RewriteRule load_rule_file(const std::string& path);
std::string rule_to_json(const RewriteRule& rule);

/// Resolves a --rewrites list: each item is a builtin name or a rule file path.
std::vector<RewriteRule> resolve_rules(const std::vector<std::string>& items);

struct CoordinationResult {
  std::vector<PregroupDiagram> parts;
  CorefMap corefs;
};

/// Splits a verb-phrase coordination "S V1 O1 and V2 O2", with the conjunction
/// typed x^r.x.x^l for x = n^r.s, into "S V1 O1" and "S V2 O2".  Mentions in
/// `corefs` refer to the document the sentence sits in at `sentence_index`;
/// the split shifts later sentences by one, and the subject copies are
/// chained together.  A sentence without a conjunction is returned unchanged.
/// Throws NotACoordination when a conjunction is present but the pattern does
/// not apply (more than one conjunction, no shared subject, ...).
CoordinationResult coordination_rewrite(const PregroupDiagram& d, const CorefMap& corefs,
                                        int sentence_index = 0);

/// Applies coordination_rewrite to every sentence.  Sentences that throw
/// NotACoordination are kept unchanged and listed in `skipped`.
Document split_coordinations(const Document& doc, std::vector<int>* skipped = nullptr);

/// True if the type has the shape y^r.y.y^l for some non-empty y.
bool is_conjunction_type(const PregroupType& t);

}  // namespace discocirc
