#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "discocirc/ingest.hpp"
#include "discocirc/rewrite.hpp"
#include "discocirc/treeize.hpp"

namespace discocirc {

enum class ElementKind { box, frame, identity, empty, seq, par, perm, spider };

std::string_view kind_name(ElementKind k);

/// One node of a sentence or text diagram.  Wire ids are positions: local
/// noun indices inside a SentenceDiagram, global wire positions inside a
/// TextDiagram layer.
///
///   box, frame  name + wires (domain == codomain); frames also own components
///   identity    wires
///   seq, par    components
///   perm        wires[i] is sent to mapping[i]; only used with two wires
///   spider      wires = merged legs, out_wire = the wire they become;
///               dagger = true for the splitting direction
struct DiagramElement {
  ElementKind kind = ElementKind::empty;
  std::string name;
  std::vector<int> wires;
  std::vector<DiagramElement> components;
  std::vector<int> mapping;
  int out_wire = -1;
  bool dagger = false;

  static DiagramElement box(std::string name, std::vector<int> wires);
  static DiagramElement frame(std::string name, std::vector<int> wires,
                              std::vector<DiagramElement> components);
  static DiagramElement identity(std::vector<int> wires);
  static DiagramElement empty();
  static DiagramElement par(std::vector<DiagramElement> parts);

  bool is_empty() const { return kind == ElementKind::empty; }
  friend bool operator==(const DiagramElement&, const DiagramElement&) = default;
};

struct NounState {
  std::string word;
  int sentence_index = 0;
  int token_index = 0;
  int chain_id = -1;  // -1: not in any chain

  friend bool operator==(const NounState&, const NounState&) = default;
};

struct SentenceDiagram {
  std::vector<NounState> nouns;  // wire i carries nouns[i]
  DiagramElement body;

  friend bool operator==(const SentenceDiagram&, const SentenceDiagram&) = default;
};

/// Decides whether a tree node is a noun.  The default accepts leaves typed n.
using NounTagger = std::function<bool(const PregroupTreeNode&)>;
NounTagger default_noun_tagger();
/// Like the default, but also rejects words the lexicon tags as non-nouns.
NounTagger lexicon_noun_tagger(const Lexicon& lex);

struct FrameResult {
  DiagramElement element;  // wires are token indices of noun leaves
  std::vector<PregroupTreeNode> nouns;  // noun leaves, in token order
  bool pruned = false;  // some noun below was removed
};

/// Nested-frame conversion.  Noun leaves whose token index is in `remove`
/// become Empty.  Elements reference nouns by token index.
FrameResult tree_to_frame(const PregroupTreeNode& node, const std::set<int>& remove = {},
                          const NounTagger& is_noun = default_noun_tagger());

struct SentenceOptions {
  std::vector<RewriteRule> rules;
  std::set<Mention> remove;  // document-wide mentions to drop
  NounTagger is_noun = default_noun_tagger();
};

/// Tree building, rewrites and frame conversion for one sentence of `doc`.
/// Zero-wire boxes are dropped, with a line appended to `warnings`.
/// Throws EmptySentence when no noun survives.
SentenceDiagram sentence_diagram(const Document& doc, int sentence_index,
                                 const SentenceOptions& opts = {},
                                 std::vector<std::string>* warnings = nullptr);

/// Same, for an already built forest.  Mentions in `remove` refer to
/// `sentence_index`.
SentenceDiagram forest_to_sentence(const std::vector<PregroupTreeNode>& forest,
                                   int sentence_index, const CorefMap& corefs,
                                   const std::set<Mention>& remove = {},
                                   const NounTagger& is_noun = default_noun_tagger(),
                                   std::vector<std::string>* warnings = nullptr);

/// Every mention of each chain with fewer than `k` mentions.
std::set<Mention> min_frequency_filter(const CorefMap& corefs, int k);

/// Mentions of every chain containing one of `words` (case-insensitive).
std::set<Mention> mentions_of_words(const Document& doc, const std::vector<std::string>& words);

/// Deletes boxes and frames living only on `removed` wires and shrinks the
/// rest.  A frame left without components becomes a box.
DiagramElement prune_boxes(const DiagramElement& body, const std::set<int>& removed);

/// Drops nouns at `removed` positions from a sentence diagram and renumbers
/// wires.  Throws EmptySentence when nothing survives.
SentenceDiagram prune_sentence(const SentenceDiagram& d, const std::set<int>& removed);

/// Wire ids used anywhere in the element.
std::set<int> element_wires(const DiagramElement& e);
std::size_t count_kind(const DiagramElement& e, ElementKind k);

/// Indented text dump; frames list their components one level deeper.
std::string element_to_text(const DiagramElement& e, int depth = 0);
std::string sentence_to_text(const SentenceDiagram& d);
std::string sentence_to_dot(const SentenceDiagram& d, const std::string& graph_name = "sentence");
std::string sentence_to_json(const SentenceDiagram& d);

}  // namespace discocirc
