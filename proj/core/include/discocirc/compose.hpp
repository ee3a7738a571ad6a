#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "discocirc/framegen.hpp"

namespace discocirc {

/// One step of a text diagram.  `dom` and `cod` label every wire position
/// with its chain; spiders change the width, everything else keeps it.
struct Layer {
  DiagramElement element;
  std::vector<int> dom;
  std::vector<int> cod;
  int sentence = -1;

  friend bool operator==(const Layer&, const Layer&) = default;
};

struct TextDiagram {
  std::vector<NounState> states;  // one per chain, first mention, in wire order
  std::vector<int> wire_chains;   // chain id of each top (and bottom) wire
  std::vector<Layer> layers;

  std::size_t width() const { return wire_chains.size(); }
  /// chain id -> output wire position.
  std::map<int, int> chain_order() const;

  friend bool operator==(const TextDiagram&, const TextDiagram&) = default;
};

/// Target position of every wire, plus the chains to split after permuting.
struct PermSpec {
  std::vector<int> mapping;                  // wire at i moves to mapping[i]
  std::vector<int> labels;                   // chain of wire i before permuting
  std::vector<std::pair<int, int>> spiders;  // (chain, multiplicity >= 2)
};

/// Adjacent transpositions in bubble-sort order (as perm elements on two
/// neighbouring wires), then one splitting spider per entry of `spiders`,
/// each placed where its chain ends up.
std::vector<DiagramElement> permutation_to_layers(const PermSpec& p);

/// Folds sentence diagrams into one text diagram.  Nouns with chain -1 get a
/// fresh chain of their own.  Throws ChainMismatch when a noun names a chain
/// that is missing from `corefs` or does not contain its mention.
TextDiagram compose_document(const std::vector<SentenceDiagram>& sentences, const CorefMap& corefs,
                             std::vector<std::string>* log = nullptr);

/// Sequential composition of two text diagrams along shared chains.
TextDiagram concat_text(const TextDiagram& a, const TextDiagram& b);

/// Names of the boxes and frames touching each wire, top to bottom, keyed by
/// chain.  Frames list their own name before their components.
std::map<int, std::vector<std::string>> wire_box_sequences(const TextDiagram& t);

/// Throws InvalidDiagram if consecutive layers do not line up or an element
/// touches a wire outside its layer.
void check_text_diagram(const TextDiagram& t);

struct TextOptions {
  std::vector<RewriteRule> rules;
  std::optional<int> min_noun_frequency;
  std::vector<std::string> remove_words;
  bool split_coordination = true;
  const Lexicon* lexicon = nullptr;  // refines the noun test when set
};

struct TextResult {
  TextDiagram diagram;
  Document document;  // after coordination splitting and coref completion
  std::vector<SentenceDiagram> sentences;
  std::vector<std::string> log;
};

/// Frame generation and composition for a whole document.
TextResult text_diagram(const Document& doc, const TextOptions& opts = {});

std::string text_to_text(const TextDiagram& t);
std::string text_to_dot(const TextDiagram& t, const std::string& graph_name = "text");
std::string text_to_json(const TextDiagram& t);
TextDiagram text_from_json(const std::string& json_text);

}  // namespace discocirc
