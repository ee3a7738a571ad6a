#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "discocirc/pregroup.hpp"

namespace discocirc {

/// A token in a pregroup tree.  `out_type` holds the token's factors that are
/// not consumed by its children: the wires it hands to its parent plus any free
/// wires.  Children are stored in sentence order, which is the traversal order
/// (left arguments outermost first, then right arguments innermost first).
struct PregroupTreeNode {
  std::string word;
  int token_index = 0;
  PregroupType out_type;
  /// Positions in `out_type` that are free wires of the diagram.  Empty except
  /// for heads; only the remaining factors connect the node to its parent.
  std::vector<std::size_t> free_slots;
  std::vector<PregroupTreeNode> children;

  std::size_t size() const;  // number of nodes in the subtree
  friend bool operator==(const PregroupTreeNode&, const PregroupTreeNode&) = default;
};

struct TreeBuildReport {
  std::vector<PregroupTreeNode> forest;
  /// Cups deleted to break loops, in the order they were removed.
  std::vector<Cup> removed_cups;
};

/// Factors of `out_type` that connect the node to its parent.
PregroupType link_type(const PregroupTreeNode& node);

/// Token indices owning at least one free wire, in sentence order.
std::vector<int> find_heads(const PregroupDiagram& d);

/// Depth-first tree construction from each head.  Throws InvalidDiagram.
TreeBuildReport build_trees(const PregroupDiagram& d);

/// Recovers a node's compound type from its output type and its children's
/// output types: (left outputs)^r . out . (right outputs)^l.
PregroupType compound_type(const PregroupTreeNode& node);

/// Each token's type with the factors touched by `removed` deleted.
std::vector<PregroupType> types_without_cups(const PregroupDiagram& d,
                                             const std::vector<Cup>& removed);

/// Compound types of every node in the forest, indexed by token.
std::vector<PregroupType> recovered_types(const std::vector<PregroupTreeNode>& forest,
                                          std::size_t token_count);

/// Indented text dump, one node per line: "index:word [type]".
std::string tree_to_text(const PregroupTreeNode& root);
std::string forest_to_text(const std::vector<PregroupTreeNode>& forest);
std::string forest_to_dot(const std::vector<PregroupTreeNode>& forest,
                          const std::string& graph_name = "pregroup_tree");

}  // namespace discocirc
