#include "discocirc/treeize.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "discocirc/errors.hpp"

namespace discocirc {

std::size_t PregroupTreeNode::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

PregroupType link_type(const PregroupTreeNode& node) {
  PregroupType out;
  for (std::size_t i = 0; i < node.out_type.size(); ++i)
    if (std::find(node.free_slots.begin(), node.free_slots.end(), i) == node.free_slots.end())
      out.factors.push_back(node.out_type[i]);
  return out;
}

std::vector<int> find_heads(const PregroupDiagram& d) {
  auto report = validate_diagram(d);
  auto owners = d.wire_owners();
  std::vector<int> heads;
  for (auto w : report.free_wires) {
    const int t = static_cast<int>(owners[w]);
    if (heads.empty() || heads.back() != t) heads.push_back(t);
  }
  return heads;
}

namespace {

struct Link {
  std::vector<Cup> cups;
  bool handled = false;
  bool removed = false;
};

class TreeBuilder {
 public:
  explicit TreeBuilder(const PregroupDiagram& d)
      : d_(d), owners_(d.wire_owners()), n_(static_cast<int>(d.tokens.size())),
        parent_(n_, -1), visited_(n_, false), neighbours_(n_) {
    for (const auto& c : d.cups) {
      const int a = static_cast<int>(owners_[c.left]);
      const int b = static_cast<int>(owners_[c.right]);
      if (a == b) {
        removed_.push_back(c);  // a token contracting with itself never yields a branch
        continue;
      }
      links_[{std::min(a, b), std::max(a, b)}].cups.push_back(c);
    }
    for (const auto& [key, link] : links_) {
      neighbours_[key.first].push_back(key.second);
      neighbours_[key.second].push_back(key.first);
    }
    for (auto& nb : neighbours_) std::sort(nb.begin(), nb.end());
  }

  TreeBuildReport run() {
    std::vector<int> roots;
    auto start = [&](int t) {
      if (visited_[t]) return;
      visited_[t] = true;
      roots.push_back(t);
      visit(t);
    };
    for (int h : find_heads(d_)) start(h);
    // Fully contracted fragments have no head; root them at their first token.
    for (int t = 0; t < n_; ++t) start(t);

    TreeBuildReport report;
    report.removed_cups = removed_;
    for (int r : roots) report.forest.push_back(materialize(r));
    return report;
  }

 private:
  Link& link(int a, int b) { return links_.at({std::min(a, b), std::max(a, b)}); }

  bool is_ancestor(int candidate, int t) const {
    for (int p = t; p >= 0; p = parent_[p])
      if (p == candidate) return true;
    return false;
  }

  void remove(Link& l) {
    l.removed = true;
    removed_.insert(removed_.end(), l.cups.begin(), l.cups.end());
  }

  void visit(int t) {
    for (int u : neighbours_[t]) {
      Link& l = link(t, u);
      if (l.handled || l.removed) continue;
      l.handled = true;
      if (!visited_[u]) {
        visited_[u] = true;
        parent_[u] = t;
        visit(u);
        continue;
      }
      // `u` would acquire a second parent.
      if (parent_[u] < 0 || is_ancestor(u, t)) {
        remove(l);
        continue;
      }
      Link& old = link(parent_[u], u);
      const int new_span = std::abs(t - u);
      const int old_span = std::abs(parent_[u] - u);
      bool drop_new = new_span > old_span;
      if (new_span == old_span) drop_new = l.cups.front().left < old.cups.front().left;
      if (drop_new) {
        remove(l);
      } else {
        remove(old);
        parent_[u] = t;
      }
    }
  }

  PregroupTreeNode materialize(int t) const {
    PregroupTreeNode node;
    node.word = d_.tokens[t].word;
    node.token_index = t;
    const auto offsets = d_.token_offsets();
    const std::size_t first = offsets[t];
    const std::size_t count = d_.tokens[t].type.size();

    std::vector<int> children;
    for (int u : neighbours_[t]) {
      const auto it = links_.find({std::min(t, u), std::max(t, u)});
      if (!it->second.removed && parent_[u] == t) children.push_back(u);
    }
    std::vector<bool> consumed(count, false);
    std::vector<bool> linked(count, false);
    auto mark = [&](std::vector<bool>& mask, const Cup& c) {
      for (std::size_t w : {c.left, c.right})
        if (w >= first && w < first + count) mask[w - first] = true;
    };
    for (const auto& c : removed_) mark(consumed, c);
    for (int u : children)
      for (const auto& c : links_.at({std::min(t, u), std::max(t, u)}).cups) mark(consumed, c);
    if (parent_[t] >= 0)
      for (const auto& c : links_.at({std::min(t, parent_[t]), std::max(t, parent_[t])}).cups)
        mark(linked, c);

    for (std::size_t i = 0; i < count; ++i) {
      if (consumed[i]) continue;
      if (!linked[i]) node.free_slots.push_back(node.out_type.size());
      node.out_type.factors.push_back(d_.tokens[t].type[i]);
    }
    for (int u : children) node.children.push_back(materialize(u));
    return node;
  }

  const PregroupDiagram& d_;
  std::vector<std::size_t> owners_;
  int n_;
  std::map<std::pair<int, int>, Link> links_;
  std::vector<int> parent_;
  std::vector<bool> visited_;
  std::vector<std::vector<int>> neighbours_;
  std::vector<Cup> removed_;
};

}  // namespace

TreeBuildReport build_trees(const PregroupDiagram& d) {
  auto report = validate_diagram(d);
  if (!report.valid()) throw InvalidDiagram(report.describe());
  return TreeBuilder(d).run();
}

PregroupType compound_type(const PregroupTreeNode& node) {
  PregroupType left, right;
  for (const auto& c : node.children) {
    auto& side = c.token_index < node.token_index ? left : right;
    side = concat(side, link_type(c));
  }
  return concat(concat(adjoint(left, Direction::right), node.out_type),
                adjoint(right, Direction::left));
}

std::vector<PregroupType> types_without_cups(const PregroupDiagram& d,
                                             const std::vector<Cup>& removed) {
  std::vector<bool> gone(d.wire_count(), false);
  for (const auto& c : removed) gone[c.left] = gone[c.right] = true;
  std::vector<PregroupType> out;
  std::size_t w = 0;
  for (const auto& tok : d.tokens) {
    PregroupType t;
    for (const auto& f : tok.type.factors)
      if (!gone[w++]) t.factors.push_back(f);
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<PregroupType> recovered_types(const std::vector<PregroupTreeNode>& forest,
                                          std::size_t token_count) {
  std::vector<PregroupType> out(token_count);
  std::function<void(const PregroupTreeNode&)> walk = [&](const PregroupTreeNode& n) {
    out.at(static_cast<std::size_t>(n.token_index)) = compound_type(n);
    for (const auto& c : n.children) walk(c);
  };
  for (const auto& root : forest) walk(root);
  return out;
}

namespace {

void dump(const PregroupTreeNode& n, int depth, std::ostream& os) {
  os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << n.token_index << ':' << n.word
     << " [" << to_string(n.out_type) << "]\n";
  for (const auto& c : n.children) dump(c, depth + 1, os);
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string tree_to_text(const PregroupTreeNode& root) {
  std::ostringstream os;
  dump(root, 0, os);
  return os.str();
}

std::string forest_to_text(const std::vector<PregroupTreeNode>& forest) {
  std::string out;
  for (const auto& t : forest) out += tree_to_text(t);
  return out;
}

std::string forest_to_dot(const std::vector<PregroupTreeNode>& forest,
                          const std::string& graph_name) {
  std::ostringstream os;
  os << "digraph " << graph_name << " {\n  node [shape=box];\n";
  std::function<void(const PregroupTreeNode&)> walk = [&](const PregroupTreeNode& n) {
    os << "  t" << n.token_index << " [label=\"" << n.token_index << ':' << dot_escape(n.word)
       << "\\n" << dot_escape(to_string(n.out_type)) << "\"];\n";
    for (const auto& c : n.children) {
      os << "  t" << n.token_index << " -> t" << c.token_index << ";\n";
      walk(c);
    }
  };
  for (const auto& t : forest) walk(t);
  os << "}\n";
  return os.str();
}

}  // namespace discocirc
