#include "discocirc/sandwich.hpp"

#include <algorithm>
#include <numeric>

#include "discocirc/errors.hpp"

namespace discocirc {

namespace {

void remap(DiagramElement& e, const std::vector<int>& to) {
  for (auto& w : e.wires) w = to.at(static_cast<std::size_t>(w));
  for (auto& c : e.components) remap(c, to);
}

bool has_frame(const DiagramElement& e) {
  return count_kind(e, ElementKind::frame) > 0;
}

std::vector<int> noun_tokens(const PregroupTreeNode& n, const NounTagger& is_noun) {
  std::vector<int> out;
  for (const auto& leaf : tree_to_frame(n, {}, is_noun).nouns) out.push_back(leaf.token_index);
  return out;
}

void expand_into(const DiagramElement& e, const SandwichConfig& cfg, std::vector<DiagramElement>& out);

void expand_frame(const DiagramElement& f, const SandwichConfig& cfg, std::vector<DiagramElement>& out) {
  std::vector<int> span(f.wires.begin(), f.wires.end());
  std::sort(span.begin(), span.end());
  if (f.components.empty()) {
    out.push_back(DiagramElement::box(f.name, f.wires));
    return;
  }
  const int lo = span.front();
  const int hi = span.back();
  for (std::size_t i = 0; i < f.components.size(); ++i) {
    const auto& comp = f.components[i];
    const int idx = static_cast<int>(i);
    out.push_back(DiagramElement::box(sandwich_name(f.name, false, idx, cfg.mode), f.wires));

    // Component wires first, then the rest of the span, each in wire order.
    auto mine = element_wires(comp);
    std::vector<int> order(mine.begin(), mine.end());
    for (int p = lo; p <= hi; ++p)
      if (!mine.count(p)) order.push_back(p);
    std::vector<int> to(static_cast<std::size_t>(hi) + 1);
    std::iota(to.begin(), to.end(), 0);
    for (std::size_t k = 0; k < order.size(); ++k) to[static_cast<std::size_t>(order[k])] = lo + static_cast<int>(k);

    PermSpec spec;
    spec.mapping = to;
    spec.labels.resize(to.size());
    std::iota(spec.labels.begin(), spec.labels.end(), 0);
    auto sigma = permutation_to_layers(spec);
    out.insert(out.end(), sigma.begin(), sigma.end());

    DiagramElement moved = comp;
    remap(moved, to);
    expand_into(moved, cfg, out);

    out.insert(out.end(), sigma.rbegin(), sigma.rend());
    out.push_back(DiagramElement::box(sandwich_name(f.name, true, idx, cfg.mode), f.wires));
  }
}

void expand_into(const DiagramElement& e, const SandwichConfig& cfg, std::vector<DiagramElement>& out) {
  switch (e.kind) {
    case ElementKind::identity:
    case ElementKind::empty:
      return;
    case ElementKind::seq:
    case ElementKind::par:
      for (const auto& c : e.components) expand_into(c, cfg, out);
      return;
    case ElementKind::frame:
      expand_frame(e, cfg, out);
      return;
    default:
      out.push_back(e);
  }
}

std::vector<int> after(const DiagramElement& e, const std::vector<int>& labels) {
  if (e.kind != ElementKind::perm) return labels;
  std::vector<int> out = labels;
  for (std::size_t k = 0; k < e.wires.size(); ++k)
    out.at(static_cast<std::size_t>(e.mapping[k])) = labels.at(static_cast<std::size_t>(e.wires[k]));
  return out;
}

// Pads a box with an identity on the wires of the layer it does not touch.
DiagramElement pad(DiagramElement e, std::size_t width) {
  if (e.kind == ElementKind::perm || e.kind == ElementKind::spider) return e;
  auto used = element_wires(e);
  std::vector<int> rest;
  for (int w = 0; w < static_cast<int>(width); ++w)
    if (!used.count(w)) rest.push_back(w);
  if (rest.empty()) return e;
  DiagramElement p;
  p.kind = ElementKind::par;
  p.components = {std::move(e), DiagramElement::identity(std::move(rest))};
  return p;
}

}  // namespace

FrameIO frame_io_wires(const PregroupTreeNode& node, const NounTagger& is_noun) {
  FrameIO io;
  std::vector<const PregroupTreeNode*> left, right;
  for (const auto& c : node.children) (c.token_index < node.token_index ? left : right).push_back(&c);
  auto by_token = [](const PregroupTreeNode* a, const PregroupTreeNode* b) { return a->token_index < b->token_index; };
  std::sort(left.begin(), left.end(), by_token);
  std::sort(right.begin(), right.end(), by_token);
  for (const auto* c : left)
    for (int t : noun_tokens(*c, is_noun)) io.inputs.push_back(t);
  if (node.children.empty() && is_noun(node)) io.inputs.push_back(node.token_index);
  for (const auto* c : right)
    for (int t : noun_tokens(*c, is_noun)) io.inputs.push_back(t);
  io.outputs = io.inputs;

  auto f = tree_to_frame(node, {}, is_noun).element;
  if (f.kind == ElementKind::frame)
    for (const auto& c : f.components) {
      auto w = element_wires(c);
      io.component_wires.emplace_back(w.begin(), w.end());
    }
  return io;
}

std::string sandwich_name(const std::string& frame, bool top, int index, SandwichMode mode) {
  std::string name = frame + (top ? "_top" : "_bot");
  if (mode == SandwichMode::foliated) name += "_" + std::to_string(index + 1);
  return name;
}

std::vector<DiagramElement> expand_element(const DiagramElement& e, const SandwichConfig& cfg) {
  std::vector<DiagramElement> out;
  expand_into(e, cfg, out);
  return out;
}

TextDiagram expand_frames(const TextDiagram& d, const SandwichConfig& cfg) {
  TextDiagram out;
  out.states = d.states;
  out.wire_chains = d.wire_chains;
  for (const auto& l : d.layers) {
    if (!has_frame(l.element)) {
      out.layers.push_back(l);
      continue;
    }
    if (l.dom != l.cod) throw InvalidDiagram("frame inside a layer that changes width");
    auto labels = l.dom;
    for (auto& e : expand_element(l.element, cfg)) {
      Layer nl;
      nl.element = pad(std::move(e), labels.size());
      nl.dom = labels;
      nl.cod = after(nl.element, labels);
      nl.sentence = l.sentence;
      labels = nl.cod;
      out.layers.push_back(std::move(nl));
    }
    if (labels != l.cod) throw InvalidDiagram("frame expansion changed the wire order");
  }
  return out;
}

}  // namespace discocirc
