#include "discocirc/framegen.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "discocirc/errors.hpp"
#include "json_util.hpp"

namespace discocirc {

std::string_view kind_name(ElementKind k) {
  switch (k) {
    case ElementKind::box: return "box";
    case ElementKind::frame: return "frame";
    case ElementKind::identity: return "identity";
    case ElementKind::empty: return "empty";
    case ElementKind::seq: return "seq";
    case ElementKind::par: return "par";
    case ElementKind::perm: return "perm";
    case ElementKind::spider: return "spider";
  }
  return "empty";
}

DiagramElement DiagramElement::box(std::string name, std::vector<int> wires) {
  DiagramElement e;
  e.kind = ElementKind::box;
  e.name = std::move(name);
  e.wires = std::move(wires);
  return e;
}

DiagramElement DiagramElement::frame(std::string name, std::vector<int> wires,
                                     std::vector<DiagramElement> components) {
  DiagramElement e = box(std::move(name), std::move(wires));
  e.kind = ElementKind::frame;
  e.components = std::move(components);
  return e;
}

DiagramElement DiagramElement::identity(std::vector<int> wires) {
  DiagramElement e;
  e.kind = ElementKind::identity;
  e.wires = std::move(wires);
  return e;
}

DiagramElement DiagramElement::empty() { return DiagramElement{}; }

DiagramElement DiagramElement::par(std::vector<DiagramElement> parts) {
  std::erase_if(parts, [](const DiagramElement& e) { return e.is_empty(); });
  if (parts.empty()) return empty();
  if (parts.size() == 1) return std::move(parts[0]);
  DiagramElement e;
  e.kind = ElementKind::par;
  e.components = std::move(parts);
  return e;
}

NounTagger default_noun_tagger() {
  return [](const PregroupTreeNode& n) {
    return n.children.empty() && n.out_type == PregroupType{types::n};
  };
}

NounTagger lexicon_noun_tagger(const Lexicon& lex) {
  return [&lex](const PregroupTreeNode& n) {
    if (!n.children.empty() || n.out_type != PregroupType{types::n}) return false;
    return lex.noun_tag(n.word).value_or(true);
  };
}

namespace {

// Non-noun leaves and anything built only from them have no wires yet; they
// live on the nouns of the nearest ancestor that has some.
void inherit_wires(DiagramElement& e, const std::vector<int>& wires) {
  if (!e.wires.empty()) return;
  e.wires = wires;
  for (auto& c : e.components) inherit_wires(c, wires);
}

}  // namespace

FrameResult tree_to_frame(const PregroupTreeNode& node, const std::set<int>& remove,
                          const NounTagger& is_noun) {
  if (node.children.empty()) {
    if (is_noun(node)) {
      if (remove.count(node.token_index)) return {DiagramElement::empty(), {}, true};
      return {DiagramElement::identity({node.token_index}), {node}, false};
    }
    return {DiagramElement::box(node.word, {}), {}, false};
  }

  FrameResult out;
  std::vector<DiagramElement> subdiags;
  for (const auto& child : node.children) {
    auto r = tree_to_frame(child, remove, is_noun);
    out.pruned = out.pruned || r.pruned;
    for (auto& n : r.nouns) out.nouns.push_back(std::move(n));
    if (r.element.kind != ElementKind::identity && !r.element.is_empty())
      subdiags.push_back(std::move(r.element));
  }
  std::sort(out.nouns.begin(), out.nouns.end(),
            [](const auto& a, const auto& b) { return a.token_index < b.token_index; });
  std::vector<int> wires;
  for (const auto& n : out.nouns) wires.push_back(n.token_index);

  if (wires.empty() && out.pruned) {
    out.element = DiagramElement::empty();
    return out;
  }
  for (auto& s : subdiags) inherit_wires(s, wires);
  if (subdiags.empty())
    out.element = DiagramElement::box(node.word, wires);
  else
    out.element = DiagramElement::frame(node.word, wires, std::move(subdiags));
  return out;
}

namespace {

void remap(DiagramElement& e, const std::map<int, int>& to) {
  for (auto& w : e.wires) w = to.at(w);
  if (e.out_wire >= 0) e.out_wire = to.at(e.out_wire);
  for (auto& c : e.components) remap(c, to);
}

}  // namespace

SentenceDiagram forest_to_sentence(const std::vector<PregroupTreeNode>& forest,
                                   int sentence_index, const CorefMap& corefs,
                                   const std::set<Mention>& remove, const NounTagger& is_noun,
                                   std::vector<std::string>* warnings) {
  std::set<int> local_remove;
  for (const auto& m : remove)
    if (m.sentence == sentence_index) local_remove.insert(m.token);

  std::vector<PregroupTreeNode> nouns;
  std::vector<DiagramElement> parts;
  for (const auto& root : forest) {
    auto r = tree_to_frame(root, local_remove, is_noun);
    for (auto& n : r.nouns) nouns.push_back(std::move(n));
    if (!r.element.is_empty() && r.element.wires.empty() && r.element.kind != ElementKind::identity) {
      if (warnings)
        warnings->push_back("sentence " + std::to_string(sentence_index) + ": box '" +
                            r.element.name + "' has no noun wires; dropped");
      continue;
    }
    parts.push_back(std::move(r.element));
  }
  if (nouns.empty())
    throw EmptySentence("sentence " + std::to_string(sentence_index) + " has no nouns left");

  std::sort(nouns.begin(), nouns.end(),
            [](const auto& a, const auto& b) { return a.token_index < b.token_index; });
  SentenceDiagram d;
  std::map<int, int> local;
  for (const auto& n : nouns) {
    local[n.token_index] = static_cast<int>(d.nouns.size());
    NounState st{n.word, sentence_index, n.token_index,
                 corefs.chain_of({sentence_index, n.token_index}).value_or(-1)};
    d.nouns.push_back(std::move(st));
  }
  d.body = DiagramElement::par(std::move(parts));
  remap(d.body, local);
  return d;
}

SentenceDiagram sentence_diagram(const Document& doc, int sentence_index,
                                 const SentenceOptions& opts, std::vector<std::string>* warnings) {
  auto forest = build_trees(doc.sentences.at(static_cast<std::size_t>(sentence_index))).forest;
  rewrite_forest(forest, opts.rules);
  return forest_to_sentence(forest, sentence_index, doc.corefs, opts.remove, opts.is_noun,
                            warnings);
}

std::set<Mention> min_frequency_filter(const CorefMap& corefs, int k) {
  std::set<Mention> out;
  for (const auto& chain : corefs.chains)
    if (static_cast<int>(chain.size()) < k) out.insert(chain.begin(), chain.end());
  return out;
}

std::set<Mention> mentions_of_words(const Document& doc, const std::vector<std::string>& words) {
  std::set<std::string> wanted;
  for (const auto& w : words) wanted.insert(lowercase(w));
  std::set<Mention> out;
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const auto& toks = doc.sentences[s].tokens;
    for (std::size_t t = 0; t < toks.size(); ++t) {
      if (!wanted.count(lowercase(toks[t].word))) continue;
      const Mention m{static_cast<int>(s), static_cast<int>(t)};
      out.insert(m);
      if (auto c = doc.corefs.chain_of(m)) {
        const auto& chain = doc.corefs.chains[static_cast<std::size_t>(*c)];
        out.insert(chain.begin(), chain.end());
      }
    }
  }
  return out;
}

DiagramElement prune_boxes(const DiagramElement& body, const std::set<int>& removed) {
  auto surviving = [&](const std::vector<int>& wires) {
    std::vector<int> out;
    for (int w : wires)
      if (!removed.count(w)) out.push_back(w);
    return out;
  };
  switch (body.kind) {
    case ElementKind::empty:
      return body;
    case ElementKind::seq:
    case ElementKind::par: {
      std::vector<DiagramElement> parts;
      for (const auto& c : body.components) parts.push_back(prune_boxes(c, removed));
      if (body.kind == ElementKind::par) return DiagramElement::par(std::move(parts));
      std::erase_if(parts, [](const DiagramElement& e) { return e.is_empty(); });
      if (parts.empty()) return DiagramElement::empty();
      DiagramElement e = body;
      e.components = std::move(parts);
      return e;
    }
    case ElementKind::perm:
    case ElementKind::spider: {
      bool touched = false;
      for (int w : body.wires) touched = touched || removed.count(w);
      return touched ? DiagramElement::empty() : body;
    }
    case ElementKind::identity:
    case ElementKind::box:
    case ElementKind::frame:
      break;
  }
  auto wires = surviving(body.wires);
  if (wires.empty()) return DiagramElement::empty();
  if (body.kind == ElementKind::identity) return DiagramElement::identity(std::move(wires));
  if (body.kind == ElementKind::box) return DiagramElement::box(body.name, std::move(wires));
  std::vector<DiagramElement> comps;
  for (const auto& c : body.components) {
    auto p = prune_boxes(c, removed);
    if (!p.is_empty()) comps.push_back(std::move(p));
  }
  if (comps.empty()) return DiagramElement::box(body.name, std::move(wires));
  return DiagramElement::frame(body.name, std::move(wires), std::move(comps));
}

SentenceDiagram prune_sentence(const SentenceDiagram& d, const std::set<int>& removed) {
  SentenceDiagram out;
  std::map<int, int> to;
  for (std::size_t i = 0; i < d.nouns.size(); ++i) {
    if (removed.count(static_cast<int>(i))) continue;
    to[static_cast<int>(i)] = static_cast<int>(out.nouns.size());
    out.nouns.push_back(d.nouns[i]);
  }
  if (out.nouns.empty()) throw EmptySentence("every noun of the sentence was removed");
  out.body = prune_boxes(d.body, removed);
  remap(out.body, to);
  return out;
}

std::set<int> element_wires(const DiagramElement& e) {
  std::set<int> out(e.wires.begin(), e.wires.end());
  if (e.out_wire >= 0) out.insert(e.out_wire);
  for (const auto& c : e.components) {
    auto sub = element_wires(c);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

std::size_t count_kind(const DiagramElement& e, ElementKind k) {
  std::size_t n = e.kind == k ? 1 : 0;
  for (const auto& c : e.components) n += count_kind(c, k);
  return n;
}

namespace {

std::string wire_list(const std::vector<int>& wires) {
  std::string s = "[";
  for (std::size_t i = 0; i < wires.size(); ++i) s += (i ? " " : "") + std::to_string(wires[i]);
  return s + "]";
}

}  // namespace

std::string element_to_text(const DiagramElement& e, int depth) {
  std::ostringstream os;
  os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << kind_name(e.kind);
  if (!e.name.empty()) os << ' ' << e.name;
  if (e.kind != ElementKind::empty && e.kind != ElementKind::seq && e.kind != ElementKind::par)
    os << ' ' << wire_list(e.wires);
  if (e.kind == ElementKind::perm) os << " -> " << wire_list(e.mapping);
  if (e.kind == ElementKind::spider) os << (e.dagger ? " <- " : " -> ") << e.out_wire;
  os << '\n';
  for (const auto& c : e.components) os << element_to_text(c, depth + 1);
  return os.str();
}

std::string sentence_to_text(const SentenceDiagram& d) {
  std::ostringstream os;
  for (std::size_t i = 0; i < d.nouns.size(); ++i) {
    const auto& n = d.nouns[i];
    os << "noun " << i << ' ' << n.word << " @" << n.sentence_index << ':' << n.token_index
       << " chain " << n.chain_id << '\n';
  }
  os << element_to_text(d.body);
  return os.str();
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

void dot_element(const DiagramElement& e, const std::string& id, std::ostream& os, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2 + 2, ' ');
  if (e.kind == ElementKind::frame || e.kind == ElementKind::par || e.kind == ElementKind::seq) {
    os << pad << "subgraph cluster_" << id << " {\n"
       << pad << "  label=" << quote(e.kind == ElementKind::frame ? e.name : std::string(kind_name(e.kind)))
       << ";\n";
    for (std::size_t i = 0; i < e.components.size(); ++i)
      dot_element(e.components[i], id + "_" + std::to_string(i), os, depth + 1);
    if (e.kind == ElementKind::frame) {
      os << pad << "  " << id << " [shape=point];\n";
      for (int w : e.wires) os << pad << "  n" << w << " -> " << id << " [style=dashed];\n";
    }
    os << pad << "}\n";
    return;
  }
  if (e.kind == ElementKind::empty || e.kind == ElementKind::identity) return;
  os << pad << id << " [shape=box,label=" << quote(e.name.empty() ? std::string(kind_name(e.kind)) : e.name)
     << "];\n";
  for (int w : e.wires) os << pad << "n" << w << " -> " << id << ";\n";
}

}  // namespace

std::string sentence_to_dot(const SentenceDiagram& d, const std::string& graph_name) {
  std::ostringstream os;
  os << "digraph " << graph_name << " {\n  compound=true;\n";
  for (std::size_t i = 0; i < d.nouns.size(); ++i)
    os << "  n" << i << " [shape=ellipse,label=" << quote(d.nouns[i].word) << "];\n";
  dot_element(d.body, "e", os, 0);
  os << "}\n";
  return os.str();
}

namespace detail {

json element_to_json(const DiagramElement& e) {
  json j;
  j["kind"] = std::string(kind_name(e.kind));
  if (!e.name.empty()) j["name"] = e.name;
  if (!e.wires.empty()) j["wires"] = e.wires;
  if (!e.mapping.empty()) j["mapping"] = e.mapping;
  if (e.kind == ElementKind::spider) {
    j["out_wire"] = e.out_wire;
    j["dagger"] = e.dagger;
  }
  if (!e.components.empty()) {
    j["components"] = json::array();
    for (const auto& c : e.components) j["components"].push_back(element_to_json(c));
  }
  return j;
}

DiagramElement element_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    bad(where, "expected an element object with a kind");
  static const std::map<std::string, ElementKind> kinds = {
      {"box", ElementKind::box},     {"frame", ElementKind::frame}, {"identity", ElementKind::identity},
      {"empty", ElementKind::empty}, {"seq", ElementKind::seq},     {"par", ElementKind::par},
      {"perm", ElementKind::perm},   {"spider", ElementKind::spider}};
  auto it = kinds.find(j["kind"].get<std::string>());
  if (it == kinds.end()) bad(where + ".kind", "unknown element kind");
  DiagramElement e;
  e.kind = it->second;
  try {
    e.name = j.value("name", std::string());
    e.wires = j.value("wires", std::vector<int>{});
    e.mapping = j.value("mapping", std::vector<int>{});
    e.out_wire = j.value("out_wire", -1);
    e.dagger = j.value("dagger", false);
  } catch (const json::exception& ex) {
    bad(where, ex.what());
  }
  if (j.contains("components")) {
    const json& cs = j["components"];
    if (!cs.is_array()) bad(where + ".components", "expected an array");
    for (std::size_t i = 0; i < cs.size(); ++i)
      e.components.push_back(element_from_json(cs[i], where + ".components[" + std::to_string(i) + "]"));
  }
  return e;
}

}  // namespace detail

std::string sentence_to_json(const SentenceDiagram& d) {
  using detail::json;
  json j;
  j["nouns"] = json::array();
  for (const auto& n : d.nouns)
    j["nouns"].push_back(
        {{"word", n.word}, {"sentence", n.sentence_index}, {"token", n.token_index}, {"chain", n.chain_id}});
  j["body"] = detail::element_to_json(d.body);
  return j.dump(2);
}

}  // namespace discocirc
