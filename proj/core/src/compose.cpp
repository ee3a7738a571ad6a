#include "discocirc/compose.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "discocirc/errors.hpp"
#include "json_util.hpp"

namespace discocirc {

using namespace detail;

std::map<int, int> TextDiagram::chain_order() const {
  std::map<int, int> out;
  for (std::size_t i = 0; i < wire_chains.size(); ++i) out[wire_chains[i]] = static_cast<int>(i);
  return out;
}

namespace {

DiagramElement transposition(int i) {
  DiagramElement e;
  e.kind = ElementKind::perm;
  e.wires = {i, i + 1};
  e.mapping = {i + 1, i};
  return e;
}

DiagramElement spider(int at, int legs, bool split) {
  DiagramElement e;
  e.kind = ElementKind::spider;
  for (int k = 0; k < legs; ++k) e.wires.push_back(at + k);
  e.out_wire = at;
  e.dagger = split;
  return e;
}

// Wire labels after `e` acts on `labels`.
std::vector<int> relabel(const DiagramElement& e, std::vector<int> labels) {
  if (e.kind == ElementKind::perm) {
    std::vector<int> out = labels;
    for (std::size_t k = 0; k < e.wires.size(); ++k)
      out.at(static_cast<std::size_t>(e.mapping[k])) = labels.at(static_cast<std::size_t>(e.wires[k]));
    return out;
  }
  if (e.kind == ElementKind::spider) {
    const auto at = labels.begin() + e.out_wire;
    const auto extra = static_cast<std::ptrdiff_t>(e.wires.size()) - 1;
    if (e.dagger)
      labels.insert(at + 1, static_cast<std::size_t>(extra), *at);
    else
      labels.erase(at + 1, at + 1 + extra);
  }
  return labels;
}

// Transpositions are involutions; spiders flip direction.
DiagramElement inverse(const DiagramElement& e) {
  DiagramElement out = e;
  if (e.kind == ElementKind::spider) out.dagger = !e.dagger;
  return out;
}

void shift_wires(DiagramElement& e, int by) {
  for (auto& w : e.wires) w += by;
  for (auto& w : e.mapping) w += by;
  if (e.out_wire >= 0) e.out_wire += by;
  for (auto& c : e.components) shift_wires(c, by);
}

void remap_wires(DiagramElement& e, const std::vector<int>& to) {
  for (auto& w : e.wires) w = to.at(static_cast<std::size_t>(w));
  for (auto& c : e.components) remap_wires(c, to);
}

bool trivial_body(const DiagramElement& e) {
  if (e.kind == ElementKind::empty || e.kind == ElementKind::identity) return true;
  if (e.kind == ElementKind::par)
    return std::all_of(e.components.begin(), e.components.end(), trivial_body);
  return false;
}

// Builds the layer list while tracking wire labels.
class LayerWriter {
 public:
  explicit LayerWriter(std::vector<int> labels) : labels_(std::move(labels)) {}

  void push(DiagramElement e, int sentence) {
    Layer l;
    l.element = std::move(e);
    l.dom = labels_;
    l.cod = relabel(l.element, labels_);
    l.sentence = sentence;
    labels_ = l.cod;
    layers_.push_back(std::move(l));
  }

  const std::vector<int>& labels() const { return labels_; }
  std::vector<Layer>& layers() { return layers_; }

 private:
  std::vector<int> labels_;
  std::vector<Layer> layers_;
};

}  // namespace

std::vector<DiagramElement> permutation_to_layers(const PermSpec& p) {
  std::vector<DiagramElement> out;
  std::vector<int> target = p.mapping;
  const int n = static_cast<int>(target.size());
  for (int pass = 0; pass < n; ++pass) {
    bool swapped = false;
    for (int j = 0; j + 1 < n; ++j) {
      if (target[static_cast<std::size_t>(j)] > target[static_cast<std::size_t>(j + 1)]) {
        std::swap(target[static_cast<std::size_t>(j)], target[static_cast<std::size_t>(j + 1)]);
        out.push_back(transposition(j));
        swapped = true;
      }
    }
    if (!swapped) break;
  }
  std::vector<int> labels = p.labels;
  for (const auto& e : out) labels = relabel(e, labels);
  for (const auto& [chain, mult] : p.spiders) {
    auto it = std::find(labels.begin(), labels.end(), chain);
    if (it == labels.end() || mult < 2) continue;
    out.push_back(spider(static_cast<int>(it - labels.begin()), mult, true));
    labels = relabel(out.back(), labels);
  }
  return out;
}

TextDiagram compose_document(const std::vector<SentenceDiagram>& sentences, const CorefMap& corefs,
                             std::vector<std::string>* log) {
  // Chain of every noun, with fresh ids for unchained nouns.
  int next_fresh = static_cast<int>(corefs.chains.size());
  std::vector<std::vector<int>> chains_of(sentences.size());
  TextDiagram t;
  std::set<int> seen;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    for (const auto& n : sentences[s].nouns) {
      int c = n.chain_id;
      if (c < 0) {
        c = next_fresh++;
      } else {
        const Mention m{n.sentence_index, n.token_index};
        if (c >= static_cast<int>(corefs.chains.size()) ||
            !std::binary_search(corefs.chains[static_cast<std::size_t>(c)].begin(),
                                corefs.chains[static_cast<std::size_t>(c)].end(), m))
          throw ChainMismatch("noun '" + n.word + "' at " + std::to_string(m.sentence) + ":" +
                              std::to_string(m.token) + " is not in chain " + std::to_string(c));
      }
      chains_of[s].push_back(c);
      if (seen.insert(c).second) {
        t.wire_chains.push_back(c);
        NounState st = n;
        st.chain_id = c;
        t.states.push_back(std::move(st));
      }
    }
  }

  LayerWriter out(t.wire_chains);
  std::size_t active = 0;  // wires introduced so far sit at [0, active) plus spider copies
  std::set<int> introduced;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const auto& sd = sentences[s];
    const int si = sd.nouns.empty() ? static_cast<int>(s) : sd.nouns.front().sentence_index;
    for (int c : chains_of[s])
      if (introduced.insert(c).second) ++active;
    if (trivial_body(sd.body)) {
      if (log && sd.body.is_empty())
        log->push_back("sentence " + std::to_string(si) + ": empty body, skipped");
      continue;
    }

    // Distinct local chains in order of first local use, with multiplicities.
    std::vector<int> local_chains;
    std::map<int, int> mult;
    for (int c : chains_of[s]) {
      if (mult[c]++ == 0) local_chains.push_back(c);
    }
    const auto& labels = out.labels();
    const int a = static_cast<int>(active);
    const int k = static_cast<int>(local_chains.size());
    PermSpec spec;
    spec.labels = labels;
    spec.mapping.resize(labels.size());
    int left = 0;
    for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
      const int c = labels[static_cast<std::size_t>(i)];
      auto it = std::find(local_chains.begin(), local_chains.end(), c);
      if (i >= a)
        spec.mapping[static_cast<std::size_t>(i)] = i;
      else if (it != local_chains.end())
        spec.mapping[static_cast<std::size_t>(i)] = a - k + static_cast<int>(it - local_chains.begin());
      else
        spec.mapping[static_cast<std::size_t>(i)] = left++;
    }
    for (int c : local_chains)
      if (mult[c] > 1) spec.spiders.push_back({c, mult[c]});

    const auto prep = permutation_to_layers(spec);
    for (const auto& e : prep) out.push(e, si);

    // Local wire -> position inside the block of copies.
    std::map<int, int> group_start;
    int pos = a - k;
    for (int c : local_chains) {
      group_start[c] = pos;
      pos += mult[c];
    }
    std::map<int, int> used;
    std::vector<int> to;
    for (int c : chains_of[s]) to.push_back(group_start[c] + used[c]++);
    DiagramElement body = sd.body;
    remap_wires(body, to);
    out.push(std::move(body), si);

    for (auto it = prep.rbegin(); it != prep.rend(); ++it) out.push(inverse(*it), si);
  }
  t.layers = std::move(out.layers());
  if (log && t.states.empty()) log->push_back("document has no nouns; text diagram is empty");
  return t;
}

TextDiagram concat_text(const TextDiagram& a, const TextDiagram& b) {
  TextDiagram t;
  t.states = a.states;
  t.wire_chains = a.wire_chains;
  std::vector<int> b_only;
  for (std::size_t i = 0; i < b.wire_chains.size(); ++i) {
    const int c = b.wire_chains[i];
    if (std::find(a.wire_chains.begin(), a.wire_chains.end(), c) != a.wire_chains.end()) continue;
    b_only.push_back(c);
    t.wire_chains.push_back(c);
    t.states.push_back(b.states[i]);
  }

  for (auto l : a.layers) {
    l.dom.insert(l.dom.end(), b_only.begin(), b_only.end());
    l.cod.insert(l.cod.end(), b_only.begin(), b_only.end());
    t.layers.push_back(std::move(l));
  }

  // Bring b's wires, in b's order, to the right of the chains b never uses.
  std::vector<int> a_only;
  for (int c : a.wire_chains)
    if (std::find(b.wire_chains.begin(), b.wire_chains.end(), c) == b.wire_chains.end())
      a_only.push_back(c);
  PermSpec spec;
  spec.labels = t.wire_chains;
  for (int c : t.wire_chains) {
    auto ia = std::find(a_only.begin(), a_only.end(), c);
    if (ia != a_only.end()) {
      spec.mapping.push_back(static_cast<int>(ia - a_only.begin()));
    } else {
      auto ib = std::find(b.wire_chains.begin(), b.wire_chains.end(), c);
      spec.mapping.push_back(static_cast<int>(a_only.size() + static_cast<std::size_t>(ib - b.wire_chains.begin())));
    }
  }
  LayerWriter out(t.wire_chains);
  const auto perm = permutation_to_layers(spec);
  for (const auto& e : perm) out.push(e, -1);
  for (const auto& l : b.layers) {
    DiagramElement e = l.element;
    shift_wires(e, static_cast<int>(a_only.size()));
    out.push(std::move(e), l.sentence);
  }
  for (auto it = perm.rbegin(); it != perm.rend(); ++it) out.push(inverse(*it), -1);
  for (auto& l : out.layers()) t.layers.push_back(std::move(l));
  return t;
}

std::map<int, std::vector<std::string>> wire_box_sequences(const TextDiagram& t) {
  std::map<int, std::vector<std::string>> out;
  for (int c : t.wire_chains) out[c];
  std::function<void(const DiagramElement&, const std::vector<int>&)> visit =
      [&](const DiagramElement& e, const std::vector<int>& dom) {
        if (e.kind == ElementKind::box || e.kind == ElementKind::frame) {
          std::set<int> done;
          for (int w : e.wires) {
            const int c = dom.at(static_cast<std::size_t>(w));
            if (done.insert(c).second) out[c].push_back(e.name);
          }
        }
        if (e.kind != ElementKind::perm && e.kind != ElementKind::spider)
          for (const auto& c : e.components) visit(c, dom);
      };
  for (const auto& l : t.layers) visit(l.element, l.dom);
  return out;
}

void check_text_diagram(const TextDiagram& t) {
  if (t.states.size() != t.wire_chains.size())
    throw InvalidDiagram("text diagram has " + std::to_string(t.states.size()) + " states for " +
                         std::to_string(t.wire_chains.size()) + " wires");
  std::vector<int> labels = t.wire_chains;
  for (std::size_t i = 0; i < t.layers.size(); ++i) {
    const auto& l = t.layers[i];
    const std::string where = "layer " + std::to_string(i);
    if (l.dom != labels) throw InvalidDiagram(where + ": domain does not match the previous codomain");
    // Split legs live in the codomain, merge legs in the domain.
    const int width = static_cast<int>(std::max(l.dom.size(), l.cod.size()));
    for (int w : element_wires(l.element))
      if (w < 0 || w >= width)
        throw InvalidDiagram(where + ": wire " + std::to_string(w) + " out of range");
    if (relabel(l.element, l.dom) != l.cod) throw InvalidDiagram(where + ": codomain is inconsistent");
    labels = l.cod;
  }
  if (labels != t.wire_chains) throw InvalidDiagram("output wires differ from the input wires");
}

TextResult text_diagram(const Document& doc, const TextOptions& opts) {
  TextResult r;
  if (opts.split_coordination) {
    std::vector<int> skipped;
    r.document = split_coordinations(doc, &skipped);
    for (int s : skipped)
      r.log.push_back("sentence " + std::to_string(s) + ": conjunction left unsplit (NotACoordination)");
  } else {
    r.document = doc;
  }
  r.document.corefs = complete_corefs(r.document, noun_mentions(r.document, opts.lexicon));

  SentenceOptions so;
  so.rules = opts.rules;
  if (opts.lexicon) so.is_noun = lexicon_noun_tagger(*opts.lexicon);
  if (opts.min_noun_frequency) so.remove = min_frequency_filter(r.document.corefs, *opts.min_noun_frequency);
  if (!opts.remove_words.empty()) {
    auto more = mentions_of_words(r.document, opts.remove_words);
    so.remove.insert(more.begin(), more.end());
  }
  for (int s = 0; s < static_cast<int>(r.document.sentences.size()); ++s) {
    try {
      r.sentences.push_back(sentence_diagram(r.document, s, so, &r.log));
    } catch (const EmptySentence& e) {
      r.log.push_back(std::string("skipped: ") + e.what());
    }
  }
  r.diagram = compose_document(r.sentences, r.document.corefs, &r.log);
  return r;
}

// Dumps ---------------------------------------------------------------------------

namespace {

std::string labels_text(const std::vector<int>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s + "]";
}

}  // namespace

std::string text_to_text(const TextDiagram& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.states.size(); ++i)
    os << "state " << i << ' ' << t.states[i].word << " chain " << t.wire_chains[i] << '\n';
  for (std::size_t i = 0; i < t.layers.size(); ++i) {
    const auto& l = t.layers[i];
    os << "layer " << i << " sentence " << l.sentence << ' ' << labels_text(l.dom) << '\n'
       << element_to_text(l.element, 1);
  }
  return os.str();
}

std::string text_to_dot(const TextDiagram& t, const std::string& graph_name) {
  std::ostringstream os;
  os << "digraph " << graph_name << " {\n  rankdir=TB;\n";
  std::vector<std::string> last;
  for (std::size_t i = 0; i < t.states.size(); ++i) {
    const std::string id = "s" + std::to_string(i);
    std::string word = t.states[i].word;
    std::string esc;
    for (char c : word) {
      if (c == '"' || c == '\\') esc += '\\';
      esc += c;
    }
    os << "  " << id << " [shape=triangle,label=\"" << esc << "\"];\n";
    last.push_back(id);
  }
  int prev_sentence = -2;
  for (std::size_t i = 0; i < t.layers.size(); ++i) {
    const auto& l = t.layers[i];
    const auto& e = l.element;
    const std::string id = "l" + std::to_string(i);
    if (l.sentence != prev_sentence && l.sentence >= 0)
      os << "  // sentence " << l.sentence << "\n";
    prev_sentence = l.sentence;
    std::string label = e.name.empty() ? std::string(kind_name(e.kind)) : e.name;
    const char* shape = e.kind == ElementKind::frame ? "box3d"
                        : e.kind == ElementKind::spider ? "circle"
                        : e.kind == ElementKind::perm ? "point"
                                                      : "box";
    os << "  " << id << " [shape=" << shape << ",label=\"" << label << "\"];\n";
    std::set<int> touched;
    for (int w : e.wires) touched.insert(w);
    if (e.kind == ElementKind::par || e.kind == ElementKind::seq)
      touched = element_wires(e);
    for (int w : touched) os << "  " << last.at(static_cast<std::size_t>(w)) << " -> " << id << ";\n";
    std::vector<std::string> next(l.cod.size());
    if (e.kind == ElementKind::spider || e.kind == ElementKind::perm) {
      if (e.kind == ElementKind::perm) {
        next = last;
        for (int w : e.wires) next[static_cast<std::size_t>(w)] = id;
      } else {
        std::size_t j = 0;
        for (std::size_t w = 0; w < l.dom.size(); ++w) {
          if (touched.count(static_cast<int>(w))) {
            if (static_cast<int>(w) == e.out_wire) {
              const std::size_t copies = e.dagger ? e.wires.size() : 1;
              for (std::size_t k = 0; k < copies; ++k) next[j++] = id;
            }
          } else {
            next[j++] = last[w];
          }
        }
      }
    } else {
      next = last;
      for (int w : touched) next[static_cast<std::size_t>(w)] = id;
    }
    last = std::move(next);
  }
  for (std::size_t i = 0; i < last.size(); ++i)
    os << "  o" << i << " [shape=plaintext,label=\"\"];\n  " << last[i] << " -> o" << i << ";\n";
  os << "}\n";
  return os.str();
}

std::string text_to_json(const TextDiagram& t) {
  json j;
  j["states"] = json::array();
  for (const auto& n : t.states)
    j["states"].push_back(
        {{"word", n.word}, {"sentence", n.sentence_index}, {"token", n.token_index}, {"chain", n.chain_id}});
  j["wire_chains"] = t.wire_chains;
  j["layers"] = json::array();
  for (const auto& l : t.layers)
    j["layers"].push_back({{"sentence", l.sentence},
                           {"dom", l.dom},
                           {"cod", l.cod},
                           {"element", element_to_json(l.element)}});
  return j.dump(2);
}

TextDiagram text_from_json(const std::string& json_text) {
  const json j = parse_json(json_text);
  if (!j.is_object()) bad("text", "expected an object");
  TextDiagram t;
  try {
    for (std::size_t i = 0; i < j.at("states").size(); ++i) {
      const json& s = j["states"][i];
      t.states.push_back({s.at("word").get<std::string>(), s.at("sentence").get<int>(),
                          s.at("token").get<int>(), s.at("chain").get<int>()});
    }
    t.wire_chains = j.at("wire_chains").get<std::vector<int>>();
    for (std::size_t i = 0; i < j.at("layers").size(); ++i) {
      const json& l = j["layers"][i];
      const std::string where = "layers[" + std::to_string(i) + "]";
      Layer layer;
      layer.element = element_from_json(l.at("element"), where + ".element");
      layer.dom = l.at("dom").get<std::vector<int>>();
      layer.cod = l.at("cod").get<std::vector<int>>();
      layer.sentence = l.value("sentence", -1);
      t.layers.push_back(std::move(layer));
    }
  } catch (const json::exception& e) {
    bad("text", e.what());
  }
  try {
    check_text_diagram(t);
  } catch (const InvalidDiagram& e) {
    bad("text", e.what());
  }
  return t;
}

}  // namespace discocirc
