#include "discocirc/ansatz.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "discocirc/errors.hpp"
#include "json_util.hpp"

namespace discocirc {

using namespace detail;

std::string ansatz_name(AnsatzKind k) { return k == AnsatzKind::iqp ? "iqp" : "sim4"; }

AnsatzKind parse_ansatz(const std::string& s) {
  if (s == "iqp" || s == "IQP") return AnsatzKind::iqp;
  if (s == "sim4" || s == "Sim4") return AnsatzKind::sim4;
  bad("ansatz", "unknown ansatz '" + s + "'");
}

void AnsatzConfig::validate() const {
  if (qubits_per_wire < 1) bad("ansatz", "qubits per wire must be at least 1");
  if (layers < 1) bad("ansatz", "layers must be at least 1");
}

namespace {

Gate fixed(const std::string& name, std::vector<int> qubits) { return {name, std::move(qubits), "", 0.0}; }

Gate rot(const std::string& name, std::vector<int> qubits, const std::string& prefix, int& idx) {
  return {name, std::move(qubits), prefix + std::to_string(idx++), 0.0};
}

}  // namespace

std::vector<Gate> iqp_block(int n, int layers, const std::string& prefix) {
  std::vector<Gate> out;
  int idx = 0;
  if (n == 1) {
    out.push_back(rot("Rx", {0}, prefix, idx));
    out.push_back(rot("Rz", {0}, prefix, idx));
    out.push_back(rot("Rx", {0}, prefix, idx));
    return out;
  }
  for (int l = 0; l < layers; ++l) {
    for (int i = 0; i < n; ++i) out.push_back(fixed("H", {i}));
    for (int i = 0; i + 1 < n; ++i) out.push_back(rot("CRz", {i, i + 1}, prefix, idx));
  }
  return out;
}

std::vector<Gate> sim4_block(int n, int layers, const std::string& prefix) {
  std::vector<Gate> out;
  int idx = 0;
  for (int l = 0; l < layers; ++l) {
    for (int i = 0; i < n; ++i) out.push_back(rot("Rx", {i}, prefix, idx));
    for (int i = 0; i < n; ++i) out.push_back(rot("Rz", {i}, prefix, idx));
    for (int i = 0; i + 1 < n; ++i) out.push_back(rot("CRx", {i, i + 1}, prefix, idx));
  }
  return out;
}

std::vector<Gate> ansatz_block(AnsatzKind k, int n, int layers, const std::string& prefix) {
  return k == AnsatzKind::iqp ? iqp_block(n, layers, prefix) : sim4_block(n, layers, prefix);
}

std::size_t parameter_count(const std::vector<Gate>& gates) {
  std::set<std::string> s;
  for (const auto& g : gates)
    if (!g.symbol.empty()) s.insert(g.symbol);
  return s.size();
}

double initial_value(std::uint64_t seed, const std::string& symbol) {
  // FNV-1a over the seed bytes, then the name.
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](unsigned char b) {
    h ^= b;
    h *= 1099511628211ULL;
  };
  for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(seed >> (8 * i)));
  for (unsigned char c : symbol) mix(c);
  std::mt19937_64 rng(h);
  return std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
}

TextDiagram append_merge_box(const TextDiagram& d) {
  TextDiagram out = d;
  const auto w = d.width();
  if (w == 0) return out;
  std::vector<int> wires(w);
  for (std::size_t i = 0; i < w; ++i) wires[i] = static_cast<int>(i);
  Layer l;
  l.element = DiagramElement::box("merge_" + std::to_string(w), wires);
  l.dom = l.cod = d.layers.empty() ? d.wire_chains : d.layers.back().cod;
  out.layers.push_back(std::move(l));
  return out;
}

bool is_merge_box(const DiagramElement& e) {
  if (e.kind != ElementKind::box || e.name.rfind("merge_", 0) != 0 || e.name.size() == 6) return false;
  for (std::size_t i = 6; i < e.name.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(e.name[i]))) return false;
  return std::to_string(e.wires.size()) == e.name.substr(6);
}

namespace {

class Compiler {
 public:
  explicit Compiler(const AnsatzConfig& cfg) : cfg_(cfg) {}

  Circuit run(const TextDiagram& d) {
    for (const auto& s : d.states) {
      auto qs = fresh();
      block(s.word, 0, qs);
      pos_.push_back(std::move(qs));
    }
    for (std::size_t i = 0; i < d.layers.size(); ++i) {
      const auto& l = d.layers[i];
      if (l.dom.size() != pos_.size())
        throw InvalidDiagram("layer " + std::to_string(i) + " does not match the current width");
      layer(l.element);
    }
    if (cfg_.qubit_cap > 0 && c_.n_qubits > cfg_.qubit_cap)
      throw CapExceeded("circuit needs " + std::to_string(c_.n_qubits) + " qubits, cap is " +
                        std::to_string(cfg_.qubit_cap));
    if (merged_)
      c_.outputs = pos_.back();
    else
      for (const auto& qs : pos_) c_.outputs.insert(c_.outputs.end(), qs.begin(), qs.end());
    return c_;
  }

 private:
  std::vector<int> fresh() {
    std::vector<int> qs;
    for (int k = 0; k < cfg_.qubits_per_wire; ++k) qs.push_back(c_.n_qubits++);
    return qs;
  }

  std::string prefix(const std::string& name, int arity) {
    std::string base = name;
    if (!cfg_.share_parameters) base += "@" + std::to_string(occurrences_[{name, arity}]++);
    return base + "__" + std::to_string(arity) + "__";
  }

  void block(const std::string& name, int arity, const std::vector<int>& qubits) {
    for (auto g : ansatz_block(cfg_.kind, static_cast<int>(qubits.size()), cfg_.layers, prefix(name, arity))) {
      for (auto& q : g.qubits) q = qubits[static_cast<std::size_t>(q)];
      if (!g.symbol.empty() && !c_.symbols.count(g.symbol))
        c_.symbols[g.symbol] = initial_value(cfg_.seed, g.symbol);
      c_.gates.push_back(std::move(g));
    }
  }

  void layer(const DiagramElement& e) {
    if (e.kind == ElementKind::perm) {
      if (e.wires.size() != 2 || e.mapping != std::vector<int>{e.wires[1], e.wires[0]})
        throw InvalidDiagram("only transpositions are supported");
      const auto& a = pos_.at(static_cast<std::size_t>(e.wires[0]));
      const auto& b = pos_.at(static_cast<std::size_t>(e.wires[1]));
      for (std::size_t k = 0; k < a.size(); ++k) c_.gates.push_back(fixed("SWAP", {a[k], b[k]}));
      return;
    }
    if (e.kind == ElementKind::spider) {
      spider(e);
      return;
    }
    element(e);
  }

  void spider(const DiagramElement& e) {
    const auto at = static_cast<std::size_t>(e.out_wire);
    const auto extra = e.wires.size() - 1;
    if (e.dagger) {
      std::vector<std::vector<int>> copies;
      for (std::size_t j = 0; j < extra; ++j) {
        auto qs = fresh();
        for (std::size_t k = 0; k < qs.size(); ++k) c_.gates.push_back(fixed("CX", {pos_[at][k], qs[k]}));
        copies.push_back(std::move(qs));
      }
      pos_.insert(pos_.begin() + static_cast<std::ptrdiff_t>(at) + 1, copies.begin(), copies.end());
      return;
    }
    for (std::size_t j = 1; j <= extra; ++j)
      for (std::size_t k = 0; k < pos_[at].size(); ++k) {
        c_.gates.push_back(fixed("CX", {pos_[at][k], pos_.at(at + j)[k]}));
        c_.postselect.emplace_back(pos_[at + j][k], 0);
      }
    pos_.erase(pos_.begin() + static_cast<std::ptrdiff_t>(at) + 1,
               pos_.begin() + static_cast<std::ptrdiff_t>(at + 1 + extra));
  }

  void element(const DiagramElement& e) {
    switch (e.kind) {
      case ElementKind::frame:
        throw UnexpandedFrame("frame '" + e.name + "' reached the ansatz");
      case ElementKind::identity:
      case ElementKind::empty:
        return;
      case ElementKind::par:
      case ElementKind::seq:
        for (const auto& c : e.components) element(c);
        return;
      case ElementKind::box: {
        std::vector<int> qs;
        for (int w : e.wires) {
          const auto& p = pos_.at(static_cast<std::size_t>(w));
          qs.insert(qs.end(), p.begin(), p.end());
        }
        block(e.name, static_cast<int>(e.wires.size()), qs);
        if (is_merge_box(e)) {
          // Keep the first wire: the other wires are CRx targets, so
          // postselecting them still couples them to the output.
          for (std::size_t i = 1; i < e.wires.size(); ++i)
            for (int q : pos_[static_cast<std::size_t>(e.wires[i])]) c_.postselect.emplace_back(q, 0);
          merged_ = true;
          pos_ = {pos_[static_cast<std::size_t>(e.wires.front())]};
        }
        return;
      }
      default:
        throw InvalidDiagram("unexpected " + std::string(kind_name(e.kind)) + " inside a layer");
    }
  }

  const AnsatzConfig& cfg_;
  Circuit c_;
  std::vector<std::vector<int>> pos_;  // qubits of each wire position
  std::map<std::pair<std::string, int>, int> occurrences_;
  bool merged_ = false;
};

}  // namespace

Circuit compile(const TextDiagram& d, const AnsatzConfig& cfg) {
  cfg.validate();
  Circuit c = Compiler(cfg).run(d);
  check_circuit(c);
  return c;
}

void check_circuit(const Circuit& c) {
  auto in_range = [&](int q) { return q >= 0 && q < c.n_qubits; };
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const auto& g = c.gates[i];
    const std::string where = "gate " + std::to_string(i) + " (" + g.name + ")";
    static const std::map<std::string, std::size_t> arity{{"H", 1},   {"Rx", 1},  {"Ry", 1},  {"Rz", 1},
                                                          {"CRz", 2}, {"CRx", 2}, {"CX", 2}, {"SWAP", 2}};
    auto it = arity.find(g.name);
    if (it == arity.end()) throw InvalidDiagram(where + ": unknown gate");
    if (g.qubits.size() != it->second) throw InvalidDiagram(where + ": wrong number of qubits");
    for (int q : g.qubits)
      if (!in_range(q)) throw InvalidDiagram(where + ": qubit out of range");
    if (g.qubits.size() == 2 && g.qubits[0] == g.qubits[1]) throw InvalidDiagram(where + ": repeated qubit");
    if (!g.symbol.empty() && !c.symbols.count(g.symbol))
      throw InvalidDiagram(where + ": undeclared symbol " + g.symbol);
  }
  std::set<int> post;
  for (const auto& [q, bit] : c.postselect) {
    if (!in_range(q) || (bit != 0 && bit != 1)) throw InvalidDiagram("bad postselection on qubit " + std::to_string(q));
    post.insert(q);
  }
  for (int q : c.outputs) {
    if (!in_range(q)) throw InvalidDiagram("output qubit out of range");
    if (post.count(q)) throw InvalidDiagram("output qubit " + std::to_string(q) + " is postselected");
  }
}

std::string circuit_to_json(const Circuit& c) {
  json j;
  j["n_qubits"] = c.n_qubits;
  j["gates"] = json::array();
  for (const auto& g : c.gates) {
    json jg{{"name", g.name}, {"qubits", g.qubits}};
    if (!g.symbol.empty())
      jg["param"] = g.symbol;
    else if (g.name != "H" && g.name != "CX" && g.name != "SWAP")
      jg["param"] = g.value;
    j["gates"].push_back(std::move(jg));
  }
  j["postselect"] = json::array();
  for (const auto& [q, b] : c.postselect) j["postselect"].push_back({q, b});
  j["symbols"] = json::object();
  for (const auto& [s, v] : c.symbols) j["symbols"][s] = v;
  j["outputs"] = c.outputs;
  return j.dump(2);
}

Circuit circuit_from_json(const std::string& json_text) {
  const json j = parse_json(json_text);
  if (!j.is_object()) bad("circuit", "expected an object");
  Circuit c;
  try {
    c.n_qubits = j.at("n_qubits").get<int>();
    for (std::size_t i = 0; i < j.at("gates").size(); ++i) {
      const json& g = j["gates"][i];
      Gate gate;
      gate.name = g.at("name").get<std::string>();
      gate.qubits = g.at("qubits").get<std::vector<int>>();
      if (g.contains("param")) {
        if (g["param"].is_string())
          gate.symbol = g["param"].get<std::string>();
        else
          gate.value = g["param"].get<double>();
      }
      c.gates.push_back(std::move(gate));
    }
    const json post = j.value("postselect", json::array());
    for (const auto& p : post) c.postselect.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
    const json syms = j.value("symbols", json::object());
    for (const auto& [s, v] : syms.items()) c.symbols[s] = v.get<double>();
    c.outputs = j.at("outputs").get<std::vector<int>>();
  } catch (const json::exception& e) {
    bad("circuit", e.what());
  }
  try {
    check_circuit(c);
  } catch (const InvalidDiagram& e) {
    bad("circuit", e.what());
  }
  return c;
}

std::string circuit_to_text(const Circuit& c) {
  std::ostringstream os;
  os << "qubits " << c.n_qubits << '\n';
  for (const auto& g : c.gates) {
    os << g.name;
    for (int q : g.qubits) os << ' ' << q;
    if (!g.symbol.empty()) {
      os << ' ' << g.symbol;
    } else if (g.name != "H" && g.name != "CX" && g.name != "SWAP") {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", g.value);
      os << ' ' << buf;
    }
    os << '\n';
  }
  for (const auto& [q, b] : c.postselect) os << "postselect " << q << ' ' << b << '\n';
  os << "outputs";
  for (int q : c.outputs) os << ' ' << q;
  os << '\n';
  return os.str();
}

}  // namespace discocirc
