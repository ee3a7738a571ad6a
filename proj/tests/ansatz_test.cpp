#include "discocirc/ansatz.hpp"

#include <gtest/gtest.h>

#include <set>

#include "discocirc/errors.hpp"
#include "discocirc/sandwich.hpp"
#include "test_support.hpp"

using namespace discocirc;

namespace {

using E = DiagramElement;

std::size_t count(const std::vector<Gate>& gates, const std::string& name) {
  std::size_t n = 0;
  for (const auto& g : gates) n += g.name == name;
  return n;
}

TextDiagram states_and(int width, std::vector<E> bodies) {
  TextDiagram t;
  for (int i = 0; i < width; ++i) {
    t.states.push_back({"n" + std::to_string(i), 0, i, i});
    t.wire_chains.push_back(i);
  }
  for (auto& b : bodies) {
    Layer l;
    l.element = std::move(b);
    l.dom = l.cod = t.wire_chains;
    t.layers.push_back(std::move(l));
  }
  return t;
}

std::set<std::string> symbols_with_prefix(const Circuit& c, const std::string& p) {
  std::set<std::string> out;
  for (const auto& [s, v] : c.symbols)
    if (s.rfind(p, 0) == 0) out.insert(s);
  return out;
}

AnsatzConfig sim4(int q = 1, int layers = 1) {
  AnsatzConfig c;
  c.kind = AnsatzKind::sim4;
  c.qubits_per_wire = q;
  c.layers = layers;
  return c;
}

}  // namespace

TEST(Ansatz, IqpMatchesFourQubitFigure) {
  auto g = iqp_block(4, 1);
  EXPECT_EQ(count(g, "H"), 4u);
  EXPECT_EQ(count(g, "CRz"), 3u);
  EXPECT_EQ(g.size(), 7u);
  EXPECT_EQ(g[4].qubits, (std::vector<int>{0, 1}));
  EXPECT_EQ(g[6].qubits, (std::vector<int>{2, 3}));
  auto g2 = iqp_block(2, 3);
  EXPECT_EQ(count(g2, "H"), 6u);
  EXPECT_EQ(count(g2, "CRz"), 3u);
  EXPECT_EQ(parameter_count(g2), 3u);
}

TEST(Ansatz, Sim4Examples) {
  auto one = sim4_block(1, 1);
  ASSERT_EQ(one.size(), 2u);
  EXPECT_EQ(one[0].name, "Rx");
  EXPECT_EQ(one[1].name, "Rz");
  EXPECT_EQ(parameter_count(one), 2u);
  auto g = sim4_block(3, 2);
  EXPECT_EQ(g.size(), 16u);
  EXPECT_EQ(parameter_count(g), 16u);
  EXPECT_EQ(parameter_count(sim4_block(2, 1)), 5u);
}

TEST(Ansatz, ClosedFormParameterCounts) {
  for (int n = 1; n <= 5; ++n)
    for (int l = 1; l <= 3; ++l) {
      EXPECT_EQ(parameter_count(sim4_block(n, l)), static_cast<std::size_t>(l * (3 * n - 1)));
      const std::size_t iqp = n == 1 ? 3u : static_cast<std::size_t>(l * (n - 1));
      EXPECT_EQ(parameter_count(iqp_block(n, l)), iqp) << n << " " << l;
    }
}

TEST(Ansatz, ConfigRejectsZeroLayers) {
  AnsatzConfig c;
  c.layers = 0;
  EXPECT_THROW(c.validate(), FormatError);
  c.layers = 1;
  c.qubits_per_wire = 0;
  EXPECT_THROW(compile(states_and(1, {}), c), FormatError);
  EXPECT_EQ(parse_ansatz("iqp"), AnsatzKind::iqp);
  EXPECT_THROW(parse_ansatz("qaoa"), FormatError);
}

TEST(Ansatz, SingleNounIqp) {
  AnsatzConfig c;
  c.kind = AnsatzKind::iqp;
  auto circ = compile(states_and(1, {}), c);
  EXPECT_EQ(circ.n_qubits, 1);
  EXPECT_EQ(circ.gates.size(), 3u);
  EXPECT_EQ(circ.symbols.size(), 3u);
  EXPECT_EQ(circ.outputs, std::vector<int>{0});
}

TEST(Ansatz, TwoWireBoxSim4) {
  auto circ = compile(states_and(2, {E::box("loves", {0, 1})}), sim4());
  auto mine = symbols_with_prefix(circ, "loves__2__");
  EXPECT_EQ(mine.size(), 5u);
  std::size_t rx = 0, rz = 0, crx = 0;
  for (const auto& g : circ.gates)
    if (g.symbol.rfind("loves", 0) == 0) rx += g.name == "Rx", rz += g.name == "Rz", crx += g.name == "CRx";
  EXPECT_EQ(rx, 2u);
  EXPECT_EQ(rz, 2u);
  EXPECT_EQ(crx, 1u);
  EXPECT_EQ(symbols_with_prefix(circ, "n0__0__").size(), 2u);
}

TEST(Ansatz, SharingCountsDistinctBoxes) {
  auto d = states_and(2, {E::box("likes", {0, 1}), E::box("likes", {0, 1}), E::box("likes", {1})});
  auto shared = compile(d, sim4());
  // 5 for the two-wire likes, 2 for the one-wire likes, 2 per state.
  EXPECT_EQ(shared.symbols.size(), 5u + 2u + 4u);
  auto cfg = sim4();
  cfg.share_parameters = false;
  auto own = compile(d, cfg);
  EXPECT_EQ(own.symbols.size(), 5u + 5u + 2u + 4u);
}

TEST(Ansatz, DeterministicAndSeeded) {
  auto d = states_and(3, {E::box("gives", {0, 1, 2})});
  auto a = compile(d, sim4(1, 2));
  EXPECT_EQ(a, compile(d, sim4(1, 2)));
  auto cfg = sim4(1, 2);
  cfg.seed = 9;
  auto b = compile(d, cfg);
  EXPECT_EQ(a.gates, b.gates);
  EXPECT_NE(a.symbols, b.symbols);
  for (const auto& [s, v] : a.symbols) {
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 2 * 3.14159266);
  }
}

TEST(Ansatz, MergeBox) {
  auto four = append_merge_box(states_and(4, {}));
  EXPECT_EQ(four.layers.back().element, E::box("merge_4", {0, 1, 2, 3}));
  EXPECT_TRUE(is_merge_box(four.layers.back().element));
  EXPECT_FALSE(is_merge_box(E::box("merge_4", {0, 1})));
  auto c = compile(four, sim4());
  EXPECT_EQ(c.postselect.size(), 3u);
  EXPECT_EQ(c.outputs, std::vector<int>{0});
  EXPECT_EQ(symbols_with_prefix(c, "merge_4__4__").size(), 11u);

  auto one = compile(append_merge_box(states_and(1, {})), sim4());
  EXPECT_TRUE(one.postselect.empty());
  EXPECT_EQ(one.outputs, std::vector<int>{0});

  auto two_q = compile(append_merge_box(states_and(3, {})), sim4(2));
  EXPECT_EQ(two_q.postselect.size(), 4u);
  EXPECT_EQ(two_q.outputs, (std::vector<int>{0, 1}));
}

TEST(Ansatz, MergeSymbolsSharedAcrossDocuments) {
  auto a = compile(append_merge_box(states_and(3, {E::box("x", {0})})), sim4());
  auto b = compile(append_merge_box(states_and(3, {E::box("y", {2})})), sim4());
  EXPECT_EQ(symbols_with_prefix(a, "merge_3"), symbols_with_prefix(b, "merge_3"));
}

TEST(Ansatz, PermsBecomeSwaps) {
  E p;
  p.kind = ElementKind::perm;
  p.wires = {0, 1};
  p.mapping = {1, 0};
  TextDiagram t = states_and(2, {});
  Layer l;
  l.element = p;
  l.dom = {0, 1};
  l.cod = {1, 0};
  t.layers.push_back(l);
  auto c = compile(t, sim4(2));
  ASSERT_EQ(count(c.gates, "SWAP"), 2u);
  EXPECT_EQ(c.gates[c.gates.size() - 2].qubits, (std::vector<int>{0, 2}));
  EXPECT_EQ(c.gates.back().qubits, (std::vector<int>{1, 3}));
}

TEST(Ansatz, SpidersCopyAndPostselect) {
  auto doc = fixtures::load_fixture("reflexive.json");
  auto t = expand_frames(text_diagram(doc).diagram);
  auto c = compile(t, sim4());
  EXPECT_EQ(c.n_qubits, 2);
  EXPECT_EQ(count(c.gates, "CX"), 2u);
  ASSERT_EQ(c.postselect.size(), 1u);
  EXPECT_EQ(c.postselect[0], (std::pair<int, int>{1, 0}));
  EXPECT_EQ(c.outputs, std::vector<int>{0});
}

TEST(Ansatz, CoordinationCircuitShape) {
  auto doc = fixtures::load_fixture("coordination.json");
  auto t = expand_frames(text_diagram(doc).diagram);
  auto c = compile(t, sim4());
  // The two clauses share Alice's wire one after the other: no copies needed.
  EXPECT_EQ(c.n_qubits, 3);
  EXPECT_EQ(c.outputs.size(), 3u);
  EXPECT_TRUE(c.postselect.empty());
  EXPECT_EQ(symbols_with_prefix(c, "loves__2__").size(), 5u);
  EXPECT_EQ(symbols_with_prefix(c, "plays__2__").size(), 5u);
  EXPECT_NO_THROW(check_circuit(c));
}

TEST(Ansatz, Errors) {
  EXPECT_THROW(compile(states_and(2, {E::frame("f", {0, 1}, {E::box("g", {0})})}), sim4()), UnexpandedFrame);
  EXPECT_THROW(compile(states_and(4, {}), sim4(4)), CapExceeded);
  auto cfg = sim4(4);
  cfg.qubit_cap = 0;
  EXPECT_EQ(compile(states_and(4, {}), cfg).n_qubits, 16);
}

TEST(Ansatz, JsonAndTextDumps) {
  auto c = compile(append_merge_box(states_and(2, {E::box("loves", {0, 1})})), sim4());
  EXPECT_EQ(circuit_from_json(circuit_to_json(c)), c);
  auto text = circuit_to_text(c);
  EXPECT_EQ(text.rfind("qubits 2\n", 0), 0u);
  EXPECT_NE(text.find("CRx 0 1 loves__2__4\n"), std::string::npos);
  EXPECT_NE(text.find("postselect 1 0\n"), std::string::npos);
  EXPECT_NE(text.find("outputs 0\n"), std::string::npos);
  EXPECT_THROW(circuit_from_json(R"({"n_qubits": 1, "gates": [{"name": "CX", "qubits": [0, 1]}], "outputs": [0]})"),
               FormatError);
  EXPECT_THROW(circuit_from_json(R"({"n_qubits": 1, "gates": [{"name": "Rx", "qubits": [0], "param": "t"}],
                                     "outputs": [0]})"),
               FormatError);
}
