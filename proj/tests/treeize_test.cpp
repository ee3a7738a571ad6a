#include "discocirc/treeize.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <numeric>
#include <random>
#include <set>

#include "test_support.hpp"

using namespace discocirc;
using namespace discocirc::types;

namespace {

const PregroupDiagram& sentence(const Document& doc, std::size_t i = 0) { return doc.sentences.at(i); }

void collect(const PregroupTreeNode& n, std::vector<int>& out) {
  out.push_back(n.token_index);
  for (const auto& c : n.children) collect(c, out);
}

// Brute force: the token graph (one edge per linked token pair, self links
// counted as loops) is a forest iff union-find never joins a component to
// itself.
bool link_graph_is_forest(const PregroupDiagram& d) {
  auto owners = d.wire_owners();
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& c : d.cups) {
    auto a = owners[c.left], b = owners[c.right];
    if (a == b) return false;
    edges.insert({std::min(a, b), std::max(a, b)});
  }
  std::vector<std::size_t> parent(d.tokens.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (auto [a, b] : edges) {
    auto ra = find(a), rb = find(b);
    if (ra == rb) return false;
    parent[ra] = rb;
  }
  return true;
}

void expect_round_trip(const PregroupDiagram& d) {
  auto report = build_trees(d);
  auto expected = types_without_cups(d, report.removed_cups);
  auto got = recovered_types(report.forest, d.tokens.size());
  ASSERT_EQ(got.size(), expected.size());
  for (std::size_t i = 0; i < got.size(); ++i)
    EXPECT_EQ(got[i], expected[i]) << "token " << i << " of\n" << forest_to_text(report.forest);
}

}  // namespace

TEST(Treeize, AliceReadsBooks) {
  auto doc = fixtures::load_fixture("fig4.json");
  auto report = build_trees(sentence(doc));
  ASSERT_EQ(report.forest.size(), 1u);
  EXPECT_TRUE(report.removed_cups.empty());
  const auto& root = report.forest[0];
  EXPECT_EQ(root.word, "reads");
  EXPECT_EQ(root.out_type, PregroupType{s});
  ASSERT_EQ(root.children.size(), 2u);
  EXPECT_EQ(root.children[0].word, "Alice");
  EXPECT_EQ(root.children[0].out_type, PregroupType{n});
  EXPECT_EQ(root.children[1].word, "books");
  EXPECT_EQ(compound_type(root), (PregroupType{nr, s, nl}));
  EXPECT_EQ(tree_to_text(root), "1:reads [s]\n  0:Alice [n]\n  2:books [n]\n");
}

TEST(Treeize, DeterminerRecoversItsType) {
  auto doc = fixtures::load_fixture("fig5a.json");
  auto report = build_trees(sentence(doc));
  ASSERT_EQ(report.forest.size(), 1u);
  const auto& root = report.forest[0];
  EXPECT_EQ(root.word, "barks");
  ASSERT_EQ(root.children.size(), 1u);
  const auto& det = root.children[0];
  EXPECT_EQ(det.word, "A");
  EXPECT_EQ(det.out_type, PregroupType{n});
  EXPECT_EQ(compound_type(det), (PregroupType{n, nl}));
  ASSERT_EQ(det.children.size(), 1u);
  EXPECT_EQ(det.children[0].word, "dog");
  EXPECT_EQ(compound_type(det.children[0]), PregroupType{n});
}

TEST(Treeize, LoopBreaksLongestDependency) {
  auto doc = fixtures::load_fixture("fig6.json");
  auto report = build_trees(sentence(doc));
  ASSERT_EQ(report.removed_cups.size(), 1u);
  EXPECT_EQ(report.removed_cups[0], (Cup{5, 10}));
  auto owners = sentence(doc).wire_owners();
  EXPECT_EQ(sentence(doc).tokens[owners[5]].word, "hard");
  EXPECT_EQ(sentence(doc).tokens[owners[10]].word, "read");
  EXPECT_EQ(forest_to_text(report.forest),
            "1:are [s]\n"
            "  0:Books [n]\n"
            "  2:hard [s]\n"
            "    3:to [n.r]\n"
            "      4:read [n.r]\n");
  expect_round_trip(sentence(doc));
}

TEST(Treeize, FindHeads) {
  EXPECT_EQ(find_heads(sentence(fixtures::load_fixture("fig4.json"))), std::vector<int>{1});
  EXPECT_EQ(find_heads(PregroupDiagram{{{"Alice", {n}}}, {}}), std::vector<int>{0});
  PregroupDiagram two{{{"Alice", {n}}, {"runs", {nr, s}}, {"Bob", {n}}, {"sleeps", {nr, s}}},
                      {{0, 1}, {3, 4}}};
  EXPECT_EQ(find_heads(two), (std::vector<int>{1, 3}));
  auto report = build_trees(two);
  EXPECT_EQ(report.forest.size(), 2u);
}

TEST(Treeize, FixtureRoundTrips) {
  for (const char* name : {"fig1.json", "fig4.json", "fig5a.json", "fig6.json", "fig8.json",
                           "fig9.json", "reflexive.json", "coordination.json"}) {
    SCOPED_TRACE(name);
    for (const auto& d : fixtures::load_fixture(name).sentences) expect_round_trip(d);
  }
}

TEST(Treeize, RandomDiagramsRoundTripAndPartition) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    auto d = fixtures::random_diagram(rng);
    SCOPED_TRACE(trial);
    expect_round_trip(d);
    auto report = build_trees(d);
    std::vector<int> seen;
    for (const auto& root : report.forest) collect(root, seen);
    std::sort(seen.begin(), seen.end());
    std::vector<int> all(d.tokens.size());
    std::iota(all.begin(), all.end(), 0);
    EXPECT_EQ(seen, all);
    if (link_graph_is_forest(d)) EXPECT_TRUE(report.removed_cups.empty());
  }
}

TEST(Treeize, Deterministic) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    auto d = fixtures::random_diagram(rng);
    auto a = build_trees(d);
    auto b = build_trees(d);
    EXPECT_EQ(a.forest, b.forest);
    EXPECT_EQ(a.removed_cups, b.removed_cups);
  }
}

TEST(Treeize, DotExport) {
  auto report = build_trees(sentence(fixtures::load_fixture("fig4.json")));
  auto dot = forest_to_dot(report.forest);
  EXPECT_NE(dot.find("t1 -> t0;"), std::string::npos);
  EXPECT_NE(dot.find("t1 -> t2;"), std::string::npos);
}
