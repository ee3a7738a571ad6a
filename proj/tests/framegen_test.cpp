#include "discocirc/framegen.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "discocirc/errors.hpp"
#include "test_support.hpp"

using namespace discocirc;
using namespace discocirc::types;

namespace {

using E = DiagramElement;

void walk(const PregroupTreeNode& n, const std::function<void(const PregroupTreeNode&)>& f) {
  f(n);
  for (const auto& c : n.children) walk(c, f);
}

std::vector<std::string> words(const SentenceDiagram& d) {
  std::vector<std::string> out;
  for (const auto& n : d.nouns) out.push_back(n.word);
  return out;
}

// Positions in `d.nouns` of the given mentions.
std::set<int> positions(const SentenceDiagram& d, const std::set<Mention>& ms) {
  std::set<int> out;
  for (std::size_t i = 0; i < d.nouns.size(); ++i)
    if (ms.count({d.nouns[i].sentence_index, d.nouns[i].token_index})) out.insert(static_cast<int>(i));
  return out;
}

}  // namespace

TEST(Framegen, AliceLovesFastBikes) {
  auto doc = fixtures::load_fixture("fig1.json");
  auto d = sentence_diagram(doc, 0);
  EXPECT_EQ(words(d), (std::vector<std::string>{"Alice", "bikes"}));
  EXPECT_EQ(d.body, E::frame("loves", {0, 1}, {E::box("fast", {1})}));
  EXPECT_EQ(sentence_to_text(d),
            "noun 0 Alice @0:0 chain -1\n"
            "noun 1 bikes @0:3 chain -1\n"
            "frame loves [0 1]\n"
            "  box fast [1]\n");
}

TEST(Framegen, SingleNounIsIdentity) {
  PregroupTreeNode alice{"Alice", 0, PregroupType{n}, {0}, {}};
  auto r = tree_to_frame(alice);
  EXPECT_EQ(r.element, E::identity({0}));
  ASSERT_EQ(r.nouns.size(), 1u);
  EXPECT_EQ(r.nouns[0].word, "Alice");
}

TEST(Framegen, TransitiveVerbIsBox) {
  auto d = sentence_diagram(fixtures::load_fixture("fig4.json"), 0);
  EXPECT_EQ(d.body, E::box("reads", {0, 1}));
}

TEST(Framegen, NonNounLeavesInheritWires) {
  auto d = sentence_diagram(fixtures::load_fixture("fig6.json"), 0);
  EXPECT_EQ(words(d), std::vector<std::string>{"Books"});
  EXPECT_EQ(d.body,
            E::frame("are", {0}, {E::frame("hard", {0}, {E::frame("to", {0}, {E::box("read", {0})})})}));
}

TEST(Framegen, RemovedNounDropsItsBoxes) {
  auto doc = fixtures::load_fixture("fig9.json");
  SentenceOptions opts;
  opts.remove = {{1, 4}};  // basket
  auto d = sentence_diagram(doc, 1, opts);
  EXPECT_EQ(words(d), std::vector<std::string>{"It"});
  EXPECT_EQ(d.body, E::box("has", {0}));
  EXPECT_EQ(d.nouns[0].chain_id, 1);
}

TEST(Framegen, MinFrequencyFilter) {
  auto doc = fixtures::load_fixture("fig9.json");
  EXPECT_EQ(min_frequency_filter(doc.corefs, 2), (std::set<Mention>{{1, 4}, {2, 3}}));
  EXPECT_TRUE(min_frequency_filter(doc.corefs, 1).empty());
  // Alice has two mentions, bike three.
  EXPECT_EQ(min_frequency_filter(doc.corefs, 3), (std::set<Mention>{{0, 0}, {1, 4}, {2, 0}, {2, 3}}));
}

TEST(Framegen, MentionsOfWordsFollowsChains) {
  auto doc = fixtures::load_fixture("fig9.json");
  EXPECT_EQ(mentions_of_words(doc, {"bike"}), (std::set<Mention>{{0, 4}, {1, 0}, {2, 5}}));
}

TEST(Framegen, PruneExamples) {
  EXPECT_TRUE(prune_boxes(E::box("large", {1}), {1}).is_empty());
  EXPECT_EQ(prune_boxes(E::frame("f", {0, 1}, {E::box("g", {0})}), {1}),
            E::frame("f", {0}, {E::box("g", {0})}));
  EXPECT_EQ(prune_boxes(E::frame("f", {0, 1}, {E::box("g", {1})}), {1}), E::box("f", {0}));
  EXPECT_EQ(prune_boxes(E::par({E::identity({0}), E::box("g", {1})}), {1}), E::identity({0}));
}

TEST(Framegen, ZeroWireRootIsDroppedWithWarning) {
  PregroupDiagram d{{{"Alice", {n}}, {"sleeps", {s}}}, {}};
  Document doc{{d}, {}, ""};
  std::vector<std::string> warnings;
  auto sd = sentence_diagram(doc, 0, {}, &warnings);
  EXPECT_EQ(sd.body, E::identity({0}));
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("sleeps"), std::string::npos);

  Document none{{PregroupDiagram{{{"sleep", {s}}}, {}}}, {}, ""};
  EXPECT_THROW(sentence_diagram(none, 0), EmptySentence);
}

TEST(Framegen, RewritesFeedFrameConversion) {
  auto doc = fixtures::load_fixture("fig9.json");
  SentenceOptions opts;
  opts.rules = {determiner_rule(), noun_modification()};
  auto d = sentence_diagram(doc, 0, opts);
  EXPECT_EQ(words(d), (std::vector<std::string>{"Alice", "blue bike"}));
  EXPECT_EQ(d.body, E::box("bought", {0, 1}));
}

TEST(Framegen, ReflexiveKeepsBothMentions) {
  auto doc = fixtures::load_fixture("reflexive.json");
  auto d = sentence_diagram(doc, 0);
  ASSERT_EQ(d.nouns.size(), 2u);
  EXPECT_EQ(d.nouns[0].chain_id, d.nouns[1].chain_id);
}

TEST(Framegen, RandomTreeInvariantsAndPruneOracle) {
  std::mt19937_64 rng(31);
  int compared = 0;
  for (int trial = 0; trial < 400; ++trial) {
    auto diag = fixtures::random_diagram(rng);
    for (std::size_t i = 0; i < diag.tokens.size(); ++i) diag.tokens[i].word = "w" + std::to_string(i);
    Document doc{{diag}, {}, ""};
    auto forest = build_trees(diag).forest;

    std::vector<int> noun_leaves;
    for (const auto& root : forest)
      walk(root, [&](const PregroupTreeNode& n) {
        if (default_noun_tagger()(n)) noun_leaves.push_back(n.token_index);
      });
    std::set<Mention> remove;
    for (int t : noun_leaves)
      if (rng() % 3 == 0) remove.insert({0, t});

    // Compositional fold: a node's nouns are its children's nouns.
    for (const auto& root : forest)
      walk(root, [&](const PregroupTreeNode& node) {
        if (node.children.empty()) return;
        std::vector<int> expect;
        for (const auto& c : node.children)
          for (const auto& nn : tree_to_frame(c).nouns) expect.push_back(nn.token_index);
        std::sort(expect.begin(), expect.end());
        std::vector<int> got;
        for (const auto& nn : tree_to_frame(node).nouns) got.push_back(nn.token_index);
        EXPECT_EQ(got, expect);
      });

    if (noun_leaves.empty()) {
      EXPECT_THROW(sentence_diagram(doc, 0), EmptySentence);
      continue;
    }
    auto full = sentence_diagram(doc, 0);
    EXPECT_EQ(full.nouns.size(), noun_leaves.size());
    for (int w : element_wires(full.body)) EXPECT_LT(w, static_cast<int>(full.nouns.size()));

    SentenceOptions opts;
    opts.remove = remove;
    if (remove.size() == noun_leaves.size()) {
      EXPECT_THROW(sentence_diagram(doc, 0, opts), EmptySentence);
      EXPECT_THROW(prune_sentence(full, positions(full, remove)), EmptySentence);
      continue;
    }
    auto direct = sentence_diagram(doc, 0, opts);
    EXPECT_EQ(direct.nouns.size(), noun_leaves.size() - remove.size());
    for (int w : element_wires(direct.body)) EXPECT_LT(w, static_cast<int>(direct.nouns.size()));
    auto pruned = prune_sentence(full, positions(full, remove));
    EXPECT_EQ(pruned, direct) << sentence_to_text(full) << "--\n" << sentence_to_text(direct);
    ++compared;
  }
  EXPECT_GT(compared, 50);
}

TEST(Framegen, DotAndJsonDumps) {
  auto d = sentence_diagram(fixtures::load_fixture("fig1.json"), 0);
  auto dot = sentence_to_dot(d);
  EXPECT_NE(dot.find("cluster_e"), std::string::npos);
  EXPECT_NE(dot.find("label=\"fast\""), std::string::npos);
  auto json = sentence_to_json(d);
  EXPECT_NE(json.find("\"kind\": \"frame\""), std::string::npos);
}
