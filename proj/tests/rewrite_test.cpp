#include "discocirc/rewrite.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <sstream>

#include "discocirc/errors.hpp"
#include "test_support.hpp"

using namespace discocirc;
using namespace discocirc::types;

namespace {

PregroupTreeNode tree_of(const PregroupDiagram& d) {
  auto r = build_trees(d);
  EXPECT_EQ(r.forest.size(), 1u);
  return r.forest.at(0);
}

void walk(const PregroupTreeNode& n, const std::function<void(const PregroupTreeNode&)>& f) {
  f(n);
  for (const auto& c : n.children) walk(c, f);
}

const PregroupTreeNode* find_word(const PregroupTreeNode& root, const std::string& word) {
  const PregroupTreeNode* hit = nullptr;
  walk(root, [&](const PregroupTreeNode& n) {
    if (n.word == word) hit = &n;
  });
  return hit;
}

PregroupDiagram noun_phrase_sentence(const std::vector<std::string>& modifiers) {
  // Alice bought m1 ... mk bike
  PregroupDiagram d;
  d.tokens = {{"Alice", {n}}, {"bought", {nr, s, nl}}};
  for (const auto& m : modifiers) d.tokens.push_back({m, {n, nl}});
  d.tokens.push_back({"bike", {n}});
  d.cups = {{0, 1}};
  std::size_t w = 3;
  for (std::size_t i = 0; i <= modifiers.size(); ++i, w += 2) d.cups.push_back({w, w + 1});
  return d;
}

std::multiset<int> leaf_chain_ids(const std::vector<PregroupTreeNode>& forest, const CorefMap& c,
                                  int sentence) {
  std::multiset<int> out;
  for (const auto& root : forest)
    walk(root, [&](const PregroupTreeNode& n) {
      if (!n.children.empty() || n.out_type != PregroupType{types::n}) return;
      if (auto id = c.chain_of({sentence, n.token_index})) out.insert(*id);
    });
  return out;
}

}  // namespace

TEST(Rewrite, DeterminerRemovesArticle) {
  auto doc = fixtures::load_fixture("fig9.json");
  auto r = rewrite_tree(tree_of(doc.sentences[0]), determiner_rule());
  EXPECT_EQ(r.merges, 1);
  EXPECT_EQ(find_word(r.tree, "a"), nullptr);
  const auto* blue = find_word(r.tree, "blue");
  ASSERT_NE(blue, nullptr);
  EXPECT_EQ(blue->token_index, 3);
  EXPECT_EQ(tree_to_text(r.tree), "1:bought [s]\n  0:Alice [n]\n  3:blue [n]\n    4:bike [n]\n");
}

TEST(Rewrite, NounModificationMergesWords) {
  auto doc = fixtures::load_fixture("fig9.json");
  auto tree = rewrite_tree(tree_of(doc.sentences[0]), determiner_rule()).tree;
  auto r = rewrite_tree(tree, noun_modification());
  EXPECT_EQ(r.merges, 1);
  const auto* bike = find_word(r.tree, "blue bike");
  ASSERT_NE(bike, nullptr);
  EXPECT_EQ(bike->token_index, 4);
  EXPECT_TRUE(bike->children.empty());
}

TEST(Rewrite, DeterminerThenLastMergerOnSimpleChain) {
  auto r = rewrite_tree(tree_of(noun_phrase_sentence({"a"})), determiner_rule());
  EXPECT_EQ(r.merges, 1);
  ASSERT_EQ(r.tree.children.size(), 2u);
  EXPECT_EQ(r.tree.children[1].word, "bike");
  EXPECT_EQ(r.tree.children[1].token_index, 3);
}

TEST(Rewrite, EmptyMatchWordsIsIdentity) {
  auto tree = tree_of(fixtures::load_fixture("fig9.json").sentences[0]);
  RewriteRule rule{"nothing", {}, false, {PregroupType{n}}, WordMerger::merge};
  auto r = rewrite_tree(tree, rule);
  EXPECT_EQ(r.merges, 0);
  EXPECT_EQ(r.tree, tree);
}

TEST(Rewrite, MaxDepthBoundsChainLength) {
  auto tree = tree_of(noun_phrase_sentence({"beautiful", "blue"}));
  auto deep = rewrite_tree(tree, noun_modification(2));
  EXPECT_EQ(deep.merges, 2);
  EXPECT_NE(find_word(deep.tree, "beautiful blue bike"), nullptr);

  auto shallow = rewrite_tree(tree, noun_modification(1));
  EXPECT_EQ(shallow.merges, 1);
  EXPECT_NE(find_word(shallow.tree, "beautiful"), nullptr);
  EXPECT_NE(find_word(shallow.tree, "blue bike"), nullptr);
}

TEST(Rewrite, FirstMergerKeepsNodeWord) {
  auto tree = tree_of(noun_phrase_sentence({"the"}));
  RewriteRule rule{"keep", {"the"}, false, {PregroupType{n}}, WordMerger::first};
  auto r = rewrite_tree(tree, rule);
  EXPECT_EQ(r.merges, 1);
  const auto* node = find_word(r.tree, "the");
  ASSERT_NE(node, nullptr);
  EXPECT_EQ(node->token_index, 3);
}

TEST(Rewrite, AuxiliaryOnImperative) {
  // Do read books: the auxiliary sits above the verb, both output s.
  PregroupDiagram d{{{"Do", {s, sl}}, {"read", {s, nl}}, {"books", {n}}}, {{1, 2}, {3, 4}}};
  auto tree = tree_of(d);
  ASSERT_EQ(tree.word, "Do");
  auto r = rewrite_tree(tree, auxiliary_rule());
  EXPECT_EQ(r.merges, 1);
  EXPECT_EQ(r.tree.word, "read");
  EXPECT_EQ(r.tree.free_slots, std::vector<std::size_t>{0});
  EXPECT_EQ(compound_type(r.tree), (PregroupType{s, nl}));
}

TEST(Rewrite, MainVerbHasIsKept) {
  auto doc = fixtures::load_fixture("fig9.json");
  auto tree = tree_of(doc.sentences[1]);
  EXPECT_EQ(rewrite_tree(tree, auxiliary_rule()).merges, 0);
}

TEST(Rewrite, BuiltinRuleNames) {
  auto rules = builtin_rules();
  ASSERT_EQ(rules.size(), 3u);
  EXPECT_TRUE(rules[0].match_words.count("a"));
  EXPECT_TRUE(rules[0].match_words.count("the"));
  EXPECT_TRUE(rules[1].match_words.count("has"));
  EXPECT_TRUE(rules[1].match_words.count("does"));
  EXPECT_TRUE(rules[2].any_word);
  EXPECT_EQ(rules[2].max_depth, 2);
  EXPECT_EQ(builtin_rule("determiner").name, "determiner_rule");
  EXPECT_THROW(builtin_rule("nope"), FormatError);
}

TEST(Rewrite, RuleFileRoundTrip) {
  for (const auto& rule : builtin_rules()) {
    std::istringstream in(rule_to_json(rule));
    auto back = load_rule(in);
    EXPECT_EQ(back.name, rule.name);
    EXPECT_EQ(back.match_words, rule.match_words);
    EXPECT_EQ(back.any_word, rule.any_word);
    EXPECT_EQ(back.match_types, rule.match_types);
    EXPECT_EQ(back.word_merger, rule.word_merger);
    EXPECT_EQ(back.max_depth, rule.max_depth);
  }
  std::istringstream bad(R"({"name": "x", "match_words": ["a"], "match_types": []})");
  EXPECT_THROW(load_rule(bad), FormatError);
  std::istringstream bad_merger(
      R"({"match_words": ["a"], "match_types": [[["n",0]]], "word_merger": "zip"})");
  EXPECT_THROW(load_rule(bad_merger), FormatError);
}

TEST(Rewrite, Fig9RewritesPreserveNounChains) {
  auto doc = fixtures::load_fixture("fig9.json");
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    auto forest = build_trees(doc.sentences[i]).forest;
    const auto before = leaf_chain_ids(forest, doc.corefs, static_cast<int>(i));
    rewrite_forest(forest, {determiner_rule(), noun_modification()});
    EXPECT_EQ(leaf_chain_ids(forest, doc.corefs, static_cast<int>(i)), before);
    for (const auto& root : forest) {
      EXPECT_EQ(find_word(root, "a"), nullptr);
      EXPECT_EQ(find_word(root, "the"), nullptr);
    }
  }
  EXPECT_EQ(doc.corefs.chains.size(), 4u);
}

TEST(Rewrite, RandomTreesShrinkAndStayConsistent) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 400; ++trial) {
    auto d = fixtures::random_diagram(rng);
    for (auto& t : d.tokens) t.word = (rng() % 2) ? "a" : "w";
    auto report = build_trees(d);
    RewriteRule rule{"r", {"a"}, false, {}, WordMerger::last};
    for (const auto& root : report.forest)
      walk(root, [&](const PregroupTreeNode& n) { rule.match_types.push_back(n.out_type); });
    if (rule.match_types.empty()) continue;
    const auto original = recovered_types(report.forest, d.tokens.size());
    for (const auto& root : report.forest) {
      auto r = rewrite_tree(root, rule);
      EXPECT_EQ(r.tree.size() + static_cast<std::size_t>(r.merges), root.size());
      EXPECT_EQ(r.tree.size() == root.size(), r.merges == 0);
      // Surviving nodes keep their compound types.
      walk(r.tree, [&](const PregroupTreeNode& n) {
        EXPECT_EQ(compound_type(n), original[static_cast<std::size_t>(n.token_index)]);
      });
      EXPECT_EQ(rewrite_tree(r.tree, rule).merges, 0) << "not idempotent";
    }
  }
}

TEST(Coordination, SplitsSharedSubject) {
  auto doc = fixtures::load_fixture("coordination.json");
  auto r = coordination_rewrite(doc.sentences[0], doc.corefs);
  ASSERT_EQ(r.parts.size(), 2u);
  auto words = [](const PregroupDiagram& d) {
    std::string out;
    for (const auto& t : d.tokens) out += (out.empty() ? "" : " ") + t.word;
    return out;
  };
  EXPECT_EQ(words(r.parts[0]), "Alice loves music");
  EXPECT_EQ(words(r.parts[1]), "Alice plays piano");
  for (const auto& p : r.parts) EXPECT_EQ(reduce(p), PregroupType{s});
  EXPECT_EQ(r.parts[1].cups, (std::vector<Cup>{{0, 1}, {3, 4}}));
  auto chain = r.corefs.chain_of({0, 0});
  ASSERT_TRUE(chain.has_value());
  EXPECT_EQ(r.corefs.chains[static_cast<std::size_t>(*chain)], (Chain{{0, 0}, {1, 0}}));
}

TEST(Coordination, ShiftsLaterSentencesAndKeepsChains) {
  auto coord = fixtures::load_fixture("coordination.json").sentences[0];
  PregroupDiagram before{{{"Bob", {n}}, {"sleeps", {nr, s}}}, {{0, 1}}};
  PregroupDiagram after{{{"She", {n}}, {"smiles", {nr, s}}}, {{0, 1}}};
  Document doc{{before, coord, after}, {{{{1, 0}, {2, 0}}, {{1, 5}}}}, ""};
  std::vector<int> skipped;
  auto out = split_coordinations(doc, &skipped);
  EXPECT_TRUE(skipped.empty());
  ASSERT_EQ(out.sentences.size(), 4u);
  EXPECT_EQ(out.sentences[3], after);
  ASSERT_EQ(out.corefs.chains.size(), 2u);
  EXPECT_EQ(out.corefs.chains[0], (Chain{{1, 0}, {2, 0}, {3, 0}}));
  EXPECT_EQ(out.corefs.chains[1], (Chain{{2, 2}}));  // piano
}

TEST(Coordination, SentenceWithoutConjunctionUnchanged) {
  auto doc = fixtures::load_fixture("fig4.json");
  auto r = coordination_rewrite(doc.sentences[0], doc.corefs);
  ASSERT_EQ(r.parts.size(), 1u);
  EXPECT_EQ(r.parts[0], doc.sentences[0]);
  EXPECT_EQ(r.corefs, doc.corefs);
}

TEST(Coordination, ThreeWayIsRejected) {
  // Alice sings , dances and smiles: two conjunction tokens.
  const PregroupType conj{sr, SimpleType{Base::n, 2}, nr, s, sl, n};
  PregroupDiagram d{{{"Alice", {n}},
                     {"sings", {nr, s}},
                     {",", conj},
                     {"dances", {nr, s}},
                     {"and", conj},
                     {"smiles", {nr, s}}},
                    {}};
  EXPECT_THROW(coordination_rewrite(d, {}), NotACoordination);
  Document doc{{d}, {}, ""};
  std::vector<int> skipped;
  auto out = split_coordinations(doc, &skipped);
  EXPECT_EQ(skipped, std::vector<int>{0});
  EXPECT_EQ(out.sentences.size(), 1u);
}

TEST(Coordination, ConjunctionTypeShape) {
  EXPECT_TRUE(is_conjunction_type(PregroupType{sr, s, sl}));
  EXPECT_TRUE(is_conjunction_type(PregroupType{sr, SimpleType{Base::n, 2}, nr, s, sl, n}));
  EXPECT_FALSE(is_conjunction_type(PregroupType{nr, s, nl}));
  EXPECT_FALSE(is_conjunction_type(PregroupType{}));
}

TEST(Coordination, SentenceConjunctionIsNotHandled) {
  // Alice sleeps and Bob runs: x = s.
  PregroupDiagram d{{{"Alice", {n}}, {"sleeps", {nr, s}}, {"and", {sr, s, sl}}, {"Bob", {n}},
                     {"runs", {nr, s}}},
                    {{0, 1}, {2, 3}, {5, 8}, {6, 7}}};
  ASSERT_TRUE(validate_diagram(d).valid());
  EXPECT_THROW(coordination_rewrite(d, {}), NotACoordination);
}
