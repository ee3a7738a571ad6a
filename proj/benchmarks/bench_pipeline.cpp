#include <benchmark/benchmark.h>

#include <random>

#include "discocirc/ansatz.hpp"
#include "discocirc/compose.hpp"
#include "discocirc/ingest.hpp"
#include "discocirc/sandwich.hpp"
#include "discocirc/sim.hpp"
#include "discocirc/treeize.hpp"
#include "synthetic.hpp"

using namespace discocirc;

namespace {

const Lexicon& lexicon() {
  static const Lexicon lex = Lexicon::standard();
  return lex;
}

Document story_document(std::size_t sentences) {
  return parse_text(synthetic::story(sentences, 7), lexicon());
}

TextDiagram story_diagram(std::size_t sentences) {
  TextOptions opts;
  opts.lexicon = &lexicon();
  return text_diagram(story_document(sentences), opts).diagram;
}

Circuit paragraph_circuit() {
  TextOptions opts;
  opts.lexicon = &lexicon();
  const auto text = synthetic::topic_dataset(1, 3).front().text;
  const auto t = expand_frames(text_diagram(parse_text(text, lexicon()), opts).diagram);
  return compile(append_merge_box(t), AnsatzConfig{});
}

}  // namespace

static void BM_ParseText(benchmark::State& state) {
  const auto text = synthetic::story(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(parse_text(text, lexicon()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ParseText)->Arg(10)->Arg(150);

static void BM_BuildTrees(benchmark::State& state) {
  const auto doc = story_document(150);
  for (auto _ : state)
    for (const auto& d : doc.sentences) benchmark::DoNotOptimize(build_trees(d));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(doc.sentences.size()));
}
BENCHMARK(BM_BuildTrees);

static void BM_TextDiagram(benchmark::State& state) {
  const auto doc = story_document(static_cast<std::size_t>(state.range(0)));
  TextOptions opts;
  opts.lexicon = &lexicon();
  for (auto _ : state) benchmark::DoNotOptimize(text_diagram(doc, opts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TextDiagram)->RangeMultiplier(2)->Range(10, 160);

static void BM_ExpandFrames(benchmark::State& state) {
  const auto t = story_diagram(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(expand_frames(t));
}
BENCHMARK(BM_ExpandFrames)->Arg(10)->Arg(150);

static void BM_Compile(benchmark::State& state) {
  const auto t = expand_frames(story_diagram(static_cast<std::size_t>(state.range(0))));
  AnsatzConfig cfg;
  cfg.qubit_cap = 0;
  for (auto _ : state) benchmark::DoNotOptimize(compile(t, cfg));
}
BENCHMARK(BM_Compile)->Arg(10)->Arg(150);

static void BM_Simulate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Circuit c;
  c.n_qubits = n;
  c.gates = sim4_block(n, 2, "b");
  Params p;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> angle(0, 6.283185307179586);
  for (const auto& g : c.gates) p[g.symbol] = angle(rng);
  c.outputs = {0};
  for (auto _ : state) benchmark::DoNotOptimize(simulate(c, p));
  state.counters["gates"] = static_cast<double>(c.gates.size());
}
BENCHMARK(BM_Simulate)->DenseRange(4, 14, 2);

static void BM_Gradient(benchmark::State& state) {
  const auto c = paragraph_circuit();
  const auto method = state.range(0) ? GradientMethod::parameter_shift : GradientMethod::finite_diff;
  auto loss = [](const SimResult& r) { return bce_loss(r, 1); };
  for (auto _ : state) benchmark::DoNotOptimize(gradient(c, c.symbols, loss, method));
  state.counters["params"] = static_cast<double>(c.symbols.size());
}
BENCHMARK(BM_Gradient)->Arg(0)->Arg(1);

BENCHMARK_MAIN();
