#include <benchmark/benchmark.h>

#include "eqps/corpus.hpp"
#include "eqps/reconstruct.hpp"

using namespace eqps;

static void PoincareCorpus(benchmark::State& state) {
  auto names = corpus_names();
  for (auto _ : state) {
    for (const auto& name : names) {
      auto p = poincare(corpus_graph(name));
      benchmark::DoNotOptimize(p);
    }
  }
}
BENCHMARK(PoincareCorpus);

static void GlueTwoStepChain(benchmark::State& state) {
  auto G = FiniteGroup::cyclic(4);
  QuotientGraphData q;
  q.group = G;
  q.sem = make_semigroup_data({1});
  q.m_nu = 3;
  q.chain = {cyclic_subgroup(G, 2), trivial_subgroup(G)};
  q.rho_m = {1, 2};
  for (auto _ : state) {
    auto g = glue_from_quotient(q);
    benchmark::DoNotOptimize(g);
  }
}
BENCHMARK(GlueTwoStepChain);

static void RoundtripFixture(benchmark::State& state) {
  auto names = corpus_names();
  auto g = corpus_graph(names[state.range(0)]);
  for (auto _ : state) {
    auto rep = roundtrip(g);
    benchmark::DoNotOptimize(rep);
  }
}
BENCHMARK(RoundtripFixture)->DenseRange(0, 6);
