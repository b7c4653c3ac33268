#include <benchmark/benchmark.h>

#include "eqps/series.hpp"

using namespace eqps;

static void ExpandCuspSeries(benchmark::State& state) {
  FactoredSeries<ZRing> f(ZRing{}, 1);
  f.add_factor({2}, -1);
  f.add_factor({3}, -1);
  f.add_factor({6}, 1);
  const int T = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto s = expand(f, T);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(ExpandCuspSeries)->Arg(30)->Arg(60)->Arg(120);

static void FactorRoundtrip(benchmark::State& state) {
  FactoredSeries<ZRing> f(ZRing{}, 2);
  f.add_factor({2, 1}, -1);
  f.add_factor({1, 2}, -2);
  f.add_factor({3, 3}, 1);
  f.add_factor({0, 4}, -1);
  for (auto _ : state) {
    auto back = factor(expand(f, 17));
    benchmark::DoNotOptimize(back);
  }
}
BENCHMARK(FactorRoundtrip);

static void EquippedExpand(benchmark::State& state) {
  auto G = FiniteGroup::cyclic(2);
  Character minus;
  for (const auto& c : characters_of(full_subgroup(G)))
    if (!c.is_trivial())
      minus = c;
  FactoredSeries<AtRing> f(AtRing{G}, 1);
  f.add_factor({2}, ebe_generator(G, full_subgroup(G), minus, -1));
  f.add_factor({3}, ebe_generator(G, trivial_subgroup(G),
                                  Character::trivial(trivial_subgroup(G)), -1));
  const int T = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto s = expand(f, T);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(EquippedExpand)->Arg(12)->Arg(24);
