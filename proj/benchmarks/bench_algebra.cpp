#include <benchmark/benchmark.h>

#include "eqps/burnside.hpp"

using namespace eqps;

static void SubgroupLattice(benchmark::State& state) {
  auto G = state.range(0) == 6 ? FiniteGroup::symmetric3()
                               : FiniteGroup::cyclic(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto classes = subgroups(G);
    benchmark::DoNotOptimize(classes);
  }
}
BENCHMARK(SubgroupLattice)->Arg(6)->Arg(12)->Arg(24)->Arg(48);

static void EquippedMultiply(benchmark::State& state) {
  auto G = FiniteGroup::symmetric3();
  std::vector<EquippedBurnsideElement> basis;
  for (const auto& cls : subgroups(G))
    for (const auto& alpha : characters_of(cls.representative))
      basis.push_back(ebe_generator(G, cls.representative, alpha, 1));
  EquippedBurnsideElement u = ebe_zero(G), v = ebe_zero(G);
  for (size_t i = 0; i < basis.size(); ++i) {
    u = ebe_add(u, ebe_scale(basis[i], static_cast<long long>(i % 3) - 1));
    v = ebe_add(v, ebe_scale(basis[(i * 5 + 1) % basis.size()], 1));
  }
  for (auto _ : state) {
    auto w = ebe_multiply(u, v);
    benchmark::DoNotOptimize(w);
  }
}
BENCHMARK(EquippedMultiply);

static void SymmetricPowers(benchmark::State& state) {
  auto G = FiniteGroup::symmetric3();
  auto free_orbit =
      ebe_generator(G, trivial_subgroup(G), Character::trivial(trivial_subgroup(G)), 1);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto table = sym_powers(free_orbit, n);
    benchmark::DoNotOptimize(table);
  }
}
BENCHMARK(SymmetricPowers)->Arg(4)->Arg(8)->Arg(12);
