#include "doctest.h"

#include <set>

#include "eqps/group.hpp"

using namespace eqps;

namespace {

// Independent subgroup oracle: test every subset of G for the subgroup axioms.
// Only usable for very small groups.
std::set<std::vector<int>> subgroup_oracle(const GroupPtr& G) {
  const int n = G->size();
  REQUIRE(n <= 8);
  std::set<std::vector<int>> out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    if (!(mask & (1u << G->identity())))
      continue;
    std::vector<int> members;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i))
        members.push_back(i);
    bool closed = true;
    for (int a : members)
      for (int b : members)
        if (!(mask & (1u << G->op(a, b)))) {
          closed = false;
          break;
        }
    for (int a : members)
      if (!(mask & (1u << G->inv(a))))
        closed = false;
    if (closed)
      out.insert(members);
  }
  return out;
}

// Independent character oracle: enumerate all value assignments H -> Z/N and
// keep the homomorphisms.
int character_count_oracle(const Subgroup& H) {
  const int N = H.exponent();
  const int n = H.size();
  REQUIRE(n <= 6);
  std::vector<int> val(n, 0);
  int count = 0;
  while (true) {
    bool hom = val[H.index_of(H.parent->identity())] == 0;
    for (int i = 0; i < n && hom; ++i)
      for (int j = 0; j < n; ++j) {
        int ab = H.parent->op(H.members[i], H.members[j]);
        if ((val[i] + val[j]) % N != val[H.index_of(ab)]) {
          hom = false;
          break;
        }
      }
    if (hom)
      ++count;
    int k = 0;
    while (k < n && val[k] == N - 1)
      val[k++] = 0;
    if (k == n)
      break;
    val[k]++;
  }
  return count;
}

} // namespace

TEST_CASE("cyclic group construction and arithmetic") {
  auto G = FiniteGroup::cyclic(4);
  CHECK(G->size() == 4);
  CHECK(G->identity() == 0);
  CHECK(G->op(1, 3) == 0);
  CHECK(G->inv(1) == 3);
  CHECK(G->order_of(1) == 4);
  CHECK(G->order_of(2) == 2);
  CHECK(G->exponent() == 4);
  CHECK(G->is_abelian());
}

TEST_CASE("permutation generators close into S3") {
  auto G = FiniteGroup::symmetric3();
  CHECK(G->size() == 6);
  CHECK(!G->is_abelian());
  CHECK(G->exponent() == 6);
}

TEST_CASE("bad tables are rejected") {
  CHECK_THROWS_AS(FiniteGroup::from_table({"a", "b"}, {{0, 1}, {1, 1}}, 0), Error);
  CHECK_THROWS_AS(FiniteGroup::from_table({"a"}, {{0, 0}}, 0), Error);
}

TEST_CASE("subgroups of Z/2: exactly two") {
  auto G = FiniteGroup::cyclic(2);
  auto classes = subgroups(G);
  REQUIRE(classes.size() == 2);
  CHECK(classes[0].representative.members == std::vector<int>{0});
  CHECK(classes[1].representative.members == std::vector<int>{0, 1});
}

TEST_CASE("subgroups of the trivial group") {
  auto classes = subgroups(FiniteGroup::trivial());
  REQUIRE(classes.size() == 1);
  CHECK(classes[0].representative.size() == 1);
}

TEST_CASE("subgroups of S3 against the subset oracle") {
  auto G = FiniteGroup::symmetric3();
  auto classes = subgroups(G);

  auto oracle = subgroup_oracle(G);
  std::set<std::vector<int>> found;
  size_t total = 0;
  for (const auto& cls : classes) {
    total += cls.elements.size();
    for (const auto& h : cls.elements)
      found.insert(h.members);
  }
  CHECK(found == oracle);
  CHECK(total == oracle.size());

  // classes of sizes 1, 3, 1, 1
  std::multiset<size_t> sizes;
  for (const auto& cls : classes)
    sizes.insert(cls.elements.size());
  CHECK(sizes == std::multiset<size_t>{1, 1, 1, 3});

  // every class representative is the lexicographically least member set
  for (const auto& cls : classes)
    for (const auto& h : cls.elements)
      CHECK(!(h.members < cls.representative.members));
}

TEST_CASE("subgroup enumeration is closed under conjugation") {
  for (auto G : {FiniteGroup::symmetric3(), FiniteGroup::cyclic(6),
                 FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2))}) {
    auto classes = subgroups(G);
    std::set<std::vector<int>> all;
    for (const auto& cls : classes)
      for (const auto& h : cls.elements)
        all.insert(h.members);
    for (const auto& m : all) {
      Subgroup h{G, m};
      for (int a = 0; a < G->size(); ++a)
        CHECK(all.count(h.conjugated(a).members) == 1);
    }
  }
}

TEST_CASE("characters of cyclic groups") {
  auto G = FiniteGroup::cyclic(3);
  auto chars = characters_of(full_subgroup(G));
  REQUIRE(chars.size() == 3);
  std::set<std::vector<int>> vals;
  for (const auto& c : chars)
    vals.insert(c.values);
  CHECK(vals == std::set<std::vector<int>>{{0, 0, 0}, {0, 1, 2}, {0, 2, 1}});
}

TEST_CASE("characters of S3: trivial and sign only") {
  auto G = FiniteGroup::symmetric3();
  auto H = full_subgroup(G);
  auto chars = characters_of(H);
  CHECK(static_cast<int>(chars.size()) == character_count_oracle(H));
  CHECK(chars.size() == 2);
  // the sign character takes value N/2 on transpositions
  bool found_sign = false;
  for (const auto& c : chars) {
    if (c.is_trivial())
      continue;
    found_sign = true;
    for (int g = 0; g < G->size(); ++g) {
      if (G->order_of(g) == 2)
        CHECK(c.frac_at(g) == Frac(1, 2));
      if (G->order_of(g) == 3)
        CHECK(c.frac_at(g).is_zero());
    }
  }
  CHECK(found_sign);
}

TEST_CASE("character of the trivial subgroup") {
  auto chars = characters_of(trivial_subgroup(FiniteGroup::symmetric3()));
  REQUIRE(chars.size() == 1);
  CHECK(chars[0].is_trivial());
}

TEST_CASE("character count equals index of the commutator subgroup") {
  for (auto G : {FiniteGroup::symmetric3(), FiniteGroup::cyclic(4),
                 FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2))}) {
    for (const auto& cls : subgroups(G)) {
      const auto& H = cls.representative;
      auto chars = characters_of(H);
      auto comm = commutator_subgroup(H);
      CHECK(static_cast<int>(chars.size()) == H.size() / comm.size());
      // closed under pointwise product
      std::set<std::vector<int>> vals;
      for (const auto& c : chars)
        vals.insert(c.values);
      for (const auto& a : chars)
        for (const auto& b : chars)
          CHECK(vals.count(a.times(b).values) == 1);
    }
  }
}

TEST_CASE("conjugation by the identity and in abelian groups is trivial") {
  auto G = FiniteGroup::cyclic(4);
  Subgroup H = cyclic_subgroup(G, 2);
  for (const auto& alpha : characters_of(H)) {
    for (int a = 0; a < G->size(); ++a) {
      auto [h2, a2] = conjugate(a, H, alpha);
      CHECK(h2 == H);
      CHECK(a2 == alpha);
    }
  }
}

TEST_CASE("conjugation moves transposition subgroups of S3") {
  auto G = FiniteGroup::symmetric3();
  int t = -1, c3 = -1;
  for (int g = 0; g < G->size(); ++g) {
    if (G->order_of(g) == 2 && t < 0)
      t = g;
    if (G->order_of(g) == 3 && c3 < 0)
      c3 = g;
  }
  Subgroup H = cyclic_subgroup(G, t);
  auto chars = characters_of(H);
  REQUIRE(chars.size() == 2);
  for (const auto& alpha : chars) {
    auto [h2, a2] = conjugate(c3, H, alpha);
    CHECK(h2 == cyclic_subgroup(G, G->conj(c3, t)));
    CHECK(!(h2 == H));
    // sign goes to sign, trivial to trivial
    CHECK(a2.is_trivial() == alpha.is_trivial());
  }
}

TEST_CASE("conjugate is a group action on pairs") {
  auto G = FiniteGroup::symmetric3();
  for (const auto& cls : subgroups(G)) {
    const auto& H = cls.representative;
    for (const auto& alpha : characters_of(H))
      for (int a = 0; a < G->size(); ++a)
        for (int b = 0; b < G->size(); ++b) {
          auto [h1, a1] = conjugate(a, H, alpha);
          auto [h2, a2] = conjugate(b, h1, a1);
          auto [h3, a3] = conjugate(G->op(b, a), H, alpha);
          CHECK(h2 == h3);
          CHECK(a2 == a3);
        }
  }
}

TEST_CASE("cyclic subgroup edge cases") {
  auto G = FiniteGroup::symmetric3();
  CHECK(cyclic_subgroup(G, G->identity()).size() == 1);
  auto Z4 = FiniteGroup::cyclic(4);
  CHECK(cyclic_subgroup(Z4, 1).size() == 4);
  int c3 = -1;
  for (int g = 0; g < G->size(); ++g)
    if (G->order_of(g) == 3)
      c3 = g;
  CHECK(cyclic_subgroup(G, c3).size() == 3);
}

TEST_CASE("frac arithmetic normalizes") {
  CHECK(Frac(3, 6) == Frac(1, 2));
  CHECK(Frac(7, 6) == Frac(1, 6));
  CHECK((Frac(1, 2) + Frac(1, 2)).is_zero());
  CHECK(Frac(1, 3) * 2 == Frac(2, 3));
  CHECK(Frac(-1, 4) == Frac(3, 4));
}

TEST_CASE("cyclotomic integers accumulate and cancel") {
  auto a = CyclotomicInteger::root(Frac(0, 1), 2);
  auto b = CyclotomicInteger::root(Frac(1, 2), 1);
  auto c = a.plus(b);
  CHECK(c.terms.size() == 2);
  auto d = c.plus(CyclotomicInteger::root(Frac(1, 2), -1));
  CHECK(d == a);
}
