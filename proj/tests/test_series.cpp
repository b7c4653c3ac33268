#include "doctest.h"

#include <random>

#include "eqps/series.hpp"

using namespace eqps;

namespace {

Character sign_char(const GroupPtr& G) {
  for (const auto& c : characters_of(full_subgroup(G)))
    if (!c.is_trivial())
      return c;
  FAIL("no sign character");
  return Character::trivial(full_subgroup(G));
}

bool in_semigroup_23(int v) {
  for (int a = 0; 2 * a <= v; ++a)
    if ((v - 2 * a) % 3 == 0)
      return true;
  return false;
}

} // namespace

TEST_CASE("binomial over Z: (1-t)^{-2} and (1-t)^{+1}") {
  ZRing zr;
  auto s = binomial(zr, {1}, -2, 4);
  for (int v = 0; v <= 4; ++v)
    CHECK(s.coeff({v}) == v + 1);

  auto t = binomial(zr, {1}, 1, 5);
  CHECK(t.coeff({0}) == 1);
  CHECK(t.coeff({1}) == -1);
  for (int v = 2; v <= 5; ++v)
    CHECK(t.coeff({v}) == 0);

  CHECK_THROWS_AS(binomial(zr, {0, 0}, -1, 4), Error);
}

TEST_CASE("binomial over Atilde(Z/2): powers of a signed point") {
  auto G = FiniteGroup::cyclic(2);
  AtRing ring{G};
  auto minus = ebe_generator(G, full_subgroup(G), sign_char(G), 1);
  auto s = binomial(ring, {2}, ring.neg(minus), 6);
  for (int n = 0; n <= 3; ++n) {
    auto want = n % 2 == 0 ? ebe_one(G) : minus;
    CHECK(s.coeff({2 * n}) == want);
  }
  CHECK(s.coeff({1}).is_zero());
  CHECK(s.coeff({3}).is_zero());
}

TEST_CASE("multiply and invert") {
  ZRing zr;
  auto a = binomial(zr, {1}, -1, 8); // 1 + t + t^2 + ...
  auto one = MultiSeries<ZRing>::one(zr, 1, 8);
  CHECK(multiply(a, one) == a);

  auto inv = invert(a);
  CHECK(inv.coeff({0}) == 1);
  CHECK(inv.coeff({1}) == -1);
  CHECK(inv.coeff({2}) == 0);
  CHECK(multiply(a, inv) == one);

  // ((1-t^2)^{-1}(1-t^3)^{-1}) * (1-t^2)(1-t^3) = 1 up to T=12
  auto p = multiply(binomial(zr, {2}, -1, 12), binomial(zr, {3}, -1, 12));
  auto q = multiply(binomial(zr, {2}, 1, 12), binomial(zr, {3}, 1, 12));
  CHECK(multiply(p, q) == MultiSeries<ZRing>::one(zr, 1, 12));

  MultiSeries<ZRing> bad(zr, 1, 4);
  bad.add_term({1}, 1); // constant term zero
  CHECK_THROWS_AS(invert(bad), Error);
}

TEST_CASE("expand: empty product, cusp semigroup, double pole") {
  ZRing zr;
  FactoredSeries<ZRing> empty(zr, 1);
  CHECK(expand(empty, 7) == MultiSeries<ZRing>::one(zr, 1, 7));

  // indicator series of <2,3> through T=12
  FactoredSeries<ZRing> cusp(zr, 1);
  cusp.add_factor({2}, -1);
  cusp.add_factor({3}, -1);
  cusp.add_factor({6}, 1);
  auto s = expand(cusp, 12);
  for (int v = 0; v <= 12; ++v)
    CHECK(s.coeff({v}) == (in_semigroup_23(v) ? 1 : 0));

  FactoredSeries<ZRing> pole(zr, 1);
  pole.add_factor({1}, -2);
  auto p = expand(pole, 5);
  for (int v = 0; v <= 5; ++v)
    CHECK(p.coeff({v}) == v + 1);
}

TEST_CASE("factor: geometric-squared and cusp round trip") {
  ZRing zr;
  auto s = binomial(zr, {1}, -2, 10);
  auto f = factor(s);
  REQUIRE(f.factors().size() == 1);
  CHECK(f.factors().begin()->first == ExpVec{1});
  CHECK(f.factors().begin()->second == -2);

  FactoredSeries<ZRing> cusp(zr, 1);
  cusp.add_factor({2}, -1);
  cusp.add_factor({3}, -1);
  CHECK(factor(expand(cusp, 12)) == cusp);
}

TEST_CASE("factor rejects non-unit constant terms") {
  ZRing zr;
  MultiSeries<ZRing> s(zr, 1, 5);
  s.add_term({1}, 3);
  CHECK_THROWS_AS(factor(s), Error);
  MultiSeries<ZRing> two(zr, 1, 5);
  two.add_term({0}, 2);
  CHECK_THROWS_AS(factor(two), Error);
}

TEST_CASE("factor merges equal-exponent factors over Atilde(Z/2)") {
  auto G = FiniteGroup::cyclic(2);
  AtRing ring{G};
  auto minus = ebe_generator(G, full_subgroup(G), sign_char(G), 1);
  auto plus = ebe_one(G);

  FactoredSeries<AtRing> f(ring, 1);
  f.add_factor({2}, ring.neg(minus));
  f.add_factor({2}, ring.neg(plus)); // merges on construction
  REQUIRE(f.factors().size() == 1);

  auto merged = factor(expand(f, 9));
  REQUIRE(merged.factors().size() == 1);
  CHECK(merged.factors().begin()->second == ring.neg(ebe_add(minus, plus)));
}

TEST_CASE("project keeps indices and merges collisions") {
  ZRing zr;
  FactoredSeries<ZRing> f(zr, 2);
  f.add_factor({1, 1}, -1);
  f.add_factor({2, 1}, 3);
  f.add_factor({2, 2}, 2);

  auto full = project(f, {0, 1});
  CHECK(full == f);

  auto p = project(f, {0});
  REQUIRE(p.factors().size() == 2);
  CHECK(p.factors().at({1}) == -1);
  CHECK(p.factors().at({2}) == 5); // merged 3 + 2

  FactoredSeries<ZRing> empty(zr, 2);
  CHECK(project(empty, {1}).empty());

  FactoredSeries<ZRing> g(zr, 2);
  g.add_factor({0, 1}, -1);
  CHECK_THROWS_AS(project(g, {0}), Error);
}

TEST_CASE("rho and rho_hat commute with expand") {
  auto G = FiniteGroup::cyclic(2);
  AtRing ring{G};
  auto minus = ebe_generator(G, full_subgroup(G), sign_char(G), 1);
  auto free_orbit =
      ebe_generator(G, trivial_subgroup(G), Character::trivial(trivial_subgroup(G)), 1);

  FactoredSeries<AtRing> f(ring, 1);
  f.add_factor({1}, ring.neg(minus));
  f.add_factor({3}, free_orbit);

  CHECK(rho(expand(f, 9)) == expand(rho(f), 9));
  CHECK(rho_hat(expand(f, 9)) == expand(rho_hat(f), 9));
}

namespace {

template <class Ring>
void roundtrip_random(Ring ring, std::mt19937& rng,
                      const std::vector<typename Ring::Elem>& pool, int trials) {
  std::uniform_int_distribution<int> nfac(1, 6);
  std::uniform_int_distribution<int> nv(1, 3);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(pool.size()) - 1);
  const int T = 17;
  for (int trial = 0; trial < trials; ++trial) {
    int vars = nv(rng);
    FactoredSeries<Ring> f(ring, vars);
    int k = nfac(rng);
    for (int i = 0; i < k; ++i) {
      ExpVec M(vars, 0);
      std::uniform_int_distribution<int> deg(1, 8);
      int budget = deg(rng);
      while (budget > 0) {
        int coord = std::uniform_int_distribution<int>(0, vars - 1)(rng);
        int amt = std::uniform_int_distribution<int>(1, budget)(rng);
        M[coord] += amt;
        budget -= amt;
      }
      f.add_factor(M, pool[pick(rng)]);
    }
    CHECK(factor(expand(f, T)) == f);
  }
}

} // namespace

TEST_CASE("factor-expand round trip on random products, all rings") {
  std::mt19937 rng(99);

  roundtrip_random(ZRing{}, rng, {1, -1, 2, -2, 3}, 12);

  auto z2 = FiniteGroup::cyclic(2);
  {
    ARing ring{z2};
    std::vector<BurnsideElement> pool = {
        be_one(z2), be_scale(be_one(z2), -2), be_generator(z2, trivial_subgroup(z2), 1),
        be_add(be_generator(z2, trivial_subgroup(z2), 1), be_scale(be_one(z2), -1))};
    roundtrip_random(ring, rng, pool, 10);
  }
  {
    AtRing ring{z2};
    auto minus = ebe_generator(z2, full_subgroup(z2), sign_char(z2), 1);
    std::vector<EquippedBurnsideElement> pool = {
        ebe_one(z2), ebe_scale(minus, -1), minus,
        ebe_add(ebe_generator(z2, trivial_subgroup(z2),
                              Character::trivial(trivial_subgroup(z2)), 1),
                ebe_scale(ebe_one(z2), -1))};
    roundtrip_random(ring, rng, pool, 10);
  }
  {
    auto s3 = FiniteGroup::symmetric3();
    AtRing ring{s3};
    std::vector<EquippedBurnsideElement> pool;
    for (const auto& cls : subgroups(s3))
      for (const auto& alpha : characters_of(cls.representative))
        pool.push_back(ebe_generator(s3, cls.representative, alpha, 1));
    pool.push_back(ebe_scale(pool[0], -1));
    pool.push_back(ebe_add(pool[2], ebe_scale(ebe_one(s3), -1)));
    roundtrip_random(ring, rng, pool, 6);
  }
}
