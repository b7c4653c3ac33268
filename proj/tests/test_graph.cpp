#include "doctest.h"

#include <set>

#include "eqps/corpus.hpp"
#include "eqps/graph.hpp"

using namespace eqps;

namespace {

QuotientGraphData z2_free_chain() {
  // two copies of a two-vertex chain sharing the first component
  auto G = FiniteGroup::cyclic(2);
  QuotientGraphData q;
  q.group = G;
  q.sem = make_semigroup_data({1});
  q.m_nu = 2;
  q.chain = {trivial_subgroup(G)};
  q.rho_m = {1};
  return q;
}

} // namespace

TEST_CASE("replay of the cusp program") {
  BlowUpProgram p;
  p.centers.push_back({});      // origin -> E0
  p.centers.push_back({0, -1}); // free on E0 -> E1
  p.centers.push_back({0, 1});  // satellite -> E2
  auto t = replay(p);
  CHECK(t.self_int == std::vector<int>{-3, -2, -1});
  CHECK(t.edges == std::vector<std::pair<int, int>>{{0, 2}, {1, 2}});

  BlowUpProgram bad;
  bad.centers.push_back({});
  bad.centers.push_back({0, -1});
  bad.centers.push_back({0, -1});
  bad.centers.push_back({1, 2}); // E1 and E2 are not adjacent
  CHECK_THROWS_AS(replay(bad), Error);
}

TEST_CASE("validate accepts the corpus") {
  for (const auto& name : corpus_names()) {
    auto g = corpus_graph(name);
    auto diag = validate(g);
    if (!diag.empty())
      MESSAGE(name, ": ", diag.front());
    CHECK(diag.empty());
  }
}

TEST_CASE("validate catches basic defects") {
  // single -1 vertex is fine
  auto g = corpus_graph("TRIV_SMOOTH");
  CHECK(validate(g).empty());

  // two-vertex chain (-2,-1) has determinant +1
  auto chain = corpus_graph("Z2AXES");
  CHECK(validate(chain).empty());

  // a cycle is rejected
  EquivariantResolutionGraph cyc;
  cyc.group = FiniteGroup::trivial();
  cyc.self_int = {-2, -2, -2};
  cyc.edges = {{0, 1}, {1, 2}, {0, 2}};
  cyc.action = {{0, 1, 2}};
  auto diag = validate(cyc);
  REQUIRE(!diag.empty());
  CHECK(diag.front().find("tree") != std::string::npos);

  // broken unimodularity
  auto cusp = corpus_graph("CUSP23_DIV");
  cusp.self_int[0] = -4;
  CHECK(!validate(cusp).empty());
}

TEST_CASE("multiplicities of the cusp graph") {
  auto g = corpus_graph("CUSP23_DIV");
  auto d = multiplicities(g);
  CHECK(d.m[0] == std::vector<long long>{1, 1, 2});
  CHECK(d.m[1] == std::vector<long long>{1, 2, 3});
  CHECK(d.m[2] == std::vector<long long>{2, 3, 6});
  // verified by I * x = -e_j for each column
  std::vector<std::vector<long long>> I = {{-3, 0, 1}, {0, -2, 1}, {1, 1, -1}};
  for (int j = 0; j < 3; ++j)
    for (int row = 0; row < 3; ++row) {
      long long s = 0;
      for (int col = 0; col < 3; ++col)
        s += I[row][col] * d.m[col][j];
      CHECK(s == (row == j ? -1 : 0));
    }
  CHECK(d.M_vec[2] == std::vector<long long>{6});
}

TEST_CASE("multiplicities of Z2AXES include orbit sums") {
  auto g = corpus_graph("Z2AXES");
  auto d = multiplicities(g);
  CHECK(d.m[0] == std::vector<long long>{1, 1});
  CHECK(d.m[1] == std::vector<long long>{1, 2});
  CHECK(d.M_vec[0] == std::vector<long long>{2});
  CHECK(d.M_vec[1] == std::vector<long long>{4});

  auto t = corpus_graph("TRIV_SMOOTH");
  CHECK(multiplicities(t).m == std::vector<std::vector<long long>>{{1}});
}

TEST_CASE("strata of the corpus fixtures") {
  SUBCASE("TRIV_SMOOTH: one stratum of chi 2") {
    auto s = strata(corpus_graph("TRIV_SMOOTH"));
    REQUIRE(s.size() == 1);
    CHECK(s[0].chi == 2);
    CHECK(s[0].M == ExpVec{1});
    CHECK(!s[0].is_point);
  }
  SUBCASE("Z2SCALAR: chi 2 with the sign character") {
    auto s = strata(corpus_graph("Z2SCALAR"));
    REQUIRE(s.size() == 1);
    CHECK(s[0].chi == 2);
    CHECK(s[0].M == ExpVec{2});
    CHECK(s[0].isotropy.size() == 2);
    CHECK(!s[0].chr.is_trivial());
  }
  SUBCASE("Z2SWAP: open stratum chi -1 plus two point strata") {
    auto s = strata(corpus_graph("Z2SWAP"));
    REQUIRE(s.size() == 3);
    int open_count = 0, point_count = 0;
    for (const auto& st : s) {
      CHECK(st.M == ExpVec{2});
      if (st.is_point) {
        ++point_count;
        CHECK(st.chi == 1);
        CHECK(st.isotropy.size() == 2);
      } else {
        ++open_count;
        CHECK(st.chi == -1);
        CHECK(st.isotropy.size() == 1);
      }
    }
    CHECK(open_count == 1);
    CHECK(point_count == 2);
  }
  SUBCASE("Z2AXES: two full-isotropy strata at exponents 2 and 4") {
    auto s = strata(corpus_graph("Z2AXES"));
    REQUIRE(s.size() == 2);
    for (const auto& st : s) {
      CHECK(st.isotropy.size() == 2);
      if (st.M == ExpVec{2}) {
        CHECK(st.is_point);
        CHECK(!st.chr.is_trivial());
      } else {
        CHECK(st.M == ExpVec{4});
        CHECK(st.chi == 1);
        CHECK(st.chr.is_trivial());
      }
    }
  }
}

TEST_CASE("Euler characteristic bookkeeping over strata") {
  for (const auto& name : corpus_names()) {
    auto g = corpus_graph(name);
    auto st = strata(g);
    long long total = 0;
    for (const auto& s : st)
      total += s.chi * (g.group->size() / s.isotropy.size());
    // compare against the chi of the smooth part of the full divisor
    long long expect = 0;
    for (int v = 0; v < g.nvertices(); ++v) {
      long long arrows = 0;
      for (int i = 0; i < g.nmarks(); ++i) {
        if (!g.mark_is_curve(i))
          continue;
        const auto& cm = std::get<CurveMark>(g.valuations[i]);
        if (g.orbit_rep(cm.vertex) == g.orbit_rep(v))
          arrows += g.vertex_stabilizer(v).size() / cm.isotropy.size();
      }
      expect += 2 - g.degree(v) - arrows;
    }
    CHECK(total == expect);
  }
}

TEST_CASE("semigroup data validation") {
  CHECK_THROWS_AS(make_semigroup_data({}), Error);
  CHECK_THROWS_AS(make_semigroup_data({2, 4}), Error);    // gcd does not drop
  CHECK_THROWS_AS(make_semigroup_data({4, 6, 12}), Error); // 12 <= N_1 * 6
  auto s = make_semigroup_data({4, 6, 13});
  CHECK(s.e == std::vector<long long>{4, 2, 1});
  CHECK(s.N[1] == 2);
  CHECK(s.N[2] == 2);
}

TEST_CASE("graph_from_semigroup: cusp, chains, staircases") {
  SUBCASE("beta (2,3) at the rupture is the cusp graph") {
    auto m = graph_from_semigroup(make_semigroup_data({2, 3}), 6);
    CHECK(m.tree.self_int == std::vector<int>{-3, -2, -1});
    CHECK(m.nu == 2);
    CHECK(m.m == std::vector<long long>{2, 3, 6});
    CHECK(m.dead_ends == std::vector<int>{0, 1});
    CHECK(m.ruptures == std::vector<int>{2});
  }
  SUBCASE("beta (1) with m_nu 2 is the two-vertex chain") {
    auto m = graph_from_semigroup(make_semigroup_data({1}), 2);
    CHECK(m.tree.self_int == std::vector<int>{-2, -1});
    CHECK(m.m == std::vector<long long>{1, 2});
  }
  SUBCASE("beta (1) with m_nu 1 is a single vertex") {
    auto m = graph_from_semigroup(make_semigroup_data({1}), 1);
    CHECK(m.tree.self_int == std::vector<int>{-1});
    CHECK(m.nu == 0);
  }
  SUBCASE("two Puiseux pairs (4,6,13)") {
    auto m = graph_from_semigroup(make_semigroup_data({4, 6, 13}), 26);
    CHECK(m.m[m.dead_ends[0]] == 4);
    CHECK(m.m[m.dead_ends[1]] == 6);
    CHECK(m.m[m.dead_ends[2]] == 13);
    CHECK(m.m[m.ruptures[0]] == 12);
    CHECK(m.m[m.ruptures[1]] == 26);
  }
  SUBCASE("free chain past the rupture") {
    auto m = graph_from_semigroup(make_semigroup_data({2, 3}), 7);
    CHECK(m.tree.self_int.size() == 4);
    CHECK(m.m == std::vector<long long>{2, 3, 6, 7});
  }
  SUBCASE("unreachable marked multiplicity is rejected") {
    CHECK_THROWS_AS(graph_from_semigroup(make_semigroup_data({2, 3}), 5), Error);
    CHECK_THROWS_AS(graph_from_semigroup(make_semigroup_data({4, 6}), 13), Error);
  }
}

TEST_CASE("semigroup_data inverts graph_from_semigroup") {
  std::vector<std::pair<std::vector<long long>, long long>> cases = {
      {{1}, 1},       {{1}, 4},        {{2, 3}, 6},  {{2, 3}, 8},
      {{2, 5}, 10},   {{3, 5}, 15},    {{4, 6, 13}, 26}, {{4, 6, 15}, 30},
      {{6, 9, 19}, 57}, {{2, 7}, 14},
  };
  for (const auto& [beta, m_nu] : cases) {
    auto sem = make_semigroup_data(beta);
    auto model = graph_from_semigroup(sem, m_nu);
    auto back = semigroup_data(model);
    CHECK(back.beta == sem.beta);
    CHECK(model.m[model.nu] == m_nu);
  }
}

TEST_CASE("glue: trivial chain reproduces the quotient graph") {
  auto G = FiniteGroup::cyclic(2);
  QuotientGraphData q;
  q.group = G;
  q.sem = make_semigroup_data({1});
  q.m_nu = 2;
  auto g = glue_from_quotient(q);
  CHECK(validate(g).empty());
  CHECK(g.nvertices() == 2);
  CHECK(g.self_int == std::vector<int>{-2, -1});
  CHECK(g.vertex_stabilizer(0).size() == 2);
  CHECK(g.vertex_stabilizer(1).size() == 2);
}

TEST_CASE("glue: two copies sharing the first component") {
  auto q = z2_free_chain();
  auto g = glue_from_quotient(q);
  CHECK(validate(g).empty());
  REQUIRE(g.nvertices() == 3);
  // shared sigma_0 carries both extra blow-ups
  CHECK(g.self_int == std::vector<int>{-3, -1, -1});
  CHECK(g.vertex_stabilizer(0).size() == 2);
  CHECK(g.vertex_stabilizer(1).size() == 1);
  auto d = multiplicities(g);
  CHECK(d.m[0][0] == 1);
  CHECK(d.M_vec[1] == std::vector<long long>{3});
  // synthesized decorations: nontrivial action on the shared component
  CHECK(g.generic.at(0).kernel.size() == 1);
  REQUIRE(g.special_points.count(0) == 1);
  CHECK(g.special_points.at(0).size() == 2);
}

TEST_CASE("quotienting the glued graph by the action returns the quotient graph") {
  std::vector<QuotientGraphData> inputs;
  inputs.push_back(z2_free_chain());
  {
    auto G = FiniteGroup::cyclic(4);
    QuotientGraphData q;
    q.group = G;
    q.sem = make_semigroup_data({1});
    q.m_nu = 3;
    q.chain = {cyclic_subgroup(G, 2), trivial_subgroup(G)};
    q.rho_m = {1, 2};
    inputs.push_back(q);
  }
  for (const auto& q : inputs) {
    auto model = model_of(q);
    auto glued = glue_from_quotient(q);
    // vertex orbits of the glued graph biject with the quotient vertices
    std::set<int> reps;
    for (int v = 0; v < glued.nvertices(); ++v)
      reps.insert(glued.orbit_rep(v));
    CHECK(static_cast<int>(reps.size()) == model.program.size());
    // and the orbit-level adjacency is the quotient tree
    std::set<std::pair<int, int>> orbit_edges;
    for (auto [a, b] : glued.edges) {
      int ra = glued.orbit_rep(a), rb = glued.orbit_rep(b);
      orbit_edges.insert({std::min(ra, rb), std::max(ra, rb)});
    }
    CHECK(orbit_edges.size() == model.tree.edges.size());
  }
}

TEST_CASE("glue rejects inconsistent chains") {
  auto G = FiniteGroup::cyclic(4);
  QuotientGraphData q;
  q.group = G;
  q.sem = make_semigroup_data({1});
  q.m_nu = 3;
  q.chain = {full_subgroup(G)}; // not a proper subgroup
  q.rho_m = {1};
  CHECK_THROWS_AS(glue_from_quotient(q), Error);

  QuotientGraphData q2;
  q2.group = G;
  q2.sem = make_semigroup_data({1});
  q2.m_nu = 3;
  q2.chain = {cyclic_subgroup(G, 2), trivial_subgroup(G)};
  q2.rho_m = {2, 1}; // not increasing
  CHECK_THROWS_AS(glue_from_quotient(q2), Error);
}

TEST_CASE("isomorphic: identity, relabeling, distinct graphs") {
  auto cusp = corpus_graph("CUSP23_DIV");
  CHECK(isomorphic(cusp, cusp));

  // permuted vertex ids
  EquivariantResolutionGraph perm;
  perm.group = cusp.group;
  perm.self_int = {-1, -3, -2};
  perm.edges = {{0, 1}, {0, 2}};
  perm.action = {{0, 1, 2}};
  perm.valuations.push_back(DivisorialMark{0});
  for (int v = 0; v < 3; ++v)
    perm.generic[v] =
        GenericRecord{full_subgroup(cusp.group), Character::trivial(full_subgroup(cusp.group))};
  CHECK(isomorphic(cusp, perm));

  CHECK(!isomorphic(cusp, corpus_graph("TRIV_SMOOTH")));
  CHECK(!isomorphic(corpus_graph("CUSP23_DIV"), corpus_graph("CUSP23_CURVE")));
  CHECK(!isomorphic(corpus_graph("Z2SCALAR"), corpus_graph("Z2SWAP")));
}

TEST_CASE("isomorphic distinguishes decorations") {
  auto a = corpus_graph("Z2AXES");
  auto b = corpus_graph("Z2AXES");
  b.special_points.clear();
  b.generic[0] = GenericRecord{full_subgroup(b.group), Character::trivial(full_subgroup(b.group))};
  // b is the scalar-action decoration of the same chain
  CHECK(validate(b).empty());
  CHECK(!isomorphic(a, b));
}

TEST_CASE("marks are matched up to orbit") {
  auto q = z2_free_chain();
  auto a = glue_from_quotient(q);
  auto b = glue_from_quotient(q);
  // move the mark to the other copy of the marked component
  auto mv = std::get<DivisorialMark>(b.valuations[0]);
  int other = -1;
  for (int v : b.orbit_of(mv.vertex))
    if (v != mv.vertex)
      other = v;
  REQUIRE(other >= 0);
  b.valuations[0] = DivisorialMark{other};
  CHECK(validate(b).empty());
  CHECK(isomorphic(a, b));
  // and the series data agrees: M-vectors are orbit constants
  CHECK(multiplicities(a).M_vec[mv.vertex] == multiplicities(b).M_vec[other]);
}
