#include "eqps/corpus.hpp"

namespace eqps {

namespace {

Character nontrivial_char(const Subgroup& h) {
  for (const auto& c : characters_of(h))
    if (!c.is_trivial())
      return c;
  fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "subgroup has no nontrivial character");
}

EquivariantResolutionGraph triv_smooth() {
  auto G = FiniteGroup::trivial();
  EquivariantResolutionGraph g;
  g.group = G;
  g.self_int = {-1};
  g.action = {{0}};
  g.valuations.push_back(DivisorialMark{0});
  g.generic[0] = GenericRecord{full_subgroup(G), Character::trivial(full_subgroup(G))};
  return g;
}

EquivariantResolutionGraph cusp23(bool curve) {
  auto G = FiniteGroup::trivial();
  EquivariantResolutionGraph g;
  g.group = G;
  g.self_int = {-3, -2, -1};
  g.edges = {{0, 2}, {1, 2}};
  g.action = {{0, 1, 2}};
  if (curve)
    g.valuations.push_back(
        CurveMark{2, full_subgroup(G), Character::trivial(full_subgroup(G))});
  else
    g.valuations.push_back(DivisorialMark{2});
  for (int v = 0; v < 3; ++v)
    g.generic[v] = GenericRecord{full_subgroup(G), Character::trivial(full_subgroup(G))};
  return g;
}

EquivariantResolutionGraph z2scalar() {
  auto G = FiniteGroup::cyclic(2);
  EquivariantResolutionGraph g;
  g.group = G;
  g.self_int = {-1};
  g.action = {{0}, {0}};
  g.valuations.push_back(DivisorialMark{0});
  // -id fixes the component pointwise; a linear curvette picks up the sign
  g.generic[0] = GenericRecord{full_subgroup(G), nontrivial_char(full_subgroup(G))};
  return g;
}

EquivariantResolutionGraph z2axes() {
  auto G = FiniteGroup::cyclic(2);
  EquivariantResolutionGraph g;
  g.group = G;
  g.self_int = {-2, -1};
  g.edges = {{0, 1}};
  g.action = {{0, 1}, {0, 1}};
  g.valuations.push_back(DivisorialMark{1});
  // first component: the involution moves it, one unblown fixed point remains,
  // its curvette is the minus-eigenline
  g.generic[0] = GenericRecord{trivial_subgroup(G), Character::trivial(trivial_subgroup(G))};
  g.special_points[0].push_back(
      SpecialPointRecord{full_subgroup(G), nontrivial_char(full_subgroup(G)), 1});
  // second component is pointwise fixed, curvettes are plus-eigendirection germs
  g.generic[1] = GenericRecord{full_subgroup(G), Character::trivial(full_subgroup(G))};
  return g;
}

EquivariantResolutionGraph z2swap() {
  auto G = FiniteGroup::cyclic(2);
  EquivariantResolutionGraph g;
  g.group = G;
  g.self_int = {-1};
  g.action = {{0}, {0}};
  // one curve valuation: the orbit of a generic line, two branches swapped
  g.valuations.push_back(
      CurveMark{0, trivial_subgroup(G), Character::trivial(trivial_subgroup(G))});
  g.generic[0] = GenericRecord{trivial_subgroup(G), Character::trivial(trivial_subgroup(G))};
  g.special_points[0].push_back(
      SpecialPointRecord{full_subgroup(G), Character::trivial(full_subgroup(G)), 1});
  g.special_points[0].push_back(
      SpecialPointRecord{full_subgroup(G), nontrivial_char(full_subgroup(G)), 1});
  return g;
}

EquivariantResolutionGraph hopf() {
  auto G = FiniteGroup::trivial();
  EquivariantResolutionGraph g;
  g.group = G;
  g.self_int = {-1};
  g.action = {{0}};
  g.valuations.push_back(
      CurveMark{0, full_subgroup(G), Character::trivial(full_subgroup(G))});
  g.valuations.push_back(
      CurveMark{0, full_subgroup(G), Character::trivial(full_subgroup(G))});
  g.generic[0] = GenericRecord{full_subgroup(G), Character::trivial(full_subgroup(G))};
  return g;
}

} // namespace

std::vector<std::string> corpus_names() {
  return {"TRIV_SMOOTH", "CUSP23_DIV", "CUSP23_CURVE", "Z2SCALAR",
          "Z2AXES",      "Z2SWAP",     "HOPF"};
}

EquivariantResolutionGraph corpus_graph(const std::string& name) {
  if (name == "TRIV_SMOOTH")
    return triv_smooth();
  if (name == "CUSP23_DIV")
    return cusp23(false);
  if (name == "CUSP23_CURVE")
    return cusp23(true);
  if (name == "Z2SCALAR")
    return z2scalar();
  if (name == "Z2AXES")
    return z2axes();
  if (name == "Z2SWAP")
    return z2swap();
  if (name == "HOPF")
    return hopf();
  fail(ErrorCode::UnknownFixture, ErrorKind::BadInput, "unknown fixture: " + name);
}

} // namespace eqps
