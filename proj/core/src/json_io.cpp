#include "eqps/json_io.hpp"

#include <cstdio>
#include <fstream>

namespace eqps {

namespace {

Subgroup subgroup_from_members_json(const json& j, const GroupPtr& g) {
  std::vector<int> members = j.get<std::vector<int>>();
  return subgroup_from_members(g, std::move(members));
}

Character char_from_values(const Subgroup& h, const std::vector<int>& values) {
  if (values.size() != h.members.size())
    fail(ErrorCode::BadFile, ErrorKind::BadInput, "character value count mismatch");
  const int n = h.exponent();
  std::map<int, Frac> fr;
  for (size_t i = 0; i < values.size(); ++i)
    fr[h.members[i]] = Frac(values[i], n);
  return character_from_fracs(h, fr); // validates the homomorphism law
}

json char_values_json(const Character& c) { return json(c.values); }

} // namespace

json group_to_json(const GroupPtr& g) {
  json j;
  j["elements"] = g->names();
  j["table"] = g->table();
  j["identity"] = g->identity();
  return j;
}

GroupPtr group_from_json(const json& j) {
  if (j.contains("permutation_generators")) {
    auto gens = j.at("permutation_generators").get<std::vector<std::vector<int>>>();
    int degree = j.at("degree").get<int>();
    return FiniteGroup::from_permutations(gens, degree);
  }
  auto names = j.value("elements", std::vector<std::string>{});
  auto table = j.at("table").get<std::vector<std::vector<int>>>();
  int identity = j.at("identity").get<int>();
  return FiniteGroup::from_table(std::move(names), std::move(table), identity);
}

json be_to_json(const BurnsideElement& u) {
  json out = json::array();
  for (const auto& [k, c] : u.coeffs) {
    json e;
    e["subgroup"] = k;
    e["coeff"] = c;
    out.push_back(e);
  }
  return out;
}

BurnsideElement be_from_json(const json& j, const GroupPtr& g) {
  BurnsideElement u = be_zero(g);
  for (const auto& e : j) {
    Subgroup h = subgroup_from_members_json(e.at("subgroup"), g);
    u = be_add(u, be_generator(g, h, e.at("coeff").get<long long>()));
  }
  return u;
}

json ebe_to_json(const EquippedBurnsideElement& u) {
  json out = json::array();
  for (const auto& [k, c] : u.coeffs) {
    json e;
    e["subgroup"] = k.members;
    e["character"] = k.values;
    e["coeff"] = c;
    out.push_back(e);
  }
  return out;
}

EquippedBurnsideElement ebe_from_json(const json& j, const GroupPtr& g) {
  EquippedBurnsideElement u = ebe_zero(g);
  for (const auto& e : j) {
    Subgroup h = subgroup_from_members_json(e.at("subgroup"), g);
    Character c = char_from_values(h, e.at("character").get<std::vector<int>>());
    u = ebe_add(u, ebe_generator(g, h, c, e.at("coeff").get<long long>()));
  }
  return u;
}

namespace {

template <class Ring, class ElemToJson>
json factored_json_impl(const FactoredSeries<Ring>& f, const std::string& tag,
                        ElemToJson elem, const GroupPtr& group) {
  json j;
  j["ring"] = tag;
  j["nvars"] = f.nvars();
  if (group)
    j["group"] = group_to_json(group);
  json fac = json::array();
  for (const auto& [M, s] : f.factors()) {
    json e;
    e["M"] = M;
    e["s"] = elem(s);
    fac.push_back(e);
  }
  j["factors"] = fac;
  return j;
}

template <class Ring, class ElemToJson>
json expanded_json_impl(const MultiSeries<Ring>& s, const std::string& tag,
                        ElemToJson elem, const GroupPtr& group) {
  json j;
  j["ring"] = tag;
  j["nvars"] = s.nvars();
  j["bound"] = s.bound();
  if (group)
    j["group"] = group_to_json(group);
  json terms = json::array();
  for (const auto& [e, c] : s.terms()) {
    json t;
    t["exp"] = e;
    t["coeff"] = elem(c);
    terms.push_back(t);
  }
  j["terms"] = terms;
  return j;
}

} // namespace

json factored_to_json(const FactoredSeries<ZRing>& f) {
  return factored_json_impl(f, "Z", [](long long c) { return json(c); }, nullptr);
}
json factored_to_json(const FactoredSeries<ARing>& f) {
  return factored_json_impl(f, "A", [](const BurnsideElement& c) { return be_to_json(c); },
                            f.ring().G);
}
json factored_to_json(const FactoredSeries<AtRing>& f) {
  return factored_json_impl(
      f, "Atilde", [](const EquippedBurnsideElement& c) { return ebe_to_json(c); },
      f.ring().G);
}

FactoredSeries<ZRing> factored_z_from_json(const json& j) {
  FactoredSeries<ZRing> f(ZRing{}, j.at("nvars").get<int>());
  for (const auto& e : j.at("factors"))
    f.add_factor(e.at("M").get<ExpVec>(), e.at("s").get<long long>());
  return f;
}

FactoredSeries<ARing> factored_a_from_json(const json& j, const GroupPtr& g) {
  FactoredSeries<ARing> f(ARing{g}, j.at("nvars").get<int>());
  for (const auto& e : j.at("factors"))
    f.add_factor(e.at("M").get<ExpVec>(), be_from_json(e.at("s"), g));
  return f;
}

FactoredSeries<AtRing> factored_at_from_json(const json& j, const GroupPtr& g) {
  FactoredSeries<AtRing> f(AtRing{g}, j.at("nvars").get<int>());
  for (const auto& e : j.at("factors"))
    f.add_factor(e.at("M").get<ExpVec>(), ebe_from_json(e.at("s"), g));
  return f;
}

json expanded_to_json(const MultiSeries<ZRing>& s) {
  return expanded_json_impl(s, "Z", [](long long c) { return json(c); }, nullptr);
}
json expanded_to_json(const MultiSeries<ARing>& s) {
  return expanded_json_impl(s, "A",
                            [](const BurnsideElement& c) { return be_to_json(c); },
                            s.ring().G);
}
json expanded_to_json(const MultiSeries<AtRing>& s) {
  return expanded_json_impl(
      s, "Atilde", [](const EquippedBurnsideElement& c) { return ebe_to_json(c); },
      s.ring().G);
}

MultiSeries<ZRing> expanded_z_from_json(const json& j) {
  MultiSeries<ZRing> s(ZRing{}, j.at("nvars").get<int>(), j.at("bound").get<int>());
  for (const auto& t : j.at("terms"))
    s.add_term(t.at("exp").get<ExpVec>(), t.at("coeff").get<long long>());
  return s;
}

MultiSeries<ARing> expanded_a_from_json(const json& j, const GroupPtr& g) {
  MultiSeries<ARing> s(ARing{g}, j.at("nvars").get<int>(), j.at("bound").get<int>());
  for (const auto& t : j.at("terms"))
    s.add_term(t.at("exp").get<ExpVec>(), be_from_json(t.at("coeff"), g));
  return s;
}

MultiSeries<AtRing> expanded_at_from_json(const json& j, const GroupPtr& g) {
  MultiSeries<AtRing> s(AtRing{g}, j.at("nvars").get<int>(), j.at("bound").get<int>());
  for (const auto& t : j.at("terms"))
    s.add_term(t.at("exp").get<ExpVec>(), ebe_from_json(t.at("coeff"), g));
  return s;
}

json graph_to_json(const EquivariantResolutionGraph& g) {
  json j;
  j["group"] = group_to_json(g.group);
  json verts = json::array();
  for (int v = 0; v < g.nvertices(); ++v) {
    json vj;
    vj["id"] = v;
    vj["self_int"] = g.self_int[v];
    vj["stabilizer_hint"] = g.vertex_stabilizer(v).members;
    verts.push_back(vj);
  }
  j["vertices"] = verts;
  json edges = json::array();
  for (auto [a, b] : g.edges)
    edges.push_back(json::array({a, b}));
  j["edges"] = edges;
  json action;
  for (int a = 0; a < g.group->size(); ++a)
    action[g.group->name_of(a)] = g.action[a];
  j["action"] = action;
  json vals = json::array();
  for (int i = 0; i < g.nmarks(); ++i) {
    json v;
    if (g.mark_is_curve(i)) {
      const auto& cm = std::get<CurveMark>(g.valuations[i]);
      v["type"] = "curve";
      v["vertex"] = cm.vertex;
      v["isotropy"] = cm.isotropy.members;
      v["character"] = char_values_json(cm.chr);
    } else {
      v["type"] = "divisorial";
      v["vertex"] = g.mark_vertex(i);
    }
    vals.push_back(v);
  }
  j["valuations"] = vals;
  json specials = json::object();
  for (const auto& [v, recs] : g.special_points) {
    json list = json::array();
    for (const auto& r : recs) {
      json rj;
      rj["isotropy"] = r.isotropy.members;
      rj["character"] = char_values_json(r.chr);
      rj["orbit_size_on_component"] = r.orbit_size_on_component;
      list.push_back(rj);
    }
    specials[std::to_string(v)] = list;
  }
  j["special_points"] = specials;
  json generic = json::object();
  for (const auto& [v, rec] : g.generic) {
    json rj;
    rj["kernel"] = rec.kernel.members;
    rj["character"] = char_values_json(rec.chr);
    generic[std::to_string(v)] = rj;
  }
  j["generic"] = generic;
  return j;
}

EquivariantResolutionGraph graph_from_json(const json& j) {
  EquivariantResolutionGraph g;
  g.group = group_from_json(j.at("group"));
  const auto& verts = j.at("vertices");
  g.self_int.assign(verts.size(), 0);
  for (const auto& v : verts) {
    int id = v.at("id").get<int>();
    if (id < 0 || id >= static_cast<int>(verts.size()))
      fail(ErrorCode::BadFile, ErrorKind::BadInput, "vertex id out of range");
    g.self_int[id] = v.at("self_int").get<int>();
  }
  for (const auto& e : j.at("edges"))
    g.edges.emplace_back(std::min(e.at(0).get<int>(), e.at(1).get<int>()),
                         std::max(e.at(0).get<int>(), e.at(1).get<int>()));
  g.action.assign(g.group->size(), {});
  for (int a = 0; a < g.group->size(); ++a) {
    const auto& act = j.at("action");
    auto it = act.find(g.group->name_of(a));
    if (it == act.end())
      fail(ErrorCode::BadFile, ErrorKind::BadInput,
           "missing action row for element " + g.group->name_of(a));
    g.action[a] = it->get<std::vector<int>>();
  }
  for (const auto& v : j.at("valuations")) {
    std::string type = v.at("type").get<std::string>();
    if (type == "divisorial") {
      g.valuations.push_back(DivisorialMark{v.at("vertex").get<int>()});
    } else if (type == "curve") {
      Subgroup iso = subgroup_from_members_json(v.at("isotropy"), g.group);
      Character c = char_from_values(iso, v.at("character").get<std::vector<int>>());
      g.valuations.push_back(CurveMark{v.at("vertex").get<int>(), iso, c});
    } else {
      fail(ErrorCode::BadFile, ErrorKind::BadInput, "unknown valuation type " + type);
    }
  }
  if (j.contains("special_points"))
    for (const auto& [key, list] : j.at("special_points").items()) {
      int v = std::stoi(key);
      for (const auto& r : list) {
        Subgroup iso = subgroup_from_members_json(r.at("isotropy"), g.group);
        Character c = char_from_values(iso, r.at("character").get<std::vector<int>>());
        g.special_points[v].push_back(
            SpecialPointRecord{iso, c, r.at("orbit_size_on_component").get<int>()});
      }
    }
  if (j.contains("generic"))
    for (const auto& [key, r] : j.at("generic").items()) {
      int v = std::stoi(key);
      Subgroup ker = subgroup_from_members_json(r.at("kernel"), g.group);
      Character c = char_from_values(ker, r.at("character").get<std::vector<int>>());
      g.generic[v] = GenericRecord{ker, c};
    }
  return g;
}

json representation_to_json(const std::map<int, CyclotomicInteger>& rep,
                            const GroupPtr& g) {
  json out;
  for (const auto& [elt, value] : rep) {
    json terms = json::array();
    for (const auto& [q, m] : value.terms)
      terms.push_back(json::array({json::array({q.num, q.den}), m}));
    out[g->name_of(elt)] = terms;
  }
  return out;
}

json tails_to_json(const std::vector<TailAssignment>& tails) {
  json out = json::array();
  for (const auto& t : tails) {
    json tj;
    tj["tail_root"] = t.tail_root;
    tj["character"] = t.chr.values;
    out.push_back(tj);
  }
  return out;
}

std::string ring_tag_of(const json& series_file) {
  return series_file.at("ring").get<std::string>();
}

GroupPtr group_of_series(const json& series_file) {
  if (series_file.contains("group"))
    return group_from_json(series_file.at("group"));
  return nullptr;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    fail(ErrorCode::BadFile, ErrorKind::BadInput, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(ErrorCode::BadFile, ErrorKind::BadInput,
         "cannot parse " + path + ": " + e.what());
  }
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out)
      fail(ErrorCode::BadFile, ErrorKind::BadInput, "cannot write " + tmp);
    out << j.dump(2) << "\n";
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    fail(ErrorCode::BadFile, ErrorKind::BadInput, "cannot move " + tmp + " to " + path);
}

} // namespace eqps
