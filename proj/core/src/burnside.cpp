#include "eqps/burnside.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace eqps {

namespace {

void require_same_group(const GroupPtr& a, const GroupPtr& b) {
  if (!same_group(a, b))
    fail(ErrorCode::GroupMismatch, ErrorKind::Precondition,
         "operands live over different groups");
}

} // namespace

std::vector<int> canonical_subgroup_key(const Subgroup& H) {
  const auto& G = H.parent;
  std::vector<int> best = H.members;
  for (int a = 0; a < G->size(); ++a) {
    auto cand = H.conjugated(a).members;
    if (cand < best)
      best = cand;
  }
  return best;
}

EquippedClassKey canonical_pair_key(const Subgroup& H, const Character& alpha) {
  const auto& G = H.parent;
  EquippedClassKey best{H.members, alpha.values};
  for (int a = 0; a < G->size(); ++a) {
    auto [h2, a2] = conjugate(a, H, alpha);
    EquippedClassKey cand{h2.members, a2.values};
    if (cand < best)
      best = cand;
  }
  return best;
}

Subgroup EquippedGSet::stabilizer(int point) const {
  std::vector<int> m;
  for (int a = 0; a < group->size(); ++a)
    if (action[a][point] == point)
      m.push_back(a);
  return Subgroup{group, std::move(m)};
}

void EquippedGSet::validate() const {
  const int n = npoints();
  const int g = group->size();
  if (static_cast<int>(action.size()) != g)
    fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "action table has wrong height");
  for (const auto& row : action) {
    if (static_cast<int>(row.size()) != n)
      fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "action row has wrong width");
    std::vector<int> seen(n, 0);
    for (int v : row)
      if (v < 0 || v >= n || seen[v]++)
        fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "action row is not a permutation");
  }
  for (int x = 0; x < n; ++x)
    if (action[group->identity()][x] != x)
      fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "identity does not act trivially");
  for (int a = 0; a < g; ++a)
    for (int b = 0; b < g; ++b)
      for (int x = 0; x < n; ++x)
        if (action[group->op(a, b)][x] != action[a][action[b][x]])
          fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "action is not a group action");
  if (static_cast<int>(chars.size()) != n)
    fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "one character per point required");
  for (int x = 0; x < n; ++x) {
    if (!(chars[x].domain == stabilizer(x)))
      fail(ErrorCode::MalformedAction, ErrorKind::BadInput,
           "character domain differs from the point stabilizer");
  }
  // equivariance alpha_{ax}(b) = alpha_x(a^{-1} b a)
  for (int a = 0; a < g; ++a)
    for (int x = 0; x < n; ++x) {
      Character moved = chars[x].conjugated(a);
      if (!(moved == chars[action[a][x]]))
        fail(ErrorCode::MalformedAction, ErrorKind::BadInput,
             "characters are not conjugation-equivariant");
    }
}

BurnsideElement be_zero(const GroupPtr& G) { return BurnsideElement{G, {}}; }

BurnsideElement be_one(const GroupPtr& G) {
  return be_generator(G, full_subgroup(G), 1);
}

BurnsideElement be_generator(const GroupPtr& G, const Subgroup& H, long long coeff) {
  BurnsideElement u{G, {}};
  if (coeff != 0)
    u.coeffs[canonical_subgroup_key(H)] = coeff;
  return u;
}

EquippedBurnsideElement ebe_zero(const GroupPtr& G) { return EquippedBurnsideElement{G, {}}; }

EquippedBurnsideElement ebe_one(const GroupPtr& G) {
  Subgroup full = full_subgroup(G);
  return ebe_generator(G, full, Character::trivial(full), 1);
}

EquippedBurnsideElement ebe_generator(const GroupPtr& G, const Subgroup& H,
                                      const Character& alpha, long long coeff) {
  if (!(alpha.domain == H))
    fail(ErrorCode::GroupMismatch, ErrorKind::Precondition,
         "character not defined on the subgroup");
  EquippedBurnsideElement u{G, {}};
  if (coeff != 0)
    u.coeffs[canonical_pair_key(H, alpha)] = coeff;
  return u;
}

BurnsideElement be_add(const BurnsideElement& a, const BurnsideElement& b) {
  require_same_group(a.group, b.group);
  BurnsideElement r = a;
  for (const auto& [k, c] : b.coeffs) {
    r.coeffs[k] += c;
    if (r.coeffs[k] == 0)
      r.coeffs.erase(k);
  }
  return r;
}

BurnsideElement be_scale(const BurnsideElement& a, long long k) {
  BurnsideElement r{a.group, {}};
  if (k != 0)
    for (const auto& [key, c] : a.coeffs)
      r.coeffs[key] = c * k;
  return r;
}

EquippedBurnsideElement ebe_add(const EquippedBurnsideElement& a,
                                const EquippedBurnsideElement& b) {
  require_same_group(a.group, b.group);
  EquippedBurnsideElement r = a;
  for (const auto& [k, c] : b.coeffs) {
    r.coeffs[k] += c;
    if (r.coeffs[k] == 0)
      r.coeffs.erase(k);
  }
  return r;
}

EquippedBurnsideElement ebe_scale(const EquippedBurnsideElement& a, long long k) {
  EquippedBurnsideElement r{a.group, {}};
  if (k != 0)
    for (const auto& [key, c] : a.coeffs)
      r.coeffs[key] = c * k;
  return r;
}

namespace {

// Coset space for one generator [G/H]_alpha as an equipped set.
EquippedGSet realize_generator(const GroupPtr& G, const EquippedClassKey& key) {
  Subgroup H{G, key.members};
  Character alpha{H, H.exponent(), key.values};
  CosetTable cosets = left_cosets(G, H);
  const int d = static_cast<int>(cosets.reps.size());
  EquippedGSet x;
  x.group = G;
  x.action.assign(G->size(), std::vector<int>(d));
  for (int a = 0; a < G->size(); ++a)
    for (int c = 0; c < d; ++c)
      x.action[a][c] = cosets.coset_of[G->op(a, cosets.reps[c])];
  x.chars.reserve(d);
  for (int c = 0; c < d; ++c)
    x.chars.push_back(alpha.conjugated(cosets.reps[c]));
  return x;
}

EquippedGSet disjoint_union(const EquippedGSet& a, const EquippedGSet& b) {
  EquippedGSet r;
  r.group = a.group;
  const int na = a.npoints(), nb = b.npoints();
  r.action.assign(a.group->size(), std::vector<int>(na + nb));
  for (int g = 0; g < a.group->size(); ++g) {
    for (int x = 0; x < na; ++x)
      r.action[g][x] = a.action[g][x];
    for (int x = 0; x < nb; ++x)
      r.action[g][na + x] = na + b.action[g][x];
  }
  r.chars = a.chars;
  r.chars.insert(r.chars.end(), b.chars.begin(), b.chars.end());
  return r;
}

EquippedGSet product_set(const EquippedGSet& a, const EquippedGSet& b) {
  EquippedGSet r;
  r.group = a.group;
  const int na = a.npoints(), nb = b.npoints();
  r.action.assign(a.group->size(), std::vector<int>(na * nb));
  for (int g = 0; g < a.group->size(); ++g)
    for (int x = 0; x < na; ++x)
      for (int y = 0; y < nb; ++y)
        r.action[g][x * nb + y] = a.action[g][x] * nb + b.action[g][y];
  r.chars.reserve(na * nb);
  for (int x = 0; x < na; ++x)
    for (int y = 0; y < nb; ++y) {
      Subgroup s = intersect(a.chars[x].domain, b.chars[y].domain);
      r.chars.push_back(a.chars[x].restricted(s).times(b.chars[y].restricted(s)));
    }
  return r;
}

} // namespace

EquippedBurnsideElement classify(const EquippedGSet& x) {
  x.validate();
  const auto& G = x.group;
  EquippedBurnsideElement r = ebe_zero(G);
  std::vector<int> seen(x.npoints(), 0);
  for (int p = 0; p < x.npoints(); ++p) {
    if (seen[p])
      continue;
    for (int a = 0; a < G->size(); ++a)
      seen[x.action[a][p]] = 1;
    r = ebe_add(r, ebe_generator(G, x.chars[p].domain, x.chars[p], 1));
  }
  return r;
}

EquippedGSet realize(const EquippedBurnsideElement& u) {
  EquippedGSet r;
  r.group = u.group;
  r.action.assign(u.group->size(), {});
  bool empty = true;
  for (const auto& [key, c] : u.coeffs) {
    if (c < 0)
      fail(ErrorCode::NotEffective, ErrorKind::Precondition,
           "cannot realize an element with negative coefficients");
    EquippedGSet gen = realize_generator(u.group, key);
    for (long long i = 0; i < c; ++i) {
      r = empty ? gen : disjoint_union(r, gen);
      empty = false;
    }
  }
  return r;
}

EquippedBurnsideElement ebe_multiply(const EquippedBurnsideElement& a,
                                     const EquippedBurnsideElement& b) {
  require_same_group(a.group, b.group);
  EquippedBurnsideElement r = ebe_zero(a.group);
  for (const auto& [ka, ca] : a.coeffs)
    for (const auto& [kb, cb] : b.coeffs) {
      EquippedGSet prod =
          product_set(realize_generator(a.group, ka), realize_generator(a.group, kb));
      r = ebe_add(r, ebe_scale(classify(prod), ca * cb));
    }
  return r;
}

namespace {

EquippedBurnsideElement lift_trivial(const BurnsideElement& u) {
  EquippedBurnsideElement r = ebe_zero(u.group);
  for (const auto& [k, c] : u.coeffs) {
    Subgroup h{u.group, k};
    r = ebe_add(r, ebe_generator(u.group, h, Character::trivial(h), c));
  }
  return r;
}

} // namespace

BurnsideElement be_multiply(const BurnsideElement& a, const BurnsideElement& b) {
  require_same_group(a.group, b.group);
  return reduce_rho(ebe_multiply(lift_trivial(a), lift_trivial(b)));
}

namespace {

// Symmetric powers of a single irreducible class, by orbit enumeration over
// size-n multisets of the coset space. The composition vector c assigns a
// multiplicity to each coset point.
std::vector<EquippedBurnsideElement> sym_powers_of_generator(const GroupPtr& G,
                                                             const EquippedClassKey& key,
                                                             int nmax) {
  EquippedGSet base = realize_generator(G, key);
  const int d = base.npoints();
  std::vector<EquippedBurnsideElement> table(nmax + 1, ebe_zero(G));
  table[0] = ebe_one(G);

  std::vector<int> comp(d, 0);
  for (int n = 1; n <= nmax; ++n) {
    EquippedBurnsideElement acc = ebe_zero(G);
    // enumerate compositions of n into d parts
    std::fill(comp.begin(), comp.end(), 0);
    comp[0] = n;
    while (true) {
      // canonical representative test: comp must be <= all its G-images
      bool is_rep = true;
      std::vector<int> image(d);
      std::vector<int> stab_members;
      for (int a = 0; a < G->size() && is_rep; ++a) {
        for (int i = 0; i < d; ++i)
          image[base.action[a][i]] = comp[i];
        if (image < comp)
          is_rep = false;
        else if (image == comp)
          stab_members.push_back(a);
      }
      if (is_rep) {
        std::sort(stab_members.begin(), stab_members.end());
        Subgroup stab{G, stab_members};
        std::map<int, Frac> fracs;
        for (int a : stab.members) {
          Frac total(0, 1);
          std::vector<int> visited(d, 0);
          for (int i = 0; i < d; ++i) {
            if (comp[i] == 0 || visited[i])
              continue;
            int len = 0, x = i;
            do {
              visited[x] = 1;
              x = base.action[a][x];
              ++len;
            } while (x != i);
            int ak = G->identity();
            for (int t = 0; t < len; ++t)
              ak = G->op(ak, a);
            total = total + base.chars[i].frac_at(ak) * comp[i];
          }
          fracs[a] = total;
        }
        acc = ebe_add(acc, ebe_generator(G, stab, character_from_fracs(stab, fracs), 1));
      }
      // next composition
      if (comp[d - 1] == n)
        break;
      int k = d - 2;
      while (comp[k] == 0)
        --k;
      int rest = comp[d - 1];
      comp[k]--;
      comp[k + 1] = rest + 1;
      if (k + 1 < d - 1)
        comp[d - 1] = 0;
    }
    table[n] = acc;
  }
  return table;
}

} // namespace

std::vector<EquippedBurnsideElement> sym_powers(const EquippedBurnsideElement& u, int nmax) {
  for (const auto& [k, c] : u.coeffs)
    if (c < 0)
      fail(ErrorCode::NotEffective, ErrorKind::Precondition,
           "symmetric powers need an effective element");
  std::vector<EquippedBurnsideElement> acc(nmax + 1, ebe_zero(u.group));
  acc[0] = ebe_one(u.group);
  for (const auto& [key, c] : u.coeffs) {
    auto gen_table = sym_powers_of_generator(u.group, key, nmax);
    for (long long copy = 0; copy < c; ++copy) {
      // acc := acc (*) gen_table, truncated convolution
      std::vector<EquippedBurnsideElement> next(nmax + 1, ebe_zero(u.group));
      for (int i = 0; i <= nmax; ++i) {
        if (acc[i].is_zero())
          continue;
        for (int j = 0; i + j <= nmax; ++j) {
          if (gen_table[j].is_zero())
            continue;
          next[i + j] = ebe_add(next[i + j], ebe_multiply(acc[i], gen_table[j]));
        }
      }
      acc = std::move(next);
    }
  }
  return acc;
}

EquippedBurnsideElement sym_power(const EquippedBurnsideElement& u, int n) {
  if (n < 0)
    fail(ErrorCode::NotEffective, ErrorKind::Precondition, "negative symmetric power");
  return sym_powers(u, n)[n];
}

std::vector<BurnsideElement> sym_powers(const BurnsideElement& u, int nmax) {
  for (const auto& [k, c] : u.coeffs)
    if (c < 0)
      fail(ErrorCode::NotEffective, ErrorKind::Precondition,
           "symmetric powers need an effective element");
  auto lifted = sym_powers(lift_trivial(u), nmax);
  std::vector<BurnsideElement> r;
  r.reserve(lifted.size());
  for (const auto& e : lifted)
    r.push_back(reduce_rho(e));
  return r;
}

BurnsideElement sym_power(const BurnsideElement& u, int n) {
  if (n < 0)
    fail(ErrorCode::NotEffective, ErrorKind::Precondition, "negative symmetric power");
  return sym_powers(u, n)[n];
}

BurnsideElement reduce_rho(const EquippedBurnsideElement& u) {
  BurnsideElement r = be_zero(u.group);
  for (const auto& [key, c] : u.coeffs) {
    auto k = key.members; // canonical already: pair keys minimize members first
    r.coeffs[k] += c;
    if (r.coeffs[k] == 0)
      r.coeffs.erase(k);
  }
  return r;
}

long long reduce_rho_hat(const EquippedBurnsideElement& u) {
  long long total = 0;
  for (const auto& [key, c] : u.coeffs)
    total += c * (u.group->size() / static_cast<long long>(key.members.size()));
  return total;
}

long long reduce_rho_hat(const BurnsideElement& u) {
  long long total = 0;
  for (const auto& [key, c] : u.coeffs)
    total += c * (u.group->size() / static_cast<long long>(key.size()));
  return total;
}

SubgroupGroup subgroup_as_group(const Subgroup& H) {
  const auto& G = H.parent;
  SubgroupGroup sg;
  sg.to_parent = H.members;
  sg.from_parent.assign(G->size(), -1);
  for (size_t i = 0; i < H.members.size(); ++i)
    sg.from_parent[H.members[i]] = static_cast<int>(i);
  const int n = H.size();
  std::vector<std::string> names;
  names.reserve(n);
  for (int g : H.members)
    names.push_back(G->name_of(g));
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      table[a][b] = sg.from_parent[G->op(H.members[a], H.members[b])];
  sg.group = FiniteGroup::from_table(std::move(names), std::move(table),
                                     sg.from_parent[G->identity()]);
  return sg;
}

EquippedBurnsideElement restrict_to(const EquippedBurnsideElement& u,
                                    const SubgroupGroup& hg) {
  const auto& G = u.group;
  const auto& H = hg.group;
  EquippedBurnsideElement r = ebe_zero(H);
  for (const auto& [key, c] : u.coeffs) {
    EquippedGSet big = realize_generator(G, key);
    EquippedGSet small;
    small.group = H;
    small.action.assign(H->size(), std::vector<int>(big.npoints()));
    for (int a = 0; a < H->size(); ++a)
      small.action[a] = big.action[hg.to_parent[a]];
    small.chars.reserve(big.npoints());
    for (int x = 0; x < big.npoints(); ++x) {
      // stabilizer within H, with the character carried over
      std::vector<int> m;
      for (int a = 0; a < H->size(); ++a)
        if (small.action[a][x] == x)
          m.push_back(a);
      Subgroup stab{H, m};
      std::map<int, Frac> fracs;
      for (int a : stab.members)
        fracs[a] = big.chars[x].frac_at(hg.to_parent[a]);
      small.chars.push_back(character_from_fracs(stab, fracs));
    }
    r = ebe_add(r, ebe_scale(classify(small), c));
  }
  return r;
}

std::string to_string(const BurnsideElement& u) {
  if (u.coeffs.empty())
    return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : u.coeffs) {
    if (!first)
      os << " + ";
    first = false;
    os << c << "*[G/{";
    for (size_t i = 0; i < k.size(); ++i)
      os << k[i] << (i + 1 < k.size() ? "," : "");
    os << "}]";
  }
  return os.str();
}

std::string to_string(const EquippedBurnsideElement& u) {
  if (u.coeffs.empty())
    return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : u.coeffs) {
    if (!first)
      os << " + ";
    first = false;
    os << c << "*[G/{";
    for (size_t i = 0; i < k.members.size(); ++i)
      os << k.members[i] << (i + 1 < k.members.size() ? "," : "");
    os << "}]_(";
    for (size_t i = 0; i < k.values.size(); ++i)
      os << k.values[i] << (i + 1 < k.values.size() ? "," : "");
    os << ")";
  }
  return os.str();
}

} // namespace eqps
