#include "eqps/group.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace eqps {

namespace {

long long gcd_ll(long long a, long long b) {
  while (b) {
    long long t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}

long long lcm_ll(long long a, long long b) { return a / gcd_ll(a, b) * b; }

constexpr int kMaxDeskOrder = 64;

} // namespace

GroupPtr FiniteGroup::from_table(std::vector<std::string> names,
                                 std::vector<std::vector<int>> table, int identity) {
  const int n = static_cast<int>(table.size());
  if (n == 0)
    fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "empty multiplication table");
  if (names.empty()) {
    names.resize(n);
    for (int i = 0; i < n; ++i)
      names[i] = "g" + std::to_string(i);
  }
  if (static_cast<int>(names.size()) != n || identity < 0 || identity >= n)
    fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "group table shape mismatch");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n)
      fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "group table is not square");
    for (int v : row)
      if (v < 0 || v >= n)
        fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "table entry out of range");
  }

  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
  g->names_ = std::move(names);
  g->mul_ = std::move(table);
  g->identity_ = identity;

  for (int a = 0; a < n; ++a)
    if (g->mul_[identity][a] != a || g->mul_[a][identity] != a)
      fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "identity law fails");

  g->inv_.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      if (g->mul_[a][b] == identity && g->mul_[b][a] == identity) {
        g->inv_[a] = b;
        break;
      }
    if (g->inv_[a] < 0)
      fail(ErrorCode::MalformedAction, ErrorKind::BadInput,
           "element without two-sided inverse: " + g->names_[a]);
  }

  if (n <= kMaxDeskOrder) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (g->mul_[g->mul_[a][b]][c] != g->mul_[a][g->mul_[b][c]])
            fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "associativity fails");
  }

  g->order_.assign(n, 1);
  long long expo = 1;
  for (int a = 0; a < n; ++a) {
    int k = 1, x = a;
    while (x != identity) {
      x = g->mul_[x][a];
      ++k;
    }
    g->order_[a] = k;
    expo = lcm_ll(expo, k);
  }
  g->exponent_ = static_cast<int>(expo);

  g->abelian_ = true;
  for (int a = 0; a < n && g->abelian_; ++a)
    for (int b = 0; b < n; ++b)
      if (g->mul_[a][b] != g->mul_[b][a]) {
        g->abelian_ = false;
        break;
      }

  return g;
}

GroupPtr FiniteGroup::from_permutations(const std::vector<std::vector<int>>& generators,
                                        int degree) {
  if (degree <= 0)
    fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "permutation degree must be positive");
  std::vector<int> id(degree);
  for (int i = 0; i < degree; ++i)
    id[i] = i;
  for (const auto& p : generators) {
    if (static_cast<int>(p.size()) != degree)
      fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "permutation length mismatch");
    std::vector<int> seen(degree, 0);
    for (int v : p) {
      if (v < 0 || v >= degree || seen[v]++)
        fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "not a permutation");
    }
  }

  std::vector<std::vector<int>> elems{id};
  std::map<std::vector<int>, int> index{{id, 0}};
  for (size_t i = 0; i < elems.size(); ++i) {
    for (const auto& gen : generators) {
      std::vector<int> prod(degree);
      for (int k = 0; k < degree; ++k)
        prod[k] = gen[elems[i][k]]; // (gen * elems[i])(k)
      if (!index.count(prod)) {
        if (static_cast<int>(elems.size()) >= 1 << 14)
          fail(ErrorCode::GroupTooLarge, ErrorKind::Precondition,
               "generated permutation group is too large");
        index[prod] = static_cast<int>(elems.size());
        elems.push_back(prod);
      }
    }
  }

  const int n = static_cast<int>(elems.size());
  std::vector<std::string> names(n);
  for (int i = 0; i < n; ++i) {
    std::ostringstream os;
    os << "(";
    for (int k = 0; k < degree; ++k)
      os << elems[i][k] << (k + 1 < degree ? " " : ")");
    names[i] = os.str();
  }
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::vector<int> prod(degree);
      for (int k = 0; k < degree; ++k)
        prod[k] = elems[a][elems[b][k]];
      table[a][b] = index.at(prod);
    }
  return from_table(std::move(names), std::move(table), 0);
}

GroupPtr FiniteGroup::trivial() { return cyclic(1); }

GroupPtr FiniteGroup::cyclic(int n) {
  if (n <= 0)
    fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "cyclic order must be positive");
  std::vector<std::string> names(n);
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i) {
    names[i] = i == 0 ? "e" : (n == 2 && i == 1 ? "s" : "r" + std::to_string(i));
    for (int j = 0; j < n; ++j)
      table[i][j] = (i + j) % n;
  }
  return from_table(std::move(names), std::move(table), 0);
}

GroupPtr FiniteGroup::direct_product(const GroupPtr& a, const GroupPtr& b) {
  const int na = a->size(), nb = b->size(), n = na * nb;
  std::vector<std::string> names(n);
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  auto idx = [&](int x, int y) { return x * nb + y; };
  for (int x = 0; x < na; ++x)
    for (int y = 0; y < nb; ++y) {
      names[idx(x, y)] = "(" + a->name_of(x) + "," + b->name_of(y) + ")";
      for (int u = 0; u < na; ++u)
        for (int v = 0; v < nb; ++v)
          table[idx(x, y)][idx(u, v)] = idx(a->op(x, u), b->op(y, v));
    }
  return from_table(std::move(names), std::move(table), idx(a->identity(), b->identity()));
}

GroupPtr FiniteGroup::symmetric3() {
  return from_permutations({{1, 2, 0}, {1, 0, 2}}, 3);
}

bool same_group(const GroupPtr& a, const GroupPtr& b) {
  if (a.get() == b.get())
    return true;
  if (!a || !b)
    return false;
  return a->same_table(*b);
}

bool Subgroup::contains(int g) const {
  return std::binary_search(members.begin(), members.end(), g);
}

int Subgroup::index_of(int g) const {
  auto it = std::lower_bound(members.begin(), members.end(), g);
  if (it == members.end() || *it != g)
    return -1;
  return static_cast<int>(it - members.begin());
}

int Subgroup::exponent() const {
  long long e = 1;
  for (int g : members)
    e = e / gcd_ll(e, parent->order_of(g)) * parent->order_of(g);
  return static_cast<int>(e);
}

bool Subgroup::is_abelian() const {
  for (int a : members)
    for (int b : members)
      if (parent->op(a, b) != parent->op(b, a))
        return false;
  return true;
}

bool Subgroup::is_cyclic() const {
  for (int g : members)
    if (parent->order_of(g) == size())
      return true;
  return size() == 1;
}

bool Subgroup::contains_subgroup(const Subgroup& other) const {
  for (int g : other.members)
    if (!contains(g))
      return false;
  return true;
}

Subgroup Subgroup::conjugated(int a) const {
  std::vector<int> m;
  m.reserve(members.size());
  for (int g : members)
    m.push_back(parent->conj(a, g));
  std::sort(m.begin(), m.end());
  return Subgroup{parent, std::move(m)};
}

Subgroup trivial_subgroup(const GroupPtr& G) {
  return Subgroup{G, {G->identity()}};
}

Subgroup full_subgroup(const GroupPtr& G) {
  std::vector<int> m(G->size());
  for (int i = 0; i < G->size(); ++i)
    m[i] = i;
  return Subgroup{G, std::move(m)};
}

Subgroup subgroup_from_members(const GroupPtr& G, std::vector<int> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  Subgroup h{G, members};
  if (!h.contains(G->identity()))
    fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "subgroup misses the identity");
  for (int a : members) {
    if (!h.contains(G->inv(a)))
      fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "subgroup not closed under inverse");
    for (int b : members)
      if (!h.contains(G->op(a, b)))
        fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "subgroup not closed under product");
  }
  return h;
}

Subgroup closure(const GroupPtr& G, std::vector<int> seed) {
  std::set<int> acc{G->identity()};
  for (int s : seed)
    acc.insert(s);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<int> cur(acc.begin(), acc.end());
    for (int a : cur)
      for (int b : cur)
        if (acc.insert(G->op(a, b)).second)
          grew = true;
    for (int a : cur)
      if (acc.insert(G->inv(a)).second)
        grew = true;
  }
  return Subgroup{G, std::vector<int>(acc.begin(), acc.end())};
}

Subgroup intersect(const Subgroup& a, const Subgroup& b) {
  std::vector<int> m;
  std::set_intersection(a.members.begin(), a.members.end(), b.members.begin(),
                        b.members.end(), std::back_inserter(m));
  return Subgroup{a.parent, std::move(m)};
}

Subgroup commutator_subgroup(const Subgroup& h) {
  std::vector<int> comms;
  const auto& G = h.parent;
  for (int a : h.members)
    for (int b : h.members)
      comms.push_back(G->op(G->op(a, b), G->op(G->inv(a), G->inv(b))));
  return closure(G, comms);
}

Subgroup cyclic_subgroup(const GroupPtr& G, int g) {
  std::vector<int> m{G->identity()};
  int x = g;
  while (x != G->identity()) {
    m.push_back(x);
    x = G->op(x, g);
  }
  std::sort(m.begin(), m.end());
  return Subgroup{G, std::move(m)};
}

bool is_normal_in(const Subgroup& k, const Subgroup& h) {
  for (int a : h.members)
    for (int g : k.members)
      if (!k.contains(h.parent->conj(a, g)))
        return false;
  return true;
}

CosetTable left_cosets(const GroupPtr& G, const Subgroup& H) {
  CosetTable t;
  t.coset_of.assign(G->size(), -1);
  for (int g = 0; g < G->size(); ++g) {
    if (t.coset_of[g] >= 0)
      continue;
    int c = static_cast<int>(t.reps.size());
    t.reps.push_back(g);
    for (int h : H.members)
      t.coset_of[G->op(g, h)] = c;
  }
  return t;
}

CosetTable left_cosets_in(const Subgroup& ambient, const Subgroup& H) {
  CosetTable t;
  t.coset_of.assign(ambient.parent->size(), -1);
  for (int g : ambient.members) {
    if (t.coset_of[g] >= 0)
      continue;
    int c = static_cast<int>(t.reps.size());
    t.reps.push_back(g);
    for (int h : H.members)
      t.coset_of[ambient.parent->op(g, h)] = c;
  }
  return t;
}

Frac::Frac(long long n, long long d) {
  if (d == 0)
    fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  n %= d;
  if (n < 0)
    n += d;
  long long g = gcd_ll(n, d);
  if (g == 0)
    g = 1;
  num = n / g;
  den = d / g;
}

Frac Frac::operator+(const Frac& o) const {
  long long d = lcm_ll(den, o.den);
  return Frac(num * (d / den) + o.num * (d / o.den), d);
}

Frac Frac::operator*(long long k) const { return Frac(num * k, den); }

Character Character::trivial(const Subgroup& H) {
  Character c;
  c.domain = H;
  c.modulus = H.exponent();
  c.values.assign(H.members.size(), 0);
  return c;
}

int Character::value_at(int g) const {
  int i = domain.index_of(g);
  if (i < 0)
    fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "character evaluated off its domain");
  return values[i];
}

Frac Character::frac_at(int g) const { return Frac(value_at(g), modulus); }

bool Character::is_trivial() const {
  for (int v : values)
    if (v != 0)
      return false;
  return true;
}

Character Character::conjugated(int a) const {
  const auto& G = domain.parent;
  Subgroup h2 = domain.conjugated(a);
  Character c;
  c.domain = h2;
  c.modulus = modulus;
  c.values.resize(h2.members.size());
  for (size_t i = 0; i < h2.members.size(); ++i) {
    int b = h2.members[i];
    c.values[i] = value_at(G->conj(G->inv(a), b)); // alpha(a^{-1} b a)
  }
  return c;
}

Character Character::restricted(const Subgroup& K) const {
  Character c;
  c.domain = K;
  c.modulus = K.exponent();
  c.values.resize(K.members.size());
  for (size_t i = 0; i < K.members.size(); ++i) {
    Frac f = frac_at(K.members[i]);
    if (c.modulus % f.den != 0)
      fail(ErrorCode::MalformedAction, ErrorKind::BadInput,
           "character value does not restrict");
    c.values[i] = static_cast<int>(f.num * (c.modulus / f.den));
  }
  return c;
}

Character Character::times(const Character& other) const {
  if (!(domain == other.domain))
    fail(ErrorCode::GroupMismatch, ErrorKind::Precondition,
         "character product needs equal domains");
  std::map<int, Frac> f;
  for (int g : domain.members)
    f[g] = frac_at(g) + other.frac_at(g);
  return character_from_fracs(domain, f);
}

Character character_from_fracs(const Subgroup& H, const std::map<int, Frac>& fracs) {
  Character c;
  c.domain = H;
  c.modulus = H.exponent();
  c.values.resize(H.members.size());
  for (size_t i = 0; i < H.members.size(); ++i) {
    auto it = fracs.find(H.members[i]);
    if (it == fracs.end())
      fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "missing character value");
    const Frac& f = it->second;
    if (c.modulus % f.den != 0)
      fail(ErrorCode::MalformedAction, ErrorKind::BadInput,
           "character value denominator does not divide the exponent");
    c.values[i] = static_cast<int>(f.num * (c.modulus / f.den));
  }
  // homomorphism law
  for (int a : H.members)
    for (int b : H.members) {
      int ab = H.parent->op(a, b);
      if ((c.value_at(a) + c.value_at(b)) % c.modulus != c.value_at(ab))
        fail(ErrorCode::MalformedAction, ErrorKind::BadInput,
             "values do not define a homomorphism");
    }
  return c;
}

std::vector<SubgroupClass> subgroups(const GroupPtr& G) {
  if (G->size() > kMaxDeskOrder)
    fail(ErrorCode::GroupTooLarge, ErrorKind::Precondition,
         "subgroup enumeration is limited to |G| <= 64");

  std::set<std::vector<int>> seen;
  std::vector<Subgroup> all;
  Subgroup triv = trivial_subgroup(G);
  seen.insert(triv.members);
  all.push_back(triv);
  for (size_t i = 0; i < all.size(); ++i) {
    Subgroup h = all[i];
    for (int g = 0; g < G->size(); ++g) {
      if (h.contains(g))
        continue;
      std::vector<int> seed = h.members;
      seed.push_back(g);
      Subgroup bigger = closure(G, seed);
      if (seen.insert(bigger.members).second)
        all.push_back(bigger);
    }
  }

  std::sort(all.begin(), all.end());
  std::vector<SubgroupClass> classes;
  std::set<std::vector<int>> assigned;
  for (const auto& h : all) {
    if (assigned.count(h.members))
      continue;
    SubgroupClass cls;
    std::set<std::vector<int>> orbit;
    for (int a = 0; a < G->size(); ++a)
      orbit.insert(h.conjugated(a).members);
    for (const auto& m : orbit) {
      assigned.insert(m);
      cls.elements.push_back(Subgroup{G, m});
    }
    cls.representative = cls.elements.front(); // set order = lexicographic least
    classes.push_back(std::move(cls));
  }
  return classes;
}

std::vector<Character> characters_of(const Subgroup& H) {
  const auto& G = H.parent;
  const int N = H.exponent();

  // greedy generating set
  std::vector<int> gens;
  Subgroup span = trivial_subgroup(G);
  for (int g : H.members) {
    if (span.contains(g))
      continue;
    gens.push_back(g);
    std::vector<int> seed = span.members;
    seed.push_back(g);
    span = closure(G, seed);
    if (span.size() == H.size())
      break;
  }

  std::vector<Character> out;
  std::set<std::vector<int>> seen;
  std::vector<int> assign(gens.size(), 0);

  auto try_assignment = [&]() {
    // propagate values over H by BFS on right multiplication by generators
    std::vector<int> val(H.members.size(), -1);
    val[H.index_of(G->identity())] = 0;
    bool grew = true;
    while (grew) {
      grew = false;
      for (size_t i = 0; i < H.members.size(); ++i) {
        if (val[i] < 0)
          continue;
        for (size_t k = 0; k < gens.size(); ++k) {
          int x = G->op(H.members[i], gens[k]);
          int xi = H.index_of(x);
          int v = (val[i] + assign[k]) % N;
          if (val[xi] < 0) {
            val[xi] = v;
            grew = true;
          } else if (val[xi] != v) {
            return; // inconsistent assignment
          }
        }
      }
    }
    for (int v : val)
      if (v < 0)
        return;
    // full homomorphism check
    for (size_t i = 0; i < H.members.size(); ++i)
      for (size_t j = 0; j < H.members.size(); ++j) {
        int ab = G->op(H.members[i], H.members[j]);
        if ((val[i] + val[j]) % N != val[H.index_of(ab)])
          return;
      }
    if (seen.insert(val).second) {
      Character c;
      c.domain = H;
      c.modulus = N;
      c.values = val;
      out.push_back(std::move(c));
    }
  };

  // enumerate all generator images in Z/N
  size_t total = 1;
  for (size_t k = 0; k < gens.size(); ++k)
    total *= static_cast<size_t>(N);
  if (gens.empty())
    total = 1;
  for (size_t code = 0; code < total; ++code) {
    size_t c = code;
    for (size_t k = 0; k < gens.size(); ++k) {
      assign[k] = static_cast<int>(c % N);
      c /= N;
    }
    try_assignment();
  }

  std::sort(out.begin(), out.end(),
            [](const Character& a, const Character& b) { return a.values < b.values; });
  return out;
}

std::pair<Subgroup, Character> conjugate(int a, const Subgroup& H, const Character& alpha) {
  if (!(alpha.domain == H))
    fail(ErrorCode::GroupMismatch, ErrorKind::Precondition,
         "character is not defined on the given subgroup");
  return {H.conjugated(a), alpha.conjugated(a)};
}

CyclotomicInteger CyclotomicInteger::root(const Frac& q, long long mult) {
  CyclotomicInteger c;
  if (mult != 0)
    c.terms[q] = mult;
  return c;
}

CyclotomicInteger CyclotomicInteger::plus(const CyclotomicInteger& o) const {
  CyclotomicInteger r = *this;
  for (const auto& [q, m] : o.terms) {
    r.terms[q] += m;
    if (r.terms[q] == 0)
      r.terms.erase(q);
  }
  return r;
}

std::optional<long long> CyclotomicInteger::as_integer() const {
  long long v = 0;
  for (const auto& [q, m] : terms) {
    if (q.is_zero())
      v += m;
    else if (q == Frac(1, 2))
      v -= m;
    else
      return std::nullopt;
  }
  return v;
}

std::string CyclotomicInteger::to_string() const {
  if (terms.empty())
    return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [q, m] : terms) {
    if (!first)
      os << " + ";
    first = false;
    os << m << "*e(" << q.num << "/" << q.den << ")";
  }
  return os.str();
}

} // namespace eqps
