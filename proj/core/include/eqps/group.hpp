#pragma once

#include <map>
#include <memory>
#include <optional>
#include <numeric>
#include <string>
#include <vector>

#include "eqps/error.hpp"

namespace eqps {

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

/// Finite group given by an explicit multiplication table on element indices.
/// Construction validates the identity law, two-sided inverses and (for
/// |G| <= 64) associativity on all triples.
class FiniteGroup {
public:
  static GroupPtr from_table(std::vector<std::string> names,
                             std::vector<std::vector<int>> table, int identity);

  /// One-line permutations on {0,..,degree-1}; the group they generate is
  /// closed into an explicit table, elements named by their permutation word.
  static GroupPtr from_permutations(const std::vector<std::vector<int>>& generators,
                                    int degree);

  static GroupPtr trivial();
  static GroupPtr cyclic(int n);
  static GroupPtr direct_product(const GroupPtr& a, const GroupPtr& b);
  static GroupPtr symmetric3();

  int size() const { return static_cast<int>(mul_.size()); }
  int identity() const { return identity_; }
  int op(int a, int b) const { return mul_[a][b]; }
  int inv(int a) const { return inv_[a]; }
  /// a b a^{-1}
  int conj(int a, int b) const { return mul_[mul_[a][b]][inv_[a]]; }
  int order_of(int a) const { return order_[a]; }
  int exponent() const { return exponent_; }
  bool is_abelian() const { return abelian_; }
  const std::string& name_of(int a) const { return names_[a]; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::vector<int>>& table() const { return mul_; }

  bool same_table(const FiniteGroup& other) const {
    return mul_ == other.mul_ && identity_ == other.identity_;
  }

private:
  FiniteGroup() = default;

  std::vector<std::string> names_;
  std::vector<std::vector<int>> mul_;
  int identity_ = 0;
  std::vector<int> inv_;
  std::vector<int> order_;
  int exponent_ = 1;
  bool abelian_ = true;
};

bool same_group(const GroupPtr& a, const GroupPtr& b);

/// Subgroup as a sorted member-index set of a parent group.
struct Subgroup {
  GroupPtr parent;
  std::vector<int> members; // sorted, contains identity, closed under op/inv

  int size() const { return static_cast<int>(members.size()); }
  bool contains(int g) const;
  int index_of(int g) const; // position in members, -1 if absent
  int exponent() const;
  bool is_abelian() const;
  bool is_cyclic() const;
  bool contains_subgroup(const Subgroup& other) const;
  Subgroup conjugated(int a) const; // a H a^{-1}

  bool operator==(const Subgroup& o) const { return members == o.members; }
  bool operator<(const Subgroup& o) const { return members < o.members; }
};

Subgroup trivial_subgroup(const GroupPtr& G);
Subgroup full_subgroup(const GroupPtr& G);
Subgroup subgroup_from_members(const GroupPtr& G, std::vector<int> members);
Subgroup closure(const GroupPtr& G, std::vector<int> seed);
Subgroup intersect(const Subgroup& a, const Subgroup& b);
Subgroup commutator_subgroup(const Subgroup& h);
Subgroup cyclic_subgroup(const GroupPtr& G, int g);
bool is_normal_in(const Subgroup& k, const Subgroup& h);

/// Left coset decomposition of G modulo H; reps[0] is the identity coset.
struct CosetTable {
  std::vector<int> reps;        // one representative per coset
  std::vector<int> coset_of;    // element -> coset index
};
CosetTable left_cosets(const GroupPtr& G, const Subgroup& H);
CosetTable left_cosets_in(const Subgroup& ambient, const Subgroup& H);

/// Reduced fraction modulo 1, used as an additive coordinate on roots of
/// unity: q represents e^{2 pi i q}.
struct Frac {
  long long num = 0;
  long long den = 1;

  Frac() = default;
  Frac(long long n, long long d);
  Frac operator+(const Frac& o) const;
  Frac operator*(long long k) const;
  bool operator==(const Frac& o) const { return num == o.num && den == o.den; }
  bool operator<(const Frac& o) const {
    return num * o.den < o.num * den;
  }
  bool is_zero() const { return num == 0; }
};

/// One-dimensional character of a subgroup, stored additively: values are
/// residues k mod N with N the exponent of the domain, meaning e^{2 pi i k/N}.
struct Character {
  Subgroup domain;
  int modulus = 1;
  std::vector<int> values; // aligned with domain.members

  static Character trivial(const Subgroup& H);

  int value_at(int g) const;       // residue mod modulus
  Frac frac_at(int g) const;       // as reduced fraction
  bool is_trivial() const;
  Character conjugated(int a) const;               // character of a H a^{-1}
  Character restricted(const Subgroup& K) const;   // K must lie in domain
  Character times(const Character& other) const;   // same domain

  bool operator==(const Character& o) const {
    return domain == o.domain && modulus == o.modulus && values == o.values;
  }
};

/// Builds the character with the given fractional values (denominators must
/// divide the exponent of H); validates the homomorphism law.
Character character_from_fracs(const Subgroup& H, const std::map<int, Frac>& fracs);

struct SubgroupClass {
  Subgroup representative;          // lexicographically least member set
  std::vector<Subgroup> elements;   // the full conjugacy class
};

/// All subgroups of G grouped into conjugacy classes. Desk scale: |G| <= 64.
std::vector<SubgroupClass> subgroups(const GroupPtr& G);

/// All one-dimensional characters (homomorphisms into roots of unity) of H.
std::vector<Character> characters_of(const Subgroup& H);

/// Conjugation of an equipped pair: (H, alpha) -> (aHa^{-1}, b -> alpha(a^{-1}ba)).
std::pair<Subgroup, Character> conjugate(int a, const Subgroup& H, const Character& alpha);

/// Finite Z-combination of roots of unity; canonical form keeps only nonzero
/// multiplicities of reduced fractions.
struct CyclotomicInteger {
  std::map<Frac, long long> terms;

  static CyclotomicInteger root(const Frac& q, long long mult = 1);
  CyclotomicInteger plus(const CyclotomicInteger& o) const;
  bool operator==(const CyclotomicInteger& o) const { return terms == o.terms; }
  /// Integer value when every root is +-1, nullopt otherwise.
  std::optional<long long> as_integer() const;
  std::string to_string() const;
};

} // namespace eqps
