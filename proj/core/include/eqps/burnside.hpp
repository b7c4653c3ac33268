#pragma once

#include <map>
#include <vector>

#include "eqps/group.hpp"

namespace eqps {

/// Canonical key of a conjugacy class of pairs (H, alpha): the lexicographic
/// minimum over conjugates of (sorted member list, character value vector).
struct EquippedClassKey {
  std::vector<int> members;
  std::vector<int> values;

  bool operator<(const EquippedClassKey& o) const {
    if (members != o.members)
      return members < o.members;
    return values < o.values;
  }
  bool operator==(const EquippedClassKey& o) const {
    return members == o.members && values == o.values;
  }
};

std::vector<int> canonical_subgroup_key(const Subgroup& H);
EquippedClassKey canonical_pair_key(const Subgroup& H, const Character& alpha);

/// Finite G-set with a one-dimensional character of each point's isotropy
/// subgroup, compatible with conjugation.
struct EquippedGSet {
  GroupPtr group;
  std::vector<std::vector<int>> action; // [group element][point] -> point
  std::vector<Character> chars;         // per point, domain = stabilizer

  int npoints() const { return action.empty() ? 0 : static_cast<int>(action[0].size()); }
  Subgroup stabilizer(int point) const;
  void validate() const; // MalformedAction on any broken invariant
};

/// Element of the Burnside ring A(G): integer combination of classes [G/H].
struct BurnsideElement {
  GroupPtr group;
  std::map<std::vector<int>, long long> coeffs; // canonical subgroup key -> coeff

  bool is_zero() const { return coeffs.empty(); }
  bool operator==(const BurnsideElement& o) const { return coeffs == o.coeffs; }
};

/// Element of the equipped modification Ã(G): integer combination of [G/H]_alpha.
struct EquippedBurnsideElement {
  GroupPtr group;
  std::map<EquippedClassKey, long long> coeffs;

  bool is_zero() const { return coeffs.empty(); }
  bool operator==(const EquippedBurnsideElement& o) const { return coeffs == o.coeffs; }
};

// -- constructors ------------------------------------------------------------

BurnsideElement be_zero(const GroupPtr& G);
BurnsideElement be_one(const GroupPtr& G); // [G/G]
BurnsideElement be_generator(const GroupPtr& G, const Subgroup& H, long long coeff = 1);

EquippedBurnsideElement ebe_zero(const GroupPtr& G);
EquippedBurnsideElement ebe_one(const GroupPtr& G); // [G/G]_1
EquippedBurnsideElement ebe_generator(const GroupPtr& G, const Subgroup& H,
                                      const Character& alpha, long long coeff = 1);

// -- linear structure --------------------------------------------------------

BurnsideElement be_add(const BurnsideElement& a, const BurnsideElement& b);
BurnsideElement be_scale(const BurnsideElement& a, long long k);
EquippedBurnsideElement ebe_add(const EquippedBurnsideElement& a,
                                const EquippedBurnsideElement& b);
EquippedBurnsideElement ebe_scale(const EquippedBurnsideElement& a, long long k);

// -- ring structure ----------------------------------------------------------

/// Cartesian product, extended bilinearly from generator pairs.
BurnsideElement be_multiply(const BurnsideElement& a, const BurnsideElement& b);
EquippedBurnsideElement ebe_multiply(const EquippedBurnsideElement& a,
                                     const EquippedBurnsideElement& b);

/// Decomposition of a finite equipped G-set into irreducible classes.
EquippedBurnsideElement classify(const EquippedGSet& x);

/// Realizes an effective element as an equipped G-set made of coset spaces.
EquippedGSet realize(const EquippedBurnsideElement& u);

/// n-th symmetric power of an effective element: points of the realizing set
/// are size-n multisets; the character of a stabilizer element is computed by
/// the cycle rule (a cycle (x, ax, ..., a^{k-1}x) contributes alpha_x(a^k)).
EquippedBurnsideElement sym_power(const EquippedBurnsideElement& u, int n);
BurnsideElement sym_power(const BurnsideElement& u, int n);

/// Symmetric powers Sym^0..Sym^nmax in one sweep (shared convolution state).
std::vector<EquippedBurnsideElement> sym_powers(const EquippedBurnsideElement& u, int nmax);
std::vector<BurnsideElement> sym_powers(const BurnsideElement& u, int nmax);

// -- reductions --------------------------------------------------------------

BurnsideElement reduce_rho(const EquippedBurnsideElement& u);
long long reduce_rho_hat(const EquippedBurnsideElement& u);
long long reduce_rho_hat(const BurnsideElement& u);

// -- restriction -------------------------------------------------------------

/// A subgroup packaged as a FiniteGroup of its own, with index translations.
struct SubgroupGroup {
  GroupPtr group;
  std::vector<int> to_parent;   // sub index -> parent index
  std::vector<int> from_parent; // parent index -> sub index, -1 outside
};
SubgroupGroup subgroup_as_group(const Subgroup& H);

/// Restriction of the action to H <= G, reclassified over H.
EquippedBurnsideElement restrict_to(const EquippedBurnsideElement& u,
                                    const SubgroupGroup& hg);

std::string to_string(const BurnsideElement& u);
std::string to_string(const EquippedBurnsideElement& u);

} // namespace eqps
