#pragma once

#include <optional>
#include <variant>

#include "eqps/series.hpp"

namespace eqps {

// ---------------------------------------------------------------------------
// Blow-up programs: a resolution tree as an ordered sequence of point
// blow-ups. Center k creates vertex k; the first center is the origin.
// ---------------------------------------------------------------------------

struct BlowUpProgram {
  struct Center {
    int parent_a = -1; // free center: the component it lies on
    int parent_b = -1; // satellite center: second component (intersection point)
  };
  std::vector<Center> centers;

  int size() const { return static_cast<int>(centers.size()); }
};

struct ReplayedTree {
  std::vector<int> self_int;
  std::vector<std::pair<int, int>> edges; // stored with min first
};

/// Replays a program: every new component starts at -1, each component
/// containing a later center loses 1; satellite centers rewire the edge they
/// sit on.
ReplayedTree replay(const BlowUpProgram& prog);

// ---------------------------------------------------------------------------
// Decorated equivariant resolution graphs.
// ---------------------------------------------------------------------------

struct DivisorialMark {
  int vertex;
};

struct CurveMark {
  int vertex;
  Subgroup isotropy; // stabilizer of the branch, contained in the vertex stabilizer
  Character chr;     // character of the branch equation on the isotropy
};

using ValuationMark = std::variant<DivisorialMark, CurveMark>;

struct SpecialPointRecord {
  Subgroup isotropy;
  Character chr;
  int orbit_size_on_component = 1;
};

struct GenericRecord {
  Subgroup kernel; // generic isotropy K of the component
  Character chr;   // curvette character at generic points
};

struct EquivariantResolutionGraph {
  GroupPtr group;
  std::vector<int> self_int;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> action; // [group element][vertex]
  std::vector<ValuationMark> valuations;
  std::map<int, std::vector<SpecialPointRecord>> special_points; // keyed by orbit rep
  std::map<int, GenericRecord> generic;                          // keyed by orbit rep
  std::optional<BlowUpProgram> program;

  int nvertices() const { return static_cast<int>(self_int.size()); }
  int nmarks() const { return static_cast<int>(valuations.size()); }
  std::vector<std::vector<int>> adjacency() const;
  int degree(int v) const;
  std::vector<int> orbit_of(int v) const;
  int orbit_rep(int v) const;
  Subgroup vertex_stabilizer(int v) const;
  int mark_vertex(int i) const;
  bool mark_is_curve(int i) const;
  bool all_marks_divisorial() const;
  bool all_marks_curve() const;
};

/// Structural diagnostics; an empty list means the graph is valid.
std::vector<std::string> validate(const EquivariantResolutionGraph& g);
void require_valid(const EquivariantResolutionGraph& g);

struct MultiplicityData {
  std::vector<std::vector<long long>> m;     // minus the inverse intersection matrix
  std::vector<std::vector<long long>> m_vec; // per vertex, per mark
  std::vector<std::vector<long long>> M_vec; // orbit sums, constant on orbits
};

/// Exact inversion of the intersection matrix. Errors: NotUnimodular,
/// NonIntegerEntry (also covers nonpositive entries).
MultiplicityData multiplicities(const EquivariantResolutionGraph& g);

struct Stratum {
  long long chi = 0;
  ExpVec M;
  Subgroup isotropy;
  Character chr;
  int vertex = -1;     // orbit representative the stratum lives on
  bool is_point = false;
};

/// Strata of the quotient exceptional divisor: one open stratum per vertex
/// orbit (chi scaled by |K|/|G_v|, dropped when zero) plus one point stratum
/// per special-point orbit.
std::vector<Stratum> strata(const EquivariantResolutionGraph& g);

// ---------------------------------------------------------------------------
// Semigroup data of one plane valuation and the graph <-> semigroup maps.
// ---------------------------------------------------------------------------

struct SemigroupData {
  std::vector<long long> beta; // minimal generators, beta[0] the multiplicity
  std::vector<long long> e;    // gcd ladder e_q = gcd(beta_0..beta_q)
  std::vector<long long> N;    // N_q = e_{q-1}/e_q, N[0] unused

  int puiseux_pairs() const { return static_cast<int>(beta.size()) - 1; }
};

/// Validates the characteristic-sequence axioms (gcd ladder drops, ratios are
/// integers >= 2, beta_{q+1} > N_q beta_q).
SemigroupData make_semigroup_data(std::vector<long long> beta);

/// A single valuation's quotient resolution graph together with the named
/// vertices the reconstruction arguments use.
struct SingleValuationModel {
  BlowUpProgram program;
  ReplayedTree tree;
  int nu = 0;                  // marked vertex
  std::vector<int> dead_ends;  // sigma_0..sigma_g in birth order
  std::vector<int> ruptures;   // tau_1..tau_g in birth order
  std::vector<int> geodesic;   // path from vertex 0 to nu
  std::vector<long long> m;    // m-column of nu

  SemigroupData sem;
  long long m_nu = 1;
};

/// Builds the minimal resolution tree of the valuation with the given
/// semigroup, via the continued-fraction staircase, then m_nu - N_g beta_g
/// trailing free blow-ups. Errors: NotASemigroupCharacteristic.
SingleValuationModel graph_from_semigroup(const SemigroupData& sem, long long m_nu);

/// Reads the semigroup data off a single-valuation model (dead-end m-values).
SemigroupData semigroup_data(const SingleValuationModel& model);

// ---------------------------------------------------------------------------
// Gluing |G| copies of a quotient graph along a subgroup chain.
// ---------------------------------------------------------------------------

struct QuotientGraphData {
  GroupPtr group;
  SemigroupData sem;
  long long m_nu = 1;
  std::vector<Subgroup> chain;     // H_1 > H_2 > ... > H_k, all abelian
  std::vector<long long> rho_m;    // m-values locating rho_1 < ... < rho_k
  bool curve_mark = false;
  std::optional<Subgroup> branch_isotropy; // curve marks only, contained in H_k
  std::optional<Character> branch_char;

  int chain_depth() const { return static_cast<int>(chain.size()); }
};

void validate_quotient_data(const QuotientGraphData& q);

/// A general quotient-level blow-up tree with a stabilizer assignment,
/// covering joint (multi-valuation) programs as well.
struct MarkSpec {
  int vertex;
  bool curve = false;
  std::optional<Subgroup> isotropy;
  std::optional<Character> chr;
};

struct QuotientProgram {
  GroupPtr group;
  BlowUpProgram program;
  std::vector<Subgroup> stab; // S(v) per vertex, decreasing along ancestry
  std::vector<MarkSpec> marks;
};

/// Realizes the glued graph: vertex set is the quotient of G x Gamma by the
/// gluing relation, G acts by left translation on copy labels, and
/// self-intersections come from replaying the glued program. Decorations are
/// synthesized at the subgroup level with trivial placeholder characters.
EquivariantResolutionGraph glue_program(const QuotientProgram& qp);

EquivariantResolutionGraph glue_from_quotient(const QuotientGraphData& q);

/// The quotient program of a single-valuation gluing datum (stab map derived
/// from the chain and the rho positions by birth order).
QuotientProgram quotient_program_of(const QuotientGraphData& q,
                                    const SingleValuationModel& model);
SingleValuationModel model_of(const QuotientGraphData& q);

// ---------------------------------------------------------------------------
// Graph isomorphism at the level of weak equivalence.
// ---------------------------------------------------------------------------

/// Decoration-preserving equivariant isomorphism; valuation marks are matched
/// index by index up to vertex orbit, subgroup decorations up to conjugacy.
/// Character values are not compared (they are recovered separately through
/// the representation).
bool isomorphic(const EquivariantResolutionGraph& a, const EquivariantResolutionGraph& b);

} // namespace eqps
