#pragma once

#include "eqps/poincare.hpp"

namespace eqps {

/// A reconstructed single valuation: the gluing datum plus its quotient model.
struct SingleReconstruction {
  QuotientGraphData quotient;
  SingleValuationModel model;
};

/// Inverse of the closed form for one divisorial valuation. Walks the factor
/// exponents in increasing order, deciding at each step whether it sees a dead
/// end, a gluing vertex or the marked vertex, solving the segment equations
/// M = |H_l| m + C_l prod(N) for the quotient multiplicities; every candidate
/// is verified against the closed form before being accepted.
/// Errors: NotRecognized (no consistent reading), NonIntegralSolution.
SingleReconstruction reconstruct_single_divisorial(const FactoredSeries<ARing>& f,
                                                   const GroupPtr& G);

/// Single-branch curve variant on the enlarged quotient graph: strips a
/// candidate branch factor (1-t^M)^{[G/H]} off the maximal exponent and reuses
/// the divisorial recursion, verifying against the curve closed form.
SingleReconstruction reconstruct_single_curve(const FactoredSeries<ARing>& f,
                                              const GroupPtr& G);

/// The separation exponent of a two-variable reduced series: the maximal
/// exponent whose ratio matches the first-component ratio (taken from
/// sigma0_M when provided, otherwise from the componentwise meet of the
/// exponents present). Falls back to the meet itself when no factor matches.
ExpVec separation_exponent(const FactoredSeries<ARing>& f,
                           const std::optional<std::pair<long long, long long>>& sigma0_M = {});
ExpVec separation_exponent(const FactoredSeries<ZRing>& f,
                           const std::optional<std::pair<long long, long long>>& sigma0_M = {});

/// Joins per-valuation programs into one equivariant graph; share_depth[i][j]
/// is the number of common blow-up centers of valuations i and j (>= 1, the
/// origin is always shared). Errors: InconsistentSeparations, InconsistentChain.
EquivariantResolutionGraph assemble_divisorial_collection(
    const std::vector<SingleReconstruction>& singles,
    const std::vector<std::vector<int>>& share_depth);

/// Divisorial pipeline: per-valuation reconstructions from the projections,
/// pairwise share depths found by verified search, joint assembly, and a final
/// check that the assembled graph reproduces the input series.
EquivariantResolutionGraph reconstruct_divisorial_collection(const FactoredSeries<ARing>& f,
                                                             const GroupPtr& G);

/// Curve peeling loop: maximal exponent, ratio-maximizing index set,
/// branch extraction through the curve projection formula, recursion on the
/// remaining branches, then assembly from the recorded pairwise intersection
/// exponents. The empty factorization with two branches is the transversal
/// smooth pair. Errors: HypothesisViolated, NotRecognized, MissingFactor.
EquivariantResolutionGraph reconstruct_curve_collection(const FactoredSeries<ARing>& f,
                                                        const GroupPtr& G);

/// Character of the two-dimensional representation recovered from the
/// unreduced series: full-isotropy factors attached to components with smooth
/// curvettes expose the eigenvalue characters; non-abelian groups are handled
/// one cyclic subgroup at a time. The tail assignment pairs each tail at the
/// first component (or the unblown special point, root -1) with the character
/// of its eigendirection.
struct TailAssignment {
  int tail_root = -1; // vertex starting the tail, -1 for the resident point
  Character chr;
};

struct RepresentationData {
  std::map<int, CyclotomicInteger> character; // group element -> trace value
  std::vector<TailAssignment> tails;
  std::vector<Character> eigen_chars; // one (scalar) or two characters of G
};

RepresentationData recover_representation(const FactoredSeries<AtRing>& p,
                                          const EquivariantResolutionGraph& g);

/// Re-derives kernels, special points and their characters on a glued graph
/// from the recovered representation (abelian groups), replaying the
/// linearization along the blow-up program.
void refine_decorations(EquivariantResolutionGraph& g, const RepresentationData& rep);

struct RoundtripReport {
  bool ok = false;
  bool isomorphic_graphs = false;
  std::string failed_stage; // empty on success
  std::map<int, CyclotomicInteger> representation;
  std::vector<TailAssignment> tails;
};

/// poincare -> rho-reduce -> reconstruct -> compare, plus representation
/// recovery on the unreduced series.
RoundtripReport roundtrip(const EquivariantResolutionGraph& g);

} // namespace eqps
