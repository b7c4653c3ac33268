#pragma once

#include "eqps/graph.hpp"

namespace eqps {

/// The equivariant Poincaré series in factored form, one binomial
/// (1 - t^{M_Xi})^{-chi(Xi)[G/G_Xi]_alpha} per stratum, equal exponents
/// merged. Provenance keeps the stratum list the factors came from.
struct PoincareFactored {
  FactoredSeries<AtRing> factors;
  std::vector<Stratum> provenance;

  PoincareFactored(AtRing ring, int nvars) : factors(std::move(ring), nvars) {}
};

PoincareFactored poincare(const EquivariantResolutionGraph& g);

/// Default truncation for round-trip workflows: twice the maximal exponent
/// degree plus one, so a factorization sees every true binomial.
int default_truncation(const FactoredSeries<AtRing>& f);
int default_truncation(const FactoredSeries<ARing>& f);

/// Closed form of rho P for a single divisorial valuation, assembled from the
/// quotient graph data alone (independent of the glued graph).
FactoredSeries<ARing> closed_form_single_divisorial(const QuotientGraphData& q);

/// Curve version: the divisorial closed form at the arrow vertex times the
/// branch factor (1 - t^{M_nu})^{+[G/G_branch]}.
FactoredSeries<ARing> closed_form_single_curve(const QuotientGraphData& q);

/// The non-equivariant product over all components of the full graph, written
/// in |G| r variables and then specialized by equating each group of |G|
/// variables. Equals rho_hat of the equivariant series.
FactoredSeries<ZRing> nonequivariant_acampo(const EquivariantResolutionGraph& g);
FactoredSeries<ZRing> acampo_full_variables(const EquivariantResolutionGraph& g);

/// Projection formula for divisorial collections: substituting t_i = 1 for
/// dropped indices is plain exponent projection.
PoincareFactored project_divisorial(const PoincareFactored& p, const std::vector<int>& keep);

/// Curve projection: P|_{t_drop=1} equals the branch correction times the
/// series of the subcollection; returns the subcollection series.
FactoredSeries<AtRing> project_curve(const FactoredSeries<AtRing>& f, int drop,
                                     const ExpVec& branch_M,
                                     const EquippedBurnsideElement& branch_class);
FactoredSeries<ARing> project_curve(const FactoredSeries<ARing>& f, int drop,
                                    const ExpVec& branch_M,
                                    const BurnsideElement& branch_class);

} // namespace eqps
