#include "eqps/poincare.hpp"

namespace eqps {

PoincareFactored poincare(const EquivariantResolutionGraph& g) {
  require_valid(g);
  if (g.nmarks() < 1)
    fail(ErrorCode::MalformedAction, ErrorKind::Precondition,
         "the series needs at least one valuation mark");
  PoincareFactored p(AtRing{g.group}, g.nmarks());
  p.provenance = strata(g);
  for (const auto& s : p.provenance) {
    auto cls = ebe_generator(g.group, s.isotropy, s.chr, 1);
    p.factors.add_factor(s.M, ebe_scale(cls, -s.chi));
  }
  return p;
}

int default_truncation(const FactoredSeries<AtRing>& f) {
  return 2 * f.max_total_degree() + 1;
}

int default_truncation(const FactoredSeries<ARing>& f) {
  return 2 * f.max_total_degree() + 1;
}

namespace {

// M-values of the named vertices of a glued single valuation, by the segment
// recursion: M = |H_l| m + C_l prod(N) with C_l the defect at the previous
// gluing vertex.
struct EquivariantMultiplicities {
  std::vector<int> rho_vertex;
  std::vector<long long> C; // C[l], l = 0..k
  const SingleValuationModel* model;
  const QuotientGraphData* q;

  long long level_before(int v) const {
    long long l = 0;
    for (int rv : rho_vertex)
      if (rv < v)
        ++l;
    return l;
  }

  long long chain_size(long long l) const {
    return l == 0 ? q->group->size() : q->chain[l - 1].size();
  }

  // The correction multiplier is the ratio m(v, rho_l)/m(rho_l, rho_l) of the
  // quotient multiplicity matrix, which on the named vertices equals the
  // product of the N's of the ruptures crossed since the anchor, the rupture
  // at v included.
  long long M_of(int v) const {
    long long l = level_before(v);
    long long prod = 1;
    for (size_t t = 0; t < model->ruptures.size(); ++t) {
      int tau = model->ruptures[t];
      bool after_anchor = l == 0 || tau > rho_vertex[l - 1];
      if (after_anchor && tau <= v)
        prod *= model->sem.N[t + 1];
    }
    return chain_size(l) * model->m[v] + C[l] * prod;
  }
};

EquivariantMultiplicities equivariant_multiplicities(const QuotientGraphData& q,
                                                     const SingleValuationModel& model) {
  validate_quotient_data(q);
  EquivariantMultiplicities em;
  em.model = &model;
  em.q = &q;
  const int k = q.chain_depth();
  em.rho_vertex.resize(k, -1);
  for (int j = 0; j < k; ++j) {
    for (int v : model.geodesic)
      if (model.m[v] == q.rho_m[j])
        em.rho_vertex[j] = v;
    if (em.rho_vertex[j] < 0)
      fail(ErrorCode::InconsistentChain, ErrorKind::Precondition,
           "gluing multiplicity does not match a geodesic vertex");
  }
  em.C.assign(k + 1, 0);
  for (int j = 1; j <= k; ++j) {
    // anchors are computed inductively; M(rho_j) only uses C[0..j-1]
    long long M_rho = em.M_of(em.rho_vertex[j - 1]);
    em.C[j] = M_rho - q.chain[j - 1].size() * model.m[em.rho_vertex[j - 1]];
  }
  return em;
}

FactoredSeries<ARing> closed_form_core(const QuotientGraphData& q,
                                       const SingleValuationModel& model) {
  const auto& G = q.group;
  auto em = equivariant_multiplicities(q, model);
  const int k = q.chain_depth();
  const int g = model.sem.puiseux_pairs();

  auto H = [&](long long l) {
    return l == 0 ? full_subgroup(G) : q.chain[static_cast<size_t>(l) - 1];
  };

  FactoredSeries<ARing> f(ARing{G}, 1);
  auto add = [&](long long M, const BurnsideElement& s) {
    if (!s.is_zero())
      f.add_factor(ExpVec{static_cast<int>(M)}, s);
  };

  for (int qq = 0; qq <= g; ++qq) {
    int sigma = model.dead_ends[qq];
    add(em.M_of(sigma), be_generator(G, H(em.level_before(sigma)), -1));
  }
  for (int qq = 1; qq <= g; ++qq) {
    int sigma = model.dead_ends[qq];
    int tau = model.ruptures[qq - 1];
    add(model.sem.N[qq] * em.M_of(sigma), be_generator(G, H(em.level_before(tau)), 1));
  }
  for (int j = 1; j <= k; ++j) {
    int rho = em.rho_vertex[j - 1];
    long long M_rho = em.M_of(rho);
    add(M_rho, be_generator(G, H(j), 1));
    add(M_rho, be_generator(G, H(j - 1), -1));
  }
  add(em.M_of(model.nu), be_generator(G, H(k), -1));
  return f;
}

} // namespace

FactoredSeries<ARing> closed_form_single_divisorial(const QuotientGraphData& q) {
  if (q.curve_mark)
    fail(ErrorCode::MalformedAction, ErrorKind::Precondition,
         "divisorial closed form called with a curve mark");
  auto model = model_of(q);
  return closed_form_core(q, model);
}

FactoredSeries<ARing> closed_form_single_curve(const QuotientGraphData& q) {
  if (!q.curve_mark)
    fail(ErrorCode::MalformedAction, ErrorKind::Precondition,
         "curve closed form called with a divisorial mark");
  auto model = model_of(q);
  FactoredSeries<ARing> f = closed_form_core(q, model);
  auto em = equivariant_multiplicities(q, model);
  f.add_factor(ExpVec{static_cast<int>(em.M_of(model.nu))},
               be_generator(q.group, *q.branch_isotropy, 1));
  return f;
}

FactoredSeries<ZRing> acampo_full_variables(const EquivariantResolutionGraph& g) {
  require_valid(g);
  const auto& G = g.group;
  auto mult = multiplicities(g);
  const int r = g.nmarks();
  const int ng = G->size();
  FactoredSeries<ZRing> f(ZRing{}, r * ng);

  for (int v = 0; v < g.nvertices(); ++v) {
    long long arrows = 0;
    for (int i = 0; i < r; ++i) {
      if (!g.mark_is_curve(i))
        continue;
      const auto& cm = std::get<CurveMark>(g.valuations[i]);
      if (g.orbit_rep(cm.vertex) != g.orbit_rep(v))
        continue;
      arrows += g.vertex_stabilizer(v).size() / cm.isotropy.size();
    }
    long long chi = 2 - g.degree(v) - arrows;
    if (chi == 0)
      continue;
    ExpVec e(r * ng);
    for (int i = 0; i < r; ++i)
      for (int a = 0; a < ng; ++a)
        e[i * ng + a] = static_cast<int>(mult.m[v][g.action[a][g.mark_vertex(i)]]);
    f.add_factor(e, -chi);
  }
  return f;
}

FactoredSeries<ZRing> nonequivariant_acampo(const EquivariantResolutionGraph& g) {
  FactoredSeries<ZRing> full = acampo_full_variables(g);
  const int r = g.nmarks();
  const int ng = g.group->size();
  FactoredSeries<ZRing> out(ZRing{}, r);
  for (const auto& [e, s] : full.factors()) {
    ExpVec p(r, 0);
    for (int i = 0; i < r; ++i)
      for (int a = 0; a < ng; ++a)
        p[i] += e[i * ng + a];
    out.add_factor(p, s);
  }
  return out;
}

PoincareFactored project_divisorial(const PoincareFactored& p, const std::vector<int>& keep) {
  PoincareFactored out(p.factors.ring(), static_cast<int>(keep.size()));
  out.factors = project(p.factors, keep);
  for (auto s : p.provenance) {
    ExpVec M(keep.size());
    for (size_t i = 0; i < keep.size(); ++i)
      M[i] = s.M[keep[i]];
    s.M = M;
    out.provenance.push_back(std::move(s));
  }
  return out;
}

namespace {

template <class Ring>
FactoredSeries<Ring> project_curve_impl(const FactoredSeries<Ring>& f, int drop,
                                        const ExpVec& branch_M,
                                        const typename Ring::Elem& branch_class) {
  if (drop < 0 || drop >= f.nvars())
    fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "dropped index out of range");
  std::vector<int> keep;
  for (int i = 0; i < f.nvars(); ++i)
    if (i != drop)
      keep.push_back(i);
  FactoredSeries<Ring> out = project(f, keep);
  ExpVec M(keep.size());
  for (size_t i = 0; i < keep.size(); ++i)
    M[i] = branch_M[keep[i]];
  if (is_zero_exponent(M))
    fail(ErrorCode::MissingFactor, ErrorKind::Algorithm,
         "branch correction exponent vanishes under the projection");
  out.add_factor(M, f.ring().neg(branch_class));
  return out;
}

} // namespace

FactoredSeries<AtRing> project_curve(const FactoredSeries<AtRing>& f, int drop,
                                     const ExpVec& branch_M,
                                     const EquippedBurnsideElement& branch_class) {
  return project_curve_impl(f, drop, branch_M, branch_class);
}

FactoredSeries<ARing> project_curve(const FactoredSeries<ARing>& f, int drop,
                                    const ExpVec& branch_M,
                                    const BurnsideElement& branch_class) {
  return project_curve_impl(f, drop, branch_M, branch_class);
}

} // namespace eqps
