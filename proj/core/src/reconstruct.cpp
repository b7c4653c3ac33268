#include "eqps/reconstruct.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>

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

// ---------------------------------------------------------------------------
// Single divisorial valuation: event-driven inversion of the closed form.
// The factor exponents are walked in increasing order; each event consumes the
// contributions of the features located there (dead end, rupture crossing,
// gluing vertex, marked vertex), solving M = |H_l| m + C_l prod(N) for m.
// ---------------------------------------------------------------------------

struct PendingTau {
  long long M;
  Subgroup subgroup; // segment subgroup at push time
  long long N;
  long long m;
};

struct SearchState {
  std::map<long long, BurnsideElement> residual;
  std::vector<PendingTau> pending;
  std::vector<Subgroup> chain;
  std::vector<long long> rho_m;
  long long C = 0;      // anchor defect M_rho - |H| m_rho
  long long Pi = 1;     // product of crossed N's since the anchor
  long long e = 0;      // current gcd level
  long long last_beta = 0;
  long long last_N = 1;
  std::vector<long long> beta;
  long long anchor_m = 0;
  long long m_end = 1; // m-value of the last crossed rupture
};

struct Candidate {
  std::vector<long long> beta;
  long long m_nu = 1;
  std::vector<Subgroup> chain;
  std::vector<long long> rho_m;

  bool operator<(const Candidate& o) const {
    std::vector<std::vector<int>> ca, cb;
    for (const auto& h : chain)
      ca.push_back(h.members);
    for (const auto& h : o.chain)
      cb.push_back(h.members);
    return std::tie(beta, m_nu, ca, rho_m) < std::tie(o.beta, o.m_nu, cb, o.rho_m);
  }
};

class DivisorialSearch {
public:
  DivisorialSearch(const FactoredSeries<ARing>& f, const GroupPtr& G) : G_(G) {
    if (f.nvars() != 1)
      fail(ErrorCode::MalformedAction, ErrorKind::Precondition,
           "single-valuation reconstruction expects one variable");
    for (const auto& [M, s] : f.factors())
      start_.residual[M[0]] = s;
    for (const auto& cls : subgroups(G))
      for (const auto& h : cls.elements)
        all_subgroups_.push_back(h);
  }

  std::vector<Candidate> run() {
    step(start_, true);
    return std::vector<Candidate>(found_.begin(), found_.end());
  }

private:
  GroupPtr G_;
  SearchState start_;
  std::vector<Subgroup> all_subgroups_;
  std::set<Candidate> found_;

  Subgroup level_subgroup(const SearchState& s) const {
    return s.chain.empty() ? full_subgroup(G_) : s.chain.back();
  }

  void step(const SearchState& s, bool first) {
    long long M = -1;
    if (!s.residual.empty())
      M = s.residual.begin()->first;
    for (const auto& t : s.pending)
      if (M < 0 || t.M < M)
        M = t.M;
    if (M < 0)
      return; // every reading ends by choosing the marked vertex

    SearchState base = s;
    BurnsideElement needed = be_zero(G_);
    if (auto it = base.residual.find(M); it != base.residual.end()) {
      needed = it->second;
      base.residual.erase(it);
    }
    std::vector<PendingTau> still;
    for (const auto& t : base.pending) {
      if (t.M == M) {
        needed = be_add(needed, be_generator(G_, t.subgroup, -1));
        base.Pi *= t.N;
        base.m_end = t.m;
      } else {
        still.push_back(t);
      }
    }
    base.pending = still;
    const Subgroup H = level_subgroup(base);
    const long long hsz = H.size();

    if (needed.is_zero() && !first) { // a rupture with no feature on it
      step(base, false);
      return;
    }

    long long num = M - base.C * base.Pi;
    bool divisible = num > 0 && num % hsz == 0;
    long long m = divisible ? num / hsz : 0;

    auto try_dead_end = [&](const BurnsideElement& rest) {
      if (!rest.is_zero() || !divisible || base.beta.empty())
        return;
      SearchState st = base;
      long long e2 = gcd_ll(st.e, m);
      if (e2 >= st.e)
        return; // the gcd ladder must drop at a dead end
      if (m <= st.last_N * st.last_beta || m <= st.anchor_m)
        return;
      long long N = st.e / e2;
      st.pending.push_back(PendingTau{N * M, H, N, N * m});
      st.beta.push_back(m);
      st.last_N = N;
      st.last_beta = m;
      st.e = e2;
      step(st, false);
    };

    auto try_nu = [&](const BurnsideElement& rest) {
      if (!rest.is_zero() || !divisible || base.beta.empty())
        return;
      if (!base.pending.empty() || !base.residual.empty())
        return; // the marked vertex is the last feature
      if (base.e != 1)
        return; // realizable characteristics have coprime generators
      if (m < base.m_end || m <= base.anchor_m)
        return;
      found_.insert(Candidate{base.beta, m, base.chain, base.rho_m});
    };

    auto try_rho = [&](const BurnsideElement& rest) {
      if (!divisible || base.beta.empty() || !base.pending.empty())
        return;
      if (m <= base.anchor_m)
        return;
      BurnsideElement x = be_add(rest, be_generator(G_, H, 1));
      if (x.coeffs.size() != 1 || x.coeffs.begin()->second != 1)
        return;
      const auto& cls = x.coeffs.begin()->first;
      for (const auto& h2 : all_subgroups_) {
        if (canonical_subgroup_key(h2) != cls)
          continue;
        if (!H.contains_subgroup(h2) || h2.size() >= H.size() || !h2.is_abelian())
          continue;
        SearchState st = base;
        st.chain.push_back(h2);
        st.rho_m.push_back(m);
        st.C = M - h2.size() * m;
        st.Pi = 1;
        st.anchor_m = m;
        step(st, false);
        break; // any representative inside H gives the same class data
      }
    };

    if (first) {
      // the smallest exponent always carries sigma_0; it may coincide with
      // the first gluing vertex or with the marked vertex itself
      BurnsideElement one_g = be_generator(G_, full_subgroup(G_), 1);
      if (divisible) {
        { // {sigma_0}
          BurnsideElement rest = be_add(needed, one_g);
          if (rest.is_zero()) {
            SearchState st = base;
            st.beta.push_back(m);
            st.e = m;
            st.last_beta = m;
            step(st, false);
          }
        }
        { // {sigma_0, nu}: the one-vertex graph
          BurnsideElement rest = be_add(needed, be_scale(one_g, 2));
          if (rest.is_zero() && m == 1 && base.residual.empty() && base.pending.empty())
            found_.insert(Candidate{{1}, 1, {}, {}});
        }
        { // {sigma_0, rho_1}
          BurnsideElement rest = be_add(needed, be_scale(one_g, 2));
          if (rest.coeffs.size() == 1 && rest.coeffs.begin()->second == 1) {
            const auto& cls = rest.coeffs.begin()->first;
            for (const auto& h2 : all_subgroups_) {
              if (canonical_subgroup_key(h2) != cls)
                continue;
              if (h2.size() >= G_->size() || !h2.is_abelian())
                continue;
              SearchState st = base;
              st.beta.push_back(m);
              st.e = m;
              st.last_beta = m;
              st.chain.push_back(h2);
              st.rho_m.push_back(m);
              st.C = M - h2.size() * m;
              st.Pi = 1;
              st.anchor_m = m;
              step(st, false);
              break;
            }
          }
        }
      }
      return;
    }

    BurnsideElement rest_single = be_add(needed, be_generator(G_, H, 1));
    try_dead_end(rest_single);
    try_nu(rest_single);
    try_rho(needed);
  }
};

QuotientGraphData quotient_of_candidate(const Candidate& c, const GroupPtr& G) {
  QuotientGraphData q;
  q.group = G;
  q.sem = make_semigroup_data(c.beta);
  q.m_nu = c.m_nu;
  q.chain = c.chain;
  q.rho_m = c.rho_m;
  return q;
}

} // namespace

SingleReconstruction reconstruct_single_divisorial(const FactoredSeries<ARing>& f,
                                                   const GroupPtr& G) {
  DivisorialSearch search(f, G);
  for (const auto& cand : search.run()) {
    try {
      QuotientGraphData q = quotient_of_candidate(cand, G);
      if (closed_form_single_divisorial(q) == f)
        return SingleReconstruction{q, model_of(q)};
    } catch (const Error&) {
      // inconsistent reading; try the next candidate
    }
  }
  fail(ErrorCode::NotRecognized, ErrorKind::Algorithm,
       "factor multiset matches no single divisorial valuation");
}

SingleReconstruction reconstruct_single_curve(const FactoredSeries<ARing>& f,
                                              const GroupPtr& G) {
  if (f.nvars() != 1)
    fail(ErrorCode::MalformedAction, ErrorKind::Precondition,
         "single-branch reconstruction expects one variable");
  if (f.empty())
    fail(ErrorCode::NotRecognized, ErrorKind::Algorithm,
         "a curve branch always contributes factors");

  // the arrow sits at the maximal exponent; strip a candidate branch factor
  // and reuse the divisorial recursion on the enlarged graph
  ExpVec Mmax = f.factors().rbegin()->first;
  std::vector<Subgroup> candidates;
  {
    const auto& s = f.factors().rbegin()->second;
    for (const auto& cls : subgroups(G)) {
      auto key = canonical_subgroup_key(cls.representative);
      auto it = s.coeffs.find(key);
      if (it != s.coeffs.end() && it->second > 0)
        candidates.insert(candidates.begin(), cls.representative);
      else
        candidates.push_back(cls.representative);
    }
  }
  for (const auto& h : candidates) {
    FactoredSeries<ARing> without = f;
    without.add_factor(Mmax, be_generator(G, h, -1));
    std::vector<Candidate> cands;
    try {
      DivisorialSearch search(without, G);
      cands = search.run();
    } catch (const Error&) {
      continue;
    }
    for (const auto& cand : cands) {
      try {
        QuotientGraphData q = quotient_of_candidate(cand, G);
        q.curve_mark = true;
        const Subgroup hk = q.chain.empty() ? full_subgroup(G) : q.chain.back();
        Subgroup iso = h;
        if (!hk.contains_subgroup(iso)) {
          bool placed = false;
          auto key = canonical_subgroup_key(h);
          for (const auto& cls : subgroups(G)) {
            for (const auto& member : cls.elements)
              if (canonical_subgroup_key(member) == key &&
                  hk.contains_subgroup(member)) {
                iso = member;
                placed = true;
                break;
              }
            if (placed)
              break;
          }
          if (!placed)
            continue;
        }
        q.branch_isotropy = iso;
        q.branch_char = Character::trivial(iso);
        if (closed_form_single_curve(q) == f)
          return SingleReconstruction{q, model_of(q)};
      } catch (const Error&) {
      }
    }
  }
  fail(ErrorCode::NotRecognized, ErrorKind::Algorithm,
       "factor multiset matches no single curve branch");
}

// ---------------------------------------------------------------------------
// Separation exponents.
// ---------------------------------------------------------------------------

namespace {

template <class Ring>
ExpVec separation_exponent_impl(const FactoredSeries<Ring>& f,
                                const std::optional<std::pair<long long, long long>>& sigma0) {
  if (f.nvars() != 2)
    fail(ErrorCode::MalformedAction, ErrorKind::Precondition,
         "separation expects a two-variable series");
  long long a0 = 0, b0 = 0;
  if (sigma0) {
    a0 = sigma0->first;
    b0 = sigma0->second;
  } else {
    if (f.empty())
      fail(ErrorCode::NoSeparation, ErrorKind::Algorithm, "empty factorization");
    for (const auto& [M, s] : f.factors()) {
      a0 = a0 == 0 ? M[0] : std::min<long long>(a0, M[0]);
      b0 = b0 == 0 ? M[1] : std::min<long long>(b0, M[1]);
    }
  }
  if (a0 <= 0 || b0 <= 0)
    fail(ErrorCode::NoSeparation, ErrorKind::Algorithm,
         "degenerate first-component ratio");
  ExpVec best{static_cast<int>(a0), static_cast<int>(b0)};
  for (const auto& [M, s] : f.factors()) {
    if (static_cast<long long>(M[0]) * b0 != static_cast<long long>(M[1]) * a0)
      continue;
    if (total_degree(M) > total_degree(best))
      best = M;
  }
  return best;
}

} // namespace

ExpVec separation_exponent(const FactoredSeries<ARing>& f,
                           const std::optional<std::pair<long long, long long>>& sigma0_M) {
  return separation_exponent_impl(f, sigma0_M);
}

ExpVec separation_exponent(const FactoredSeries<ZRing>& f,
                           const std::optional<std::pair<long long, long long>>& sigma0_M) {
  return separation_exponent_impl(f, sigma0_M);
}

// ---------------------------------------------------------------------------
// Assembly of collections.
// ---------------------------------------------------------------------------

namespace {

MarkSpec mark_of(const SingleReconstruction& s, int vertex) {
  MarkSpec m;
  m.vertex = vertex;
  m.curve = s.quotient.curve_mark;
  if (m.curve) {
    m.isotropy = s.quotient.branch_isotropy;
    m.chr = s.quotient.branch_char;
  }
  return m;
}

std::vector<Subgroup> stabs_of(const SingleReconstruction& s) {
  return quotient_program_of(s.quotient, s.model).stab;
}

QuotientProgram join_programs(const std::vector<const SingleReconstruction*>& singles,
                              const std::vector<std::vector<int>>& share_depth) {
  const int r = static_cast<int>(singles.size());
  QuotientProgram qp;
  qp.group = singles[0]->quotient.group;
  std::vector<std::vector<int>> embedding(r);
  std::vector<std::vector<Subgroup>> stabs(r);
  for (int i = 0; i < r; ++i)
    stabs[i] = stabs_of(*singles[i]);

  for (int i = 0; i < r; ++i) {
    const auto& prog = singles[i]->model.program;
    int shared = 0, host = -1;
    for (int j = 0; j < i; ++j)
      if (share_depth[i][j] > shared) {
        shared = share_depth[i][j];
        host = j;
      }
    auto& emb = embedding[i];
    emb.assign(prog.size(), -1);
    for (int v = 0; v < shared; ++v) {
      emb[v] = embedding[host][v];
      const auto& hp = singles[host]->model.program;
      if (prog.centers[v].parent_a != hp.centers[v].parent_a ||
          prog.centers[v].parent_b != hp.centers[v].parent_b)
        fail(ErrorCode::InconsistentSeparations, ErrorKind::Algorithm,
             "shared blow-up prefixes disagree");
      if (!(stabs[i][v] == qp.stab[emb[v]]))
        fail(ErrorCode::InconsistentChain, ErrorKind::Algorithm,
             "shared centers carry different stabilizers");
    }
    for (int v = shared; v < prog.size(); ++v) {
      BlowUpProgram::Center c = prog.centers[v];
      if (c.parent_a >= 0)
        c.parent_a = emb[c.parent_a];
      if (c.parent_b >= 0)
        c.parent_b = emb[c.parent_b];
      emb[v] = qp.program.size();
      qp.program.centers.push_back(c);
      qp.stab.push_back(stabs[i][v]);
    }
    qp.marks.push_back(mark_of(*singles[i], emb[singles[i]->model.nu]));
  }
  return qp;
}

} // namespace

EquivariantResolutionGraph assemble_divisorial_collection(
    const std::vector<SingleReconstruction>& singles,
    const std::vector<std::vector<int>>& share_depth) {
  if (singles.empty())
    fail(ErrorCode::MalformedAction, ErrorKind::Precondition, "empty collection");
  const int r = static_cast<int>(singles.size());
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < i; ++j)
      for (int k = 0; k < j; ++k) {
        int dij = share_depth[i][j], dik = share_depth[i][k], djk = share_depth[j][k];
        if (dik < std::min(dij, djk) || djk < std::min(dij, dik) ||
            dij < std::min(dik, djk))
          fail(ErrorCode::InconsistentSeparations, ErrorKind::Algorithm,
               "separation depths violate the tree structure");
      }
  std::vector<const SingleReconstruction*> ptrs;
  for (const auto& s : singles)
    ptrs.push_back(&s);
  return glue_program(join_programs(ptrs, share_depth));
}

namespace {

// Deepest shared prefix whose pair-joint graph reproduces the projected series.
int find_share_depth(const SingleReconstruction& a, const SingleReconstruction& b,
                     const FactoredSeries<ARing>& f_pair) {
  const auto stabs_a = stabs_of(a);
  const auto stabs_b = stabs_of(b);
  int smax = std::min(a.model.program.size(), b.model.program.size());
  for (int s = smax; s >= 1; --s) {
    bool structural = true;
    for (int v = 0; v < s && structural; ++v)
      if (a.model.program.centers[v].parent_a != b.model.program.centers[v].parent_a ||
          a.model.program.centers[v].parent_b != b.model.program.centers[v].parent_b ||
          !(stabs_a[v] == stabs_b[v]))
        structural = false;
    if (!structural)
      continue;
    try {
      std::vector<std::vector<int>> depth = {{0}, {s, 0}};
      auto joint = assemble_divisorial_collection({a, b}, depth);
      if (rho(poincare(joint).factors) == f_pair)
        return s;
    } catch (const Error&) {
    }
  }
  fail(ErrorCode::InconsistentSeparations, ErrorKind::Algorithm,
       "no shared depth reproduces the projected series");
}

} // namespace

EquivariantResolutionGraph reconstruct_divisorial_collection(const FactoredSeries<ARing>& f,
                                                             const GroupPtr& G) {
  const int r = f.nvars();
  if (r < 1)
    fail(ErrorCode::MalformedAction, ErrorKind::Precondition, "no valuations");
  std::vector<SingleReconstruction> singles;
  for (int i = 0; i < r; ++i)
    singles.push_back(reconstruct_single_divisorial(project(f, {i}), G));
  if (r == 1) {
    auto graph = glue_from_quotient(singles[0].quotient);
    if (!(rho(poincare(graph).factors) == f))
      fail(ErrorCode::NotRecognized, ErrorKind::Algorithm,
           "reconstructed valuation does not reproduce the series");
    return graph;
  }

  std::vector<std::vector<int>> depth(r, std::vector<int>(r, 0));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < i; ++j)
      depth[i][j] = depth[j][i] =
          find_share_depth(singles[j], singles[i], project(f, {j, i}));

  auto graph = assemble_divisorial_collection(singles, depth);
  if (!(rho(poincare(graph).factors) == f))
    fail(ErrorCode::InconsistentSeparations, ErrorKind::Algorithm,
         "assembled graph does not reproduce the series");
  return graph;
}

// ---------------------------------------------------------------------------
// Curve collections: the peeling loop of the inverse algorithm.
// ---------------------------------------------------------------------------

namespace {

struct PeelState {
  std::map<int, Subgroup> branch_class;             // original index -> class rep
  std::map<std::pair<int, int>, long long> pair_M;  // intersection exponents
  FactoredSeries<ARing> last_remainder;
  int last_index = -1;

  explicit PeelState(const ARing& ring) : last_remainder(ring, 1) {}
};

void peel_branches(const FactoredSeries<ARing>& f, const GroupPtr& G,
                   const std::vector<int>& orig_of, PeelState& st) {
  const int r = f.nvars();
  if (r == 1) {
    st.last_remainder = f;
    st.last_index = orig_of[0];
    return;
  }
  if (f.empty()) {
    if (r != 2)
      fail(ErrorCode::NotRecognized, ErrorKind::Algorithm,
           "only a transversal smooth pair has the trivial series");
    // two invariant smooth transversal branches
    st.branch_class[orig_of[0]] = full_subgroup(G);
    st.branch_class[orig_of[1]] = full_subgroup(G);
    st.pair_M[{std::min(orig_of[0], orig_of[1]), std::max(orig_of[0], orig_of[1])}] =
        G->size();
    return;
  }

  // maximal exponent in the componentwise order, graded-lex greatest among them
  ExpVec sigma;
  for (const auto& [M, s] : f.factors()) {
    bool maximal = true;
    for (const auto& [M2, s2] : f.factors()) {
      bool geq = true, strict = false;
      for (int k = 0; k < r; ++k) {
        if (M2[k] < M[k])
          geq = false;
        if (M2[k] > M[k])
          strict = true;
      }
      if (geq && strict)
        maximal = false;
    }
    if (maximal && (sigma.empty() || GradedLex{}(sigma, M)))
      sigma = M;
  }

  // ratio-maximizing index set A, then the index with maximal M_{sigma i}
  std::vector<int> A;
  for (int j = 0; j < r; ++j) {
    bool in_A = true;
    for (int k = 0; k < r && in_A; ++k)
      for (const auto& [M, s] : f.factors())
        if (static_cast<long long>(sigma[j]) * M[k] <
            static_cast<long long>(M[j]) * sigma[k]) {
          in_A = false;
          break;
        }
    if (in_A)
      A.push_back(j);
  }
  if (A.empty())
    fail(ErrorCode::NotRecognized, ErrorKind::Algorithm, "ratio test selected no index");
  int i0 = A[0];
  for (int j : A)
    if (sigma[j] > sigma[i0])
      i0 = j;

  // the branch factor contributes a positive multiple of [G/G_{i0}]
  const BurnsideElement& coeff = f.factors().at(sigma);
  Subgroup branch = full_subgroup(G);
  bool found = false;
  for (const auto& cls : subgroups(G)) {
    auto key = canonical_subgroup_key(cls.representative);
    auto it = coeff.coeffs.find(key);
    if (it != coeff.coeffs.end() && it->second > 0) {
      branch = cls.representative;
      found = true;
      break;
    }
  }
  if (!found)
    fail(ErrorCode::MissingFactor, ErrorKind::Algorithm,
         "no positive branch factor at the maximal exponent");

  st.branch_class[orig_of[i0]] = branch;
  for (int k = 0; k < r; ++k)
    if (k != i0) {
      int a = std::min(orig_of[i0], orig_of[k]);
      int b = std::max(orig_of[i0], orig_of[k]);
      st.pair_M[{a, b}] = sigma[k];
    }

  auto rest = project_curve(f, i0, sigma, be_generator(G, branch, 1));
  std::vector<int> orig2;
  for (int k = 0; k < r; ++k)
    if (k != i0)
      orig2.push_back(orig_of[k]);
  peel_branches(rest, G, orig2, st);
}

// Repeated curve projection of f down to the given variable subset, using the
// recorded pairwise intersection exponents and branch classes.
FactoredSeries<ARing> project_to_subset(const FactoredSeries<ARing>& f, const GroupPtr& G,
                                        const std::set<int>& keep, const PeelState& st) {
  FactoredSeries<ARing> cur = f;
  std::vector<int> vars(f.nvars());
  for (int k = 0; k < f.nvars(); ++k)
    vars[k] = k;
  while (vars.size() > keep.size()) {
    int pos = -1;
    for (int p = static_cast<int>(vars.size()) - 1; p >= 0; --p)
      if (!keep.count(vars[p])) {
        pos = p;
        break;
      }
    int j = vars[pos];
    ExpVec branch_M(vars.size());
    for (size_t t = 0; t < vars.size(); ++t) {
      int other = vars[t];
      if (other == j) {
        branch_M[t] = 1; // dropped coordinate, never used after projection
      } else {
        auto key = std::make_pair(std::min(j, other), std::max(j, other));
        auto it = st.pair_M.find(key);
        if (it == st.pair_M.end())
          fail(ErrorCode::MissingFactor, ErrorKind::Algorithm,
               "missing pairwise intersection exponent");
        branch_M[t] = static_cast<int>(it->second);
      }
    }
    cur = project_curve(cur, pos, branch_M, be_generator(G, st.branch_class.at(j), 1));
    vars.erase(vars.begin() + pos);
  }
  return cur;
}

} // namespace

EquivariantResolutionGraph reconstruct_curve_collection(const FactoredSeries<ARing>& f,
                                                        const GroupPtr& G) {
  const int r = f.nvars();
  if (r < 1)
    fail(ErrorCode::MalformedAction, ErrorKind::Precondition, "no valuations");
  if (r == 1) {
    auto single = reconstruct_single_curve(f, G);
    auto graph = glue_from_quotient(single.quotient);
    if (!(rho(poincare(graph).factors) == f))
      fail(ErrorCode::NotRecognized, ErrorKind::Algorithm,
           "reconstructed branch does not reproduce the series");
    return graph;
  }

  if (f.empty()) {
    if (r != 2)
      fail(ErrorCode::NotRecognized, ErrorKind::Algorithm,
           "only a transversal smooth pair has the trivial series");
    QuotientProgram qp;
    qp.group = G;
    qp.program.centers.push_back({});
    qp.stab.push_back(full_subgroup(G));
    for (int i = 0; i < 2; ++i) {
      MarkSpec m;
      m.vertex = 0;
      m.curve = true;
      m.isotropy = full_subgroup(G);
      m.chr = Character::trivial(full_subgroup(G));
      qp.marks.push_back(m);
    }
    auto graph = glue_program(qp);
    if (!(rho(poincare(graph).factors) == f))
      fail(ErrorCode::NotRecognized, ErrorKind::Algorithm,
           "transversal pair does not reproduce the series");
    return graph;
  }

  PeelState st{f.ring()};
  std::vector<int> orig(r);
  for (int i = 0; i < r; ++i)
    orig[i] = i;
  peel_branches(f, G, orig, st);

  if (st.last_index >= 0) {
    auto last = reconstruct_single_curve(st.last_remainder, G);
    st.branch_class[st.last_index] = *last.quotient.branch_isotropy;
  }

  std::vector<SingleReconstruction> singles;
  for (int i = 0; i < r; ++i)
    singles.push_back(reconstruct_single_curve(project_to_subset(f, G, {i}, st), G));

  std::vector<std::vector<int>> depth(r, std::vector<int>(r, 0));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < i; ++j)
      depth[i][j] = depth[j][i] = find_share_depth(
          singles[j], singles[i], project_to_subset(f, G, {j, i}, st));

  auto graph = assemble_divisorial_collection(singles, depth);
  // A collection violating the hypothesis (two branches from one orbit) never
  // reproduces its own series under this reading, so the verification below
  // doubles as the hypothesis check.
  if (!(rho(poincare(graph).factors) == f))
    fail(ErrorCode::HypothesisViolated, ErrorKind::Algorithm,
         "assembled curve collection does not reproduce the series");
  return graph;
}

// ---------------------------------------------------------------------------
// Representation recovery.
// ---------------------------------------------------------------------------

namespace {

int first_component(const MultiplicityData& mult) {
  int sigma0 = -1;
  for (size_t v = 0; v < mult.m.size(); ++v)
    if (mult.m[v][v] == 1) {
      if (sigma0 >= 0)
        fail(ErrorCode::NotRecognized, ErrorKind::Algorithm,
             "several components of multiplicity one");
      sigma0 = static_cast<int>(v);
    }
  if (sigma0 < 0)
    fail(ErrorCode::NotRecognized, ErrorKind::Algorithm,
         "no component of multiplicity one");
  return sigma0;
}

int component_of_exponent(const EquivariantResolutionGraph& g,
                          const MultiplicityData& mult, const ExpVec& M) {
  std::vector<long long> want(M.begin(), M.end());
  for (int v = 0; v < g.nvertices(); ++v)
    if (mult.M_vec[v] == want)
      return g.orbit_rep(v);
  fail(ErrorCode::NotRecognized, ErrorKind::Algorithm,
       "factor exponent matches no component orbit");
}

// Full-isotropy classes attached to components with smooth curvettes; these
// expose the eigenvalue characters of the plane representation.
std::vector<std::pair<Character, int>> collect_eigen_factors(
    const FactoredSeries<AtRing>& p, const EquivariantResolutionGraph& g) {
  auto mult = multiplicities(g);
  int sigma0 = first_component(mult);
  std::vector<std::pair<Character, int>> out;
  Subgroup full = full_subgroup(g.group);
  for (const auto& [M, s] : p.factors()) {
    int rep = component_of_exponent(g, mult, M);
    if (mult.m[sigma0][rep] != 1)
      continue; // curvettes of this component are singular
    for (const auto& [key, c] : s.coeffs) {
      if (c >= 0 || static_cast<int>(key.members.size()) != g.group->size())
        continue;
      Character alpha{full, full.exponent(), key.values};
      out.emplace_back(alpha, rep);
    }
  }
  return out;
}

std::vector<Character> eigen_characters(const std::vector<std::pair<Character, int>>& found) {
  std::vector<Character> distinct;
  for (const auto& [alpha, rep] : found) {
    bool seen = false;
    for (const auto& d : distinct)
      seen = seen || d == alpha;
    if (!seen)
      distinct.push_back(alpha);
  }
  if (distinct.empty())
    fail(ErrorCode::NoSmoothCurvetteFactor, ErrorKind::Algorithm,
         "no full-isotropy factor with a smooth curvette");
  if (distinct.size() == 1)
    distinct.push_back(distinct[0]); // scalar representation
  if (distinct.size() > 2)
    fail(ErrorCode::NotRecognized, ErrorKind::Algorithm,
         "more than two eigenvalue characters");
  std::sort(distinct.begin(), distinct.end(),
            [](const Character& a, const Character& b) { return a.values < b.values; });
  return distinct;
}

// The cyclic-subgroup series: every factor coefficient is restricted to <a>
// piece by piece, with each piece assigned to the component suborbit it lives
// over, whose orbit sums give the new exponents.
FactoredSeries<AtRing> cyclic_series(const FactoredSeries<AtRing>& p,
                                     const EquivariantResolutionGraph& g,
                                     const SubgroupGroup& cg,
                                     const EquivariantResolutionGraph& g_sub) {
  const auto& G = g.group;
  auto mult = multiplicities(g);
  auto mult_sub = multiplicities(g_sub);
  FactoredSeries<AtRing> out(AtRing{cg.group}, p.nvars());
  for (const auto& [M, s] : p.factors()) {
    int rep = component_of_exponent(g, mult, M);
    for (const auto& [key, c] : s.coeffs) {
      Subgroup H{G, key.members};
      Character alpha{H, H.exponent(), key.values};
      // home component: an orbit element fixed by H
      int home = -1;
      for (int v : g.orbit_of(rep))
        if (g.vertex_stabilizer(v).contains_subgroup(H)) {
          home = v;
          break;
        }
      if (home < 0)
        fail(ErrorCode::NotRecognized, ErrorKind::Algorithm,
             "class has no home component in its orbit");
      CosetTable cosets = left_cosets(G, H);
      std::vector<int> visited(cosets.reps.size(), 0);
      for (size_t ci = 0; ci < cosets.reps.size(); ++ci) {
        if (visited[ci])
          continue;
        // <a>-orbit of this coset
        int b = cosets.reps[ci];
        std::vector<int> orbit_members;
        for (int x = 0; x < cg.group->size(); ++x) {
          int xc = cosets.coset_of[G->op(cg.to_parent[x], b)];
          if (!visited[xc]) {
            visited[xc] = 1;
            orbit_members.push_back(xc);
          }
        }
        // stabilizer of the coset bH inside <a>
        std::vector<int> stab_members;
        for (int x = 0; x < cg.group->size(); ++x)
          if (cosets.coset_of[G->op(cg.to_parent[x], b)] == static_cast<int>(ci))
            stab_members.push_back(x);
        Subgroup stab{cg.group, stab_members};
        std::map<int, Frac> fr;
        for (int x : stab.members)
          fr[x] = alpha.frac_at(G->conj(G->inv(b), cg.to_parent[x]));
        Character piece = character_from_fracs(stab, fr);
        ExpVec Mp(p.nvars());
        int w = g.action[b][home];
        for (int i = 0; i < p.nvars(); ++i)
          Mp[i] = static_cast<int>(mult_sub.M_vec[w][i]);
        out.add_factor(Mp, ebe_generator(cg.group, stab, piece, c));
      }
    }
  }
  return out;
}

EquivariantResolutionGraph restricted_graph(const EquivariantResolutionGraph& g,
                                            const SubgroupGroup& cg) {
  EquivariantResolutionGraph r;
  r.group = cg.group;
  r.self_int = g.self_int;
  r.edges = g.edges;
  r.action.resize(cg.group->size());
  for (int x = 0; x < cg.group->size(); ++x)
    r.action[x] = g.action[cg.to_parent[x]];
  for (int i = 0; i < g.nmarks(); ++i)
    r.valuations.push_back(DivisorialMark{g.mark_vertex(i)}); // only positions matter
  return r;
}

CyclotomicInteger trace_of(const std::vector<Character>& eigen, int element) {
  CyclotomicInteger v = CyclotomicInteger::root(eigen[0].frac_at(element));
  return v.plus(CyclotomicInteger::root(eigen[1].frac_at(element)));
}

} // namespace

RepresentationData recover_representation(const FactoredSeries<AtRing>& p,
                                          const EquivariantResolutionGraph& g) {
  const auto& G = g.group;
  RepresentationData out;
  out.character[G->identity()] = CyclotomicInteger::root(Frac(0, 1), 2);
  if (G->size() == 1)
    return out;

  if (G->is_abelian()) {
    auto found = collect_eigen_factors(p, g);
    out.eigen_chars = eigen_characters(found);
    for (int a = 0; a < G->size(); ++a)
      out.character[a] = trace_of(out.eigen_chars, a);
    // tails at the first component, one per collected factor
    auto mult = multiplicities(g);
    int sigma0 = first_component(mult);
    auto adj = g.adjacency();
    std::set<std::pair<int, std::vector<int>>> seen;
    for (const auto& [alpha, rep] : found) {
      int root = -1;
      if (rep != sigma0) {
        // second vertex on the path from sigma0 toward the component
        std::vector<int> prev(g.nvertices(), -2);
        std::queue<int> bfs;
        bfs.push(sigma0);
        prev[sigma0] = -1;
        while (!bfs.empty()) {
          int v = bfs.front();
          bfs.pop();
          for (int w : adj[v])
            if (prev[w] == -2) {
              prev[w] = v;
              bfs.push(w);
            }
        }
        root = rep;
        while (prev[root] != sigma0 && prev[root] >= 0)
          root = prev[root];
      }
      if (seen.insert({root, alpha.values}).second)
        out.tails.push_back(TailAssignment{root, alpha});
    }
    return out;
  }

  // non-abelian: one cyclic subgroup at a time
  for (int a = 0; a < G->size(); ++a) {
    if (a == G->identity())
      continue;
    auto cg = subgroup_as_group(cyclic_subgroup(G, a));
    auto g_sub = restricted_graph(g, cg);
    auto f_sub = cyclic_series(p, g, cg, g_sub);
    auto found = collect_eigen_factors(f_sub, g_sub);
    auto eigen = eigen_characters(found);
    out.character[a] = trace_of(eigen, cg.from_parent[a]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Decoration refinement: linearization replay along the glued program.
// ---------------------------------------------------------------------------

namespace {

using CharMap = std::map<int, Frac>; // subgroup element -> additive weight

CharMap restrict_map(const CharMap& m, const Subgroup& s) {
  CharMap r;
  for (int x : s.members) {
    auto it = m.find(x);
    if (it == m.end())
      fail(ErrorCode::NotRecognized, ErrorKind::Algorithm, "weight map too small");
    r[x] = it->second;
  }
  return r;
}

CharMap map_sub(const CharMap& a, const CharMap& b) {
  CharMap r;
  for (const auto& [x, f] : a)
    r[x] = f + b.at(x) * -1;
  return r;
}

CharMap map_add(const CharMap& a, const CharMap& b) {
  CharMap r;
  for (const auto& [x, f] : a)
    r[x] = f + b.at(x);
  return r;
}

bool map_zero(const CharMap& a) {
  for (const auto& [x, f] : a)
    if (!f.is_zero())
      return false;
  return true;
}

CharMap char_to_map(const Character& c, const Subgroup& s) {
  CharMap r;
  for (int x : s.members)
    r[x] = c.frac_at(x);
  return r;
}

Character map_to_char(const CharMap& m, const Subgroup& s) {
  std::map<int, Frac> fr;
  for (int x : s.members)
    fr[x] = m.at(x);
  return character_from_fracs(s, fr);
}

struct Slot {
  CharMap a; // weight of the component's local equation at the point
  CharMap b; // weight of the coordinate along the component
  CharMap c; // curvette character at the point
  bool generic = false;
};

struct ComponentFrame {
  Subgroup stab;
  CharMap lambda;                    // coordinate character of the component
  std::vector<Slot> outer;           // unconsumed fixed points
  std::optional<Slot> generic_slot;  // when lambda vanishes
  std::map<int, Slot> corners;       // neighbor representative -> corner data
  std::optional<CharMap> curvette;   // generic curvette character (on stab)
};

} // namespace

void refine_decorations(EquivariantResolutionGraph& g, const RepresentationData& rep) {
  if (!g.group->is_abelian() || !g.program || rep.eigen_chars.size() != 2)
    return;
  const auto& G = g.group;
  const auto& prog = *g.program;

  // representatives: identity-coset copies are reachable through rep parents
  std::vector<int> rep_of(g.nvertices());
  for (int v = 0; v < g.nvertices(); ++v)
    rep_of[v] = g.orbit_rep(v);

  std::map<int, ComponentFrame> frames;

  Subgroup fullG = full_subgroup(G);
  CharMap alpha = char_to_map(rep.eigen_chars[0], fullG);
  CharMap beta = char_to_map(rep.eigen_chars[1], fullG);

  auto tail_char_for = [&](int root_vertex) -> std::optional<CharMap> {
    for (const auto& t : rep.tails)
      if (t.tail_root >= 0 && rep_of[t.tail_root] == rep_of[root_vertex])
        return char_to_map(t.chr, fullG);
    return std::nullopt;
  };

  for (int v = 0; v < prog.size(); ++v) {
    if (rep_of[v] != v)
      continue;
    const auto& center = prog.centers[v];
    Subgroup stab = g.vertex_stabilizer(v);
    ComponentFrame fr;
    fr.stab = stab;

    if (center.parent_a < 0 && center.parent_b < 0) {
      // first component: the eigen frame of the plane
      fr.lambda = map_sub(beta, alpha);
      if (map_zero(fr.lambda)) {
        fr.generic_slot = Slot{alpha, CharMap{}, alpha, true};
        for (int x : stab.members)
          fr.generic_slot->b[x] = Frac(0, 1);
        fr.curvette = alpha;
      } else {
        fr.outer.push_back(Slot{alpha, map_sub(beta, alpha), beta});
        fr.outer.push_back(Slot{beta, map_sub(alpha, beta), alpha});
        fr.curvette = alpha; // restricted to ker(lambda) it equals beta
      }
    } else if (center.parent_b < 0) {
      // free center on one parent
      int p = rep_of[center.parent_a];
      auto& pf = frames.at(p);
      Slot point;
      if (stab == pf.stab) {
        // fixed point: consume an outer slot, or sit on a trivial action
        if (pf.generic_slot) {
          point = *pf.generic_slot;
        } else {
          if (pf.outer.empty())
            fail(ErrorCode::NotRecognized, ErrorKind::Algorithm,
                 "no fixed point left on the component");
          size_t pick = 0;
          if (pf.outer.size() > 1) {
            auto want = tail_char_for(v);
            if (want) {
              for (size_t k = 0; k < pf.outer.size(); ++k)
                if (restrict_map(*want, pf.stab) == pf.outer[k].c)
                  pick = k;
            }
          }
          point = pf.outer[pick];
          pf.outer.erase(pf.outer.begin() + pick);
        }
      } else {
        // generic point: the stabilizer drops to a subgroup of the kernel
        if (pf.generic_slot)
          fail(ErrorCode::NotRecognized, ErrorKind::Algorithm,
               "nontrivial point orbit on a pointwise-fixed component");
        CharMap lam = restrict_map(pf.lambda, stab);
        if (!map_zero(lam))
          fail(ErrorCode::NotRecognized, ErrorKind::Algorithm,
               "free orbit not inside the component kernel");
        const Slot& any = pf.outer.front();
        point.a = restrict_map(any.a, stab);
        for (int x : stab.members)
          point.b[x] = Frac(0, 1);
        point.c = restrict_map(*pf.curvette, stab);
      }
      point.a = restrict_map(point.a, stab);
      point.b = restrict_map(point.b, stab);
      point.c = restrict_map(point.c, stab);
      pf.corners[v] = Slot{map_sub(point.a, point.b), point.b, point.c};

      fr.lambda = map_sub(point.b, point.a);
      fr.corners[p] = Slot{point.b, map_sub(point.a, point.b), point.c};
      if (map_zero(fr.lambda)) {
        Slot gs;
        gs.a = point.a;
        for (int x : stab.members)
          gs.b[x] = Frac(0, 1);
        gs.c = point.c;
        gs.generic = true;
        fr.generic_slot = gs;
      } else {
        fr.outer.push_back(Slot{point.a, map_sub(point.b, point.a), point.c});
      }
      fr.curvette = point.c;
    } else {
      // satellite center on the corner of two components
      int p = rep_of[center.parent_a];
      int q = rep_of[center.parent_b];
      auto& pf = frames.at(p);
      auto& qf = frames.at(q);
      auto pit = pf.corners.find(q);
      auto qit = qf.corners.find(p);
      if (pit == pf.corners.end() || qit == qf.corners.end())
        fail(ErrorCode::NotRecognized, ErrorKind::Algorithm,
             "satellite corner has no recorded frame");
      CharMap aP = restrict_map(pit->second.a, stab);
      CharMap aQ = restrict_map(qit->second.a, stab);
      CharMap cP = restrict_map(pit->second.c, stab);
      CharMap cQ = restrict_map(qit->second.c, stab);
      CharMap cw = map_add(cP, cQ);
      fr.lambda = map_sub(aQ, aP);
      fr.corners[p] = Slot{aQ, map_sub(aP, aQ), cw};
      fr.corners[q] = Slot{aP, map_sub(aQ, aP), cw};
      pf.corners[v] = Slot{map_sub(aP, aQ), aQ, pit->second.c};
      qf.corners[v] = Slot{map_sub(aQ, aP), aP, qit->second.c};
      pf.corners.erase(q);
      qf.corners.erase(p);
      if (map_zero(fr.lambda)) {
        Slot gs;
        gs.a = aP;
        for (int x : stab.members)
          gs.b[x] = Frac(0, 1);
        gs.c = cw;
        gs.generic = true;
        fr.generic_slot = gs;
      }
      fr.curvette = cw;
    }
    frames[v] = std::move(fr);
  }

  // arrows puncture fixed points of the marked components
  for (int i = 0; i < g.nmarks(); ++i) {
    if (!g.mark_is_curve(i))
      continue;
    auto& cm = std::get<CurveMark>(g.valuations[i]);
    int rep = rep_of[cm.vertex];
    auto& fr = frames.at(rep);
    if (cm.isotropy == fr.stab && !fr.generic_slot) {
      if (fr.outer.empty())
        fail(ErrorCode::NotRecognized, ErrorKind::Algorithm,
             "invariant branch without a fixed point");
      cm.chr = map_to_char(restrict_map(fr.outer.front().c, cm.isotropy), cm.isotropy);
      fr.outer.erase(fr.outer.begin());
    } else {
      if (fr.generic_slot && cm.isotropy.size() < fr.stab.size())
        fail(ErrorCode::NotRecognized, ErrorKind::Algorithm,
             "branch orbit on a pointwise-fixed component");
      cm.chr = map_to_char(restrict_map(*fr.curvette, cm.isotropy), cm.isotropy);
    }
  }

  g.generic.clear();
  g.special_points.clear();
  for (auto& [v, fr] : frames) {
    std::vector<int> ker;
    for (int x : fr.stab.members)
      if (fr.lambda.at(x).is_zero())
        ker.push_back(x);
    Subgroup K{G, ker};
    g.generic[v] = GenericRecord{K, map_to_char(restrict_map(*fr.curvette, K), K)};
    for (const auto& slot : fr.outer)
      g.special_points[v].push_back(
          SpecialPointRecord{fr.stab, map_to_char(slot.c, fr.stab), 1});
  }
}

// ---------------------------------------------------------------------------
// Round trip.
// ---------------------------------------------------------------------------

RoundtripReport roundtrip(const EquivariantResolutionGraph& g) {
  RoundtripReport report;
  try {
    require_valid(g);
    auto p = poincare(g);
    auto f = rho(p.factors);
    EquivariantResolutionGraph recon;
    if (g.all_marks_divisorial()) {
      recon = reconstruct_divisorial_collection(f, g.group);
    } else if (g.all_marks_curve()) {
      recon = reconstruct_curve_collection(f, g.group);
    } else {
      report.failed_stage = "mixed divisorial and curve collections are out of scope";
      return report;
    }

    RepresentationData rep;
    try {
      rep = recover_representation(p.factors, recon);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoSmoothCurvetteFactor)
        throw;
      rep.character[g.group->identity()] = CyclotomicInteger::root(Frac(0, 1), 2);
    }
    report.representation = rep.character;
    report.tails = rep.tails;
    try {
      refine_decorations(recon, rep);
    } catch (const Error&) {
      // keep the synthesized subgroup-level decorations
    }

    report.isomorphic_graphs = isomorphic(g, recon);
    report.ok = report.isomorphic_graphs;
    if (!report.ok)
      report.failed_stage = "isomorphism";
  } catch (const Error& e) {
    report.failed_stage = std::string(error_code_name(e.code())) + ": " + e.what();
  }
  return report;
}

} // namespace eqps
