#include "eqps/graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
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

// Exact rationals for the small matrix eliminations.
struct Rat {
  long long n = 0, d = 1;
  Rat() = default;
  Rat(long long nn, long long dd = 1) {
    if (dd < 0) {
      nn = -nn;
      dd = -dd;
    }
    long long g = gcd_ll(nn, dd);
    if (g == 0)
      g = 1;
    n = nn / g;
    d = dd / g;
  }
  Rat operator+(const Rat& o) const { return Rat(n * o.d + o.n * d, d * o.d); }
  Rat operator-(const Rat& o) const { return Rat(n * o.d - o.n * d, d * o.d); }
  Rat operator*(const Rat& o) const { return Rat(n * o.n, d * o.d); }
  Rat operator/(const Rat& o) const { return Rat(n * o.d, d * o.n); }
  bool is_zero() const { return n == 0; }
  bool negative() const { return n < 0; }
  bool is_integer() const { return d == 1; }
};

std::pair<int, int> norm_edge(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

} // namespace

ReplayedTree replay(const BlowUpProgram& prog) {
  ReplayedTree t;
  const int n = prog.size();
  t.self_int.assign(n, 0);
  std::set<std::pair<int, int>> edges;
  for (int v = 0; v < n; ++v) {
    const auto& c = prog.centers[v];
    t.self_int[v] = -1;
    if (c.parent_a < 0 && c.parent_b < 0) {
      if (v != 0)
        fail(ErrorCode::MalformedAction, ErrorKind::BadInput,
             "only the first center may be the origin");
      continue;
    }
    int pa = c.parent_a, pb = c.parent_b;
    if (pa < 0)
      std::swap(pa, pb);
    if (pa >= v || pb >= v)
      fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "center precedes its parents");
    if (pb < 0) { // free center
      t.self_int[pa] -= 1;
      edges.insert(norm_edge(pa, v));
    } else { // satellite center
      if (!edges.erase(norm_edge(pa, pb)))
        fail(ErrorCode::MalformedAction, ErrorKind::BadInput,
             "satellite center does not sit on an edge");
      t.self_int[pa] -= 1;
      t.self_int[pb] -= 1;
      edges.insert(norm_edge(pa, v));
      edges.insert(norm_edge(pb, v));
    }
  }
  t.edges.assign(edges.begin(), edges.end());
  return t;
}

std::vector<std::vector<int>> EquivariantResolutionGraph::adjacency() const {
  std::vector<std::vector<int>> adj(nvertices());
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  return adj;
}

int EquivariantResolutionGraph::degree(int v) const {
  int d = 0;
  for (auto [a, b] : edges)
    if (a == v || b == v)
      ++d;
  return d;
}

std::vector<int> EquivariantResolutionGraph::orbit_of(int v) const {
  std::set<int> o;
  for (int a = 0; a < group->size(); ++a)
    o.insert(action[a][v]);
  return std::vector<int>(o.begin(), o.end());
}

int EquivariantResolutionGraph::orbit_rep(int v) const { return orbit_of(v).front(); }

Subgroup EquivariantResolutionGraph::vertex_stabilizer(int v) const {
  std::vector<int> m;
  for (int a = 0; a < group->size(); ++a)
    if (action[a][v] == v)
      m.push_back(a);
  return Subgroup{group, std::move(m)};
}

int EquivariantResolutionGraph::mark_vertex(int i) const {
  if (auto* d = std::get_if<DivisorialMark>(&valuations[i]))
    return d->vertex;
  return std::get<CurveMark>(valuations[i]).vertex;
}

bool EquivariantResolutionGraph::mark_is_curve(int i) const {
  return std::holds_alternative<CurveMark>(valuations[i]);
}

bool EquivariantResolutionGraph::all_marks_divisorial() const {
  for (int i = 0; i < nmarks(); ++i)
    if (mark_is_curve(i))
      return false;
  return true;
}

bool EquivariantResolutionGraph::all_marks_curve() const {
  for (int i = 0; i < nmarks(); ++i)
    if (!mark_is_curve(i))
      return false;
  return true;
}

namespace {

struct Elimination {
  std::vector<Rat> pivots;
  Rat det{1, 1};
  std::vector<std::vector<Rat>> inverse;
  bool singular = false;
};

Elimination eliminate(const std::vector<std::vector<long long>>& a) {
  const int n = static_cast<int>(a.size());
  std::vector<std::vector<Rat>> m(n, std::vector<Rat>(2 * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      m[i][j] = Rat(a[i][j]);
    m[i][n + i] = Rat(1);
  }
  Elimination e;
  for (int col = 0; col < n; ++col) {
    if (m[col][col].is_zero()) {
      int r = col + 1;
      while (r < n && m[r][col].is_zero())
        ++r;
      if (r == n) {
        e.singular = true;
        return e;
      }
      std::swap(m[col], m[r]);
      e.det = e.det * Rat(-1);
      e.pivots.push_back(Rat(0)); // zero leading pivot: not definite
    }
    Rat p = m[col][col];
    if (e.pivots.size() == static_cast<size_t>(col))
      e.pivots.push_back(p);
    e.det = e.det * p;
    for (int j = 0; j < 2 * n; ++j)
      m[col][j] = m[col][j] / p;
    for (int i = 0; i < n; ++i) {
      if (i == col || m[i][col].is_zero())
        continue;
      Rat f = m[i][col];
      for (int j = 0; j < 2 * n; ++j)
        m[i][j] = m[i][j] - f * m[col][j];
    }
  }
  e.inverse.assign(n, std::vector<Rat>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      e.inverse[i][j] = m[i][n + j];
  return e;
}

std::vector<std::vector<long long>> intersection_matrix(const EquivariantResolutionGraph& g) {
  const int n = g.nvertices();
  std::vector<std::vector<long long>> a(n, std::vector<long long>(n, 0));
  for (int v = 0; v < n; ++v)
    a[v][v] = g.self_int[v];
  for (auto [x, y] : g.edges) {
    a[x][y] = 1;
    a[y][x] = 1;
  }
  return a;
}

} // namespace

MultiplicityData multiplicities(const EquivariantResolutionGraph& g) {
  const int n = g.nvertices();
  Elimination e = eliminate(intersection_matrix(g));
  if (e.singular || !(e.det.is_integer() && (e.det.n == 1 || e.det.n == -1)))
    fail(ErrorCode::NotUnimodular, ErrorKind::Precondition,
         "intersection matrix determinant is not +-1");
  MultiplicityData d;
  d.m.assign(n, std::vector<long long>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Rat v = Rat(0) - e.inverse[i][j];
      if (!v.is_integer())
        fail(ErrorCode::NonIntegerEntry, ErrorKind::Precondition,
             "multiplicity matrix has a non-integer entry");
      if (v.n <= 0)
        fail(ErrorCode::NonIntegerEntry, ErrorKind::Precondition,
             "multiplicity matrix has a nonpositive entry");
      d.m[i][j] = v.n;
    }
  const int r = g.nmarks();
  d.m_vec.assign(n, std::vector<long long>(r));
  d.M_vec.assign(n, std::vector<long long>(r, 0));
  for (int v = 0; v < n; ++v)
    for (int i = 0; i < r; ++i)
      d.m_vec[v][i] = d.m[v][g.mark_vertex(i)];
  for (int v = 0; v < n; ++v)
    for (int a = 0; a < g.group->size(); ++a)
      for (int i = 0; i < r; ++i)
        d.M_vec[v][i] += d.m_vec[g.action[a][v]][i];
  return d;
}

std::vector<std::string> validate(const EquivariantResolutionGraph& g) {
  std::vector<std::string> out;
  const int n = g.nvertices();
  if (!g.group) {
    out.push_back("missing group");
    return out;
  }
  if (n == 0) {
    out.push_back("graph has no vertices");
    return out;
  }

  if (static_cast<int>(g.edges.size()) != n - 1)
    out.push_back("not a tree: edge count differs from n-1");
  for (auto [a, b] : g.edges)
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) {
      out.push_back("edge endpoint out of range");
      return out;
    }
  {
    std::vector<int> seen(n, 0);
    std::queue<int> bfs;
    bfs.push(0);
    seen[0] = 1;
    auto adj = g.adjacency();
    int reached = 1;
    while (!bfs.empty()) {
      int v = bfs.front();
      bfs.pop();
      for (int w : adj[v])
        if (!seen[w]) {
          seen[w] = 1;
          ++reached;
          bfs.push(w);
        }
    }
    if (reached != n)
      out.push_back("not a tree: graph is disconnected");
  }
  if (!out.empty())
    return out;

  if (static_cast<int>(g.action.size()) != g.group->size()) {
    out.push_back("action table needs one row per group element");
    return out;
  }
  for (const auto& row : g.action) {
    if (static_cast<int>(row.size()) != n) {
      out.push_back("action row width mismatch");
      return out;
    }
    std::vector<int> seen(n, 0);
    for (int v : row)
      if (v < 0 || v >= n || seen[v]++) {
        out.push_back("action row is not a vertex permutation");
        return out;
      }
  }
  for (int a = 0; a < g.group->size(); ++a)
    for (int b = 0; b < g.group->size(); ++b)
      for (int v = 0; v < n; ++v)
        if (g.action[g.group->op(a, b)][v] != g.action[a][g.action[b][v]]) {
          out.push_back("action is not a group action");
          return out;
        }
  {
    std::set<std::pair<int, int>> edges(g.edges.begin(), g.edges.end());
    for (int a = 0; a < g.group->size(); ++a) {
      for (auto [x, y] : g.edges)
        if (!edges.count(norm_edge(g.action[a][x], g.action[a][y]))) {
          out.push_back("action does not preserve edges");
          return out;
        }
      for (int v = 0; v < n; ++v)
        if (g.self_int[g.action[a][v]] != g.self_int[v]) {
          out.push_back("action does not preserve self-intersections");
          return out;
        }
    }
  }

  {
    Elimination e = eliminate(intersection_matrix(g));
    bool neg = !e.singular;
    if (!e.singular)
      for (const auto& p : e.pivots)
        if (!p.negative())
          neg = false;
    if (!neg)
      out.push_back("intersection matrix is not negative definite");
    else if (!(e.det.is_integer() && (e.det.n == 1 || e.det.n == -1)))
      out.push_back("intersection matrix determinant is not +-1");
    else {
      try {
        multiplicities(g);
      } catch (const Error& err) {
        out.push_back(err.what());
      }
    }
  }
  if (!out.empty())
    return out;

  for (int i = 0; i < g.nmarks(); ++i) {
    int v = g.mark_vertex(i);
    if (v < 0 || v >= n) {
      out.push_back("valuation mark vertex out of range");
      continue;
    }
    if (g.mark_is_curve(i)) {
      const auto& cm = std::get<CurveMark>(g.valuations[i]);
      Subgroup stab = g.vertex_stabilizer(v);
      if (!stab.contains_subgroup(cm.isotropy))
        out.push_back("curve mark isotropy is not inside the vertex stabilizer");
      if (!(cm.chr.domain == cm.isotropy))
        out.push_back("curve mark character domain mismatch");
    }
  }

  for (int v = 0; v < n; ++v) {
    if (g.orbit_rep(v) != v) {
      if (g.generic.count(v))
        out.push_back("generic record on a non-representative vertex");
      if (g.special_points.count(v))
        out.push_back("special points on a non-representative vertex");
      continue;
    }
    Subgroup stab = g.vertex_stabilizer(v);
    auto it = g.generic.find(v);
    if (it == g.generic.end()) {
      out.push_back("missing generic record on vertex " + std::to_string(v));
      continue;
    }
    const auto& gen = it->second;
    if (!stab.contains_subgroup(gen.kernel))
      out.push_back("generic kernel not inside the vertex stabilizer");
    else if (!is_normal_in(gen.kernel, stab))
      out.push_back("generic kernel not normal in the vertex stabilizer");
    if (!(gen.chr.domain == gen.kernel))
      out.push_back("generic character domain mismatch");
    auto sp = g.special_points.find(v);
    if (sp != g.special_points.end()) {
      for (const auto& rec : sp->second) {
        if (!stab.contains_subgroup(rec.isotropy) ||
            !rec.isotropy.contains_subgroup(gen.kernel) ||
            rec.isotropy.size() == gen.kernel.size()) {
          out.push_back("special point isotropy must lie strictly between the "
                        "generic kernel and the stabilizer");
          continue;
        }
        if (rec.orbit_size_on_component * rec.isotropy.size() != stab.size())
          out.push_back("special point orbit size inconsistent with its isotropy");
        if (!(rec.chr.domain == rec.isotropy))
          out.push_back("special point character domain mismatch");
        else if (!(rec.chr.restricted(gen.kernel) == gen.chr))
          out.push_back("special point character does not restrict to the generic one");
      }
    }
  }
  if (!out.empty())
    return out;

  try {
    strata(g);
  } catch (const Error& err) {
    out.push_back(err.what());
  }
  return out;
}

void require_valid(const EquivariantResolutionGraph& g) {
  auto diag = validate(g);
  if (!diag.empty())
    fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "invalid graph: " + diag.front());
}

std::vector<Stratum> strata(const EquivariantResolutionGraph& g) {
  auto mult = multiplicities(g);
  std::vector<Stratum> out;
  for (int v = 0; v < g.nvertices(); ++v) {
    if (g.orbit_rep(v) != v)
      continue;
    Subgroup stab = g.vertex_stabilizer(v);
    auto genit = g.generic.find(v);
    if (genit == g.generic.end())
      fail(ErrorCode::MalformedAction, ErrorKind::BadInput,
           "missing generic record on vertex " + std::to_string(v));
    const auto& gen = genit->second;

    long long arrows = 0;
    for (int i = 0; i < g.nmarks(); ++i) {
      if (!g.mark_is_curve(i))
        continue;
      const auto& cm = std::get<CurveMark>(g.valuations[i]);
      if (g.orbit_rep(cm.vertex) != v)
        continue;
      arrows += stab.size() / cm.isotropy.size();
    }
    long long specials = 0;
    auto sp = g.special_points.find(v);
    if (sp != g.special_points.end())
      for (const auto& rec : sp->second)
        specials += rec.orbit_size_on_component;

    long long chi_num = (2 - g.degree(v) - arrows - specials) * gen.kernel.size();
    if (chi_num % stab.size() != 0)
      fail(ErrorCode::NonIntegralChi, ErrorKind::Precondition,
           "quotient Euler characteristic is not integral on vertex " + std::to_string(v));
    long long chi = chi_num / stab.size();

    ExpVec M(mult.M_vec[v].begin(), mult.M_vec[v].end());
    if (chi != 0)
      out.push_back(Stratum{chi, M, gen.kernel, gen.chr, v, false});
    if (sp != g.special_points.end())
      for (const auto& rec : sp->second)
        out.push_back(Stratum{1, M, rec.isotropy, rec.chr, v, true});
  }
  return out;
}

SemigroupData make_semigroup_data(std::vector<long long> beta) {
  if (beta.empty() || beta[0] < 1)
    fail(ErrorCode::NotASemigroupCharacteristic, ErrorKind::Precondition,
         "characteristic sequence must start with a positive multiplicity");
  SemigroupData s;
  s.beta = std::move(beta);
  const int g = static_cast<int>(s.beta.size()) - 1;
  s.e.resize(g + 1);
  s.N.assign(g + 1, 0);
  s.e[0] = s.beta[0];
  for (int q = 1; q <= g; ++q) {
    if (s.beta[q] <= s.beta[q - 1])
      fail(ErrorCode::NotASemigroupCharacteristic, ErrorKind::Precondition,
           "generators must strictly increase");
    s.e[q] = gcd_ll(s.e[q - 1], s.beta[q]);
    if (s.e[q] >= s.e[q - 1])
      fail(ErrorCode::NotASemigroupCharacteristic, ErrorKind::Precondition,
           "gcd ladder must strictly decrease");
    s.N[q] = s.e[q - 1] / s.e[q];
    if (q >= 2 && s.beta[q] <= s.N[q - 1] * s.beta[q - 1])
      fail(ErrorCode::NotASemigroupCharacteristic, ErrorKind::Precondition,
           "each generator must exceed N_q beta_q");
  }
  return s;
}

namespace {

std::vector<long long> m_column(const ReplayedTree& tree, int v0) {
  const int n = static_cast<int>(tree.self_int.size());
  std::vector<std::vector<long long>> a(n, std::vector<long long>(n, 0));
  for (int v = 0; v < n; ++v)
    a[v][v] = tree.self_int[v];
  for (auto [x, y] : tree.edges) {
    a[x][y] = 1;
    a[y][x] = 1;
  }
  Elimination e = eliminate(a);
  if (e.singular)
    fail(ErrorCode::NotUnimodular, ErrorKind::Precondition, "singular intersection matrix");
  std::vector<long long> col(n);
  for (int i = 0; i < n; ++i) {
    Rat m = Rat(0) - e.inverse[i][v0];
    if (!m.is_integer() || m.n <= 0)
      fail(ErrorCode::NonIntegerEntry, ErrorKind::Precondition,
           "multiplicity column is not a positive integer vector");
    col[i] = m.n;
  }
  return col;
}

std::vector<int> tree_path(const ReplayedTree& tree, int from, int to) {
  const int n = static_cast<int>(tree.self_int.size());
  std::vector<std::vector<int>> adj(n);
  for (auto [x, y] : tree.edges) {
    adj[x].push_back(y);
    adj[y].push_back(x);
  }
  std::vector<int> prev(n, -2);
  std::queue<int> bfs;
  bfs.push(from);
  prev[from] = -1;
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop();
    for (int w : adj[v])
      if (prev[w] == -2) {
        prev[w] = v;
        bfs.push(w);
      }
  }
  std::vector<int> path;
  for (int v = to; v != -1; v = prev[v])
    path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

} // namespace

SingleValuationModel graph_from_semigroup(const SemigroupData& sem, long long m_nu) {
  SingleValuationModel model;
  model.sem = sem;
  model.m_nu = m_nu;
  const int g = sem.puiseux_pairs();

  // Puiseux exponents from the semigroup generators
  std::vector<long long> beta_p(g + 1, 0);
  if (g >= 1)
    beta_p[1] = sem.beta[1];
  for (int q = 2; q <= g; ++q)
    beta_p[q] = sem.beta[q] - sem.N[q - 1] * sem.beta[q - 1] + beta_p[q - 1];

  auto& prog = model.program;
  int stage_end = -1;

  if (g == 0) {
    prog.centers.push_back({});
    stage_end = 0;
    model.dead_ends.push_back(0);
  } else {
    for (int q = 1; q <= g; ++q) {
      long long A, B;
      if (q == 1) {
        A = sem.beta[0] / sem.e[1];
        B = sem.beta[1] / sem.e[1];
      } else {
        A = sem.N[q];
        B = (beta_p[q] - beta_p[q - 1]) / sem.e[q];
      }
      // continued-fraction staircase between the divisor rail (weight A) and
      // the free direction (weight B)
      long long lx = 1, ly = 0, rx = 0, ry = 1;
      int ldiv = q == 1 ? -1 : stage_end;
      int rdiv = -1;
      int last_free = -1;
      while (true) {
        long long mx = lx + rx, my = ly + ry;
        BlowUpProgram::Center c;
        if (ldiv >= 0 && rdiv >= 0) {
          c.parent_a = ldiv;
          c.parent_b = rdiv;
        } else if (ldiv >= 0) {
          c.parent_a = ldiv;
        } else if (rdiv >= 0) {
          c.parent_a = rdiv;
        }
        int v = prog.size();
        prog.centers.push_back(c);
        if (q == 1 && v == 0)
          model.dead_ends.push_back(0); // sigma_0
        else if (c.parent_b < 0)
          last_free = v;
        long long cr = mx * B - my * A; // cross(m, omega)
        if (cr == 0) {
          stage_end = v;
          break;
        }
        if (cr > 0) {
          lx = mx;
          ly = my;
          ldiv = v;
        } else {
          rx = mx;
          ry = my;
          rdiv = v;
        }
      }
      if (last_free < 0)
        fail(ErrorCode::NotASemigroupCharacteristic, ErrorKind::Precondition,
             "degenerate staircase stage");
      model.dead_ends.push_back(last_free);
      model.ruptures.push_back(stage_end);
    }
  }

  long long m_end = g == 0 ? 1 : sem.N[g] * sem.beta[g];
  long long eg = sem.e[g];
  if (m_nu < m_end || (m_nu - m_end) % eg != 0)
    fail(ErrorCode::NotASemigroupCharacteristic, ErrorKind::Precondition,
         "marked multiplicity is not reachable from the last rupture");
  int last = stage_end;
  for (long long k = 0; k < (m_nu - m_end) / eg; ++k) {
    BlowUpProgram::Center c;
    c.parent_a = last;
    last = prog.size();
    prog.centers.push_back(c);
  }
  model.nu = last;

  model.tree = replay(prog);
  model.m = m_column(model.tree, model.nu);
  model.geodesic = tree_path(model.tree, 0, model.nu);

  // construction check: the tree must reproduce the input data
  for (size_t q = 0; q < model.dead_ends.size(); ++q)
    if (model.m[model.dead_ends[q]] != sem.beta[q])
      fail(ErrorCode::NotASemigroupCharacteristic, ErrorKind::Precondition,
           "staircase did not reproduce the semigroup generators");
  if (model.m[model.nu] != m_nu)
    fail(ErrorCode::NotASemigroupCharacteristic, ErrorKind::Precondition,
         "staircase did not reproduce the marked multiplicity");
  return model;
}

SemigroupData semigroup_data(const SingleValuationModel& model) {
  std::vector<long long> beta;
  for (int d : model.dead_ends)
    beta.push_back(model.m[d]);
  return make_semigroup_data(std::move(beta));
}

void validate_quotient_data(const QuotientGraphData& q) {
  if (!q.group)
    fail(ErrorCode::InconsistentChain, ErrorKind::BadInput, "missing group");
  const int k = q.chain_depth();
  Subgroup prev = full_subgroup(q.group);
  for (int j = 0; j < k; ++j) {
    const auto& h = q.chain[j];
    if (!prev.contains_subgroup(h) || h.size() >= prev.size())
      fail(ErrorCode::InconsistentChain, ErrorKind::Precondition,
           "chain subgroups must strictly decrease");
    if (!h.is_abelian())
      fail(ErrorCode::NonAbelianInterior, ErrorKind::Precondition,
           "interior chain subgroups must be abelian");
    prev = h;
  }
  if (static_cast<int>(q.rho_m.size()) != k)
    fail(ErrorCode::InconsistentChain, ErrorKind::Precondition,
         "one gluing vertex per chain step required");
  for (int j = 1; j < k; ++j)
    if (q.rho_m[j] <= q.rho_m[j - 1])
      fail(ErrorCode::InconsistentChain, ErrorKind::Precondition,
           "gluing vertices must strictly increase");
  if (q.curve_mark) {
    const Subgroup hk = k == 0 ? full_subgroup(q.group) : q.chain.back();
    if (!q.branch_isotropy || !hk.contains_subgroup(*q.branch_isotropy))
      fail(ErrorCode::InconsistentChain, ErrorKind::Precondition,
           "branch isotropy must lie in the last chain subgroup");
  }
}

SingleValuationModel model_of(const QuotientGraphData& q) {
  return graph_from_semigroup(q.sem, q.m_nu);
}

QuotientProgram quotient_program_of(const QuotientGraphData& q,
                                    const SingleValuationModel& model) {
  validate_quotient_data(q);
  const int k = q.chain_depth();
  std::vector<int> rho_vertex(k, -1);
  for (int j = 0; j < k; ++j) {
    for (int v : model.geodesic)
      if (model.m[v] == q.rho_m[j])
        rho_vertex[j] = v;
    if (rho_vertex[j] < 0)
      fail(ErrorCode::InconsistentChain, ErrorKind::Precondition,
           "gluing multiplicity does not match a geodesic vertex");
    if (rho_vertex[j] >= model.nu)
      fail(ErrorCode::InconsistentChain, ErrorKind::Precondition,
           "gluing vertices must precede the marked vertex");
  }
  // a gluing vertex may not split a dead end from its rupture in birth order
  for (size_t t = 0; t < model.ruptures.size(); ++t) {
    int s = model.dead_ends[t + 1];
    int tau = model.ruptures[t];
    for (int j = 0; j < k; ++j)
      if (rho_vertex[j] > s && rho_vertex[j] < tau)
        fail(ErrorCode::InconsistentChain, ErrorKind::Precondition,
             "gluing vertex inside a satellite block");
  }

  QuotientProgram qp;
  qp.group = q.group;
  qp.program = model.program;
  qp.stab.assign(model.program.size(), full_subgroup(q.group));
  for (int v = 0; v < model.program.size(); ++v) {
    int level = k;
    for (int j = 0; j < k; ++j)
      if (v <= rho_vertex[j]) {
        level = j;
        break;
      }
    qp.stab[v] = level == 0 ? full_subgroup(q.group) : q.chain[level - 1];
  }
  MarkSpec mark;
  mark.vertex = model.nu;
  mark.curve = q.curve_mark;
  if (q.curve_mark) {
    mark.isotropy = q.branch_isotropy;
    mark.chr = q.branch_char ? *q.branch_char : Character::trivial(*q.branch_isotropy);
  }
  qp.marks.push_back(mark);
  return qp;
}

namespace {

// Largest normal subgroup with nontrivial cyclic quotient: the kernel of a
// nontrivial character of minimal order.
Subgroup cyclic_quotient_kernel(const Subgroup& s) {
  auto chars = characters_of(s);
  Subgroup best = s;
  int best_order = 1;
  for (const auto& c : chars) {
    if (c.is_trivial())
      continue;
    long long order = 1;
    for (int g : s.members) {
      Frac f = c.frac_at(g);
      order = order / gcd_ll(order, f.den) * f.den;
    }
    std::vector<int> ker;
    for (int g : s.members)
      if (c.frac_at(g).is_zero())
        ker.push_back(g);
    if (best_order == 1 || order < best_order) {
      best_order = static_cast<int>(order);
      best = Subgroup{s.parent, ker};
    }
  }
  if (best_order == 1)
    fail(ErrorCode::InconsistentChain, ErrorKind::Algorithm,
         "stabilizer admits no cyclic quotient for the component action");
  return best;
}

bool cyclic_quotient_of_order(const Subgroup& s, const Subgroup& k, long long d) {
  if (static_cast<long long>(s.size()) != d * k.size())
    return false;
  if (d == 1)
    return true;
  for (int x : s.members) {
    long long t = 1;
    int p = x;
    while (!k.contains(p)) {
      p = s.parent->op(p, x);
      ++t;
    }
    if (t == d)
      return true;
  }
  return false;
}

} // namespace

EquivariantResolutionGraph glue_program(const QuotientProgram& qp) {
  const auto& G = qp.group;
  const int n = qp.program.size();
  if (static_cast<int>(qp.stab.size()) != n)
    fail(ErrorCode::InconsistentChain, ErrorKind::BadInput, "one stabilizer per vertex");

  for (int v = 0; v < n; ++v) {
    const auto& c = qp.program.centers[v];
    for (int p : {c.parent_a, c.parent_b})
      if (p >= 0 && !qp.stab[p].contains_subgroup(qp.stab[v]))
        fail(ErrorCode::InconsistentChain, ErrorKind::Precondition,
             "stabilizers must decrease along the blow-up order");
    if (c.parent_a >= 0 && c.parent_b >= 0) {
      int later = std::max(c.parent_a, c.parent_b);
      if (!(qp.stab[v] == qp.stab[later]))
        fail(ErrorCode::InconsistentChain, ErrorKind::Precondition,
             "satellite center must keep the stabilizer of its later parent");
    }
  }

  std::vector<CosetTable> cosets(n);
  std::vector<int> offset(n + 1, 0);
  for (int v = 0; v < n; ++v) {
    cosets[v] = left_cosets(G, qp.stab[v]);
    offset[v + 1] = offset[v] + static_cast<int>(cosets[v].reps.size());
  }
  const int N = offset[n];
  std::vector<int> gamma_of(N);
  for (int v = 0; v < n; ++v)
    for (int id = offset[v]; id < offset[v + 1]; ++id)
      gamma_of[id] = v;

  BlowUpProgram glued;
  for (int v = 0; v < n; ++v) {
    const auto& c = qp.program.centers[v];
    for (size_t i = 0; i < cosets[v].reps.size(); ++i) {
      int r = cosets[v].reps[i];
      BlowUpProgram::Center gc;
      if (c.parent_a >= 0)
        gc.parent_a = offset[c.parent_a] + cosets[c.parent_a].coset_of[r];
      if (c.parent_b >= 0)
        gc.parent_b = offset[c.parent_b] + cosets[c.parent_b].coset_of[r];
      glued.centers.push_back(gc);
    }
  }
  ReplayedTree tree = replay(glued);

  EquivariantResolutionGraph out;
  out.group = G;
  out.self_int = tree.self_int;
  out.edges = tree.edges;
  out.program = glued;
  out.action.assign(G->size(), std::vector<int>(N));
  for (int a = 0; a < G->size(); ++a)
    for (int v = 0; v < n; ++v)
      for (size_t i = 0; i < cosets[v].reps.size(); ++i)
        out.action[a][offset[v] + i] =
            offset[v] + cosets[v].coset_of[G->op(a, cosets[v].reps[i])];

  for (const auto& mark : qp.marks) {
    int id = offset[mark.vertex];
    if (!mark.curve) {
      out.valuations.push_back(DivisorialMark{id});
    } else {
      Subgroup iso = *mark.isotropy;
      if (!qp.stab[mark.vertex].contains_subgroup(iso))
        fail(ErrorCode::InconsistentChain, ErrorKind::Precondition,
             "branch isotropy must fix the marked component");
      Character chr = mark.chr ? *mark.chr : Character::trivial(iso);
      out.valuations.push_back(CurveMark{id, iso, chr});
    }
  }

  std::vector<std::vector<int>> adj(N);
  for (auto [x, y] : tree.edges) {
    adj[x].push_back(y);
    adj[y].push_back(x);
  }
  for (int v = 0; v < n; ++v) {
    const Subgroup& S = qp.stab[v];
    int rep = offset[v];

    // orbits of marked points on the representative copy
    std::vector<std::pair<long long, Subgroup>> markings;
    std::map<int, int> later_neighbor_count;
    for (int nb : adj[rep]) {
      int w = gamma_of[nb];
      if (w < v)
        markings.emplace_back(1, S);
      else
        later_neighbor_count[w]++;
    }
    for (const auto& [w, cnt] : later_neighbor_count) {
      if (cnt != S.size() / qp.stab[w].size())
        fail(ErrorCode::InconsistentChain, ErrorKind::Algorithm,
             "glued adjacency disagrees with the stabilizer chain");
      markings.emplace_back(cnt, qp.stab[w]);
    }
    for (const auto& mark : qp.marks)
      if (mark.curve && mark.vertex == v)
        markings.emplace_back(S.size() / mark.isotropy->size(), *mark.isotropy);

    long long fixed = 0;
    std::vector<std::pair<long long, Subgroup>> moving;
    for (const auto& mk : markings) {
      if (mk.first == 1)
        ++fixed;
      else
        moving.push_back(mk);
    }

    Subgroup kernel = S;
    long long specials = 0;
    if (moving.empty()) {
      if (S.is_cyclic()) {
        kernel = S;
      } else {
        if (fixed > 2)
          fail(ErrorCode::InconsistentChain, ErrorKind::Algorithm,
               "non-cyclic stabilizer cannot fix more than two points");
        kernel = cyclic_quotient_kernel(S);
        specials = 2 - fixed;
      }
    } else {
      kernel = moving.front().second;
      long long d = moving.front().first;
      for (const auto& mk : moving)
        if (mk.first != d || !(mk.second == kernel))
          fail(ErrorCode::InconsistentChain, ErrorKind::Algorithm,
               "component carries incompatible point orbits");
      if (!is_normal_in(kernel, S) || !cyclic_quotient_of_order(S, kernel, d))
        fail(ErrorCode::InconsistentChain, ErrorKind::Algorithm,
             "component orbits do not come from a cyclic action");
      if (fixed > 2)
        fail(ErrorCode::InconsistentChain, ErrorKind::Algorithm,
             "cyclic component action cannot fix more than two points");
      specials = 2 - fixed;
    }

    out.generic[rep] = GenericRecord{kernel, Character::trivial(kernel)};
    for (long long s = 0; s < specials; ++s)
      out.special_points[rep].push_back(SpecialPointRecord{S, Character::trivial(S), 1});
  }
  return out;
}

EquivariantResolutionGraph glue_from_quotient(const QuotientGraphData& q) {
  auto model = model_of(q);
  return glue_program(quotient_program_of(q, model));
}

namespace {

struct VertexProfile {
  int self_int;
  int degree;
  std::vector<int> stab;
  size_t orbit_size;
  std::vector<int> kernel_class;
  std::vector<std::pair<std::vector<int>, int>> specials;

  bool operator==(const VertexProfile& o) const {
    return self_int == o.self_int && degree == o.degree && stab == o.stab &&
           orbit_size == o.orbit_size && kernel_class == o.kernel_class &&
           specials == o.specials;
  }
};

VertexProfile profile_of(const EquivariantResolutionGraph& g, int v) {
  VertexProfile p;
  p.self_int = g.self_int[v];
  p.degree = g.degree(v);
  p.stab = g.vertex_stabilizer(v).members;
  p.orbit_size = g.orbit_of(v).size();
  int rep = g.orbit_rep(v);
  auto it = g.generic.find(rep);
  if (it != g.generic.end())
    p.kernel_class = canonical_subgroup_key(it->second.kernel);
  auto sp = g.special_points.find(rep);
  if (sp != g.special_points.end()) {
    for (const auto& rec : sp->second)
      p.specials.emplace_back(canonical_subgroup_key(rec.isotropy),
                              rec.orbit_size_on_component);
    std::sort(p.specials.begin(), p.specials.end());
  }
  return p;
}

} // namespace

bool isomorphic(const EquivariantResolutionGraph& a, const EquivariantResolutionGraph& b) {
  if (!same_group(a.group, b.group))
    return false;
  const int n = a.nvertices();
  if (n != b.nvertices() || a.edges.size() != b.edges.size() || a.nmarks() != b.nmarks())
    return false;
  for (int i = 0; i < a.nmarks(); ++i) {
    if (a.mark_is_curve(i) != b.mark_is_curve(i))
      return false;
    if (a.mark_is_curve(i)) {
      const auto& ca = std::get<CurveMark>(a.valuations[i]);
      const auto& cb = std::get<CurveMark>(b.valuations[i]);
      if (canonical_subgroup_key(ca.isotropy) != canonical_subgroup_key(cb.isotropy))
        return false;
    }
  }

  std::vector<VertexProfile> pa(n), pb(n);
  for (int v = 0; v < n; ++v) {
    pa[v] = profile_of(a, v);
    pb[v] = profile_of(b, v);
  }

  auto adj_a = a.adjacency();
  std::set<std::pair<int, int>> edges_b(b.edges.begin(), b.edges.end());

  std::vector<int> order;
  {
    std::vector<int> seen(n, 0);
    for (int root = 0; root < n; ++root) {
      if (seen[root])
        continue;
      std::queue<int> bfs;
      bfs.push(root);
      seen[root] = 1;
      while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop();
        order.push_back(v);
        for (int w : adj_a[v])
          if (!seen[w]) {
            seen[w] = 1;
            bfs.push(w);
          }
      }
    }
  }

  std::vector<int> map_ab(n, -1), map_ba(n, -1);

  auto assign_orbit = [&](int v, int w, std::vector<std::pair<int, int>>& undo) {
    for (int g = 0; g < a.group->size(); ++g) {
      int va = a.action[g][v], wb = b.action[g][w];
      if (map_ab[va] == -1 && map_ba[wb] == -1) {
        map_ab[va] = wb;
        map_ba[wb] = va;
        undo.emplace_back(va, wb);
      } else if (map_ab[va] != wb) {
        return false;
      }
    }
    return true;
  };

  std::function<bool(size_t)> search = [&](size_t idx) -> bool {
    while (idx < order.size() && map_ab[order[idx]] != -1) {
      int v = order[idx];
      for (int u : adj_a[v])
        if (map_ab[u] != -1 && !edges_b.count(norm_edge(map_ab[v], map_ab[u])))
          return false;
      ++idx;
    }
    if (idx == order.size()) {
      for (auto [x, y] : a.edges)
        if (!edges_b.count(norm_edge(map_ab[x], map_ab[y])))
          return false;
      for (int i = 0; i < a.nmarks(); ++i) {
        auto orbit = b.orbit_of(b.mark_vertex(i));
        if (!std::binary_search(orbit.begin(), orbit.end(), map_ab[a.mark_vertex(i)]))
          return false;
      }
      return true;
    }
    int v = order[idx];
    for (int w = 0; w < n; ++w) {
      if (map_ba[w] != -1 || !(pa[v] == pb[w]))
        continue;
      bool ok = true;
      for (int u : adj_a[v])
        if (map_ab[u] != -1 && !edges_b.count(norm_edge(w, map_ab[u])))
          ok = false;
      if (!ok)
        continue;
      std::vector<std::pair<int, int>> undo;
      map_ab[v] = w;
      map_ba[w] = v;
      undo.emplace_back(v, w);
      if (assign_orbit(v, w, undo) && search(idx + 1))
        return true;
      for (auto [x, y] : undo) {
        map_ab[x] = -1;
        map_ba[y] = -1;
      }
    }
    return false;
  };

  return search(0);
}

} // namespace eqps
