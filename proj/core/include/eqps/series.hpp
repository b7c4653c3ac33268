#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "eqps/burnside.hpp"

namespace eqps {

using ExpVec = std::vector<int>;

inline int total_degree(const ExpVec& e) {
  return std::accumulate(e.begin(), e.end(), 0);
}

inline bool is_zero_exponent(const ExpVec& e) {
  return std::all_of(e.begin(), e.end(), [](int v) { return v == 0; });
}

/// Graded lexicographic order: total degree first, then lexicographic.
struct GradedLex {
  bool operator()(const ExpVec& a, const ExpVec& b) const {
    int da = total_degree(a), db = total_degree(b);
    if (da != db)
      return da < db;
    return a < b;
  }
};

// ---------------------------------------------------------------------------
// Coefficient rings. Each ring context provides the operations the series
// layer needs; Burnside-type rings carry their group.
// ---------------------------------------------------------------------------

struct ZRing {
  using Elem = long long;

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem add(Elem a, Elem b) const { return a + b; }
  Elem neg(Elem a) const { return -a; }
  Elem mul(Elem a, Elem b) const { return a * b; }
  bool is_zero(Elem a) const { return a == 0; }
  bool equal(Elem a, Elem b) const { return a == b; }
  long long hat(Elem a) const { return a; }
  void split(Elem s, Elem& pos, Elem& neg) const {
    pos = s > 0 ? s : 0;
    neg = s < 0 ? -s : 0;
  }
  std::vector<Elem> sym_table(Elem effective, int nmax) const;
  std::string str(Elem a) const { return std::to_string(a); }
};

struct ARing {
  GroupPtr G;
  using Elem = BurnsideElement;

  Elem zero() const { return be_zero(G); }
  Elem one() const { return be_one(G); }
  Elem add(const Elem& a, const Elem& b) const { return be_add(a, b); }
  Elem neg(const Elem& a) const { return be_scale(a, -1); }
  Elem mul(const Elem& a, const Elem& b) const { return be_multiply(a, b); }
  bool is_zero(const Elem& a) const { return a.is_zero(); }
  bool equal(const Elem& a, const Elem& b) const { return a == b; }
  long long hat(const Elem& a) const { return reduce_rho_hat(a); }
  void split(const Elem& s, Elem& pos, Elem& neg) const;
  std::vector<Elem> sym_table(const Elem& effective, int nmax) const {
    return sym_powers(effective, nmax);
  }
  std::string str(const Elem& a) const { return to_string(a); }
};

struct AtRing {
  GroupPtr G;
  using Elem = EquippedBurnsideElement;

  Elem zero() const { return ebe_zero(G); }
  Elem one() const { return ebe_one(G); }
  Elem add(const Elem& a, const Elem& b) const { return ebe_add(a, b); }
  Elem neg(const Elem& a) const { return ebe_scale(a, -1); }
  Elem mul(const Elem& a, const Elem& b) const { return ebe_multiply(a, b); }
  bool is_zero(const Elem& a) const { return a.is_zero(); }
  bool equal(const Elem& a, const Elem& b) const { return a == b; }
  long long hat(const Elem& a) const { return reduce_rho_hat(a); }
  void split(const Elem& s, Elem& pos, Elem& neg) const;
  std::vector<Elem> sym_table(const Elem& effective, int nmax) const {
    return sym_powers(effective, nmax);
  }
  std::string str(const Elem& a) const { return to_string(a); }
};

// ---------------------------------------------------------------------------
// Sparse truncated multivariate series.
// ---------------------------------------------------------------------------

template <class Ring>
class MultiSeries {
public:
  using Elem = typename Ring::Elem;
  using TermMap = std::map<ExpVec, Elem, GradedLex>;

  MultiSeries(Ring ring, int nvars, int bound)
      : ring_(std::move(ring)), nvars_(nvars), bound_(bound) {}

  static MultiSeries one(Ring ring, int nvars, int bound) {
    MultiSeries s(std::move(ring), nvars, bound);
    s.add_term(ExpVec(nvars, 0), s.ring_.one());
    return s;
  }

  const Ring& ring() const { return ring_; }
  int nvars() const { return nvars_; }
  int bound() const { return bound_; }
  const TermMap& terms() const { return terms_; }

  Elem coeff(const ExpVec& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? ring_.zero() : it->second;
  }

  void add_term(const ExpVec& e, const Elem& c) {
    if (static_cast<int>(e.size()) != nvars_)
      fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "exponent arity mismatch");
    if (total_degree(e) > bound_ || ring_.is_zero(c))
      return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second = ring_.add(it->second, c);
      if (ring_.is_zero(it->second))
        terms_.erase(it);
    }
  }

  bool operator==(const MultiSeries& o) const {
    if (nvars_ != o.nvars_)
      return false;
    if (terms_.size() != o.terms_.size())
      return false;
    auto a = terms_.begin();
    auto b = o.terms_.begin();
    for (; a != terms_.end(); ++a, ++b)
      if (a->first != b->first || !ring_.equal(a->second, b->second))
        return false;
    return true;
  }

  std::string str() const {
    if (terms_.empty())
      return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      if (!first)
        os << " + ";
      first = false;
      os << "(" << ring_.str(c) << ")*t^(";
      for (size_t i = 0; i < e.size(); ++i)
        os << e[i] << (i + 1 < e.size() ? "," : "");
      os << ")";
    }
    return os.str();
  }

private:
  Ring ring_;
  int nvars_;
  int bound_;
  TermMap terms_;
};

template <class Ring>
MultiSeries<Ring> multiply(const MultiSeries<Ring>& a, const MultiSeries<Ring>& b) {
  if (a.nvars() != b.nvars())
    fail(ErrorCode::GroupMismatch, ErrorKind::Precondition, "series arity mismatch");
  MultiSeries<Ring> r(a.ring(), a.nvars(), std::min(a.bound(), b.bound()));
  for (const auto& [ea, ca] : a.terms()) {
    int da = total_degree(ea);
    for (const auto& [eb, cb] : b.terms()) {
      if (da + total_degree(eb) > r.bound())
        continue;
      ExpVec e(ea.size());
      for (size_t i = 0; i < e.size(); ++i)
        e[i] = ea[i] + eb[i];
      r.add_term(e, a.ring().mul(ca, cb));
    }
  }
  return r;
}

/// Multiplicative inverse up to the truncation bound; requires the constant
/// term to be the ring unit.
template <class Ring>
MultiSeries<Ring> invert(const MultiSeries<Ring>& a) {
  const Ring& ring = a.ring();
  ExpVec zero_e(a.nvars(), 0);
  if (!ring.equal(a.coeff(zero_e), ring.one()))
    fail(ErrorCode::NotUnit, ErrorKind::Precondition,
         "inversion requires constant term equal to the unit");

  MultiSeries<Ring> b(ring, a.nvars(), a.bound());
  b.add_term(zero_e, ring.one());

  // nonconstant part of a, consumed in increasing graded-lex order
  std::vector<std::pair<ExpVec, typename Ring::Elem>> tail;
  for (const auto& [e, c] : a.terms())
    if (!is_zero_exponent(e))
      tail.emplace_back(e, c);

  // b is built degree by degree: b_w = -sum_{0<mu<=w} a_mu b_{w-mu}
  std::map<ExpVec, typename Ring::Elem, GradedLex> pending;
  for (const auto& [mu, c] : tail)
    pending[mu] = ring.neg(c); // contribution from b_0 = 1
  while (!pending.empty()) {
    auto it = pending.begin();
    ExpVec w = it->first;
    auto val = it->second;
    pending.erase(it);
    if (ring.is_zero(val))
      continue;
    b.add_term(w, val);
    int dw = total_degree(w);
    for (const auto& [mu, c] : tail) {
      if (dw + total_degree(mu) > a.bound())
        continue;
      ExpVec e(w.size());
      for (size_t i = 0; i < e.size(); ++i)
        e[i] = w[i] + mu[i];
      auto contrib = ring.neg(ring.mul(c, val));
      auto p = pending.find(e);
      if (p == pending.end())
        pending.emplace(e, contrib);
      else
        p->second = ring.add(p->second, contrib);
    }
  }
  return b;
}

/// (1 - t^M)^s expanded to total degree T. For s = -u with u effective this is
/// sum_n Sym^n(u) t^{nM}; a positive part is handled by inverting its series.
template <class Ring>
MultiSeries<Ring> binomial(const Ring& ring, const ExpVec& M,
                           const typename Ring::Elem& s, int T) {
  if (is_zero_exponent(M))
    fail(ErrorCode::ZeroExponent, ErrorKind::Precondition, "binomial exponent must be nonzero");
  const int nvars = static_cast<int>(M.size());
  const int degM = total_degree(M);
  const int nmax = T / degM;

  typename Ring::Elem pos = ring.zero(), neg = ring.zero();
  ring.split(s, pos, neg);

  auto expand_effective = [&](const typename Ring::Elem& u) {
    MultiSeries<Ring> r(ring, nvars, T);
    auto table = ring.sym_table(u, nmax);
    for (int n = 0; n <= nmax; ++n) {
      ExpVec e(M.size());
      for (size_t i = 0; i < M.size(); ++i)
        e[i] = M[i] * n;
      r.add_term(e, table[n]);
    }
    return r;
  };

  MultiSeries<Ring> r = expand_effective(neg); // (1-t^M)^{-neg}
  if (!ring.is_zero(pos))
    r = multiply(r, invert(expand_effective(pos)));
  return r;
}

// ---------------------------------------------------------------------------
// Finite products of binomials (1 - t^M)^s.
// ---------------------------------------------------------------------------

template <class Ring>
class FactoredSeries {
public:
  using Elem = typename Ring::Elem;
  using FactorMap = std::map<ExpVec, Elem, GradedLex>;

  FactoredSeries(Ring ring, int nvars) : ring_(std::move(ring)), nvars_(nvars) {}

  const Ring& ring() const { return ring_; }
  int nvars() const { return nvars_; }
  const FactorMap& factors() const { return factors_; }
  bool empty() const { return factors_.empty(); }

  /// Merges equal exponents, drops zero multiplicities; M = 0 is rejected.
  void add_factor(const ExpVec& M, const Elem& s) {
    if (static_cast<int>(M.size()) != nvars_)
      fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "factor arity mismatch");
    if (is_zero_exponent(M))
      fail(ErrorCode::ZeroExponent, ErrorKind::Precondition, "factor exponent must be nonzero");
    if (ring_.is_zero(s))
      return;
    auto it = factors_.find(M);
    if (it == factors_.end()) {
      factors_.emplace(M, s);
    } else {
      it->second = ring_.add(it->second, s);
      if (ring_.is_zero(it->second))
        factors_.erase(it);
    }
  }

  int max_total_degree() const {
    int d = 0;
    for (const auto& [M, s] : factors_)
      d = std::max(d, total_degree(M));
    return d;
  }

  bool operator==(const FactoredSeries& o) const {
    if (nvars_ != o.nvars_ || factors_.size() != o.factors_.size())
      return false;
    auto a = factors_.begin();
    auto b = o.factors_.begin();
    for (; a != factors_.end(); ++a, ++b)
      if (a->first != b->first || !ring_.equal(a->second, b->second))
        return false;
    return true;
  }

  std::string str() const {
    if (factors_.empty())
      return "1";
    std::ostringstream os;
    for (const auto& [M, s] : factors_) {
      os << "(1 - t^(";
      for (size_t i = 0; i < M.size(); ++i)
        os << M[i] << (i + 1 < M.size() ? "," : "");
      os << "))^(" << ring_.str(s) << ") ";
    }
    return os.str();
  }

private:
  Ring ring_;
  int nvars_;
  FactorMap factors_;
};

template <class Ring>
MultiSeries<Ring> expand(const FactoredSeries<Ring>& f, int T) {
  MultiSeries<Ring> r = MultiSeries<Ring>::one(f.ring(), f.nvars(), T);
  for (const auto& [M, s] : f.factors())
    r = multiply(r, binomial(f.ring(), M, s, T));
  return r;
}

/// Iteratively strips binomials off a truncated series: the graded-lex minimal
/// nonconstant term c t^M forces the factor (1 - t^M)^{-c}. On genuine finite
/// binomial products whose exponents fit inside the bound this recovers the
/// exact factor multiset.
template <class Ring>
FactoredSeries<Ring> factor(const MultiSeries<Ring>& a, int max_factors = 64) {
  const Ring& ring = a.ring();
  ExpVec zero_e(a.nvars(), 0);
  if (!ring.equal(a.coeff(zero_e), ring.one()))
    fail(ErrorCode::NonUnitConstant, ErrorKind::Precondition,
         "factorization requires constant term equal to the unit");

  FactoredSeries<Ring> out(ring, a.nvars());
  MultiSeries<Ring> residual = a;
  int steps = 0;
  while (true) {
    const auto& terms = residual.terms();
    auto it = terms.begin();
    if (it != terms.end() && is_zero_exponent(it->first))
      ++it;
    if (it == terms.end())
      break;
    if (++steps > max_factors)
      fail(ErrorCode::NoConvergence, ErrorKind::Algorithm,
           "input is not a binomial product within the bound");
    ExpVec M = it->first;
    auto c = it->second;
    out.add_factor(M, ring.neg(c));
    residual = multiply(residual, binomial(ring, M, c, residual.bound()));
  }
  return out;
}

/// Keeps only the listed variable positions in every factor exponent, merging
/// factors whose projected exponents collide. Errors if a factor projects to
/// the zero exponent (the caller must then apply the curve-case correction).
template <class Ring>
FactoredSeries<Ring> project(const FactoredSeries<Ring>& f, const std::vector<int>& keep) {
  for (int k : keep)
    if (k < 0 || k >= f.nvars())
      fail(ErrorCode::MalformedAction, ErrorKind::BadInput, "projection index out of range");
  FactoredSeries<Ring> r(f.ring(), static_cast<int>(keep.size()));
  for (const auto& [M, s] : f.factors()) {
    ExpVec p(keep.size());
    for (size_t i = 0; i < keep.size(); ++i)
      p[i] = M[keep[i]];
    if (is_zero_exponent(p))
      fail(ErrorCode::ExponentVanishes, ErrorKind::Algorithm,
           "factor exponent vanishes under projection");
    r.add_factor(p, s);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Coefficientwise reductions between rings.
// ---------------------------------------------------------------------------

MultiSeries<ARing> rho(const MultiSeries<AtRing>& s);
MultiSeries<ZRing> rho_hat(const MultiSeries<AtRing>& s);
MultiSeries<ZRing> rho_hat(const MultiSeries<ARing>& s);
FactoredSeries<ARing> rho(const FactoredSeries<AtRing>& f);
FactoredSeries<ZRing> rho_hat(const FactoredSeries<AtRing>& f);
FactoredSeries<ZRing> rho_hat(const FactoredSeries<ARing>& f);

} // namespace eqps
