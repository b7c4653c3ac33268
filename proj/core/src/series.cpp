#include "eqps/series.hpp"

namespace eqps {

std::vector<long long> ZRing::sym_table(long long effective, int nmax) const {
  if (effective < 0)
    fail(ErrorCode::NotEffective, ErrorKind::Precondition,
         "symmetric powers need a nonnegative integer");
  std::vector<long long> t(nmax + 1, 0);
  t[0] = 1;
  for (int n = 1; n <= nmax; ++n) {
    if (effective == 0)
      break;
    // C(c+n-1, n), built multiplicatively so every step stays integral
    t[n] = t[n - 1] * (effective + n - 1) / n;
  }
  return t;
}

void ARing::split(const Elem& s, Elem& pos, Elem& neg) const {
  pos = be_zero(G);
  neg = be_zero(G);
  for (const auto& [k, c] : s.coeffs) {
    if (c > 0)
      pos.coeffs[k] = c;
    else
      neg.coeffs[k] = -c;
  }
}

void AtRing::split(const Elem& s, Elem& pos, Elem& neg) const {
  pos = ebe_zero(G);
  neg = ebe_zero(G);
  for (const auto& [k, c] : s.coeffs) {
    if (c > 0)
      pos.coeffs[k] = c;
    else
      neg.coeffs[k] = -c;
  }
}

MultiSeries<ARing> rho(const MultiSeries<AtRing>& s) {
  MultiSeries<ARing> r(ARing{s.ring().G}, s.nvars(), s.bound());
  for (const auto& [e, c] : s.terms())
    r.add_term(e, reduce_rho(c));
  return r;
}

MultiSeries<ZRing> rho_hat(const MultiSeries<AtRing>& s) {
  MultiSeries<ZRing> r(ZRing{}, s.nvars(), s.bound());
  for (const auto& [e, c] : s.terms())
    r.add_term(e, reduce_rho_hat(c));
  return r;
}

MultiSeries<ZRing> rho_hat(const MultiSeries<ARing>& s) {
  MultiSeries<ZRing> r(ZRing{}, s.nvars(), s.bound());
  for (const auto& [e, c] : s.terms())
    r.add_term(e, reduce_rho_hat(c));
  return r;
}

FactoredSeries<ARing> rho(const FactoredSeries<AtRing>& f) {
  FactoredSeries<ARing> r(ARing{f.ring().G}, f.nvars());
  for (const auto& [M, s] : f.factors()) {
    auto c = reduce_rho(s);
    if (!c.is_zero())
      r.add_factor(M, c);
  }
  return r;
}

FactoredSeries<ZRing> rho_hat(const FactoredSeries<AtRing>& f) {
  FactoredSeries<ZRing> r(ZRing{}, f.nvars());
  for (const auto& [M, s] : f.factors()) {
    long long c = reduce_rho_hat(s);
    if (c != 0)
      r.add_factor(M, c);
  }
  return r;
}

FactoredSeries<ZRing> rho_hat(const FactoredSeries<ARing>& f) {
  FactoredSeries<ZRing> r(ZRing{}, f.nvars());
  for (const auto& [M, s] : f.factors()) {
    long long c = reduce_rho_hat(s);
    if (c != 0)
      r.add_factor(M, c);
  }
  return r;
}

} // namespace eqps
