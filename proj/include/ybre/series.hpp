#pragma once

#include <map>

#include "ybre/scalar.hpp"

namespace ybre {

// A value was expanded whose infinite-product argument carries a negative
// power of q after sampling, so it has no formal power-series expansion.
struct PoleAtOrigin : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Truncated Laurent series in sqrt(q): sum of c[t] * q^{(off+t)/2}, exact
// for all exponents up to and including hi (half-units).
struct QSeries {
  int off = 0;
  int hi = -1;
  std::vector<GaussianRational> c;

  GaussianRational coeff(int e2) const {
    if (e2 > hi) throw std::out_of_range("series coefficient beyond precision");
    if (e2 < off || e2 >= off + static_cast<int>(c.size())) return GaussianRational(0);
    return c[e2 - off];
  }

  void trim() {
    size_t lead = 0;
    while (lead < c.size() && c[lead].is_zero()) ++lead;
    if (lead > 0) {
      c.erase(c.begin(), c.begin() + lead);
      off += static_cast<int>(lead);
    }
    size_t sz = c.size();
    int maxlen = hi - off + 1;
    if (maxlen < 0) maxlen = 0;
    if (static_cast<int>(sz) > maxlen) c.resize(maxlen);
  }

  bool known_zero() const {
    for (const auto& v : c) {
      if (!v.is_zero()) return false;
    }
    return true;
  }
};

namespace detail {

inline QSeries series_mul(const QSeries& a, const QSeries& b) {
  QSeries r;
  r.off = a.off + b.off;
  r.hi = std::min(a.off + b.hi, b.off + a.hi);
  int len = r.hi - r.off + 1;
  if (len < 0) len = 0;
  r.c.assign(len, GaussianRational(0));
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i].is_zero()) continue;
    for (size_t j = 0; j < b.c.size(); ++j) {
      size_t k = i + j;
      if (static_cast<int>(k) >= len) break;
      r.c[k] += a.c[i] * b.c[j];
    }
  }
  return r;
}

inline QSeries series_add(const QSeries& a, const QSeries& b) {
  QSeries r;
  r.off = std::min(a.off, b.off);
  r.hi = std::min(a.hi, b.hi);
  int len = r.hi - r.off + 1;
  if (len < 0) len = 0;
  r.c.assign(len, GaussianRational(0));
  for (size_t i = 0; i < a.c.size(); ++i) {
    int e = a.off + static_cast<int>(i);
    if (e <= r.hi) r.c[e - r.off] += a.c[i];
  }
  for (size_t i = 0; i < b.c.size(); ++i) {
    int e = b.off + static_cast<int>(i);
    if (e <= r.hi) r.c[e - r.off] += b.c[i];
  }
  return r;
}

inline QSeries series_inverse(QSeries a) {
  a.trim();
  if (a.c.empty() || a.c[0].is_zero()) {
    throw DivisionByZero("inverting a series that is zero to working precision");
  }
  QSeries r;
  r.off = -a.off;
  r.hi = a.hi - 2 * a.off;
  int len = r.hi - r.off + 1;
  if (len < 0) len = 0;
  r.c.assign(len, GaussianRational(0));
  GaussianRational inv0 = a.c[0].inverse();
  for (int k = 0; k < len; ++k) {
    GaussianRational acc = (k == 0) ? GaussianRational(1) : GaussianRational(0);
    for (int j = 1; j <= k && j < static_cast<int>(a.c.size()); ++j) {
      acc -= a.c[j] * r.c[k - j];
    }
    r.c[k] = acc * inv0;
  }
  return r;
}

// Expand a polynomial after sampling all non-q variables.  Exact, so hi can
// be chosen freely.
inline QSeries series_of_poly(const Poly& p, const std::map<Var, GaussianRational>& samples,
                              int hi) {
  std::map<int, GaussianRational> acc;
  for (const auto& t : p.terms()) {
    GaussianRational c = t.c;
    for (int v = 1; v < kNumVars; ++v) {
      if (t.e[v] == 0) continue;
      auto it = samples.find(static_cast<Var>(v));
      if (it == samples.end()) {
        throw std::invalid_argument("missing sample for a variable present in the value");
      }
      assert(t.e[v] % 2 == 0);
      c *= it->second.pow(t.e[v] / 2);
    }
    if (!c.is_zero()) acc[t.e[VQ]] += c;
  }
  QSeries r;
  r.hi = hi;
  if (acc.empty()) {
    r.off = 0;
    return r;
  }
  r.off = acc.begin()->first;
  int len = std::max(0, std::min(hi, acc.rbegin()->first) - r.off + 1);
  r.c.assign(len, GaussianRational(0));
  for (const auto& [e, c] : acc) {
    if (e <= hi) r.c[e - r.off] = c;
  }
  return r;
}

inline QSeries series_of_symbol(const PochSymbol& s,
                                const std::map<Var, GaussianRational>& samples, int hi) {
  GaussianRational coef = s.coef;
  for (int v = 1; v < kNumVars; ++v) {
    if (s.arg[v] == 0) continue;
    auto it = samples.find(static_cast<Var>(v));
    if (it == samples.end()) {
      throw std::invalid_argument("missing sample for a variable present in the value");
    }
    assert(s.arg[v] % 2 == 0);
    coef *= it->second.pow(s.arg[v] / 2);
  }
  int e = s.arg[VQ];
  if (coef.is_zero()) {
    QSeries one;
    one.off = 0;
    one.hi = hi;
    one.c = {GaussianRational(1)};
    return one;
  }
  if (e < 0) {
    throw PoleAtOrigin("infinite product argument has a negative q power");
  }
  QSeries prod;
  prod.off = 0;
  prod.hi = hi;
  prod.c = {GaussianRational(1)};
  for (int t = e; t <= hi; t += s.g2) {
    QSeries f;
    f.off = 0;
    f.hi = hi;
    if (t == 0) {
      f.c = {GaussianRational(1) - coef};
    } else {
      f.c.assign(t + 1, GaussianRational(0));
      f.c[0] = GaussianRational(1);
      f.c[t] = -coef;
    }
    prod = series_mul(prod, f);
  }
  if (s.mult >= 0) {
    QSeries r;
    r.off = 0;
    r.hi = hi;
    r.c = {GaussianRational(1)};
    for (int m = 0; m < s.mult; ++m) r = series_mul(r, prod);
    return r;
  }
  QSeries inv = series_inverse(prod);
  QSeries r;
  r.off = 0;
  r.hi = inv.hi;
  r.c = {GaussianRational(1)};
  for (int m = 0; m < -s.mult; ++m) r = series_mul(r, inv);
  return r;
}

}  // namespace detail

// Expand a value as a Laurent series in sqrt(q) after sampling every other
// variable it mentions, exact at least up to half-unit exponent hi2.
inline QSeries series_expand(const ExactScalar& s, const std::map<Var, GaussianRational>& samples,
                             int hi2) {
  int work = hi2;
  for (int attempt = 0; attempt < 8; ++attempt) {
    QSeries num = detail::series_of_poly(s.num(), samples, work);
    QSeries den = detail::series_of_poly(s.den(), samples, work);
    QSeries r = detail::series_mul(num, detail::series_inverse(den));
    for (const auto& sym : s.symbols()) {
      r = detail::series_mul(r, detail::series_of_symbol(sym, samples, work));
    }
    if (r.hi >= hi2) {
      r.trim();
      return r;
    }
    work += (hi2 - r.hi);
  }
  throw std::runtime_error("series precision did not converge");
}

// Equality of two values on a sample point, checked through series
// expansion to half-unit precision hi2.
inline bool series_eq(const ExactScalar& a, const ExactScalar& b,
                      const std::map<Var, GaussianRational>& samples, int hi2) {
  QSeries sa = series_expand(a, samples, hi2);
  QSeries sb = series_expand(b, samples, hi2);
  int lo = std::min(sa.off, sb.off);
  for (int e = lo; e <= hi2; ++e) {
    if (sa.coeff(e) != sb.coeff(e)) return false;
  }
  return true;
}

// Coefficientwise comparison of two precomputed series up to half-unit
// exponent hi2.  Both must have been expanded at least that far.
inline bool series_match(const QSeries& a, const QSeries& b, int hi2) {
  if (a.hi < hi2 || b.hi < hi2) {
    throw std::invalid_argument("series not expanded to the requested precision");
  }
  int lo = std::min(a.off, b.off);
  for (int e = lo; e <= hi2; ++e) {
    if (a.coeff(e) != b.coeff(e)) return false;
  }
  return true;
}

// Power-series coefficients of a value at integer q exponents 0..deg.  The
// value must be regular at q = 0 and free of genuine half powers.
inline std::vector<GaussianRational> series_oracle(const ExactScalar& s,
                                                   const std::map<Var, GaussianRational>& samples,
                                                   int deg) {
  QSeries r = series_expand(s, samples, 2 * deg);
  if (r.off < 0 && !r.known_zero()) {
    throw PoleAtOrigin("value has a pole at q = 0");
  }
  std::vector<GaussianRational> out(deg + 1, GaussianRational(0));
  for (int e2 = std::max(0, r.off); e2 <= 2 * deg; ++e2) {
    GaussianRational c = r.coeff(e2);
    if (c.is_zero()) continue;
    if (e2 % 2 != 0) throw std::runtime_error("value has a genuine half power of q");
    out[e2 / 2] = c;
  }
  return out;
}

}  // namespace ybre
