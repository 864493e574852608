#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <climits>
#include <map>
#include <optional>
#include <vector>

#include "ybre/gaussian.hpp"

namespace ybre {

// Variable universe, fixed once and for all.  Lexicographic comparisons use
// this order (q most significant).
enum Var : int { VQ = 0, VZ = 1, VX = 2, VY = 3, VW = 4 };
constexpr int kNumVars = 5;

// Exponent vector.  All exponents are stored in half-units: a stored value
// of 2 means the first power of the variable, a stored value of 1 means a
// square root.  Square roots only ever occur for q, but the convention is
// uniform so that every routine treats the five variables identically.
using Exps = std::array<int, kNumVars>;

constexpr Exps kZeroExps{0, 0, 0, 0, 0};

inline Exps exps_add(const Exps& a, const Exps& b) {
  Exps r;
  for (int v = 0; v < kNumVars; ++v) r[v] = a[v] + b[v];
  return r;
}

inline Exps exps_sub(const Exps& a, const Exps& b) {
  Exps r;
  for (int v = 0; v < kNumVars; ++v) r[v] = a[v] - b[v];
  return r;
}

inline Exps exps_neg(const Exps& a) {
  Exps r;
  for (int v = 0; v < kNumVars; ++v) r[v] = -a[v];
  return r;
}

inline Exps exps_scale(const Exps& a, int k) {
  Exps r;
  for (int v = 0; v < kNumVars; ++v) r[v] = a[v] * k;
  return r;
}

inline Exps exps_of(Var v, int e2) {
  Exps r = kZeroExps;
  r[v] = e2;
  return r;
}

// Lexicographic comparison, q most significant.
inline int exps_cmp(const Exps& a, const Exps& b) {
  for (int v = 0; v < kNumVars; ++v) {
    if (a[v] != b[v]) return a[v] < b[v] ? -1 : 1;
  }
  return 0;
}

struct ExpsLess {
  bool operator()(const Exps& a, const Exps& b) const { return exps_cmp(a, b) < 0; }
};

// Sparse Laurent polynomial over Q(i) in the five fixed variables.  Terms
// are kept sorted ascending in lex order with no zero coefficients and no
// duplicate exponent vectors; the leading (lex-greatest) term is terms.back().
class Poly {
 public:
  struct Term {
    Exps e;
    GaussianRational c;
  };

  Poly() = default;

  static Poly zero() { return Poly(); }

  static Poly constant(GaussianRational c) {
    Poly p;
    if (!c.is_zero()) p.terms_.push_back({kZeroExps, std::move(c)});
    return p;
  }

  static Poly one() { return constant(GaussianRational(1)); }

  static Poly monomial(GaussianRational c, const Exps& e) {
    Poly p;
    if (!c.is_zero()) p.terms_.push_back({e, std::move(c)});
    return p;
  }

  static Poly variable(Var v, int e2 = 2) { return monomial(GaussianRational(1), exps_of(v, e2)); }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].e == kZeroExps);
  }

  bool is_one() const {
    return terms_.size() == 1 && terms_[0].e == kZeroExps && terms_[0].c.is_one();
  }

  bool is_monomial() const { return terms_.size() == 1; }

  const Term& leading() const {
    assert(!terms_.empty());
    return terms_.back();
  }

  GaussianRational constant_value() const {
    assert(is_constant());
    return terms_.empty() ? GaussianRational(0) : terms_[0].c;
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (size_t i = 0; i < a.terms_.size(); ++i) {
      if (!(a.terms_[i].e == b.terms_[i].e) || a.terms_[i].c != b.terms_[i].c) return false;
    }
    return true;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    size_t i = 0, j = 0;
    while (i < a.terms_.size() && j < b.terms_.size()) {
      int c = exps_cmp(a.terms_[i].e, b.terms_[j].e);
      if (c < 0) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (c > 0) {
        r.terms_.push_back(b.terms_[j++]);
      } else {
        GaussianRational s = a.terms_[i].c + b.terms_[j].c;
        if (!s.is_zero()) r.terms_.push_back({a.terms_[i].e, std::move(s)});
        ++i;
        ++j;
      }
    }
    while (i < a.terms_.size()) r.terms_.push_back(a.terms_[i++]);
    while (j < b.terms_.size()) r.terms_.push_back(b.terms_[j++]);
    return r;
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.c = -t.c;
    return r;
  }

  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    if (b.is_monomial()) return a.mul_term(b.terms_[0].c, b.terms_[0].e);
    if (a.is_monomial()) return b.mul_term(a.terms_[0].c, a.terms_[0].e);
    std::map<Exps, GaussianRational, ExpsLess> acc;
    for (const auto& ta : a.terms_) {
      for (const auto& tb : b.terms_) {
        Exps e = exps_add(ta.e, tb.e);
        auto [it, fresh] = acc.try_emplace(e, GaussianRational(0));
        it->second += ta.c * tb.c;
        (void)fresh;
      }
    }
    Poly r;
    r.terms_.reserve(acc.size());
    for (auto& [e, c] : acc) {
      if (!c.is_zero()) r.terms_.push_back({e, std::move(c)});
    }
    return r;
  }

  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  Poly mul_term(const GaussianRational& c, const Exps& e) const {
    if (c.is_zero()) return Poly();
    Poly r = *this;
    for (auto& t : r.terms_) {
      t.e = exps_add(t.e, e);
      t.c *= c;
    }
    return r;
  }

  Poly mul_scalar(const GaussianRational& c) const { return mul_term(c, kZeroExps); }

  Poly pow(int e) const {
    assert(e >= 0);
    Poly acc = Poly::one();
    Poly base = *this;
    while (e > 0) {
      if (e & 1) acc *= base;
      if (e >>= 1) base *= base;
    }
    return acc;
  }

  // Half-unit degree bounds per variable.
  int max_exp(Var v) const {
    int m = 0;
    bool first = true;
    for (const auto& t : terms_) {
      if (first || t.e[v] > m) m = t.e[v];
      first = false;
    }
    return m;
  }

  int min_exp(Var v) const {
    int m = 0;
    bool first = true;
    for (const auto& t : terms_) {
      if (first || t.e[v] < m) m = t.e[v];
      first = false;
    }
    return m;
  }

  bool depends_on(Var v) const {
    for (const auto& t : terms_) {
      if (t.e[v] != 0) return true;
    }
    return false;
  }

  // Componentwise minimum of all exponent vectors (the monomial content of
  // a Laurent polynomial).  Zero polynomial maps to the zero vector.
  Exps min_exps() const {
    Exps m = kZeroExps;
    bool first = true;
    for (const auto& t : terms_) {
      for (int v = 0; v < kNumVars; ++v) m[v] = first ? t.e[v] : std::min(m[v], t.e[v]);
      first = false;
    }
    return m;
  }

  // Replace variable v by coeff * monomial(exps).  The binding exponents are
  // in half-units; v itself must not appear in the binding.
  Poly substitute(Var v, const GaussianRational& coeff, const Exps& mono) const {
    assert(mono[v] == 0);
    Poly r;
    std::map<Exps, GaussianRational, ExpsLess> acc;
    for (const auto& t : terms_) {
      int e2 = t.e[v];
      Exps e = t.e;
      e[v] = 0;
      GaussianRational c = t.c;
      if (e2 != 0) {
        // A coefficient cannot carry a fractional power, so the exponent
        // being substituted must be a whole number of true units.
        assert(e2 % 2 == 0);
        c *= coeff.pow(e2 / 2);
        if (c.is_zero()) continue;
        e = exps_add(e, exps_scale(mono, e2 / 2));
      }
      auto [it, fresh] = acc.try_emplace(e, GaussianRational(0));
      it->second += c;
      (void)fresh;
    }
    for (auto& [e, c] : acc) {
      if (!c.is_zero()) r.terms_.push_back({e, std::move(c)});
    }
    return r;
  }

  // Double every q exponent (the q -> q^2 shift used by the doubled
  // oscillator algebra).
  Poly q_squared() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.e[VQ] *= 2;
    return r;
  }

  // Construct directly from presorted unique terms (internal fast path).
  static Poly from_sorted(std::vector<Term> ts) {
    Poly p;
    p.terms_ = std::move(ts);
    return p;
  }

 private:
  std::vector<Term> terms_;
};

// True-unit variable and power helpers.  poly_qh(1) is sqrt(q).
inline Poly poly_var(Var v, int true_exp = 1) { return Poly::variable(v, 2 * true_exp); }
inline Poly poly_qh(int half_exp) { return Poly::variable(VQ, half_exp); }
inline Poly poly_const(long c) { return Poly::constant(GaussianRational(c)); }

// Exact multivariate division.  Returns the quotient when divisor divides
// dividend exactly (over Q(i), Laurent exponents allowed), nullopt otherwise.
inline std::optional<Poly> poly_divide(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
  if (a.is_zero()) return Poly::zero();
  if (b.is_monomial()) {
    return a.mul_term(b.terms()[0].c.inverse(), exps_neg(b.terms()[0].e));
  }
  // Divisibility of Laurent polynomials reduces to divisibility of their
  // monomial-stripped parts; strip first so lex descent is well founded.
  Exps sa = a.min_exps(), sb = b.min_exps();
  Poly rem = a.mul_term(GaussianRational(1), exps_neg(sa));
  Poly bb = b.mul_term(GaussianRational(1), exps_neg(sb));
  const auto lb = bb.leading();
  std::vector<Poly::Term> quot;
  while (!rem.is_zero()) {
    const auto& lr = rem.leading();
    Exps qe = exps_sub(lr.e, lb.e);
    for (int v = 0; v < kNumVars; ++v) {
      if (qe[v] < 0) return std::nullopt;
    }
    GaussianRational qc = lr.c / lb.c;
    quot.push_back({qe, qc});
    rem -= bb.mul_term(qc, qe);
  }
  Exps shift = exps_sub(sa, sb);
  for (auto& t : quot) t.e = exps_add(t.e, shift);
  std::sort(quot.begin(), quot.end(),
            [](const Poly::Term& s, const Poly::Term& t) { return exps_cmp(s.e, t.e) < 0; });
  return Poly::from_sorted(std::move(quot));
}

namespace detail {

// Univariate view of a polynomial in one chosen variable, coefficients
// again polynomials.  Exponents of v are half-units but always even here
// (gcd runs on monomial-stripped input where every v-exponent is a
// nonnegative multiple of the minimal step); we key by the raw value.
using UniView = std::map<int, Poly>;

inline UniView uni_view(const Poly& p, Var v) {
  UniView m;
  for (const auto& t : p.terms()) {
    Exps e = t.e;
    int d = e[v];
    e[v] = 0;
    auto [it, fresh] = m.try_emplace(d, Poly::zero());
    it->second += Poly::monomial(t.c, e);
    (void)fresh;
  }
  for (auto it = m.begin(); it != m.end();) {
    it = it->second.is_zero() ? m.erase(it) : std::next(it);
  }
  return m;
}

inline Poly from_uni_view(const UniView& m, Var v) {
  Poly p;
  for (const auto& [d, c] : m) p += c.mul_term(GaussianRational(1), exps_of(v, d));
  return p;
}

Poly poly_gcd(const Poly& a, const Poly& b);

// gcd of the coefficient list of a univariate view.
inline Poly uni_content(const UniView& m) {
  Poly g = Poly::zero();
  for (const auto& [d, c] : m) g = poly_gcd(g, c);
  return g;
}

// Pseudo-remainder of a by b in variable v (both nonzero, deg a >= deg b).
inline UniView uni_prem(UniView r, const UniView& b) {
  const int db = b.rbegin()->first;
  const Poly& lb = b.rbegin()->second;
  while (!r.empty() && r.rbegin()->first >= db) {
    const int dr = r.rbegin()->first;
    Poly lr = r.rbegin()->second;
    UniView next;
    for (auto& [d, c] : r) {
      if (d == dr) continue;
      next[d] = c * lb;
    }
    for (const auto& [d, c] : b) {
      if (d == db) continue;
      auto [it, fresh] = next.try_emplace(d + dr - db, Poly::zero());
      it->second -= lr * c;
      (void)fresh;
    }
    for (auto it = next.begin(); it != next.end();) {
      it = it->second.is_zero() ? next.erase(it) : std::next(it);
    }
    r = std::move(next);
  }
  return r;
}

// Normalize to leading lex coefficient 1 (input nonzero).
inline Poly monic(const Poly& p) {
  GaussianRational lc = p.leading().c;
  return lc.is_one() ? p : p.mul_scalar(lc.inverse());
}

// gcd of monomial-stripped ordinary polynomials via primitive PRS,
// recursing through the variable list.  The result is monic with zero
// monomial content, making it canonical.
inline Poly poly_gcd_stripped(Poly a, Poly b) {
  if (a.is_zero()) return b.is_zero() ? Poly::zero() : monic(b);
  if (b.is_zero()) return monic(a);
  if (a.is_constant() || b.is_constant()) return Poly::one();
  // Prefer a shared variable of smallest combined degree: the remainder
  // sequence shortens and the coefficient polynomials stay small.
  Var v = VQ;
  int best = INT_MAX;
  for (int i = 0; i < kNumVars; ++i) {
    Var vi = static_cast<Var>(i);
    if (a.depends_on(vi) && b.depends_on(vi)) {
      int score = a.max_exp(vi) + b.max_exp(vi);
      if (score < best) {
        best = score;
        v = vi;
      }
    }
  }
  if (best == INT_MAX) {
    for (int i = 0; i < kNumVars; ++i) {
      if (a.depends_on(static_cast<Var>(i)) || b.depends_on(static_cast<Var>(i))) {
        v = static_cast<Var>(i);
        break;
      }
    }
  }
  if (!a.depends_on(v)) {
    return monic(poly_gcd(a, uni_content(uni_view(b, v))));
  }
  if (!b.depends_on(v)) {
    return monic(poly_gcd(b, uni_content(uni_view(a, v))));
  }
  UniView ua = uni_view(a, v), ub = uni_view(b, v);
  Poly ca = uni_content(ua), cb = uni_content(ub);
  Poly cg = poly_gcd(ca, cb);
  auto primitive = [&](UniView& u, const Poly& content) {
    if (content.is_one()) return;
    for (auto& [d, c] : u) {
      auto q = poly_divide(c, content);
      assert(q);
      c = *q;
    }
  };
  primitive(ua, ca);
  primitive(ub, cb);
  if (ua.rbegin()->first < ub.rbegin()->first) std::swap(ua, ub);
  auto constant_coeffs = [](const UniView& u) {
    for (const auto& [d, c] : u) {
      if (!c.is_constant()) return false;
    }
    return true;
  };
  if (constant_coeffs(ua) && constant_coeffs(ub)) {
    // Effectively univariate: monic Euclid keeps coefficient sizes polynomial
    // in the degree, where the pseudo-remainder chain would blow up.
    while (true) {
      const int db = ub.rbegin()->first;
      if (db == 0) return monic(cg);
      GaussianRational linv = ub.rbegin()->second.constant_value().inverse();
      UniView r = ua;
      while (!r.empty() && r.rbegin()->first >= db) {
        const int dr = r.rbegin()->first;
        GaussianRational f = r.rbegin()->second.constant_value() * linv;
        r.erase(std::prev(r.end()));
        for (const auto& [d, c] : ub) {
          if (d == db) continue;
          auto [it, fresh] = r.try_emplace(d + dr - db, Poly::zero());
          it->second -= c.mul_scalar(f);
          (void)fresh;
        }
        for (auto it = r.begin(); it != r.end();) {
          it = it->second.is_zero() ? r.erase(it) : std::next(it);
        }
      }
      if (r.empty()) break;
      ua = std::move(ub);
      ub = std::move(r);
    }
    return monic(from_uni_view(ub, v) * cg);
  }
  while (true) {
    UniView r = uni_prem(ua, ub);
    if (r.empty()) break;
    Poly cr = uni_content(r);
    primitive(r, cr);
    ua = std::move(ub);
    ub = std::move(r);
    if (ub.rbegin()->first == 0) return monic(cg);  // coprime in v
  }
  Poly g = from_uni_view(ub, v) * cg;
  return monic(g);
}

// Canonical gcd of Laurent polynomials: monomial content is discarded, the
// result is monic in lex order.  gcd(p, 0) = monic(p stripped).
inline Poly poly_gcd(const Poly& a, const Poly& b) {
  auto strip = [](const Poly& p) {
    return p.is_zero() ? p : p.mul_term(GaussianRational(1), exps_neg(p.min_exps()));
  };
  return poly_gcd_stripped(strip(a), strip(b));
}

}  // namespace detail

using detail::poly_gcd;

}  // namespace ybre
