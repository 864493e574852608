#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ybre/polynomial.hpp"

namespace ybre {

// Two values whose infinite-product parts cannot be reconciled were added,
// or a sum failed to collapse onto a single product class.
struct IncompatibleSymbols : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A substitution would turn the argument of an infinite product into a
// non-monomial expression, leaving the canonical form.
struct NonMonomialSubstitutionIntoSymbol : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline int gr_cmp(const GaussianRational& a, const GaussianRational& b) {
  int c = cmp(a.re, b.re);
  return c != 0 ? c : cmp(a.im, b.im);
}

// One canonicalized infinite q-Pochhammer factor (c * mono ; q^g)_inf^mult.
// The argument is a monomial with Gaussian-rational coefficient; g2 is the
// step exponent in half-units (true step g2/2), mult a nonzero integer
// (negative means the factor sits in the denominator).
struct PochSymbol {
  GaussianRational coef;
  Exps arg;
  int g2;
  int mult;
};

namespace detail {

// Compatibility classes: two symbols are in the same class when they share
// the step, the coefficient, the non-q exponents, and the q exponent modulo
// the step.  Such symbols differ by a whole number of shift relations.
inline int poch_class_cmp(const PochSymbol& a, const PochSymbol& b) {
  if (a.g2 != b.g2) return a.g2 < b.g2 ? -1 : 1;
  Exps ra = a.arg, rb = b.arg;
  ra[VQ] = 0;
  rb[VQ] = 0;
  if (int c = exps_cmp(ra, rb)) return c;
  if (int c = gr_cmp(a.coef, b.coef)) return c;
  long ma = a.arg[VQ] % a.g2, mb = b.arg[VQ] % b.g2;
  if (ma < 0) ma += a.g2;
  if (mb < 0) mb += b.g2;
  if (ma != mb) return ma < mb ? -1 : 1;
  return 0;
}

inline int poch_cmp(const PochSymbol& a, const PochSymbol& b) {
  if (int c = poch_class_cmp(a, b)) return c;
  if (a.arg[VQ] != b.arg[VQ]) return a.arg[VQ] < b.arg[VQ] ? -1 : 1;
  if (a.mult != b.mult) return a.mult < b.mult ? -1 : 1;
  return 0;
}

}  // namespace detail

// Element of the fraction field of Laurent polynomials over Q(i) in the
// five fixed variables, extended by infinite q-Pochhammer symbols.
//
// Canonical form invariants:
//  * num/den coprime; den is an ordinary polynomial (no negative
//    exponents), divisible by no variable, with lex-leading coefficient 1;
//    zero is 0/1 with no symbols.
//  * within one compatibility class at most one symbol survives, sitting at
//    the minimal q exponent occurring in that class; shifting down uses
//    (u;q^g)_inf = (1-u)(u q^g;q^g)_inf, the finite factors joining the
//    rational part.
//  * symbols sorted, multiplicities nonzero.
class ExactScalar {
 public:
  ExactScalar() : num_(Poly::zero()), den_(Poly::one()) {}
  ExactScalar(long v) : num_(Poly::constant(GaussianRational(v))), den_(Poly::one()) {}
  ExactScalar(GaussianRational v) : num_(Poly::constant(std::move(v))), den_(Poly::one()) {}

  static ExactScalar from_poly(Poly p) {
    ExactScalar s;
    s.num_ = std::move(p);
    s.canonicalize();
    return s;
  }

  static ExactScalar from_ratio(Poly n, Poly d) {
    ExactScalar s;
    s.num_ = std::move(n);
    s.den_ = std::move(d);
    if (s.den_.is_zero()) throw DivisionByZero("zero denominator");
    s.canonicalize();
    return s;
  }

  static ExactScalar variable(Var v, int true_exp = 1) {
    return from_poly(poly_var(v, true_exp));
  }

  // q^(h2/2): half-unit power of q.
  static ExactScalar qhalf(int h2) { return from_poly(poly_qh(h2)); }

  static ExactScalar monomial(GaussianRational c, const Exps& e) {
    return from_poly(Poly::monomial(std::move(c), e));
  }

  // (coef * mono ; q^g)_inf^mult with g in true units.
  static ExactScalar qpoch_inf(GaussianRational coef, const Exps& arg, int g, int mult) {
    ExactScalar s(1);
    if (mult != 0 && !coef.is_zero()) s.sym_.push_back({std::move(coef), arg, 2 * g, mult});
    s.canonicalize();
    return s;
  }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  const std::vector<PochSymbol>& symbols() const { return sym_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_rational() const { return sym_.empty(); }
  bool is_one() const { return sym_.empty() && den_.is_one() && num_.is_one(); }

  // The value as c * monomial, when it has that shape.
  std::optional<std::pair<GaussianRational, Exps>> as_monomial() const {
    if (!sym_.empty() || num_.terms().size() != 1 || !den_.is_one()) return std::nullopt;
    return std::make_pair(num_.terms()[0].c, num_.terms()[0].e);
  }

  ExactScalar operator-() const {
    ExactScalar r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend ExactScalar operator+(const ExactScalar& a, const ExactScalar& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    ExactScalar ac = a, bc = b;
    align_symbols(ac, bc);
    ExactScalar r;
    r.num_ = ac.num_ * bc.den_ + bc.num_ * ac.den_;
    r.den_ = ac.den_ * bc.den_;
    r.sym_ = ac.sym_;
    r.canonicalize();
    return r;
  }

  friend ExactScalar operator-(const ExactScalar& a, const ExactScalar& b) { return a + (-b); }

  friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
    if (a.is_zero() || b.is_zero()) return ExactScalar();
    ExactScalar r;
    r.num_ = a.num_ * b.num_;
    r.den_ = a.den_ * b.den_;
    r.sym_ = a.sym_;
    r.sym_.insert(r.sym_.end(), b.sym_.begin(), b.sym_.end());
    r.canonicalize();
    return r;
  }

  ExactScalar inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of zero");
    ExactScalar r;
    r.num_ = den_;
    r.den_ = num_;
    r.sym_ = sym_;
    for (auto& s : r.sym_) s.mult = -s.mult;
    r.canonicalize();
    return r;
  }

  friend ExactScalar operator/(const ExactScalar& a, const ExactScalar& b) {
    return a * b.inverse();
  }

  ExactScalar& operator+=(const ExactScalar& o) { return *this = *this + o; }
  ExactScalar& operator-=(const ExactScalar& o) { return *this = *this - o; }
  ExactScalar& operator*=(const ExactScalar& o) { return *this = *this * o; }
  ExactScalar& operator/=(const ExactScalar& o) { return *this = *this / o; }

  ExactScalar pow(int e) const {
    ExactScalar base = *this;
    if (e < 0) {
      base = base.inverse();
      e = -e;
    }
    ExactScalar acc(1);
    while (e > 0) {
      if (e & 1) acc *= base;
      if (e >>= 1) base *= base;
    }
    return acc;
  }

  friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
    try {
      return (a - b).is_zero();
    } catch (const IncompatibleSymbols&) {
      return false;
    }
  }
  friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }

  // Two values can be folded into one sum term exactly when their symbol
  // classes and multiplicities agree (q-exponent offsets within a class do
  // not matter; alignment handles those).
  friend bool symbols_compatible(const ExactScalar& a, const ExactScalar& b) {
    if (a.is_zero() || b.is_zero()) return true;
    if (a.sym_.size() != b.sym_.size()) return false;
    for (size_t i = 0; i < a.sym_.size(); ++i) {
      if (detail::poch_class_cmp(a.sym_[i], b.sym_[i]) != 0) return false;
      if (a.sym_[i].mult != b.sym_[i].mult) return false;
    }
    return true;
  }

  // Replace variables by values.  q itself cannot be rebound.  Bindings
  // that reach an infinite-product argument must be monomial.
  ExactScalar substitute(const std::map<Var, ExactScalar>& bind) const {
    if (bind.count(VQ)) throw std::invalid_argument("q cannot be substituted");
    ExactScalar r;
    r.sym_ = sym_;
    for (auto& s : r.sym_) {
      for (const auto& [v, val] : bind) {
        if (s.arg[v] == 0) continue;
        auto m = val.as_monomial();
        if (!m) {
          throw NonMonomialSubstitutionIntoSymbol("binding for symbol argument is not a monomial");
        }
        assert(s.arg[v] % 2 == 0);
        int k = s.arg[v] / 2;
        s.coef *= m->first.pow(k);
        s.arg[v] = 0;
        s.arg = exps_add(s.arg, exps_scale(m->second, k));
      }
    }
    bool all_mono = true;
    for (const auto& [v, val] : bind) {
      if (!val.as_monomial()) all_mono = false;
    }
    if (all_mono) {
      r.num_ = num_;
      r.den_ = den_;
      for (const auto& [v, val] : bind) {
        auto m = *val.as_monomial();
        r.num_ = r.num_.substitute(v, m.first, m.second);
        r.den_ = r.den_.substitute(v, m.first, m.second);
      }
      if (r.den_.is_zero()) throw DivisionByZero("substitution vanishes on denominator");
      r.canonicalize();
      return r;
    }
    ExactScalar nv = eval_poly(num_, bind), dv = eval_poly(den_, bind);
    ExactScalar sym_part;
    sym_part.num_ = Poly::one();
    sym_part.sym_ = r.sym_;
    sym_part.canonicalize();
    return nv / dv * sym_part;
  }

  // q -> q^2 on everything (numerator, denominator, symbol arguments and
  // steps).  A ring homomorphism, so canonical form is preserved.
  ExactScalar q_squared() const {
    ExactScalar r;
    r.num_ = num_.q_squared();
    r.den_ = den_.q_squared();
    r.sym_ = sym_;
    for (auto& s : r.sym_) {
      s.arg[VQ] *= 2;
      s.g2 *= 2;
    }
    r.canonicalize();
    return r;
  }

 private:
  Poly num_, den_;
  std::vector<PochSymbol> sym_;

  static ExactScalar eval_poly(const Poly& p, const std::map<Var, ExactScalar>& bind) {
    ExactScalar acc;
    for (const auto& t : p.terms()) {
      Exps rest = t.e;
      ExactScalar prod{t.c};
      for (const auto& [v, val] : bind) {
        if (rest[v] == 0) continue;
        assert(rest[v] % 2 == 0);
        prod *= val.pow(rest[v] / 2);
        rest[v] = 0;
      }
      acc += prod * monomial(GaussianRational(1), rest);
    }
    return acc;
  }

  // Value of symbol s re-expressed at the lower q-exponent e0 of its class:
  // the finite product of skipped factors moves into num/den.
  static void lower_symbol(Poly& num, Poly& den, PochSymbol& s, int e0) {
    assert((s.arg[VQ] - e0) % s.g2 == 0 && s.arg[VQ] >= e0);
    Poly fin = Poly::one();
    for (int e = e0; e < s.arg[VQ]; e += s.g2) {
      Exps a = s.arg;
      a[VQ] = e;
      fin *= Poly::one() - Poly::monomial(s.coef, a);
    }
    s.arg[VQ] = e0;
    Poly fp = fin.pow(std::abs(s.mult));
    (s.mult > 0 ? den : num) *= fp;
  }

  // Bring the symbol lists of two canonical values onto a common window so
  // their rational parts can be combined; throws when the class structure
  // or multiplicities differ.
  static void align_symbols(ExactScalar& a, ExactScalar& b) {
    if (a.sym_.size() != b.sym_.size()) {
      throw IncompatibleSymbols("different infinite-product content in sum");
    }
    for (size_t i = 0; i < a.sym_.size(); ++i) {
      PochSymbol &sa = a.sym_[i], &sb = b.sym_[i];
      if (detail::poch_class_cmp(sa, sb) != 0 || sa.mult != sb.mult) {
        throw IncompatibleSymbols("different infinite-product content in sum");
      }
      if (sa.arg[VQ] < sb.arg[VQ]) {
        lower_symbol(b.num_, b.den_, sb, sa.arg[VQ]);
      } else if (sb.arg[VQ] < sa.arg[VQ]) {
        lower_symbol(a.num_, a.den_, sa, sb.arg[VQ]);
      }
    }
  }

  void canonicalize() {
    if (den_.is_zero()) throw DivisionByZero("zero denominator");
    if (num_.is_zero()) {
      den_ = Poly::one();
      sym_.clear();
      return;
    }
    if (!sym_.empty()) {
      std::vector<PochSymbol> keep;
      for (auto& s : sym_) {
        if (s.mult != 0 && !s.coef.is_zero()) keep.push_back(s);
      }
      std::sort(keep.begin(), keep.end(),
                [](const PochSymbol& a, const PochSymbol& b) { return detail::poch_cmp(a, b) < 0; });
      std::vector<PochSymbol> out;
      size_t i = 0;
      while (i < keep.size()) {
        size_t j = i;
        int e0 = keep[i].arg[VQ];
        while (j < keep.size() && detail::poch_class_cmp(keep[i], keep[j]) == 0) {
          e0 = std::min(e0, keep[j].arg[VQ]);
          ++j;
        }
        PochSymbol merged = keep[i];
        merged.arg[VQ] = e0;
        merged.mult = 0;
        for (size_t k = i; k < j; ++k) {
          lower_symbol(num_, den_, keep[k], e0);
          merged.mult += keep[k].mult;
        }
        if (merged.mult != 0) out.push_back(merged);
        i = j;
      }
      sym_ = std::move(out);
    }
    reduce_rational();
    if (num_.is_zero()) {
      den_ = Poly::one();
      sym_.clear();
    }
  }

  void reduce_rational() {
    if (num_.is_zero()) {
      den_ = Poly::one();
      return;
    }
    if (!den_.is_monomial()) {
      Poly g = poly_gcd(num_, den_);
      if (!g.is_one()) {
        num_ = *poly_divide(num_, g);
        den_ = *poly_divide(den_, g);
      }
    }
    // Strip the denominator's monomial part and make it monic; everything
    // moves into the numerator.
    Exps ms = den_.min_exps();
    GaussianRational lc = den_.leading().c;
    GaussianRational inv = lc.inverse();
    num_ = num_.mul_term(inv, exps_neg(ms));
    den_ = den_.mul_term(inv, exps_neg(ms));
  }
};

// (coef * mono ; q^g)_n, the finite product prod_{t<n} (1 - coef mono q^{g t}),
// g in true units.
inline ExactScalar qpoch_finite(const GaussianRational& coef, const Exps& arg, int g, int n) {
  Poly p = Poly::one();
  for (int t = 0; t < n; ++t) {
    Exps a = arg;
    a[VQ] += 2 * g * t;
    p *= Poly::one() - Poly::monomial(coef, a);
  }
  return ExactScalar::from_poly(p);
}

// Gaussian binomial [m, k] with base q^g (g in true units); zero outside
// 0 <= k <= m.  Always a polynomial in q^g.
inline Poly qbinomial_poly(int m, int k, int g) {
  if (k < 0 || k > m) return Poly::zero();
  Poly num = Poly::one(), den = Poly::one();
  for (int t = 1; t <= k; ++t) {
    num *= Poly::one() - poly_qh(2 * g * (m - k + t));
    den *= Poly::one() - poly_qh(2 * g * t);
  }
  auto q = poly_divide(num, den);
  assert(q);
  return *q;
}

inline ExactScalar qbinomial(int m, int k, int g) {
  return ExactScalar::from_poly(qbinomial_poly(m, k, g));
}

// Sum accumulator that tolerates transient symbol-class mismatches: terms
// are grouped by compatibility, and the final result must collapse to a
// single nonzero group (or zero).
class ScalarSum {
 public:
  void add(const ExactScalar& s) {
    if (s.is_zero()) return;
    for (auto& g : groups_) {
      if (symbols_compatible(g, s)) {
        g += s;
        return;
      }
    }
    groups_.push_back(s);
  }

  ExactScalar result() const {
    ExactScalar out;
    bool found = false;
    for (const auto& g : groups_) {
      if (g.is_zero()) continue;
      if (found) throw IncompatibleSymbols("sum does not collapse to a single product class");
      out = g;
      found = true;
    }
    return out;
  }

 private:
  std::vector<ExactScalar> groups_;
};

}  // namespace ybre
