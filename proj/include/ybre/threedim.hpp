#pragma once

#include <array>
#include <map>
#include <mutex>
#include <vector>

#include "ybre/qboson.hpp"

namespace ybre {

// Entries of two involutive, weight-preserving exchange operators: one on
// the triple Fock tensor power of the single-base algebra, one on the
// four-fold alternation of doubled and single Fock spaces.  Every entry is
// an exact Laurent-free polynomial in q.  Also defined here are the local
// two-dimensional-auxiliary-space vertex and boundary operators with
// q-boson entries that the matrix-product constructions contract against.

namespace detail {

// (q^2;q^2)_n and (q^4;q^4)_n, plus shifted-ratio variants
// (x;x)_{base+extra} / (x;x)_base which stay polynomial.
inline ExactScalar poch2(int n) {
  return qpoch_finite(GaussianRational(1), exps_of(VQ, 4), 2, n);
}
inline ExactScalar poch4(int n) {
  return qpoch_finite(GaussianRational(1), exps_of(VQ, 8), 4, n);
}
inline ExactScalar poch2_ratio(int base, int extra) {
  return qpoch_finite(GaussianRational(1), exps_of(VQ, 4 * (base + 1)), 2, extra);
}
inline ExactScalar poch4_ratio(int base, int extra) {
  return qpoch_finite(GaussianRational(1), exps_of(VQ, 8 * (base + 1)), 4, extra);
}

template <size_t N>
class EntryCache {
 public:
  template <typename F>
  ExactScalar get(const std::array<int, N>& key, F&& compute) {
    {
      std::lock_guard<std::mutex> lk(mu_);
      auto it = map_.find(key);
      if (it != map_.end()) return it->second;
    }
    ExactScalar v = compute();
    std::lock_guard<std::mutex> lk(mu_);
    return map_.emplace(key, std::move(v)).first->second;
  }

 private:
  std::mutex mu_;
  std::map<std::array<int, N>, ExactScalar> map_;
};

}  // namespace detail

// Entry <a,b,c| R |i,j,k> of the triple-Fock exchange operator.  Nonzero
// only when a+b = i+j and b+c = j+k; the value is a polynomial in q whose
// exponents all agree with (a-j)(c-j) mod 2.
inline ExactScalar r3d_element(int a, int b, int c, int i, int j, int k) {
  if (a < 0 || b < 0 || c < 0 || i < 0 || j < 0 || k < 0) return ExactScalar(0);
  if (a + b != i + j || b + c != j + k) return ExactScalar(0);
  static detail::EntryCache<6> cache;
  return cache.get({a, b, c, i, j, k}, [&] {
    ExactScalar sum(0);
    for (int mu = std::max(0, b - j); mu <= std::min(b, i); ++mu) {
      const int la = b - mu;
      const long e = static_cast<long>(i) * (c - j) + static_cast<long>(k + 1) * la +
                     static_cast<long>(mu) * (mu - k);
      ExactScalar term = ExactScalar::qhalf(static_cast<int>(2 * e)) *
                         detail::poch2_ratio(c, mu) * qbinomial(i, mu, 2) * qbinomial(j, la, 2);
      if (la % 2 != 0) {
        sum -= term;
      } else {
        sum += term;
      }
    }
    if (!sum.den().is_one()) throw std::logic_error("triple-Fock entry is not polynomial");
    return sum;
  });
}

namespace detail {

// The c = k = 0 slice of the four-fold exchange operator, entry
// <a,b,0,d | K | i,j,0,l>.  The general entry reduces to this slice.
inline ExactScalar k3d_element_zero_slice_impl(int a, int b, int d, int i, int j, int l) {
  if (a < 0 || b < 0 || d < 0 || i < 0 || j < 0 || l < 0) return ExactScalar(0);
  if (a + b != i + j || b + d != j + l) return ExactScalar(0);
  ExactScalar sum(0);
  for (int la = std::max(0, b - j); la <= std::min(l, b); ++la) {
    const long phi = static_cast<long>(i + a + 1) * (b + l - 2 * la) + b - l;
    ExactScalar term = ExactScalar::qhalf(static_cast<int>(2 * phi)) * poch4_ratio(a, la) *
                       poch2(j) * poch2(l) /
                       (poch2(la) * poch2(l - la) * poch2(b - la) * poch2(j - b + la));
    if ((b + la) % 2 != 0) {
      sum -= term;
    } else {
      sum += term;
    }
  }
  return sum;
}

inline ExactScalar k3d_element_zero_slice(int a, int b, int d, int i, int j, int l) {
  static EntryCache<6> cache;
  if (a < 0 || b < 0 || d < 0 || i < 0 || j < 0 || l < 0) return ExactScalar(0);
  return cache.get({a, b, d, i, j, l},
                   [&] { return k3d_element_zero_slice_impl(a, b, d, i, j, l); });
}

}  // namespace detail

// Entry <a,b,c,d| K |i,j,k,l> of the four-fold exchange operator on
// F' x F x F' x F (F' the doubled-base Fock space).  Nonzero only when
// a+b+c = i+j+k and b+2c+d = j+2k+l; the value is a polynomial in q whose
// exponents all agree with bd + jl mod 2.
inline ExactScalar k3d_element(int a, int b, int c, int d, int i, int j, int k, int l) {
  if (a < 0 || b < 0 || c < 0 || d < 0 || i < 0 || j < 0 || k < 0 || l < 0) {
    return ExactScalar(0);
  }
  if (a + b + c != i + j + k || b + 2 * c + d != j + 2 * k + l) return ExactScalar(0);
  static detail::EntryCache<8> cache;
  return cache.get({a, b, c, d, i, j, k, l}, [&] {
    ExactScalar sum(0);
    const int amax = std::min(std::min(b, d), k);
    for (int al = 0; al <= amax; ++al) {
      for (int be = 0; be <= std::min(k - al, c); ++be) {
        for (int ga = 0; ga <= c - be; ++ga) {
          const int s = al + be + ga;
          if (j + k - al - be < 0 || k + l - al - be < 0) continue;
          ExactScalar inner =
              detail::k3d_element_zero_slice(i, j + k - s, l + k - s, a, b + c - s, c + d - s);
          if (inner.is_zero()) continue;
          const long phi = static_cast<long>(al) * (al + 2 * c - 2 * be - 1) +
                           static_cast<long>(2 * be - c) * (b + c + d) +
                           static_cast<long>(ga) * (ga - 1) - static_cast<long>(k) * (j + k + l);
          ExactScalar num = detail::poch2(k) * detail::poch2(c - be) *
                            detail::poch2(j + k - al - be) * detail::poch2(k + l - al - be);
          ExactScalar den = detail::poch4(c - be) * detail::poch2(al) * detail::poch2(be) *
                            detail::poch2(ga) * detail::poch2(b - al) * detail::poch2(d - al) *
                            detail::poch2(k - al - be) * detail::poch2(c - be - ga);
          ExactScalar term =
              ExactScalar::qhalf(static_cast<int>(2 * phi)) * inner * num / den;
          if ((al + ga) % 2 != 0) {
            sum -= term;
          } else {
            sum += term;
          }
        }
      }
    }
    ExactScalar r = detail::poch4(i) / detail::poch4(a) * sum;
    if (!r.den().is_one()) throw std::logic_error("four-fold entry is not polynomial");
    return r;
  });
}

// All nonzero output states of the triple-Fock operator on |i,j,k>.
inline std::vector<std::pair<std::array<int, 3>, ExactScalar>> r3d_apply(int i, int j, int k) {
  std::vector<std::pair<std::array<int, 3>, ExactScalar>> out;
  for (int b = 0; b <= std::min(i + j, j + k); ++b) {
    const int a = i + j - b, c = j + k - b;
    ExactScalar v = r3d_element(a, b, c, i, j, k);
    if (!v.is_zero()) out.push_back({{a, b, c}, std::move(v)});
  }
  return out;
}

// All nonzero output states of the four-fold operator on |i,j,k,l>.
inline std::vector<std::pair<std::array<int, 4>, ExactScalar>> k3d_apply(int i, int j, int k,
                                                                         int l) {
  std::vector<std::pair<std::array<int, 4>, ExactScalar>> out;
  const int n1 = i + j + k, n2 = j + 2 * k + l;
  for (int c = 0; c <= n1 && 2 * c <= n2; ++c) {
    for (int b = 0; b + c <= n1 && b + 2 * c <= n2; ++b) {
      const int a = n1 - b - c, d = n2 - b - 2 * c;
      ExactScalar v = k3d_element(a, b, c, d, i, j, k, l);
      if (!v.is_zero()) out.push_back({{a, b, c, d}, std::move(v)});
    }
  }
  return out;
}

// Vertex operator on (two-dimensional space)^2 x doubled Fock space: the
// word mapped to by the transition (alpha, beta) -> (gamma, delta).  A zero
// entry is returned as a word with zero scale.
inline OperatorWord local_L(int gamma, int delta, int alpha, int beta) {
  OperatorWord w;
  w.alg = Algebra::Doubled;
  w.scale = ExactScalar(0);
  auto set = [&w](int sign, std::vector<Generator> ls) {
    w.scale = ExactScalar(sign);
    w.letters = std::move(ls);
  };
  if (alpha == 0 && beta == 0 && gamma == 0 && delta == 0) set(1, {});
  if (alpha == 1 && beta == 1 && gamma == 1 && delta == 1) set(1, {});
  if (alpha == 0 && beta == 1 && gamma == 0 && delta == 1) set(1, {gen_diag()});
  if (alpha == 0 && beta == 1 && gamma == 1 && delta == 0) set(1, {gen_raise()});
  if (alpha == 1 && beta == 0 && gamma == 0 && delta == 1) set(1, {gen_lower()});
  if (alpha == 1 && beta == 0 && gamma == 1 && delta == 0) set(-1, {gen_diag()});
  return w;
}

// Boundary operator on (two-dimensional space) x single Fock space: the
// word mapped to by the transition alpha -> beta.
inline OperatorWord local_K(int beta, int alpha) {
  OperatorWord w;
  w.alg = Algebra::Single;
  w.scale = ExactScalar(1);
  if (alpha == 0 && beta == 0) {
    w.letters = {gen_raise()};
  } else if (alpha == 0 && beta == 1) {
    w.letters = {gen_diag()};
  } else if (alpha == 1 && beta == 0) {
    w.scale = ExactScalar(-1);
    w.letters = {gen_diag()};
  } else {
    w.letters = {gen_lower()};
  }
  return w;
}

}  // namespace ybre
