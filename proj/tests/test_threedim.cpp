#include <gtest/gtest.h>

#include "ybre/threedim.hpp"

using namespace ybre;

namespace {

ExactScalar q(int n) { return ExactScalar::qhalf(2 * n); }
const ExactScalar kOne(1);

using T3 = std::map<std::array<int, 3>, ExactScalar>;
using T4 = std::map<std::array<int, 4>, ExactScalar>;

template <typename M, typename K>
void add_to(M& m, const K& key, const ExactScalar& v) {
  if (v.is_zero()) return;
  auto [it, fresh] = m.try_emplace(key, v);
  if (!fresh) it->second += v;
}

template <typename M>
void drop_zeros(M& m) {
  for (auto it = m.begin(); it != m.end();) {
    it = it->second.is_zero() ? m.erase(it) : std::next(it);
  }
}

template <typename M>
bool states_equal(M a, M b) {
  drop_zeros(a);
  drop_zeros(b);
  if (a.size() != b.size()) return false;
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    if (it == b.end() || !(it->second == v)) return false;
  }
  return true;
}

// Site operators: I identity, P raise, M lower, D diagonal.  Doubled sites
// use the squared base.
enum class Op { I, P, M, D };

ExactScalar site_coeff(Op op, bool doubled, int m, int& mout) {
  const int e = doubled ? 4 : 2;
  mout = m;
  switch (op) {
    case Op::I:
      return kOne;
    case Op::P:
      mout = m + 1;
      return kOne;
    case Op::M:
      mout = m - 1;
      return m == 0 ? ExactScalar(0) : kOne - ExactScalar::qhalf(e * m);
    case Op::D:
      return ExactScalar::qhalf(e * m + e / 2);
  }
  return kOne;
}

T3 apply_ops3(const std::array<Op, 3>& ops, const T3& in) {
  T3 out;
  for (const auto& [st, c] : in) {
    std::array<int, 3> t = st;
    ExactScalar v = c;
    for (int s = 0; s < 3; ++s) {
      int mo = 0;
      v *= site_coeff(ops[s], false, t[s], mo);
      t[s] = mo;
    }
    if (t[0] >= 0 && t[1] >= 0 && t[2] >= 0) add_to(out, t, v);
  }
  return out;
}

T3 apply_r3(const T3& in) {
  T3 out;
  for (const auto& [st, c] : in) {
    for (const auto& [t, v] : r3d_apply(st[0], st[1], st[2])) add_to(out, t, c * v);
  }
  return out;
}

T4 apply_ops4(const std::array<Op, 4>& ops, const T4& in) {
  T4 out;
  for (const auto& [st, c] : in) {
    std::array<int, 4> t = st;
    ExactScalar v = c;
    for (int s = 0; s < 4; ++s) {
      int mo = 0;
      v *= site_coeff(ops[s], s % 2 == 0, t[s], mo);
      t[s] = mo;
    }
    if (t[0] >= 0 && t[1] >= 0 && t[2] >= 0 && t[3] >= 0) add_to(out, t, v);
  }
  return out;
}

T4 apply_k3(const T4& in) {
  T4 out;
  for (const auto& [st, c] : in) {
    for (const auto& [t, v] : k3d_apply(st[0], st[1], st[2], st[3])) add_to(out, t, c * v);
  }
  return out;
}

using Side3 = std::vector<std::pair<ExactScalar, std::array<Op, 3>>>;

// Checks R (lhs ops) = (rhs ops) R on all |i,j,k> with entries <= cap.
void expect_exchange3(const Side3& lhs, const Side3& rhs, int cap) {
  for (int i = 0; i <= cap; ++i) {
    for (int j = 0; j <= cap; ++j) {
      for (int k = 0; k <= cap; ++k) {
        T3 in{{{i, j, k}, kOne}};
        T3 a, b;
        for (const auto& [c, ops] : lhs) {
          for (auto& [st, v] : apply_r3(apply_ops3(ops, in))) add_to(a, st, c * v);
        }
        for (const auto& [c, ops] : rhs) {
          for (auto& [st, v] : apply_ops3(ops, apply_r3(in))) add_to(b, st, c * v);
        }
        EXPECT_TRUE(states_equal(a, b)) << i << "," << j << "," << k;
      }
    }
  }
}

TEST(ThreeDim, TripleGoldens) {
  EXPECT_EQ(r3d_element(1, 3, 0, 3, 1, 2), -q(2) * (kOne - q(4)) * (kOne - q(6)));
  EXPECT_EQ(r3d_element(2, 2, 1, 3, 1, 2),
            (kOne + q(2)) * (kOne - q(6)) * (kOne - q(2) - q(6)));
  EXPECT_EQ(r3d_element(4, 0, 3, 3, 1, 2), q(6));
  EXPECT_EQ(r3d_element(3, 1, 2, 3, 1, 2), -q(2) * (-kOne - q(2) + q(6) + q(8) + q(10)));
  EXPECT_EQ(r3d_apply(3, 1, 2).size(), 4u);
}

TEST(ThreeDim, TripleEdgeStates) {
  auto out = r3d_apply(0, 0, 0);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].second, kOne);
  for (int i = 1; i <= 4; ++i) {
    auto a = r3d_apply(i, 0, 0);
    ASSERT_EQ(a.size(), 1u);
    EXPECT_EQ(a[0].first, (std::array<int, 3>{i, 0, 0}));
    EXPECT_EQ(a[0].second, kOne);
    auto c = r3d_apply(0, 0, i);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].second, kOne);
  }
}

TEST(ThreeDim, TripleInvolution) {
  for (int i = 0; i <= 3; ++i) {
    for (int j = 0; j <= 3; ++j) {
      for (int k = 0; k <= 3; ++k) {
        T3 twice = apply_r3(apply_r3(T3{{{i, j, k}, kOne}}));
        drop_zeros(twice);
        ASSERT_EQ(twice.size(), 1u);
        EXPECT_EQ(twice.begin()->first, (std::array<int, 3>{i, j, k}));
        EXPECT_TRUE(twice.begin()->second.is_one());
      }
    }
  }
}

TEST(ThreeDim, TripleParityPattern) {
  for (int i = 0; i <= 3; ++i) {
    for (int j = 0; j <= 3; ++j) {
      for (int k = 0; k <= 3; ++k) {
        for (const auto& [t, v] : r3d_apply(i, j, k)) {
          const int xi = ((t[0] - j) * (t[2] - j) % 2 + 2) % 2;
          for (const auto& term : v.num().terms()) {
            ASSERT_EQ(term.e[VQ] % 2, 0);
            EXPECT_EQ(((term.e[VQ] / 2 - xi) % 2 + 2) % 2, 0);
          }
        }
      }
    }
  }
}

TEST(ThreeDim, TripleExchangeRelations) {
  const ExactScalar mone(-1);
  // R (x k 1) = (x 1 k + k x xbar) R for x = raise or lower
  expect_exchange3({{kOne, {Op::P, Op::D, Op::I}}},
                   {{kOne, {Op::P, Op::I, Op::D}}, {kOne, {Op::D, Op::P, Op::M}}}, 2);
  expect_exchange3({{kOne, {Op::M, Op::D, Op::I}}},
                   {{kOne, {Op::M, Op::I, Op::D}}, {kOne, {Op::D, Op::M, Op::P}}}, 2);
  // R (1 k x) = (k 1 x + xbar x k) R
  expect_exchange3({{kOne, {Op::I, Op::D, Op::P}}},
                   {{kOne, {Op::D, Op::I, Op::P}}, {kOne, {Op::M, Op::P, Op::D}}}, 2);
  expect_exchange3({{kOne, {Op::I, Op::D, Op::M}}},
                   {{kOne, {Op::D, Op::I, Op::M}}, {kOne, {Op::P, Op::M, Op::D}}}, 2);
  // R (1 x 1) = (x 1 x - k x k) R
  expect_exchange3({{kOne, {Op::I, Op::P, Op::I}}},
                   {{kOne, {Op::P, Op::I, Op::P}}, {mone, {Op::D, Op::P, Op::D}}}, 2);
  expect_exchange3({{kOne, {Op::I, Op::M, Op::I}}},
                   {{kOne, {Op::M, Op::I, Op::M}}, {mone, {Op::D, Op::M, Op::D}}}, 2);
  // R (raise lower raise - k 1 k) = (lower raise lower - k 1 k) R
  expect_exchange3({{kOne, {Op::P, Op::M, Op::P}}, {mone, {Op::D, Op::I, Op::D}}},
                   {{kOne, {Op::M, Op::P, Op::M}}, {mone, {Op::D, Op::I, Op::D}}}, 2);
  // [R, k k 1] = [R, 1 k k] = 0
  expect_exchange3({{kOne, {Op::D, Op::D, Op::I}}}, {{kOne, {Op::D, Op::D, Op::I}}}, 2);
  expect_exchange3({{kOne, {Op::I, Op::D, Op::D}}}, {{kOne, {Op::I, Op::D, Op::D}}}, 2);
}

TEST(ThreeDim, FourFoldGoldens) {
  EXPECT_EQ(k3d_element(1, 1, 1, 1, 0, 2, 1, 0), q(5) * (kOne + q(2)) * (kOne - q(2) - q(6)));
  EXPECT_EQ(k3d_element(1, 1, 1, 1, 0, 3, 0, 1),
            -q(2) * (kOne - q(6)) * (kOne - q(2) - q(4) - q(6) - q(8)));
  EXPECT_EQ(k3d_element(1, 1, 1, 1, 1, 0, 2, 0),
            -q(1) * (kOne + q(2)) * (kOne + q(4)) * (kOne - q(4) + q(10)));
  EXPECT_EQ(k3d_element(1, 1, 1, 1, 1, 1, 1, 1),
            (kOne - q(4) - q(8)) * (kOne - q(2) - q(4) + q(8) + q(10)));
  EXPECT_EQ(k3d_element(1, 1, 1, 1, 1, 2, 0, 2),
            -q(5) * (kOne + q(2)) * (kOne - q(4)) *
                (ExactScalar(2) - q(2) + q(4) - ExactScalar(2) * q(6) - q(10)));
  EXPECT_EQ(k3d_element(1, 1, 1, 1, 2, 0, 1, 2),
            q(1) * (kOne + q(2)) * (kOne - q(8)) * (kOne - q(4) - q(8) + q(10) + q(14)));
  EXPECT_EQ(k3d_element(1, 1, 1, 1, 2, 1, 0, 3),
            q(2) * (kOne + q(2)) * (kOne + q(4)) * (kOne - q(6)).pow(2) *
                (kOne - q(2) - q(8)));
  EXPECT_EQ(k3d_element(1, 1, 1, 1, 3, 0, 0, 4),
            q(5) * (kOne + q(2)) * (kOne + q(4)) * (kOne - q(6)) * (kOne - q(8)) *
                (kOne - q(12)));
  // Those are the only nonzero entries in the row: scan the in-sector.
  int nonzero = 0;
  for (int jj = 0; jj <= 3; ++jj) {
    for (int kk = 0; jj + kk <= 3; ++kk) {
      const int ii = 3 - jj - kk;
      const int ll = 4 - jj - 2 * kk;
      if (ll < 0) continue;
      if (!k3d_element(1, 1, 1, 1, ii, jj, kk, ll).is_zero()) ++nonzero;
    }
  }
  EXPECT_EQ(nonzero, 8);
}

TEST(ThreeDim, FourFoldNormalizationAndInvolution) {
  EXPECT_TRUE(k3d_element(0, 0, 0, 0, 0, 0, 0, 0).is_one());
  for (int n1 = 0; n1 <= 2; ++n1) {
    for (int n2 = 0; n2 <= 3; ++n2) {
      for (int j = 0; j <= n1; ++j) {
        for (int k = 0; j + k <= n1 && j + 2 * k <= n2; ++k) {
          const int i = n1 - j - k, l = n2 - j - 2 * k;
          T4 twice = apply_k3(apply_k3(T4{{{i, j, k, l}, kOne}}));
          drop_zeros(twice);
          ASSERT_EQ(twice.size(), 1u) << i << j << k << l;
          EXPECT_EQ(twice.begin()->first, (std::array<int, 4>{i, j, k, l}));
          EXPECT_TRUE(twice.begin()->second.is_one());
        }
      }
    }
  }
}

TEST(ThreeDim, FourFoldParityPattern) {
  for (int i = 0; i <= 2; ++i) {
    for (int j = 0; j <= 2; ++j) {
      for (int k = 0; k <= 1; ++k) {
        for (int l = 0; l <= 2; ++l) {
          for (const auto& [t, v] : k3d_apply(i, j, k, l)) {
            const int eta = ((t[1] * t[3] + j * l) % 2 + 2) % 2;
            for (const auto& term : v.num().terms()) {
              ASSERT_EQ(term.e[VQ] % 2, 0);
              EXPECT_EQ(((term.e[VQ] / 2 - eta) % 2 + 2) % 2, 0);
            }
          }
        }
      }
    }
  }
}

TEST(ThreeDim, ZeroSliceConsistency) {
  // The general entry formula restricted to the zero slice must reproduce
  // the closed slice formula, which forces the transposition symmetry
  // between the two.
  for (int a = 0; a <= 3; ++a) {
    for (int b = 0; b <= 3; ++b) {
      for (int i = 0; i <= a + b; ++i) {
        const int j = a + b - i;
        for (int d = 0; d <= 3; ++d) {
          const int l = b + d - j;
          if (l < 0) continue;
          ExactScalar via_general = k3d_element(a, b, 0, d, i, j, 0, l);
          ExactScalar direct = detail::k3d_element_zero_slice(a, b, d, i, j, l);
          EXPECT_EQ(via_general, direct) << a << b << d << "|" << i << j << l;
        }
      }
    }
  }
}

TEST(ThreeDim, FourFoldExchangeSmoke) {
  // Two of the intertwining identities that characterize the four-fold
  // operator, checked on a block of low-weight states: commutation with
  // 1 x k x K x k and the raise-raise relation
  // [1 x a+ x 1 x a+ - 1 x k x A+ x k, K] = 0.
  const ExactScalar mone(-1);
  std::vector<std::pair<std::vector<std::pair<ExactScalar, std::array<Op, 4>>>,
                        std::vector<std::pair<ExactScalar, std::array<Op, 4>>>>>
      identities = {
          {{{kOne, {Op::I, Op::D, Op::D, Op::D}}}, {{kOne, {Op::I, Op::D, Op::D, Op::D}}}},
          {{{kOne, {Op::I, Op::P, Op::I, Op::P}}, {mone, {Op::I, Op::D, Op::P, Op::D}}},
           {{kOne, {Op::I, Op::P, Op::I, Op::P}}, {mone, {Op::I, Op::D, Op::P, Op::D}}}},
      };
  for (const auto& [lhs, rhs] : identities) {
    for (int i = 0; i <= 1; ++i) {
      for (int j = 0; j <= 1; ++j) {
        for (int k = 0; k <= 1; ++k) {
          for (int l = 0; l <= 1; ++l) {
            T4 in{{{i, j, k, l}, kOne}};
            T4 a, b;
            for (const auto& [c, ops] : lhs) {
              for (auto& [st, v] : apply_k3(apply_ops4(ops, in))) add_to(a, st, c * v);
            }
            for (const auto& [c, ops] : rhs) {
              for (auto& [st, v] : apply_ops4(ops, apply_k3(in))) add_to(b, st, c * v);
            }
            EXPECT_TRUE(states_equal(a, b)) << i << j << k << l;
          }
        }
      }
    }
  }
}

}  // namespace
