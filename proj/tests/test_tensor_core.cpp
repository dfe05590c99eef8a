#include <gtest/gtest.h>

#include <random>

#include "gauduchon/frame_tensor.hpp"

using namespace gauduchon;

namespace {

using K = SlotKind;

Complex rand_c(std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  return {d(rng), d(rng)};
}

FrameTensor<Complex> random_tensor(int n, std::vector<SlotKind> slots, std::mt19937_64& rng) {
  FrameTensor<Complex> t(n, std::move(slots));
  for (auto& x : t.data()) x = rand_c(rng);
  return t;
}

GaussRational rand_g(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(-5, 5), den(1, 4);
  return {Rational(d(rng), den(rng)), Rational(d(rng), den(rng))};
}

// Random unitary from Gram-Schmidt on a random complex matrix.
Matrix<Complex> random_unitary(int n, std::mt19937_64& rng) {
  Matrix<Complex> m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rand_c(rng);
  for (int c = 0; c < n; ++c) {
    for (int p = 0; p < c; ++p) {
      Complex dot{};
      for (int r = 0; r < n; ++r) dot += std::conj(m(r, p)) * m(r, c);
      for (int r = 0; r < n; ++r) m(r, c) -= dot * m(r, p);
    }
    double norm = 0;
    for (int r = 0; r < n; ++r) norm += std::norm(m(r, c));
    norm = std::sqrt(norm);
    for (int r = 0; r < n; ++r) m(r, c) /= norm;
  }
  return m;
}

// LCK torsion T^k_ij = a_i d^k_j - a_j d^k_i with slots (up, down, down).
FrameTensor<Complex> lck(const std::vector<Complex>& a) {
  const int n = static_cast<int>(a.size());
  FrameTensor<Complex> t(n, {K::HolUp, K::HolDown, K::HolDown});
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) t.at({k, i, j}) = (k == j ? a[i] : 0.0) - (k == i ? a[j] : 0.0);
  return t;
}

FrameTensor<Complex> eta_of(const FrameTensor<Complex>& t) { return contract(t, 0, 1); }

double norm2(const FrameTensor<Complex>& t) {
  FrameTensor<Complex> p = outer(t, conjugate(t));
  // pair the last slot of t with the last slot of conj(t), repeatedly
  for (int m = t.rank(); m >= 1; --m) p = contract(p, m - 1, 2 * m - 1);
  return p.value().real();
}

}  // namespace

TEST(FrameTensor, ConstructionChecks) {
  EXPECT_THROW(FrameTensor<Complex>(0, {}), std::invalid_argument);
  EXPECT_THROW(FrameTensor<Complex>(2, {K::HolUp}, {1.0}), std::invalid_argument);
  FrameTensor<Complex> t(3, {K::HolUp, K::HolDown});
  EXPECT_EQ(t.data().size(), 9u);
  EXPECT_THROW(t.at({0, 3}), std::out_of_range);
  EXPECT_THROW(t.at({0}), std::out_of_range);
}

TEST(Contract, TraceOfIdentity) {
  const auto id = FrameTensor<GaussRational>::identity(4);
  EXPECT_EQ(contract(id, 0, 1).value(), GaussRational(4));
}

TEST(Contract, Errors) {
  FrameTensor<Complex> t(2, {K::HolUp, K::HolUp, K::AntiDown});
  EXPECT_THROW(contract(t, 0, 1), std::invalid_argument);
  EXPECT_THROW(contract(t, 0, 5), std::out_of_range);
  EXPECT_THROW(contract(t, 1, 1), std::invalid_argument);
  EXPECT_THROW(contract(t, 0, 2), std::invalid_argument);
}

TEST(Contract, Legality) {
  EXPECT_TRUE(contractible(K::HolUp, K::HolDown));
  EXPECT_TRUE(contractible(K::AntiUp, K::AntiDown));
  EXPECT_TRUE(contractible(K::HolUp, K::AntiUp));
  EXPECT_TRUE(contractible(K::HolDown, K::AntiDown));
  EXPECT_FALSE(contractible(K::HolUp, K::HolUp));
  EXPECT_FALSE(contractible(K::HolUp, K::AntiDown));
  EXPECT_FALSE(contractible(K::HolDown, K::AntiUp));
}

TEST(Contract, LckUContraction) {
  // n = 2, a = (1, 0): U^i_j = T^i_jk conj(eta_k) is diag(0, 1)
  const auto t = lck({1.0, 0.0});
  const auto eta = eta_of(t);
  EXPECT_NEAR(std::abs(eta.at({0}) - Complex(-1, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(eta.at({1})), 0.0, 1e-15);
  const auto u = contract(outer(t, conjugate(eta)), 2, 3);
  EXPECT_NEAR(std::abs(u.at({0, 0})), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u.at({1, 1}) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u.at({0, 1})), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u.at({1, 0})), 0.0, 1e-15);
}

TEST(Contract, IwasawaTorsionNorm) {
  FrameTensor<GaussRational> t(3, {K::HolUp, K::HolDown, K::HolDown});
  t.at({2, 0, 1}) = Rational(1, 2);
  t.at({2, 1, 0}) = Rational(-1, 2);
  auto p = outer(t, conjugate(t));
  p = contract(p, 2, 5);
  p = contract(p, 1, 3);
  p = contract(p, 0, 1);
  EXPECT_EQ(p.value(), GaussRational(Rational(1, 2)));
}

TEST(Conjugate, Involution) {
  std::mt19937_64 rng(1);
  FrameTensor<GaussRational> t(3, {K::HolUp, K::AntiDown, K::HolDown});
  for (auto& x : t.data()) x = rand_g(rng);
  const auto c = conjugate(t);
  EXPECT_EQ(c.slots()[0], K::AntiUp);
  EXPECT_EQ(c.slots()[1], K::HolDown);
  const auto cc = conjugate(c);
  EXPECT_EQ(cc.slots(), t.slots());
  EXPECT_TRUE((cc - t).is_exactly_zero());
  FrameTensor<GaussRational> z(2, {K::HolUp});
  EXPECT_TRUE(conjugate(z).is_exactly_zero());
}

TEST(Conjugate, CommutesWithContractionExact) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    FrameTensor<GaussRational> t(3, {K::HolUp, K::HolDown, K::AntiDown});
    for (auto& x : t.data()) x = rand_g(rng);
    for (auto [a, b] : {std::pair{0, 1}, std::pair{1, 2}}) {
      const auto lhs = conjugate(contract(t, a, b));
      const auto rhs = contract(conjugate(t), a, b);
      EXPECT_TRUE((lhs - rhs).is_exactly_zero());
    }
  }
}

TEST(Conjugate, CommutesWithContractionFloat) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = random_tensor(4, {K::AntiUp, K::HolDown, K::AntiDown}, rng);
    EXPECT_LE((conjugate(contract(t, 0, 2)) - contract(conjugate(t), 0, 2)).max_abs(), 1e-12);
  }
}

TEST(ChangeFrame, IdentityAndErrors) {
  std::mt19937_64 rng(4);
  const auto t = random_tensor(3, {K::HolUp, K::HolDown, K::AntiDown}, rng);
  EXPECT_LE((change_frame(t, Matrix<Complex>::identity(3)) - t).max_abs(), 0.0);
  Matrix<Complex> bad = Matrix<Complex>::identity(3);
  bad(0, 1) = 0.5;
  EXPECT_THROW(change_frame(t, bad), std::invalid_argument);
  EXPECT_THROW(change_frame(t, Matrix<Complex>::identity(2)), std::invalid_argument);
}

TEST(ChangeFrame, ExactPermutationWithPhase) {
  // e'_0 = i e_1, e'_1 = e_0
  Matrix<GaussRational> u(2, 2);
  u(1, 0) = GaussRational::i();
  u(0, 1) = GaussRational(1);
  FrameTensor<GaussRational> v(2, {K::HolDown});
  v.at({0}) = GaussRational(3);
  v.at({1}) = GaussRational(5);
  const auto w = change_frame(v, u);
  EXPECT_EQ(w.at({0}), GaussRational(0, 5));
  EXPECT_EQ(w.at({1}), GaussRational(3));
  FrameTensor<GaussRational> x(2, {K::HolUp});
  x.at({1}) = GaussRational(1);  // the vector e_1 = -i e'_0
  const auto y = change_frame(x, u);
  EXPECT_EQ(y.at({0}), GaussRational(0, -1));
  EXPECT_EQ(y.at({1}), GaussRational(0));
}

TEST(ChangeFrame, ScalarInvariantsUnderRandomUnitaries) {
  std::mt19937_64 rng(5);
  const std::vector<Complex> a{{1.0, 0.5}, {-0.3, 2.0}, {0.7, -1.1}};
  const auto t = lck(a);
  const double t2 = norm2(t);
  const double e2 = norm2(eta_of(t));
  for (int trial = 0; trial < 100; ++trial) {
    const auto u = random_unitary(3, rng);
    const auto tt = change_frame(t, u);
    EXPECT_NEAR(norm2(tt), t2, 1e-10);
    EXPECT_NEAR(norm2(eta_of(tt)), e2, 1e-10);
    EXPECT_LE((eta_of(tt) - change_frame(eta_of(t), u)).max_abs(), 1e-10);
  }
}

TEST(ChangeFrame, ZeroStaysZero) {
  std::mt19937_64 rng(6);
  FrameTensor<Complex> z(3, {K::HolDown});
  for (int trial = 0; trial < 10; ++trial) EXPECT_EQ(change_frame(z, random_unitary(3, rng)).max_abs(), 0.0);
}

TEST(Antisymmetry, Operations) {
  std::mt19937_64 rng(7);
  FrameTensor<GaussRational> t(3, {K::HolUp, K::HolDown, K::HolDown});
  for (auto& x : t.data()) x = rand_g(rng);
  const auto at = antisymmetrize(t, 1, 2);
  EXPECT_EQ(antisymmetry_defect(at, 1, 2), 0.0);
  EXPECT_TRUE((antisymmetrize(at, 1, 2) - at).is_exactly_zero());
  EXPECT_THROW(swap_slots(t, 0, 1), std::invalid_argument);
}
