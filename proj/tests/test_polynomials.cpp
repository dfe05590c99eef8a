#include <gtest/gtest.h>

#include <random>

#include "gauduchon/polynomials.hpp"

using namespace gauduchon;

namespace {

Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

}  // namespace

TEST(Poly, RingBasics) {
  const RationalPoly s = RationalPoly::s();
  const RationalPoly p = (s - RationalPoly(1)) * (s + RationalPoly(1));
  EXPECT_EQ(p.degree(), 2);
  EXPECT_EQ(p.coeff(0), q(-1));
  EXPECT_EQ(p.coeff(1), q(0));
  EXPECT_EQ(p.exact_div(s - RationalPoly(1)), s + RationalPoly(1));
  EXPECT_THROW(p.exact_div(s), std::domain_error);
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_EQ((p - p).degree(), -1);
  EXPECT_EQ(p.to_string(), "s^2 - 1");
}

TEST(Abc, Values) {
  const Abc t = abc();
  EXPECT_EQ(t.a.degree(), 3);
  EXPECT_EQ(t.b.degree(), 3);
  EXPECT_EQ(t.c.degree(), 2);
  EXPECT_EQ(t.a.evaluate(q(2)), q(-8));
  EXPECT_EQ(t.b.evaluate(q(2)), q(-8));
  EXPECT_EQ(t.c.evaluate(q(2)), q(12));
  EXPECT_EQ(t.c.evaluate(q(1, 2)), q(0));
  EXPECT_EQ(t.c.evaluate(q(1)), q(0));
  EXPECT_EQ(t.a.evaluate(q(0)), q(0));
  EXPECT_EQ(t.b.evaluate(q(0)), q(0));
  EXPECT_EQ(t.c.evaluate(q(0)), q(4));
}

TEST(CoefficientIdentities, AllHold) {
  for (const auto& c : coefficient_identities()) EXPECT_TRUE(c.pass) << c.name << " diff " << c.difference.to_string();
}

TEST(CoefficientIdentities, Z2ExpansionAndZ1Root) {
  const PolyMatrix m = system_matrix();
  const RationalPoly s = RationalPoly::s();
  // s^3 (a - b + s^3) = 2 s^6 - 2 s^5
  EXPECT_EQ(m(3, 1), RationalPoly(2) * s_power(6) - RationalPoly(2) * s_power(5));
  EXPECT_EQ(m(3, 1).degree(), 6);
  EXPECT_EQ(m(3, 0).evaluate(q(2, 3)), q(0));
}

TEST(SystemMatrix, Shape) {
  const PolyMatrix m = system_matrix();
  EXPECT_EQ(m(0, 3), abc().c);
  EXPECT_EQ(m(0, 3).degree(), 2);
  EXPECT_TRUE(m(3, 3).is_zero());
  EXPECT_TRUE(m(0, 0).is_zero());
  const Matrix<Rational> r = evaluate(m, q(2, 3));
  EXPECT_EQ(r(0, 0), q(0));
  EXPECT_EQ(r(0, 1), q(16, 27));
  EXPECT_EQ(r(0, 2), q(16, 27));
  EXPECT_EQ(r(0, 3), q(-4, 9));
}

TEST(Determinant, MatchesFactoredForm) {
  const RationalPoly det = determinant();
  EXPECT_EQ(det, factored_determinant());
  EXPECT_EQ(determinant_bareiss(system_matrix()), determinant_cofactor(system_matrix()));
  EXPECT_EQ(det.degree(), 20);
  EXPECT_EQ(det.leading(), q(23040));
  EXPECT_EQ(det.coeff(8), q(8192));
  EXPECT_EQ(det.evaluate(q(0)), q(0));
  // 64 * 3^8 * 1 * 2^3 * 5^3 * 7^2 * 11
  EXPECT_EQ(det.evaluate(q(3)), Rational(226328256000L));
  EXPECT_EQ(factored_determinant().evaluate(q(3)), Rational(226328256000L));
  const RationalPoly s1 = RationalPoly::s() - RationalPoly(1);
  const RationalPoly rest = det.exact_div(s_power(8)).exact_div(s1 * s1 * s1);
  EXPECT_NE(rest.evaluate(q(1)), q(0));
}

TEST(Determinant, BareissOnIntegerMatrix) {
  PolyMatrix m(3, 3);
  const long v[3][3] = {{0, 2, 1}, {3, 1, 4}, {5, 9, 2}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = RationalPoly(Rational(v[i][j]));
  // expanded by hand: 0*(2-36) - 2*(6-20) + 1*(27-5) = 50
  EXPECT_EQ(determinant_bareiss(m), RationalPoly(Rational(50)));
  EXPECT_EQ(determinant_cofactor(m), RationalPoly(Rational(50)));
}

TEST(SingularSet, RootsAndMultiplicities) {
  const std::vector<Root> expected{{q(0), 8}, {q(1, 2), 3}, {q(2, 3), 2}, {q(4, 5), 1}, {q(1), 3}, {q(2), 3}};
  EXPECT_EQ(singular_set(), expected);
}

TEST(SingularSet, LeftoverFactorThrows) {
  const RationalPoly s = RationalPoly::s();
  EXPECT_THROW(rational_roots(s * s + RationalPoly(1)), std::runtime_error);
  const auto r = rational_roots((s - RationalPoly(q(3, 7))) * s);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[1].value, q(3, 7));
}

TEST(ReducedRank, ExceptionalValues) {
  const ReducedRank r45 = reduced_rank(q(4, 5));
  EXPECT_EQ(r45.rank, 3);
  const ReducedRank r23 = reduced_rank(q(2, 3));
  EXPECT_EQ(r23.rank, 2);
  using V = std::array<mpz_class, 3>;
  EXPECT_EQ(r23.rows[0], (V{0, 1, 1}));
  EXPECT_EQ(r23.rows[1], (V{0, 0, 0}));
  EXPECT_EQ(r23.rows[2], (V{0, 1, -1}));
  EXPECT_EQ(r23.rows[3], (V{0, 1, -1}));
  EXPECT_EQ(reduced_rank(q(3)).rank, 3);
}

TEST(ConcludeCZero, Cases) {
  EXPECT_TRUE(conclude_C_zero(q(3)));
  EXPECT_FALSE(conclude_C_zero(q(2, 3)));
  EXPECT_FALSE(conclude_C_zero(q(0)));
  EXPECT_FALSE(conclude_C_zero(q(4, 5)));
}

TEST(Property, GenericRationalParameterHasFullRank) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> num(-50, 50), den(1, 17);
  const auto sing = singular_set();
  int tested = 0;
  while (tested < 20) {
    const Rational s0 = q(num(rng), den(rng));
    bool singular = false;
    for (const auto& r : sing) singular = singular || r.value == s0;
    if (singular) continue;
    EXPECT_EQ(rank(evaluate(system_matrix(), s0)), 4) << s0;
    EXPECT_TRUE(conclude_C_zero(s0));
    ++tested;
  }
}

TEST(Mutation, CoefficientFlipsAreDetected) {
  for (char k : {'a', 'b', 'c'}) {
    const Claims bad = tampered_claims(k);
    bool any_fail = false;
    for (const auto& c : coefficient_identities(bad)) any_fail = any_fail || !c.pass;
    EXPECT_TRUE(any_fail) << k;
    EXPECT_NE(determinant(bad), factored_determinant()) << k;
  }
  EXPECT_THROW(tampered_claims('x'), std::invalid_argument);
}

TEST(Mutation, EntryFlipsAreDetected) {
  const PolyMatrix m = system_matrix();
  for (int r = 1; r <= 4; ++r)
    for (int c = 1; c <= 4; ++c) {
      if (m(r - 1, c - 1).is_zero()) continue;
      const Claims bad = tampered_entry(r, c);
      bool any_fail = false;
      for (const auto& chk : coefficient_identities(bad)) any_fail = any_fail || !chk.pass;
      EXPECT_TRUE(any_fail) << r << "," << c;
      EXPECT_NE(determinant(bad), factored_determinant()) << r << "," << c;
    }
}
