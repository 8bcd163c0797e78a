#include <gtest/gtest.h>

#include "support/testkit.hpp"
#include "unil/io/json.hpp"
#include "unil/rings/named.hpp"
#include "unil/rings/polynomial.hpp"

using namespace unil;

namespace {

Vec ints(std::initializer_list<long long> v) {
  Vec out;
  for (long long x : v) out.push_back(Scalar(x));
  return out;
}

}  // namespace

TEST(GroupRing, F2C4) {
  FiniteGroup c4 = cyclic_group(4);
  InvolutiveRing r = group_ring(BasePID::f2(), c4);
  EXPECT_EQ(r.rank(), 4u);
  int t = 1;
  ASSERT_EQ(c4.element_order(t), 4u);
  const int t3 = c4.power(t, 3);
  EXPECT_TRUE(vectors_equal(r.involute(r.basis(std::size_t(t))), r.basis(std::size_t(t3))));
  EXPECT_TRUE(vectors_equal(r.involute(r.basis(std::size_t(t3))), r.basis(std::size_t(t))));
  EXPECT_NO_THROW(r.verify_axioms());
  EXPECT_TRUE(r.is_commutative());
}

TEST(GroupRing, Q8Noncommutative) {
  InvolutiveRing r = group_ring(BasePID::integers(), quaternionic_group(3));
  EXPECT_EQ(r.rank(), 8u);
  EXPECT_NO_THROW(r.verify_axioms());
  EXPECT_FALSE(r.is_commutative());
}

TEST(GroupRing, InvolutionReversesProducts) {
  testkit::Rng rng(23);
  InvolutiveRing r = group_ring(BasePID::integers(), symmetric_group(3));
  for (int trial = 0; trial < 40; ++trial) {
    Vec a(r.rank()), b(r.rank());
    for (std::size_t i = 0; i < r.rank(); ++i) {
      a[i] = Scalar(rng.range(-3, 3));
      b[i] = Scalar(rng.range(-3, 3));
    }
    ASSERT_TRUE(vectors_equal(r.involute(r.multiply(a, b)), r.multiply(r.involute(b), r.involute(a))));
    ASSERT_TRUE(vectors_equal(r.involute(r.involute(a)), a));
  }
}

TEST(Cyclotomic, GaussianIntegers) {
  InvolutiveRing r = cyclotomic_ring(4);
  ASSERT_EQ(r.rank(), 2u);
  Vec i = r.basis(1);
  EXPECT_TRUE(vectors_equal(r.multiply(i, i), ints({-1, 0})));
  EXPECT_TRUE(vectors_equal(r.involute(i), ints({0, -1})));
}

TEST(Cyclotomic, Eisenstein) {
  InvolutiveRing r = cyclotomic_ring(3);
  ASSERT_EQ(r.rank(), 2u);
  EXPECT_TRUE(vectors_equal(r.involute(r.basis(1)), ints({-1, -1})));
  EXPECT_NO_THROW(r.verify_axioms());
}

TEST(Cyclotomic, RankIsPhi) {
  for (std::uint64_t m : {1, 2, 3, 5, 8, 9, 12, 15, 16, 21}) {
    InvolutiveRing r = cyclotomic_ring(m);
    EXPECT_EQ(r.rank(), euler_phi(m)) << m;
    Vec z = r.rank() > 1 ? r.basis(1) : r.scalar(Scalar(m == 2 ? -1 : 1));
    EXPECT_TRUE(vectors_equal(r.power(z, m), r.one())) << m;
  }
}

TEST(Cyclotomic, PolynomialOracle) {
  // Phi_12 = x^4 - x^2 + 1, Phi_15 has degree 8
  EXPECT_EQ(cyclotomic_polynomial(12), (IntPoly{1, 0, -1, 0, 1}));
  EXPECT_EQ(cyclotomic_polynomial(15).size(), 9u);
  // x^n - 1 is the product of Phi_d over d | n
  for (std::uint64_t n : {6, 8, 12, 15}) {
    IntPoly prod{1};
    for (auto d : divisors(n)) prod = poly_mul(prod, cyclotomic_polynomial(d));
    IntPoly expect(n + 1, 0);
    expect[0] = -1;
    expect[n] = 1;
    EXPECT_EQ(prod, expect) << n;
  }
}

TEST(Twisted, DihedralQuotient) {
  InvolutiveRing r = cyclotomic_quadratic_extension(8, {QuadraticTwist::Conjugation, 1, 1});
  ASSERT_EQ(r.rank(), 8u);
  EXPECT_NO_THROW(r.verify_axioms());
  const Vec zeta = r.basis(1), x = r.basis(4);
  EXPECT_TRUE(vectors_equal(r.multiply(x, x), r.one()));
  // x zeta x^-1 = zeta^-1 = zeta^7
  EXPECT_TRUE(vectors_equal(r.multiply(r.multiply(x, zeta), x), r.power(zeta, 7)));
  EXPECT_FALSE(r.is_commutative());
}

TEST(Twisted, QuaternionQuotient) {
  InvolutiveRing r = cyclotomic_quadratic_extension(4, {QuadraticTwist::Conjugation, -1, 1});
  ASSERT_EQ(r.rank(), 4u);
  EXPECT_NO_THROW(r.verify_axioms());
  const Vec j = r.basis(2);
  EXPECT_TRUE(vectors_equal(r.multiply(j, j), r.scalar(Scalar(-1))));
}

TEST(Twisted, SemidihedralQuotient) {
  InvolutiveRing r = cyclotomic_quadratic_extension(8, {QuadraticTwist::NegativeConjugation, 1, 1});
  EXPECT_NO_THROW(r.verify_axioms());
  const Vec zeta = r.basis(1), x = r.basis(4);
  // x zeta x^-1 = -zeta^-1 = zeta^3
  EXPECT_TRUE(vectors_equal(r.multiply(r.multiply(x, zeta), x), r.power(zeta, 3)));
}

TEST(NormElement, CenterOfQ8) {
  FiniteGroup q = quaternionic_group(3);
  InvolutiveRing r = group_ring(BasePID::integers(), q);
  Subgroup z = q.center();
  ASSERT_EQ(z.order(), 2u);
  Vec n = norm_element(q, r, z);
  Vec expect(8, Scalar(0));
  for (int x : z.elements()) expect[std::size_t(x)] = Scalar(1);
  EXPECT_TRUE(vectors_equal(n, expect));
  EXPECT_TRUE(r.is_central(n));
}

TEST(Pullback, C2OverZ) {
  FiniteGroup c2 = cyclic_group(2);
  CartesianSquare sq = pullback_square(BasePID::integers(), c2, c2.whole());
  EXPECT_EQ(sq.a->rank(), 2u);
  EXPECT_EQ(sq.b->rank(), 1u);
  EXPECT_EQ(sq.c->rank(), 1u);
  EXPECT_EQ(sq.d->rank(), 1u);
  EXPECT_TRUE(sq.d->base().is_field());
  EXPECT_TRUE(sq.commutes);
  EXPECT_TRUE(sq.verified_pullback);
  EXPECT_TRUE(sq.surjective_to_d);
}

TEST(Pullback, C4AndQ8) {
  FiniteGroup c4 = cyclic_group(4);
  CartesianSquare sq = pullback_square(BasePID::integers(), c4, c4.closure(std::vector<int>{c4.power(1, 2)}));
  EXPECT_EQ(sq.a->rank(), 4u);
  EXPECT_EQ(sq.b->rank(), 2u);
  EXPECT_EQ(sq.c->rank(), 2u);
  EXPECT_EQ(sq.d->rank(), 2u);
  EXPECT_TRUE(sq.verified_pullback);
  FiniteGroup q = quaternionic_group(3);
  CartesianSquare sq8 = pullback_square(BasePID::integers(), q, q.center());
  EXPECT_TRUE(sq8.verified_pullback);
  EXPECT_EQ(sq8.b->rank(), 4u);
  EXPECT_EQ(sq8.c->rank(), 4u);
}

TEST(Pullback, RejectsNonCentral) {
  FiniteGroup s3 = symmetric_group(3);
  EXPECT_THROW(pullback_square(BasePID::integers(), s3, s3.closure(std::vector<int>{1})), Error);
}

TEST(Crt, N3) {
  CrtSplitting s = crt_split_cyclic(BasePID::localized(3), 3);
  EXPECT_TRUE(s.check.ok());
  EXPECT_TRUE(s.bijective);
  // 3x3 Vandermonde-type oracle: rows (1,1,1), (1,0,-1), (0,1,-1)
  EXPECT_EQ(testkit::det_laplace({{1, 1, 1}, {1, 0, -1}, {0, 1, -1}}), 3);
  EXPECT_EQ(abs_value(s.determinant.rational().num()), Integer(3));
  EXPECT_TRUE(s.determinant.rational().is_integer());
}

TEST(Crt, N15) {
  CrtSplitting s = crt_split_cyclic(BasePID::localized(15), 15);
  EXPECT_EQ(s.divisors, (std::vector<std::uint64_t>{1, 3, 5, 15}));
  std::size_t total = 0;
  for (auto d : s.divisors) total += euler_phi(d);
  EXPECT_EQ(total, 15u);
  EXPECT_TRUE(s.check.ok());
  EXPECT_TRUE(s.bijective);
}

TEST(Crt, RequiresNInvertible) {
  EXPECT_THROW(crt_split_cyclic(BasePID::integers(), 3), Error);
  EXPECT_THROW(crt_split_cyclic(BasePID::localized(3), 4), Error);
}

TEST(FactorMod2, Seven) {
  CyclotomicFactorization f = factor_cyclotomic_mod2(7);
  EXPECT_EQ(f.order, 3u);
  EXPECT_EQ(f.copies, 2u);
  std::vector<std::uint64_t> factors = f.factors;
  std::sort(factors.begin(), factors.end());
  EXPECT_EQ(factors, (std::vector<std::uint64_t>{0b1011, 0b1101}));
  EXPECT_EQ(testkit::gf2_mul(0b1011, 0b1101), f.reduced);
}

TEST(FactorMod2, Three) {
  CyclotomicFactorization f = factor_cyclotomic_mod2(3);
  EXPECT_EQ(f.order, 2u);
  EXPECT_EQ(f.copies, 1u);
  ASSERT_EQ(f.factors.size(), 1u);
  EXPECT_TRUE(testkit::gf2_irreducible_trial(f.factors[0]));
}

TEST(FactorMod2, ProductAndIrreducibilityOracle) {
  for (std::uint64_t d = 3; d <= 31; d += 2) {
    CyclotomicFactorization f = factor_cyclotomic_mod2(d);
    std::uint64_t prod = 1;
    for (auto p : f.factors) {
      EXPECT_TRUE(testkit::gf2_irreducible_trial(p)) << d;
      EXPECT_EQ(std::uint64_t(testkit::gf2_deg(p)), f.order) << d;
      prod = testkit::gf2_mul(prod, p);
    }
    EXPECT_EQ(prod, f.reduced) << d;
    EXPECT_EQ(f.factors.size(), f.copies) << d;
  }
}

TEST(XPower, GaussianIntegers) {
  XPowerSplitting s = factor_x_power_plus_one(4, make_ring(cyclotomic_ring(4)));
  EXPECT_TRUE(s.factorization_verified);
  EXPECT_EQ(s.exponents, (std::vector<std::uint64_t>{1, 3}));
  EXPECT_TRUE(s.check.ok());
}

TEST(XPower, Zeta8) {
  XPowerSplitting s = factor_x_power_plus_one(8, make_ring(cyclotomic_ring(8)));
  EXPECT_TRUE(s.factorization_verified);
  EXPECT_EQ(s.exponents, (std::vector<std::uint64_t>{1, 3, 5, 7}));
  EXPECT_TRUE(s.check.ok());
  // over Z the CRT map is injective but not onto; over Z[1/2] it is
  EXPECT_FALSE(s.bijective);
  XPowerSplitting t = factor_x_power_plus_one(8, make_ring(cyclotomic_ring(8, BasePID::localized(2))));
  EXPECT_TRUE(t.bijective);
}

TEST(XPower, MissingRoot) {
  try {
    factor_x_power_plus_one(8, make_ring(cyclotomic_ring(4)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingRoot);
  }
}

TEST(Radical, SmallGroups) {
  EXPECT_EQ(radical_nilpotency(BasePID::f2(), cyclic_group(2)).index, 2u);
  EXPECT_EQ(radical_nilpotency(BasePID::f2(), cyclic_group(4)).index, 4u);
  // (C_2)^r: the augmentation ideal is generated by r commuting square-zero elements
  EXPECT_EQ(radical_nilpotency(BasePID::f2(), parse_group("C_2 x C_2 x C_2")).index, 4u);
  EXPECT_EQ(radical_nilpotency(BasePID::finite_field(2), cyclic_group(8)).index, 8u);
  RadicalNilpotency q = radical_nilpotency(BasePID::f2(), quaternionic_group(3));
  EXPECT_EQ(q.dimensions.front(), 7u);
  EXPECT_EQ(q.dimensions.back(), 0u);
  EXPECT_THROW(radical_nilpotency(BasePID::f2(), cyclic_group(3)), Error);
}

TEST(Named, ParseAndRoundTrip) {
  for (const char* name : {"Z", "F2", "F4", "Z[1/6]", "Z[zeta_8]", "Z[1/6][zeta_3]", "Z[1/2][C_4]", "Z[C_2 x C_2]",
                           "F2[Q_8]", "Z[zeta_8] o_c C2", "Z[zeta_8] o_-c C2", "Z[zeta_4] o_c [i]"}) {
    InvolutiveRing r = parse_ring(name);
    EXPECT_NO_THROW(r.verify_axioms()) << name;
    InvolutiveRing back = ring_from_json(Json::parse(ring_to_json(r).dump()));
    EXPECT_EQ(back.rank(), r.rank()) << name;
    EXPECT_TRUE(matrices_equal(back.involution(), r.involution())) << name;
  }
  EXPECT_EQ(parse_ring("Z[1/2][C_4]").rank(), 4u);
  EXPECT_EQ(parse_ring("Z[1/6][zeta_3]").rank(), 2u);
  EXPECT_THROW(parse_ring("Z[zeta_"), Error);
}

TEST(Named, ZeroRingIsAllowed) {
  InvolutiveRing z = InvolutiveRing::zero_ring(BasePID::integers());
  EXPECT_EQ(z.rank(), 0u);
  EXPECT_NO_THROW(z.verify_axioms());
}

TEST(Rings, RejectsBrokenInvolution) {
  // swapping 1 and t does not fix the unit
  InvolutiveRing good = group_ring(BasePID::integers(), cyclic_group(2));
  Json j = ring_to_json(good);
  j["inv"] = Json::array({Json::array({"0", "1"}), Json::array({"1", "0"})});
  EXPECT_THROW(ring_from_json(j).verify_axioms(), Error);
}
