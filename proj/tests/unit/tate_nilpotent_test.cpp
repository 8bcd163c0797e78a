#include <gtest/gtest.h>

#include "support/testkit.hpp"
#include "unil/rings/named.hpp"
#include "unil/tate/tate.hpp"

using namespace unil;

namespace {

FgAbelianGroup z2(std::size_t k) { return FgAbelianGroup::elementary(k, Integer(2)); }

/// sigma = P D P^-1 with D made of a copies of (1), b of (-1) and c swaps.
Mat conjugated_involution(testkit::Rng& rng, std::size_t a, std::size_t b, std::size_t c) {
  const std::size_t n = a + b + 2 * c;
  Mat d(n, n);
  std::size_t i = 0;
  for (std::size_t k = 0; k < a; ++k, ++i) d(i, i) = Scalar(1);
  for (std::size_t k = 0; k < b; ++k, ++i) d(i, i) = Scalar(-1);
  for (std::size_t k = 0; k < c; ++k, i += 2) {
    d(i, i + 1) = Scalar(1);
    d(i + 1, i) = Scalar(1);
  }
  Mat p = Mat::identity(n), p_inv = Mat::identity(n);
  for (int step = 0; n > 1 && step < 6; ++step) {
    std::size_t x = std::size_t(rng.range(0, long(n) - 1)), y = std::size_t(rng.range(0, long(n) - 1));
    if (x == y) continue;
    long long m = rng.range(-2, 2);
    Mat e = Mat::identity(n), e_inv = Mat::identity(n);
    e(x, y) = Scalar(m);
    e_inv(x, y) = Scalar(-m);
    p = p * e;
    p_inv = e_inv * p_inv;
  }
  return p * d * p_inv;
}

}  // namespace

TEST(Tate, IntegersTrivialInvolution) {
  InvolutiveRing z = cyclotomic_ring(1);
  EXPECT_EQ(tate_cohomology(z, 0).value, z2(1));
  EXPECT_EQ(tate_cohomology(z, 2).value, z2(1));
  EXPECT_EQ(tate_cohomology(z, 1).value, z2(0));
  EXPECT_EQ(tate_cohomology(z, -1).value, z2(0));
}

TEST(Tate, GaussianIntegers) {
  InvolutiveRing r = cyclotomic_ring(4);
  auto oracle = testkit::tate_dims_over_z(r.involution());
  EXPECT_EQ(oracle, (std::pair<std::size_t, std::size_t>{1, 1}));
  EXPECT_EQ(tate_cohomology(r, 0).value, z2(1));
  EXPECT_EQ(tate_cohomology(r, 1).value, z2(1));
}

TEST(Tate, RandomLatticesMatchDecomposition) {
  testkit::Rng rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t a = std::size_t(rng.range(0, 2)), b = std::size_t(rng.range(0, 2)), c = std::size_t(rng.range(0, 2));
    if (a + b + c == 0) continue;
    InvolutiveModule m{BasePID::integers(), a + b + 2 * c, conjugated_involution(rng, a, b, c)};
    ASSERT_EQ(tate_cohomology(m, 0).value, z2(a));
    ASSERT_EQ(tate_cohomology(m, 1).value, z2(b));
    ASSERT_EQ(testkit::tate_dims_over_z(m.sigma), (std::pair<std::size_t, std::size_t>{a, b}));
  }
}

TEST(Tate, GroupRingsAgreeWithOracle) {
  for (const char* e : {"C_2", "C_3", "C_4", "V_4", "S_3", "Q_8", "D_8", "C_6", "A_4"}) {
    InvolutiveRing r = group_ring(BasePID::integers(), parse_group(e));
    auto [h0, h1] = testkit::tate_dims_over_z(r.involution());
    EXPECT_EQ(tate_cohomology(r, 0).value, z2(h0)) << e;
    EXPECT_EQ(tate_cohomology(r, 1).value, z2(h1)) << e;
  }
  // frozen: Z[G] has H^0 = (Z/2)^(number of elements with g = g^-1), H^1 = 0
  EXPECT_EQ(tate_cohomology(group_ring(BasePID::integers(), quaternionic_group(3)), 0).value, z2(2));
  EXPECT_EQ(tate_cohomology(group_ring(BasePID::integers(), parse_group("V_4")), 0).value, z2(4));
}

TEST(Tate, OverF2CountsComponents) {
  // F_4 with the trivial involution: H^0 = F_4 as an F_2-space
  InvolutiveRing f4 = parse_ring("F4");
  EXPECT_EQ(tate_cohomology(f4, 0).value, z2(2));
  InvolutiveRing f2c2 = group_ring(BasePID::f2(), cyclic_group(2));
  EXPECT_EQ(tate_cohomology(f2c2, 0).value, z2(2));
}

TEST(Tate, InducedMapOfAugmentation) {
  RingPtr src = make_ring(group_ring(BasePID::integers(), cyclic_group(2)));
  RingPtr dst = make_ring(cyclotomic_ring(1));
  RingMap aug{src, dst, integer_matrix({{1, 1}})};
  ASSERT_TRUE(aug.check().ok());
  Mat h0 = induced_map(aug, 0);
  EXPECT_EQ(h0.rows(), 1u);
  EXPECT_EQ(h0.cols(), 2u);
  EXPECT_EQ(f2_rank(h0), 1u);  // onto Z/2
}

TEST(Tate, NonEquivariantMapIsRejected) {
  InvolutiveModule zplus{BasePID::integers(), 1, integer_matrix({{1}})};
  InvolutiveModule zminus{BasePID::integers(), 1, integer_matrix({{-1}})};
  EXPECT_FALSE(is_equivariant(zplus, zminus, integer_matrix({{1}})));
  EXPECT_THROW(induced_map(zplus, zminus, integer_matrix({{1}}), 0, tate_cohomology(zplus, 0), tate_cohomology(zminus, 0)),
               Error);
}

TEST(Tate, VanishingWhenTwoIsAUnit) {
  for (const char* name : {"Z[1/2]", "Z[1/2][C_4]", "Z[1/6][zeta_3]", "Z[1/2][Q_8]"}) {
    VanishingReport rep = verify_vanishing_2_invertible(parse_ring(name));
    EXPECT_TRUE(rep.vanishes) << name;
    EXPECT_GT(rep.witnesses_checked, 0u) << name;
  }
  try {
    verify_vanishing_2_invertible(cyclotomic_ring(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TwoNotInvertible);
  }
}

TEST(Tate, Localization) {
  LocalizationReport z = verify_localization_iso(cyclotomic_ring(1), 3);
  EXPECT_TRUE(z.ok());
  EXPECT_EQ(z.before[0], z2(1));
  EXPECT_EQ(z.before[1], z2(0));
  LocalizationReport e = verify_localization_iso(cyclotomic_ring(3), 3);
  EXPECT_TRUE(e.ok());
  EXPECT_TRUE(e.after[0].is_trivial());
  LocalizationReport c2 = verify_localization_iso(group_ring(BasePID::integers(), cyclic_group(2)), 5);
  EXPECT_TRUE(c2.ok());
  EXPECT_EQ(c2.before[0], z2(2));
  EXPECT_EQ(c2.after[0], z2(2));
}

TEST(MayerVietoris, SmallSquaresAreExact) {
  FiniteGroup c2 = cyclic_group(2), c4 = cyclic_group(4), q8 = quaternionic_group(3);
  for (const auto& sq : {pullback_square(BasePID::integers(), c2, c2.whole()),
                         pullback_square(BasePID::integers(), c4, c4.closure(std::vector<int>{c4.power(1, 2)})),
                         pullback_square(BasePID::integers(), q8, q8.center())}) {
    MayerVietorisReport rep = verify_mv_exactness(sq);
    EXPECT_EQ(rep.spots.size(), 6u);
    EXPECT_TRUE(rep.exact()) << rep.square;
  }
}

TEST(MayerVietoris, ConnectingMapShape) {
  FiniteGroup c2 = cyclic_group(2);
  CartesianSquare sq = pullback_square(BasePID::integers(), c2, c2.whole());
  // H^1(F_2) = F_2 maps into H^0(Z[C_2]) = (Z/2)^2
  Mat d = connecting_map(sq, 0);
  EXPECT_EQ(d.cols(), 1u);
  EXPECT_EQ(d.rows(), 2u);
}

TEST(Nilpotent, HalfBinomials) {
  EXPECT_EQ(half_binomial(0), Rational(1));
  EXPECT_EQ(half_binomial(1), Rational(-1, 2));
  EXPECT_EQ(half_binomial(2), Rational(3, 8));
  // (-1)^r C(2r, r) / 4^r
  Integer c = 1;
  for (unsigned r = 1; r <= 12; ++r) {
    c = c * Integer(2 * r) * Integer(2 * r - 1) / (Integer(r) * Integer(r));
    Rational expect(r % 2 ? Integer(-c) : c, Integer(1) << (2 * r));
    EXPECT_EQ(half_binomial(r), expect) << r;
  }
}

TEST(Nilpotent, TwoByTwoDyadic) {
  CoefficientRing r = CoefficientRing::dyadic();
  CMat rho(2, 2, r.zero());
  rho(0, 1) = Coeff(1);
  SquareRootResult s = nilpotent_sqrt(r, rho);
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s.v(0, 0).value(), Rational(1));
  EXPECT_EQ(s.v(0, 1).value(), Rational(-1, 2));
  EXPECT_EQ(s.v(1, 0).value(), Rational(0));
  CMat v2 = testkit::naive_product(s.v, s.v, r);
  EXPECT_EQ(v2(0, 1).value(), Rational(-1));
}

TEST(Nilpotent, RandomMatricesOverEachRing) {
  testkit::Rng rng(7);
  for (const auto& r : {CoefficientRing::dyadic(), CoefficientRing::prime_field(3), CoefficientRing::prime_field(5)}) {
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = std::size_t(rng.range(1, 6));
      CMat rho = testkit::random_nilpotent(rng, r, n);
      SquareRootResult s = nilpotent_sqrt(r, rho);
      CMat id = cmat_identity(n, r);
      CMat lhs = testkit::naive_product(testkit::naive_product(s.v, s.v, r), r.embed(id + rho), r);
      ASSERT_TRUE(lhs == id) << r.name();
      ASSERT_TRUE(testkit::naive_product(s.v, rho, r) == testkit::naive_product(rho, s.v, r));
      ASSERT_TRUE(s.ok());
    }
  }
}

TEST(Nilpotent, Preconditions) {
  CMat one(1, 1, Coeff(1));
  try {
    nilpotent_sqrt(CoefficientRing::dyadic(), one);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotNilpotent);
  }
  try {
    nilpotent_sqrt(CoefficientRing::integers(), CMat(1, 1, Coeff(0)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TwoNotInvertible);
  }
  EXPECT_FALSE(CoefficientRing::dyadic().contains(Coeff(Rational(1, 3))));
}

TEST(Lagrangian, HyperbolicExample) {
  CoefficientRing r = CoefficientRing::dyadic();
  CMat l0(2, 2, r.zero()), l1(2, 2, r.zero());
  l0(0, 1) = Coeff(1);
  l0(1, 0) = Coeff(1);
  l1(0, 0) = Coeff(1);
  LagrangianTransportReport rep = verify_lagrangian_transport(r, l0, l1);
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.nu(1, 0).value(), Rational(1));
  EXPECT_EQ(rep.nu(0, 0).value(), Rational(0));
  EXPECT_EQ(rep.nu(0, 1).value(), Rational(0));
  EXPECT_EQ(rep.index, 2u);
}

TEST(Lagrangian, RandomPairs) {
  testkit::Rng rng(99);
  for (const auto& r : {CoefficientRing::dyadic(), CoefficientRing::prime_field(3)}) {
    for (int trial = 0; trial < 15; ++trial) {
      auto [l0, l1] = testkit::random_lagrangian_pair(rng, r, std::size_t(rng.range(1, 4)));
      ASSERT_TRUE(verify_lagrangian_transport(r, l0, l1).ok()) << r.name();
    }
  }
}

TEST(Lagrangian, RejectsAsymmetricForm) {
  CoefficientRing r = CoefficientRing::dyadic();
  CMat l0 = cmat_identity(2, r), l1(2, 2, r.zero());
  l1(0, 1) = Coeff(1);
  try {
    verify_lagrangian_transport(r, l0, l1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSymmetric);
  }
}
