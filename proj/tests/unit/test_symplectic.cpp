#include <gtest/gtest.h>

#include <random>

#include "magnus/derivation.hpp"
#include "magnus/symplectic.hpp"
#include "test_support.hpp"

using namespace magnus;

TEST(Symplectic, PairingIsStandard) {
  const Symplectic sp(2);
  EXPECT_EQ(sp.pairing(1, 3), 1);
  EXPECT_EQ(sp.pairing(3, 1), -1);
  EXPECT_EQ(sp.pairing(2, 4), 1);
  EXPECT_EQ(sp.pairing(1, 2), 0);
  EXPECT_EQ(sp.pairing(1, 1), 0);
  QSeries I(4, 2);
  I.add_word({1, 3}, 1);
  I.add_word({3, 1}, -1);
  I.add_word({2, 4}, 1);
  I.add_word({4, 2}, -1);
  EXPECT_EQ(sp.intersection<Rational>(2), I);
}

TEST(Symplectic, PairIsAntisymmetric) {
  std::mt19937_64 rng(20);
  const Symplectic sp(3);
  for (int k = 0; k < 10; ++k) {
    const QSeries a = magnus::testing::random_vector(6, 2, rng), b = magnus::testing::random_vector(6, 2, rng);
    EXPECT_EQ(sp.pair(a, b), -sp.pair(b, a));
    EXPECT_EQ(sp.pair(a, a), 0);
  }
}

TEST(Symplectic, InteriorContractsLastSlot) {
  const Symplectic sp(1);
  // u = X1 X2 X1: Z -> X1 X2 (X1 . Z), so X2 -> X1 X2 and X1 -> 0.
  const QDerivation d = interior(sp, QSeries::word(2, 4, {1, 2, 1}));
  EXPECT_TRUE(d.image(1).is_zero());
  EXPECT_EQ(d.image(2), QSeries::word(2, 4, {1, 2}));
  EXPECT_THROW(interior_ia(sp, QSeries::word(2, 4, {1, 2})), std::invalid_argument);
  EXPECT_NO_THROW(interior_ia(sp, QSeries::word(2, 4, {1, 2, 1})));
  EXPECT_THROW(interior(Symplectic(2), QSeries::word(2, 4, {1, 2, 1})), std::invalid_argument);
}

TEST(Symplectic, LambdaEmbedIsAlternating) {
  std::mt19937_64 rng(21);
  const QSeries a = magnus::testing::random_vector(4, 3, rng), b = magnus::testing::random_vector(4, 3, rng), c = magnus::testing::random_vector(4, 3, rng);
  EXPECT_EQ(lambda_embed<Rational>({a, b, c}), -lambda_embed<Rational>({b, a, c}));
  EXPECT_EQ(lambda_embed<Rational>({a, b, c}), lambda_embed<Rational>({b, c, a}));
  EXPECT_TRUE(lambda_embed<Rational>({a, b, a}).is_zero());
  EXPECT_EQ(lambda_embed<Rational>({a, b}), mul(a, b) - mul(b, a));
}

TEST(Symplectic, ContractionOfIntersectionIsTwiceGenus) {
  for (int g = 1; g <= 4; ++g) {
    const Symplectic sp(g);
    EXPECT_EQ(contraction(sp, sp.intersection<Rational>(2)), QSeries::constant(2 * g, 2, Rational(2 * g)));
  }
}

TEST(Symplectic, ProjectorsSplitLambdaThree) {
  std::mt19937_64 rng(22);
  for (int g = 2; g <= 3; ++g) {
    const Symplectic sp(g);
    const int n = 2 * g;
    for (int k = 0; k < 10; ++k) {
      const QSeries z = magnus::testing::random_vector(n, 3, rng);
      const QSeries x = lambda_embed<Rational>({magnus::testing::random_vector(n, 3, rng), magnus::testing::random_vector(n, 3, rng),
                                                magnus::testing::random_vector(n, 3, rng)});
      EXPECT_EQ(p_h(sp, q_h(sp, z)), z);
      EXPECT_TRUE(p_u(sp, q_h(sp, z)).is_zero());
      EXPECT_EQ(q_h(sp, p_h(sp, x)) + q_u(sp, p_u(sp, x)), x);
      // U is the kernel of the contraction.
      EXPECT_TRUE(contraction(sp, q_u(sp, p_u(sp, x))).is_zero());
    }
  }
}

TEST(Symplectic, FloatInstantiationAgrees) {
  const Symplectic sp(2);
  std::mt19937_64 rng(23);
  const QSeries x = lambda_embed<Rational>({magnus::testing::random_vector(4, 3, rng), magnus::testing::random_vector(4, 3, rng),
                                            magnus::testing::random_vector(4, 3, rng)});
  EXPECT_TRUE(near(p_u(sp, to_float(x)), to_float(p_u(sp, x)), 1e-14));
}
