#include <gtest/gtest.h>

#include <random>

#include "magnus/assoc.hpp"
#include "magnus/derivation.hpp"
#include "test_support.hpp"

using namespace magnus;

namespace {

QDerivation random_derivation(int n, int d, std::mt19937_64& rng) {
  std::vector<QSeries> images;
  for (int i = 0; i < n; ++i) images.push_back(magnus::testing::random_series(n, d, 1, d, 2, rng));
  return QDerivation(images);
}

}  // namespace

TEST(Derivation, ActsOnGeneratorsByImages) {
  std::mt19937_64 rng(10);
  const QDerivation u = random_derivation(3, 4, rng);
  for (int i = 1; i <= 3; ++i) EXPECT_EQ(derive(u, QSeries::generator(3, 4, i)), u.image(i));
  EXPECT_TRUE(derive(u, QSeries::one(3, 4)).is_zero());
}

TEST(Derivation, LeibnizRule) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    const QDerivation u = random_derivation(2, 6, rng);
    const QSeries a = magnus::testing::random_series(2, 6, 0, 4, 3, rng);
    const QSeries b = magnus::testing::random_series(2, 6, 0, 4, 3, rng);
    EXPECT_EQ(derive(u, mul(a, b)), mul(derive(u, a), b) + mul(a, derive(u, b)));
  }
}

TEST(Derivation, ApplySlotOnExplicitWord) {
  // op: X1 -> X2 X2, X2 -> 0; inserted at the middle slot of X1 X1 X2.
  HomComponent<Rational> op(2, 2);
  op.add(0, QSeries(2, 2).encode({2, 2}), Rational(3));
  HomComponent<Rational> x(2, 3);
  x.add(1, QSeries(2, 3).encode({1, 1, 2}), Rational(1));
  const HomComponent<Rational> r = apply_slot(1, op, 1, x);
  HomComponent<Rational> want(2, 4);
  want.add(1, QSeries(2, 4).encode({1, 2, 2, 2}), Rational(3));
  EXPECT_EQ(r, want);
  EXPECT_THROW(apply_slot(0, op, 0, x), std::invalid_argument);
}

TEST(Derivation, BracketIsCommutatorOfActions) {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 10; ++k) {
    const QDerivation u = random_ia_derivation(2, 6, 4, rng, 0.4);
    const QDerivation v = random_ia_derivation(2, 6, 4, rng, 0.4);
    const QSeries a = magnus::testing::random_series(2, 6, 1, 3, 3, rng);
    EXPECT_EQ(derive(bracket(u, v), a), derive(u, derive(v, a)) - derive(v, derive(u, a)));
    EXPECT_EQ(bracket(u, v), -bracket(v, u));
  }
  EXPECT_THROW(compose(random_derivation(2, 4, rng), random_ia_derivation(2, 4, 3, rng)), std::invalid_argument);
}

TEST(Automorphism, ExpOfDerivationIsMultiplicative) {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 10; ++k) {
    const QAutomorphism U = exp_derivation(random_ia_derivation(3, 5, 4, rng, 0.4));
    EXPECT_TRUE(U.is_ia());
    const QSeries a = magnus::testing::random_series(3, 5, 0, 3, 3, rng);
    const QSeries b = magnus::testing::random_series(3, 5, 0, 3, 3, rng);
    EXPECT_EQ(U.apply(mul(a, b)), mul(U.apply(a), U.apply(b)));
  }
}

TEST(Automorphism, InverseAndLog) {
  std::mt19937_64 rng(14);
  for (int k = 0; k < 10; ++k) {
    const QDerivation d = random_ia_derivation(2, 6, 5, rng, 0.5);
    const QAutomorphism U = exp_derivation(d);
    EXPECT_EQ(compose(U, inverse(U)), QAutomorphism::identity(2, 6));
    EXPECT_EQ(compose(inverse(U), U), QAutomorphism::identity(2, 6));
    EXPECT_EQ(log_automorphism(U), d);
    // exp(-D) is the inverse.
    EXPECT_EQ(exp_derivation(-d), inverse(U));
  }
}

TEST(Automorphism, SubstituteGeneratorsIsIdentity) {
  std::mt19937_64 rng(15);
  const QSeries a = magnus::testing::random_series(3, 4, 0, 4, 4, rng);
  EXPECT_EQ(QAutomorphism::identity(3, 4).apply(a), a);
}
