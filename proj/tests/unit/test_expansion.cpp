#include <gtest/gtest.h>

#include <random>

#include "magnus/assoc.hpp"
#include "magnus/expansion.hpp"
#include "test_support.hpp"

using namespace magnus;

TEST(Expansion, StandardValues) {
  const QExpansion theta = std_expansion<Rational>(3, 4);
  for (int i = 1; i <= 3; ++i) {
    EXPECT_EQ(theta.value(i), QSeries::one(3, 4) + QSeries::generator(3, 4, i));
    EXPECT_EQ(mul(theta.value(i), theta.inverse_value(i)), QSeries::one(3, 4));
  }
  EXPECT_THROW(QExpansion({QSeries::one(2, 3), QSeries::one(2, 3)}), std::invalid_argument);
}

TEST(Expansion, EvaluateIsHomomorphism) {
  std::mt19937_64 rng(40);
  const QExpansion theta = act(exp_derivation(random_ia_derivation(2, 5, 4, rng)), std_expansion<Rational>(2, 5));
  for (int k = 0; k < 10; ++k) {
    const FreeWord a = random_word(2, 5, rng), b = random_word(2, 5, rng);
    EXPECT_EQ(evaluate(theta, a * b), mul(evaluate(theta, a), evaluate(theta, b)));
    EXPECT_EQ(mul(evaluate(theta, a), evaluate(theta, a.inverse())), QSeries::one(2, 5));
    // Degree one is the abelianization.
    const auto ab = abelianize(a, 2);
    const QSeries one = evaluate(theta, a).degree_part(1);
    EXPECT_EQ(one.coeff({1}), Rational(ab[0]));
    EXPECT_EQ(one.coeff({2}), Rational(ab[1]));
  }
}

TEST(Expansion, TransporterRelatesExpansions) {
  std::mt19937_64 rng(41);
  const QExpansion theta = std_expansion<Rational>(3, 5);
  const QExpansion other = act(exp_derivation(random_ia_derivation(3, 5, 4, rng)), theta);
  EXPECT_EQ(act(transporter(theta, other), theta).values(), other.values());
}

TEST(Expansion, PushforwardMatchesDirectArithmetic) {
  std::mt19937_64 rng(42);
  for (int k = 0; k < 10; ++k) {
    const FreeAut phi = nielsen::random(3, 5, rng);
    const QExpansion push = pushforward(std_expansion<Rational>(3, 4), phi);
    EXPECT_EQ(push.values(), magnus::testing::brute_force_pushforward(phi, 4));
  }
}

TEST(Johnson, IdentityAndInnerAutomorphismConventions) {
  const QExpansion theta = std_expansion<Rational>(2, 4);
  const JohnsonMap<Rational> id = johnson(theta, FreeAut::identity(2));
  EXPECT_EQ(id.total, QAutomorphism::identity(2, 4));
  for (int p = 1; p <= 3; ++p) EXPECT_TRUE(id.component(p).is_zero());
}

TEST(Johnson, ResidualVanishesExactly) {
  std::mt19937_64 rng(43);
  for (int n = 2; n <= 3; ++n) {
    const QExpansion theta = std_expansion<Rational>(n, 5);
    for (int k = 0; k < 5; ++k) {
      const FreeAut phi = nielsen::random(n, 6, rng);
      const JohnsonMap<Rational> tau = johnson(theta, phi);
      for (int i = 1; i <= n; ++i) EXPECT_TRUE(johnson_residual(theta, phi, tau, i).is_zero());
    }
  }
}

TEST(Johnson, FirstComponentOfRightMultiplication) {
  // x2 -> x2 x1 gives X2 -> X2 X1 on the first component.
  const FreeAut phi = nielsen::right_multiply(2, 2, 1, 1);
  const HomComponent<Rational> tau1 = johnson(std_expansion<Rational>(2, 3), phi).component(1);
  HomComponent<Rational> want(2, 2);
  want.add(1, QSeries(2, 2).encode({2, 1}), Rational(1));
  EXPECT_EQ(tau1, want);
}

TEST(Expansion, SymplecticDefectDegreeTwo) {
  // Any expansion sends [x1, x2] to 1 + [X1, X2] + (degree >= 3) = 1 + I + ...,
  // so the defect against exp(-I) has degree-2 part 2I.
  const QSeries defect = symplectic_defect(std_expansion<Rational>(2, 4), 1);
  EXPECT_TRUE(defect.degree_range(0, 1).is_zero());
  EXPECT_EQ(defect.degree_part(2), Symplectic(1).intersection<Rational>(4) * Rational(2));
  EXPECT_THROW(symplectic_defect(std_expansion<Rational>(3, 4), 1), std::invalid_argument);
}
