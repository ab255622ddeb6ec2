#include <gtest/gtest.h>

#include <random>

#include "magnus/free_group.hpp"

using namespace magnus;

TEST(FreeWord, ReductionAndInverse) {
  EXPECT_EQ(FreeWord({1, 2, -2, -1, 3}).letters(), std::vector<int>{3});
  EXPECT_TRUE(FreeWord({1, -1}).empty());
  const FreeWord w({1, -2, 3});
  EXPECT_TRUE((w * w.inverse()).empty());
  EXPECT_EQ(w.inverse().letters(), (std::vector<int>{-3, 2, -1}));
  EXPECT_EQ(w.max_index(), 3);
  EXPECT_THROW(FreeWord({1, 0}), std::invalid_argument);
}

TEST(FreeWord, ParseAndFormat) {
  const FreeWord w = parse_word("1 2 -1 -2");
  EXPECT_EQ(w, w0(1));
  EXPECT_EQ(parse_word(format_word(w)), w);
  EXPECT_TRUE(parse_word("").empty());
  EXPECT_THROW(parse_word("1 x"), std::invalid_argument);
  EXPECT_THROW(parse_word("1 0"), std::invalid_argument);
}

TEST(FreeWord, SurfaceRelatorIsInCommutatorSubgroup) {
  for (int g = 1; g <= 3; ++g) {
    EXPECT_EQ(w0(g).length(), std::size_t(4 * g));
    EXPECT_EQ(abelianize(w0(g), 2 * g), std::vector<long>(2 * g, 0));
  }
  EXPECT_EQ(abelianize(FreeWord({1, 1, -2}), 2), (std::vector<long>{2, -1}));
}

TEST(FreeAut, NielsenGeneratorsAreCertified) {
  for (int n = 2; n <= 4; ++n)
    for (int i = 1; i <= n; ++i) {
      EXPECT_NO_THROW(nielsen::invert(n, i));
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        EXPECT_NO_THROW(nielsen::swap(n, i, j));
        EXPECT_NO_THROW(nielsen::right_multiply(n, i, j, -1));
        EXPECT_NO_THROW(nielsen::left_multiply(n, i, j, 1));
      }
    }
  const FreeAut r = nielsen::right_multiply(2, 1, 2, 1);
  EXPECT_EQ(r.forward().image(1).letters(), (std::vector<int>{1, 2}));
  EXPECT_EQ(r.backward().image(1).letters(), (std::vector<int>{1, -2}));
}

TEST(FreeAut, RejectsFalseInverse) {
  const FreeEndo f = nielsen::right_multiply(2, 1, 2, 1).forward();
  EXPECT_THROW(FreeAut(f, f), std::invalid_argument);
  // Inverse on generators but not surjective-looking: x1 -> x1^2.
  const FreeEndo sq(2, {FreeWord({1, 1}), FreeWord({2})});
  EXPECT_THROW(FreeAut(sq, FreeEndo::identity(2)), std::invalid_argument);
}

TEST(FreeAut, RandomCompositionsInvertAndMatricesMultiply) {
  std::mt19937_64 rng(30);
  for (int k = 0; k < 20; ++k) {
    const FreeAut f = nielsen::random(3, 8, rng);
    const FreeAut g = nielsen::random(3, 8, rng);
    const FreeWord w = random_word(3, 12, rng);
    EXPECT_EQ(f.backward().apply(f.forward().apply(w)), w);
    EXPECT_EQ(compose(f, g).matrix(), mat_mul(f.matrix(), g.matrix()));
    EXPECT_EQ(compose(f, g).forward().apply(w), f.forward().apply(g.forward().apply(w)));
    EXPECT_EQ(compose(f, f.inverse()).forward(), FreeEndo::identity(3));
  }
}

TEST(FreeAut, EndoApplyIsHomomorphism) {
  std::mt19937_64 rng(31);
  const FreeEndo f = nielsen::random(2, 5, rng).forward();
  const FreeWord a = random_word(2, 7, rng), b = random_word(2, 7, rng);
  EXPECT_EQ(f.apply(a * b), f.apply(a) * f.apply(b));
  EXPECT_EQ(f.apply(a.inverse()), f.apply(a).inverse());
}
