#include <gtest/gtest.h>

#include <map>
#include <random>

#include "magnus/series.hpp"
#include "test_support.hpp"

using namespace magnus;

namespace {

// Product by explicit word concatenation, keyed by the words themselves.
std::map<Word, Rational> concat_product(const QSeries& a, const QSeries& b) {
  std::map<Word, Rational> out;
  a.for_each([&](int ma, std::uint64_t ka, const Rational& ca) {
    b.for_each([&](int mb, std::uint64_t kb, const Rational& cb) {
      if (ma + mb > a.trunc()) return;
      Word w = a.decode(ma, ka);
      const Word v = b.decode(mb, kb);
      w.insert(w.end(), v.begin(), v.end());
      out[w] += ca * cb;
    });
  });
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

std::map<Word, Rational> as_words(const QSeries& s) {
  std::map<Word, Rational> out;
  s.for_each([&](int m, std::uint64_t k, const Rational& c) { out[s.decode(m, k)] = c; });
  return out;
}

}  // namespace

TEST(Series, EncodeDecodeRoundTripIsLexicographic) {
  const QSeries s(3, 4);
  std::uint64_t prev = 0;
  bool first = true;
  for (std::uint64_t code = 0; code < s.pow(4); ++code) {
    const Word w = s.decode(4, code);
    EXPECT_EQ(s.encode(w), code);
    if (!first) EXPECT_LT(prev, code);
    prev = code;
    first = false;
  }
  EXPECT_EQ(s.encode({1, 1}), 0u);
  EXPECT_EQ(s.encode({2, 3}), 5u);
  EXPECT_THROW(s.encode({4}), std::invalid_argument);
}

TEST(Series, ProductMatchesWordConcatenation) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 30; ++k) {
    const QSeries a = magnus::testing::random_series(3, 5, 0, 5, 3, rng);
    const QSeries b = magnus::testing::random_series(3, 5, 0, 5, 3, rng);
    EXPECT_EQ(as_words(mul(a, b)), concat_product(a, b));
  }
}

TEST(Series, RingAxioms) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 20; ++k) {
    const QSeries a = magnus::testing::random_series(2, 6, 0, 6, 3, rng);
    const QSeries b = magnus::testing::random_series(2, 6, 0, 6, 3, rng);
    const QSeries c = magnus::testing::random_series(2, 6, 0, 6, 3, rng);
    EXPECT_EQ(mul(mul(a, b), c), mul(a, mul(b, c)));
    EXPECT_EQ(mul(a, b + c), mul(a, b) + mul(a, c));
    EXPECT_EQ(mul(QSeries::one(2, 6), a), a);
  }
}

TEST(Series, TruncationDropsHighDegrees) {
  const QSeries x = QSeries::word(2, 4, {1, 2, 1});
  EXPECT_TRUE(mul(x, x).is_zero());
  EXPECT_EQ(x.with_trunc(2).trunc(), 2);
  EXPECT_TRUE(x.with_trunc(2).is_zero());
  EXPECT_THROW(x + QSeries(2, 5), std::invalid_argument);
  EXPECT_THROW(x + QSeries(3, 4), std::invalid_argument);
}

TEST(Series, GroupInverse) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const QSeries a = QSeries::one(3, 5) + magnus::testing::random_series(3, 5, 1, 5, 3, rng);
    EXPECT_EQ(mul(a, group_inverse(a)), QSeries::one(3, 5));
    EXPECT_EQ(mul(group_inverse(a), a), QSeries::one(3, 5));
  }
  EXPECT_THROW(group_inverse(QSeries::generator(2, 3, 1)), std::invalid_argument);
}

TEST(Series, ExpOfGeneratorHasFactorialCoefficients) {
  const QSeries e = exp_series(QSeries::generator(2, 6, 1));
  Rational fact = 1;
  for (int k = 0; k <= 6; ++k) {
    if (k > 0) fact *= k;
    EXPECT_EQ(e.coeff(Word(k, 1)), 1 / fact);
  }
  EXPECT_EQ(e.nnz(), 7u);
}

TEST(Series, ExpLogInverse) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 20; ++k) {
    const QSeries u = magnus::testing::random_series(2, 6, 1, 6, 2, rng);
    EXPECT_EQ(log_series(exp_series(u)), u);
  }
  EXPECT_THROW(exp_series(QSeries::one(2, 3)), std::invalid_argument);
  EXPECT_THROW(log_series(QSeries(2, 3)), std::invalid_argument);
}

TEST(Series, ExpOfCommutingSumFactors) {
  const QSeries x = QSeries::generator(2, 6, 1);
  EXPECT_EQ(exp_series(x * Rational(3)), mul(exp_series(x), exp_series(x * Rational(2))));
  // X1 and X2 do not commute: BCH has the degree-2 term [X1, X2] / 2.
  const QSeries y = QSeries::generator(2, 6, 2);
  const QSeries z = log_series(mul(exp_series(x), exp_series(y)));
  EXPECT_EQ(z.coeff({1, 2}), Rational(1, 2));
  EXPECT_EQ(z.coeff({2, 1}), Rational(-1, 2));
}

TEST(Series, EpsilonRotatesLastSlotToFront) {
  const QSeries w = QSeries::word(3, 4, {1, 2, 3});
  EXPECT_EQ(epsilon(w), QSeries::word(3, 4, {3, 1, 2}));
  std::mt19937_64 rng(5);
  const QSeries u = magnus::testing::random_series(3, 5, 0, 5, 4, rng).degree_part(5);
  QSeries r = u;
  for (int k = 0; k < 5; ++k) r = epsilon(r);
  EXPECT_EQ(r, u);
}

TEST(Series, CyclicOperators) {
  std::mt19937_64 rng(6);
  const QSeries u = magnus::testing::random_series(2, 5, 0, 5, 4, rng);
  QSeries sum(2, 5);
  for (int m = 0; m <= 5; ++m) {
    QSeries r = u.degree_part(m);
    for (int k = 0; k < std::max(m, 1); ++k) {
      sum += r;
      r = epsilon(r);
    }
  }
  EXPECT_EQ(n_operator(u), sum);
  // N^2 = m N on degree m, so N / m is idempotent.
  EXPECT_EQ(ncheck_operator(ncheck_operator(u)), ncheck_operator(u));
}

TEST(Series, FloatNearness) {
  FSeries a = FSeries::generator(2, 3, 1, 1.0);
  FSeries b = a;
  b.add_word({1, 2}, 1e-12);
  EXPECT_TRUE(near(a, b));
  EXPECT_FALSE(a == b);
  EXPECT_FALSE(near(a, b, 1e-13));
  EXPECT_DOUBLE_EQ(to_float(QSeries::generator(2, 3, 2, Rational(1, 4))).coeff({2}), 0.25);
}
