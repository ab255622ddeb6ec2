#pragma once

// Random inputs and brute-force oracles shared by the unit and acceptance tests.

#include <algorithm>
#include <random>
#include <vector>

#include "magnus/assoc.hpp"
#include "magnus/free_group.hpp"
#include "magnus/series.hpp"

namespace magnus::testing {

inline Rational random_rational(std::mt19937_64& rng, int max_num = 5, int max_den = 4) {
  std::uniform_int_distribution<int> num(-max_num, max_num), den(1, max_den);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

// About `terms` random words in each degree of [lo, hi].
inline QSeries random_series(int n, int trunc, int lo, int hi, int terms, std::mt19937_64& rng) {
  QSeries s(n, trunc);
  std::uniform_int_distribution<int> letter(1, n);
  for (int m = lo; m <= std::min(hi, trunc); ++m)
    for (int k = 0; k < terms; ++k) {
      Word w(m);
      for (int& x : w) x = letter(rng);
      s.add_word(w, random_rational(rng));
    }
  return s;
}

inline FSeries random_fseries(int n, int trunc, int lo, int hi, std::mt19937_64& rng) {
  FSeries s(n, trunc);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int m = lo; m <= std::min(hi, trunc); ++m)
    for (std::uint64_t code = 0; code < s.pow(m); ++code) s.add_term(m, code, u(rng));
  return s;
}

inline QSeries random_vector(int n, int trunc, std::mt19937_64& rng) {
  QSeries s(n, trunc);
  for (int i = 1; i <= n; ++i) s.add_word(Word{i}, random_rational(rng));
  return s;
}

// Every bracketing of the word 1 .. p+1, found by testing all sets of proper
// intervals for the non-crossing property. Returns counts by cell dimension.
inline std::vector<int> brute_force_f_vector(int p) {
  const int letters = p + 1;
  std::vector<std::pair<int, int>> intervals;
  for (int l = 1; l <= letters; ++l)
    for (int r = l + 1; r <= letters; ++r)
      if (!(l == 1 && r == letters)) intervals.push_back({l, r});
  std::vector<int> counts(p, 0);
  const std::size_t k = intervals.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << k); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i) {
      if (!(mask >> i & 1)) continue;
      for (std::size_t j = i + 1; j < k && ok; ++j) {
        if (!(mask >> j & 1)) continue;
        const auto [a, b] = intervals[i];
        const auto [c, d] = intervals[j];
        const bool disjoint = b < c || d < a;
        const bool nested = (a <= c && d <= b) || (c <= a && b <= d);
        ok = disjoint || nested;
      }
    }
    if (!ok) continue;
    const int degree = 1 + __builtin_popcountll(mask);
    counts[p - degree]++;
  }
  return counts;
}

// phi_*(theta)(x_i) = |phi|(theta(phi^{-1}(x_i))) for the standard expansion
// theta(x_j) = 1 + X_j, by direct series arithmetic.
inline std::vector<QSeries> brute_force_pushforward(const FreeAut& phi, int trunc) {
  const int n = phi.rank();
  const IntMatrix m = phi.matrix();
  std::vector<QSeries> lin(n, QSeries(n, trunc));  // |phi|(X_j) = sum_i m[i][j] X_i
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) lin[j].add_word(Word{i + 1}, Rational(m[i][j]));
  std::vector<QSeries> out;
  for (int i = 1; i <= n; ++i) {
    QSeries value = QSeries::one(n, trunc);
    for (int x : phi.backward().image(i).letters()) {
      QSeries factor = QSeries::one(n, trunc) + lin[std::abs(x) - 1];
      value = mul(value, x > 0 ? factor : group_inverse(factor));
    }
    out.push_back(value);
  }
  return out;
}

}  // namespace magnus::testing
