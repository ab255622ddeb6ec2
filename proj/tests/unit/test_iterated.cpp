#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "magnus/iterated.hpp"
#include "test_support.hpp"

using namespace magnus;

TEST(GaussLegendre, ExactForPolynomials) {
  for (int n = 1; n <= 10; ++n) {
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    ASSERT_EQ(x.size(), std::size_t(n));
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double q = 0;
      for (int i = 0; i < n; ++i) q += w[i] * std::pow(x[i], k);
      const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
      EXPECT_NEAR(q, exact, 1e-14) << "n = " << n << ", k = " << k;
    }
  }
}

TEST(Mesh, GradedTowardEndpoints) {
  MeshConfig cfg;
  cfg.depth = 12;
  cfg.h_max = 0.01;
  cfg.breakpoints = {0.3, 0.71};
  const std::vector<double> t = graded_mesh(cfg);
  EXPECT_EQ(t.front(), 0.0);
  EXPECT_EQ(t.back(), 1.0);
  for (std::size_t i = 1; i < t.size(); ++i) {
    EXPECT_LT(t[i - 1], t[i]);
    EXPECT_LE(t[i] - t[i - 1], 0.01 + 1e-15);
  }
  for (double b : cfg.breakpoints) EXPECT_NE(std::find(t.begin(), t.end(), b), t.end());
  EXPECT_LE(t[1], std::ldexp(1.0, -12));

  MeshConfig uniform;
  uniform.depth = 0;
  uniform.h_max = 1.0 / 16;
  EXPECT_EQ(graded_mesh(uniform).size(), 17u);
}

TEST(Iterated, ConstantFormsGiveSimplexVolumes) {
  const FSeries a = FSeries::generator(2, 4, 1), b = FSeries::generator(2, 4, 2);
  const FSeries v = iterated({SampledForm::constant(a), SampledForm::constant(b), SampledForm::constant(a)});
  EXPECT_NEAR(v.coeff({1, 2, 1}), 1.0 / 6, 1e-14);
  EXPECT_EQ(v.nnz(), 1u);
}

TEST(Iterated, MonomialsInTwoVariables) {
  // Integral over 1 >= t1 >= t2 >= 0 of t1^p t2^q is 1 / ((q + 1)(p + q + 2)).
  for (int p = 0; p <= 4; ++p)
    for (int q = 0; q <= 4; ++q) {
      const auto f1 = SampledForm::from_series(2, 2, [p](double t) { return FSeries::generator(2, 2, 1, std::pow(t, p)); });
      const auto f2 = SampledForm::from_series(2, 2, [q](double t) { return FSeries::generator(2, 2, 2, std::pow(t, q)); });
      EXPECT_NEAR(iterated({f1, f2}).coeff({1, 2}), 1.0 / ((q + 1) * (p + q + 2)), 1e-14);
    }
}

TEST(Transport, MatchesChenSeries) {
  // F(1) = 1 + sum_q of the q-fold iterated integral of f.
  std::mt19937_64 rng(60);
  const FSeries A = magnus::testing::random_fseries(2, 4, 1, 2, rng), B = magnus::testing::random_fseries(2, 4, 1, 2, rng);
  const SampledForm f = SampledForm::from_series(2, 4, [&](double t) { return A + B * (std::sin(2 * t) + t); });
  FSeries chen = FSeries::one(2, 4);
  std::vector<SampledForm> forms;
  for (int q = 1; q <= 4; ++q) {
    forms.push_back(f);
    chen += iterated(forms);
  }
  EXPECT_LE(max_abs_diff(transport(f), chen), 1e-11);
}

TEST(Transport, ReversedPathInvertsTheValue) {
  std::mt19937_64 rng(61);
  const FSeries A = magnus::testing::random_fseries(2, 5, 1, 2, rng), B = magnus::testing::random_fseries(2, 5, 1, 2, rng);
  auto g = [&](double t) { return A * std::cos(t) + B * (t * t); };
  const FSeries forward = transport(SampledForm::from_series(2, 5, g));
  const FSeries back = transport(SampledForm::from_series(2, 5, [&](double t) { return -g(1 - t); }));
  EXPECT_LE(max_abs_diff(mul(forward, back), FSeries::one(2, 5)), 1e-12);
}

TEST(Transport, RejectsBadSamples) {
  const SampledForm nan = SampledForm::from_series(2, 3, [](double t) {
    return FSeries::generator(2, 3, 1, t > 0.5 ? 1.0 : 2.0) +
           FSeries::generator(2, 3, 2, t > 0.6 && t < 0.7 ? std::numeric_limits<double>::infinity() : 0.0);
  });
  EXPECT_THROW(transport(nan), std::domain_error);
  EXPECT_THROW(transport(SampledForm::constant(FSeries::one(2, 3))), std::domain_error);
}

TEST(Transport, LogarithmicEndpointSingularity) {
  // f = log(t) X1 + X2: the exact value has X1 coefficient -1, X2 X1 coefficient
  // int_{t1 > t2} log t2 = -3/4 and X1 X2 coefficient int_{t1 > t2} log t1 = -1/4.
  SampledForm f = SampledForm::from_series(2, 2, [](double t) {
    return FSeries::generator(2, 2, 1, std::log(t)) + FSeries::generator(2, 2, 2);
  });
  f.endpoint = SampledForm::Endpoint::log_power;
  f.log_power = 1;
  const FSeries v = transport(f);
  EXPECT_NEAR(v.coeff({1}), -1.0, 1e-8);
  EXPECT_NEAR(v.coeff({2, 1}), -0.75, 1e-8);
  EXPECT_NEAR(v.coeff({1, 2}), -0.25, 1e-8);
}
