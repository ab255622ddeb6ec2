#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "magnus/grid.hpp"

using namespace magnus;
using std::numbers::pi;

namespace {

TorusGeometry geometry(int M) { return TorusGeometry{{0.3, 1.1}, {0.41, 0.27}, {1.0, 0.0}, M}; }

// A trigonometric polynomial in the lattice coordinates.
double trig(double s, double t) { return std::cos(2 * pi * (2 * s - t)) + 0.5 * std::sin(2 * pi * 3 * t) + 0.25; }

RealField sampled(int M) {
  RealField f(M);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) f(i, j) = trig(double(i) / M, double(j) / M);
  return f;
}

}  // namespace

TEST(Geometry, Validation) {
  EXPECT_NO_THROW(geometry(32).validate());
  TorusGeometry g = geometry(48);
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = geometry(32);
  g.tau = {0.3, -1.0};
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = geometry(32);
  g.v = 0;
  EXPECT_THROW(g.validate(), std::invalid_argument);
}

TEST(Geometry, LatticeCoordinatesAndNearestOffset) {
  const TorusGeometry g = geometry(32);
  const auto st = g.lattice(g.point(0.2, -0.7));
  EXPECT_NEAR(st[0], 0.2, 1e-15);
  EXPECT_NEAR(st[1], -0.7, 1e-15);
  const cplx d = g.nearest_offset(g.p0 + 3.0 + 2.0 * g.tau + cplx(0.01, -0.02), g.p0);
  EXPECT_NEAR(std::abs(d - cplx(0.01, -0.02)), 0, 1e-14);
  EXPECT_NEAR(g.shortest_period(), 1.0, 1e-15);
}

TEST(Fourier, RoundTripAndModes) {
  const int M = 16;
  const RealField f = sampled(M);
  const RealField back = backward(forward(f));
  for (std::size_t k = 0; k < f.v.size(); ++k) EXPECT_NEAR(back.v[k], f.v[k], 1e-14);
  const Spectrum s = forward(f);
  EXPECT_NEAR(std::abs(s(0, 0) - 0.25), 0, 1e-15);
  EXPECT_NEAR(std::abs(s(2, M - 1) - 0.5), 0, 1e-15);
  EXPECT_NEAR(f.mean(), 0.25, 1e-15);
}

TEST(Fourier, DerivativesAndLaplacian) {
  const int M = 32;
  const TorusGeometry g = geometry(M);
  const Spectrum s = forward(sampled(M));
  // Chain rule for (s, t) = (x - y Re tau / Im tau, y / Im tau).
  const double s0 = 0.13, t0 = 0.62;
  const double fs = -4 * pi * std::sin(2 * pi * (2 * s0 - t0));
  const double ft = 2 * pi * std::sin(2 * pi * (2 * s0 - t0)) + 3 * pi * std::cos(2 * pi * 3 * t0);
  const double fx = fs, fy = (ft - fs * g.tau.real()) / g.tau.imag();
  EXPECT_NEAR(evaluate_exact(derivative(s, g, 1, 0), s0, t0), fx, 1e-12);
  EXPECT_NEAR(evaluate_exact(derivative(s, g, 0, 1), s0, t0), fy, 1e-12);

  const Spectrum lap = inverse_laplacian(s, g);
  const Spectrum again = derivative(lap, g, 2, 0);
  const Spectrum again_y = derivative(lap, g, 0, 2);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) {
      const cplx want = (i == 0 && j == 0) ? cplx(0) : s(i, j);
      EXPECT_NEAR(std::abs(again(i, j) + again_y(i, j) - want), 0, 1e-13);
    }
}

TEST(Grid, InterpolationAndShift) {
  const int M = 64;
  const RealField f = sampled(M);
  EXPECT_NEAR(interpolate(f, 0.1234, 0.8765), trig(0.1234, 0.8765), 1e-7);
  EXPECT_NEAR(evaluate_exact(forward(f), 0.1234, 0.8765), trig(0.1234, 0.8765), 1e-13);
  const RealField half = backward(shifted(forward(f), 0.5 / M, 0.5 / M));
  EXPECT_NEAR(half(3, 5), trig(3.5 / M, 5.5 / M), 1e-13);
}

TEST(Grid, IntegrateUsesArea) {
  const TorusGeometry g = geometry(16);
  RealField one(16);
  for (double& x : one.v) x = 1.0;
  EXPECT_NEAR(integrate(one, g), g.area(), 1e-15);
  EXPECT_NEAR(integrate(sampled(16), g), 0.25 * g.area(), 1e-15);
}

TEST(Jet, ProductsAndFunctions) {
  const int order = 6;
  const Jet x = Jet::variable(order, 0.3, 0), y = Jet::variable(order, -0.2, 1);
  const Jet f = exp(x * y);
  // d^2/dx dy of exp(xy) = (1 + xy) exp(xy).
  EXPECT_NEAR(f.derivative(1, 1), (1 + 0.3 * -0.2) * std::exp(-0.06), 1e-14);
  const Jet r = reciprocal(Jet(order, 2.0) + x);
  EXPECT_NEAR(r.derivative(3, 0), -6.0 / std::pow(2.3, 4), 1e-13);
  const Jet l = log(exp(x + y));
  EXPECT_NEAR(l.value(), 0.1, 1e-15);
  EXPECT_NEAR(l.coeff(1, 0), 1.0, 1e-14);
  EXPECT_NEAR(l.coeff(2, 0), 0.0, 1e-14);
}

TEST(RadialModels, LaplacianLowersTheIndex) {
  const LogPolyModels models(5);
  const double x = 0.07, y = -0.04;
  const std::vector<Jet> jets = models.jets(x, y, 3);
  const double r = std::hypot(x, y);
  EXPECT_NEAR(jets[1].value(), -std::log(r) / (2 * pi), 1e-14);
  EXPECT_NEAR(jets[1].laplacian(), 0.0, 1e-10);
  for (int k = 2; k <= 5; ++k) EXPECT_NEAR(jets[k].laplacian(), jets[k - 1].value(), 1e-10) << "k = " << k;
}

TEST(Cutoffs, ValuesAndComplements) {
  const GaussianCutoff c{0.05, 8, 0.4};
  EXPECT_NEAR(c.value(0.0), 1.0, 1e-15);
  EXPECT_EQ(c.value(0.45), 0.0);
  for (double r : {0.01, 0.1, 0.3}) EXPECT_NEAR(c.value(r) + c.complement(r), 1.0, 1e-14);
  // 1 - chi = O(r^16) near the centre.
  EXPECT_LT(c.complement(0.005), 1e-14);

  const RadialBump b{0.1, 0.4};
  EXPECT_EQ(b.value(0.05), 1.0);
  EXPECT_EQ(b.value(0.5), 0.0);
  const Jet j = b.jet(0.2, 0.1, 2);
  EXPECT_NEAR(j.value(), b.value(std::hypot(0.2, 0.1)), 1e-15);
}
