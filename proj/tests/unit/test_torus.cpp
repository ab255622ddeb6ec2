#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "magnus/torus.hpp"
#include "magnus/torus_diagnostics.hpp"
#include "magnus/variation.hpp"

using namespace magnus;
using std::numbers::pi;

namespace {

TorusGeometry geometry(int M) { return TorusGeometry{{0.3, 1.1}, {0.41, 0.27}, {1.0, 0.0}, M}; }

// Odd Jacobi theta function theta_1(u | tau), zero at u = 0.
cplx theta1(cplx u, cplx tau) {
  const cplx i(0, 1);
  cplx sum = 0;
  for (int n = 0; n < 30; ++n) {
    const double e = (n + 0.5) * (n + 0.5);
    sum += (n % 2 ? -2.0 : 2.0) * std::exp(i * pi * tau * e) * std::sin(double(2 * n + 1) * u);
  }
  return sum;
}

// Closed form of the Green function with Laplacian 1/area - delta_P0, up to a constant.
double green_oracle(const TorusGeometry& g, cplx z) {
  const cplx w = z - g.p0;
  return -std::log(std::abs(theta1(pi * w, g.tau))) / (2 * pi) + w.imag() * w.imag() / (2 * g.tau.imag());
}

class TorusFixture : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { form = std::make_unique<ConnectionForm>(geometry(128), 4); }
  static void TearDownTestSuite() { form.reset(); }
  static std::unique_ptr<ConnectionForm> form;
};
std::unique_ptr<ConnectionForm> TorusFixture::form;

}  // namespace

TEST(Harmonic, BasisPeriods) {
  const TorusGeometry g = geometry(32);
  const HarmonicBasis h = harmonic_basis(g, 3);
  auto period = [](const ConstantForm& f, cplx v) { return f.cx * v.real() + f.cy * v.imag(); };
  EXPECT_NEAR(period(h.alpha, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(period(h.alpha, g.tau), 0.0, 1e-15);
  EXPECT_NEAR(period(h.beta, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(period(h.beta, g.tau), 1.0, 1e-15);
}

TEST(Harmonic, SquareTorusBasis) {
  TorusGeometry g = geometry(32);
  g.tau = {0, 1};
  const HarmonicBasis h = harmonic_basis(g, 2);
  EXPECT_EQ(h.alpha.cx, 1.0);
  EXPECT_EQ(h.alpha.cy, 0.0);
  EXPECT_EQ(h.beta.cx, 0.0);
  EXPECT_EQ(h.beta.cy, 1.0);
  EXPECT_EQ(h.intersection, Symplectic(1).intersection<double>(2));
}

TEST(Green, FirstPotentialMatchesThetaFunction) {
  const TorusGeometry g = geometry(128);
  const GreenTower tower(g, 2, default_cutoff(g));
  const cplx ref = g.p0 + cplx(0.31, 0.42);
  const double base = tower.at(ref)(1, 0, 0) - green_oracle(g, ref);
  for (cplx d : {cplx(0.01, 0.0), cplx(-0.05, 0.03), cplx(0.2, 0.5), cplx(0.7, 0.9), cplx(0.45, -0.3)}) {
    const cplx z = g.p0 + d;
    EXPECT_NEAR(tower.at(z)(1, 0, 0) - green_oracle(g, z), base, 1e-8) << d;
  }
}

TEST(Green, TowerLaplacians) {
  const TorusGeometry g = geometry(128);
  const GreenTower tower(g, 3, default_cutoff(g));
  const cplx z1 = g.p0 + cplx(0.13, 0.4), z2 = g.p0 + cplx(0.6, 0.07);
  const auto s1 = tower.at(z1), s2 = tower.at(z2);
  auto lap = [](const GreenTower::Sample& s, int k) { return s(k, 2, 0) + s(k, 0, 2); };
  EXPECT_NEAR(lap(s1, 1), 1.0 / g.area(), 1e-9);
  // Laplacian of G_k is G_{k-1} minus its mean, so differences agree.
  for (int k = 2; k <= 3; ++k) EXPECT_NEAR(lap(s1, k) - lap(s2, k), s1(k - 1, 0, 0) - s2(k - 1, 0, 0), 1e-9);
}

TEST(Loops, DefaultLoopsValidate) {
  const TorusGeometry g = geometry(64);
  for (const auto& loop : default_loops(g)) {
    const LoopCheck c = validate_loop(loop, g);
    EXPECT_LE(c.endpoint_error, 1e-12) << loop.label;
    EXPECT_GT(c.clearance, 0.04) << loop.label;
  }
  const auto polys = default_polylines(g);
  EXPECT_THROW(validate_loop(spline_loop("b", polys[0], g.v), g), std::invalid_argument);
  EXPECT_THROW(validate_loop(spline_loop("x", polys[0], g.v), g), std::invalid_argument);
  EXPECT_THROW(validate_loop(spline_loop("a", {g.p0, g.p0 + 0.5 + cplx(0, 0.001), g.p0 + 1.0}, g.v), g), std::invalid_argument);
}

TEST(Loops, DisplacementIsEndpointRelative) {
  const TorusGeometry g = geometry(64);
  for (const auto& loop : default_loops(g)) {
    for (double t : {1e-7, 0.01, 0.3, 0.49}) EXPECT_NEAR(std::abs(loop.displacement(t) - (loop.position(t) - loop.position(0))), 0, 1e-13);
    for (double t : {0.5, 0.8, 1 - 1e-7}) EXPECT_NEAR(std::abs(loop.displacement(t) - (loop.position(t) - loop.position(1))), 0, 1e-13);
    // Tangential start: l(t) - l(0) ~ t v.
    EXPECT_NEAR(std::abs(loop.displacement(1e-8) / 1e-8 - g.v), 0, 1e-6);
  }
}

TEST_F(TorusFixture, LoopValueUsesDisplacementConsistently) {
  TangentialLoop loop = default_loops(form->geometry())[0];
  const FSeries with = loop_value(*form, loop);
  loop.displacement = nullptr;
  EXPECT_LE(max_abs_diff(with, loop_value(*form, loop)), 1e-6);
}

TEST_F(TorusFixture, ExpansionIsGroupLikeAndSymplectic) {
  const TorusExpansion ex = expansion(*form, default_loops(form->geometry()));
  EXPECT_LE(ex.degree_one_error, 1e-6);
  EXPECT_LE(max_abs_diff(mul(ex.value("a"), ex.value("b")), ex.value("ab")), 1e-4);
  const FSeries I = harmonic_basis(form->geometry(), 4).intersection;
  EXPECT_LE(max_abs_diff(evaluate(ex.theta, w0(1)), exp_series(I)), 1e-4);
  // Values are group-like: log has no degree-0 part and is a Lie element in degree 2.
  const FSeries l = log_series(ex.value("a"));
  EXPECT_NEAR(l.coeff({1, 2}) + l.coeff({2, 1}), 0, 1e-8);
  EXPECT_THROW(ex.value("c"), std::out_of_range);
}

TEST_F(TorusFixture, HomotopicLoopsAgree) {
  const TorusGeometry& g = form->geometry();
  const std::vector<cplx> other = {g.p0, g.p0 + g.point(0.4, 0.3), g.p0 + g.point(0.8, 0.25), g.p0 + g.point(1.2, 0.08), g.p0 + 1.0};
  const TangentialLoop a2 = spline_loop("a", other, g.v);
  validate_loop(a2, g);
  const FSeries x = loop_value(*form, default_loops(g)[0]).degree_range(0, 3);
  const FSeries y = loop_value(*form, a2).degree_range(0, 3);
  EXPECT_LE(max_abs_diff(x, y), 1e-4);
}

TEST_F(TorusFixture, WedgeOfDegreeOneFormsIsIntersection) {
  for (const auto& w : wedge_integrals(*form, 3)) {
    if (w.p == 1 && w.q == 1) EXPECT_LE(max_abs_diff(w.value, harmonic_basis(form->geometry(), w.value.trunc()).intersection), 1e-7);
    else EXPECT_LE(w.value.max_abs(), 1e-6 * w.scale) << w.p << "," << w.q;
  }
}

TEST_F(TorusFixture, IntegrabilityResidualIsSmall) {
  const IntegrabilityReport r = integrability_residual(*form);
  for (int m = 2; m <= 4; ++m) EXPECT_LE(r.residual[m], 1e-8 * std::max(1.0, r.scale[m])) << "m = " << m;
}

TEST_F(TorusFixture, GrowthEnvelopes) {
  for (int m = 3; m <= 4; ++m) {
    const GrowthEnvelope e = growth_envelope(*form, m);
    EXPECT_EQ(e.exponent, (m - 1) / 2);
    EXPECT_LE(e.worst_ratio, 1.5) << "m = " << m;
  }
}

TEST_F(TorusFixture, QuadraticDifferentialAlgebra) {
  const QuadDifferentialReport q = quad_differential(*form);
  EXPECT_LE(q.degree3_ratio, 1e-12);
  EXPECT_LE(q.epsilon_defect, 1e-12);
  EXPECT_EQ(q.pole_order[2], 0);
  EXPECT_EQ(q.pole_order[4], 2);
  // Cyclic symmetrisation commutes with rotation.
  std::vector<cplx> x(8);
  for (int k = 0; k < 8; ++k) x[k] = cplx(k, 1 - k * k);
  const auto a = cyclic_sum(rotate_last_to_front(x, 3), 3), b = cyclic_sum(x, 3);
  for (int k = 0; k < 8; ++k) EXPECT_NEAR(std::abs(a[k] - b[k]), 0, 1e-14);
}

TEST(Variation, BeltramiValidation) {
  const TorusGeometry g = geometry(64);
  EXPECT_THROW(beltrami_field(g, 0.05, 0.01), std::invalid_argument);
  EXPECT_THROW(beltrami_field(g, 0.05, 0.6), std::invalid_argument);
  const BeltramiField mu = beltrami_field(g, 0.05, 0.2);
  EXPECT_TRUE(mu.vanishes_at_p0());
  EXPECT_EQ(mu.value(g.p0), cplx(0));
  EXPECT_EQ(mu.value(g.p0 + cplx(0.3, 0.3)), cplx(0.05));
  const ConnectionForm cf(g, 2);
  EXPECT_THROW(variation_predict(cf, beltrami_field(g, 0.05, 0.0), FSeries::one(2, 3)), std::invalid_argument);
}

TEST(Variation, MarkingMapsLatticeAndLoops) {
  const TorusGeometry g = geometry(64);
  const Marking f(beltrami_field(g, cplx(0.05, 0.02), 0.2), 1e-3);
  const TorusGeometry& d = f.deformed();
  // Quasi-periodicity: f(z + 1) = f(z) + 1 and f(z + tau) = f(z) + tau_t.
  const cplx z = g.p0 + cplx(0.2, 0.3);
  EXPECT_NEAR(std::abs(f.map(z + 1.0) - f.map(z) - 1.0), 0, 1e-12);
  EXPECT_NEAR(std::abs(f.map(z + g.tau) - f.map(z) - d.tau), 0, 1e-12);
  EXPECT_NEAR(std::abs(d.p0 - f.map(g.p0)), 0, 1e-15);
  const TangentialLoop loop = default_loops(g)[2];
  const TangentialLoop image = f.image(loop);
  for (double t : {0.1, 0.3})
    EXPECT_NEAR(std::abs(image.displacement(t) - (f.map(loop.position(t)) - f.map(loop.position(0)))), 0, 1e-12);
  EXPECT_NEAR(std::abs(image.position(0.7) - f.map(loop.position(0.7))), 0, 1e-14);
  EXPECT_NO_THROW(validate_loop(image, d));
}

TEST(Variation, RauchFormula) {
  const RauchCheck rc = rauch_check(beltrami_field(geometry(64), cplx(0.05, 0.01), 0.0), 1e-3);
  EXPECT_LE(rc.relative_error, 1e-3);
  EXPECT_GT(std::abs(rc.integral), 0.0);
}
