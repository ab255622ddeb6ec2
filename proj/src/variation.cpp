#include "magnus/variation.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "magnus/parallel.hpp"
#include "magnus/torus_diagnostics.hpp"

namespace magnus {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

cplx BeltramiField::value(cplx z) const {
  if (rho <= 0) return amplitude;
  const double r = std::abs(geom.nearest_offset(z, geom.p0));
  return amplitude * (1.0 - RadialBump{0.5 * rho, rho}.value(r));
}

BeltramiField beltrami_field(const TorusGeometry& g, cplx amplitude, double rho) {
  g.validate();
  if (rho < 0) throw std::invalid_argument("beltrami: bump radius must be non-negative");
  if (rho > 0 && rho < g.cell_radius(4)) throw std::invalid_argument("beltrami: bump radius too small for the grid");
  if (rho >= 0.5 * g.shortest_period()) throw std::invalid_argument("beltrami: bump radius overlaps lattice images");
  return BeltramiField{g, amplitude, rho};
}

Marking::Marking(const BeltramiField& mu, double t) : g_(mu.geom), t_(t) {
  g_.validate();
  if (!(std::fabs(t) <= 0.1)) throw std::invalid_argument("marking: |t| outside the first-order regime");
  const int M = g_.M;
  std::vector<cplx> samples(std::size_t(M) * M);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) samples[std::size_t(i) * M + j] = mu.value(g_.grid_point(i, j));
  std::vector<cplx> hat = forward_complex(samples, M);
  c_ = hat[0];
  // Symbols of dbar and d on mode (k1, k2).
  const double it = g_.tau.imag();
  std::vector<cplx> u(hat.size()), uz(hat.size()), uzb(hat.size());
  for (int i = 0; i < M; ++i) {
    const int k1 = Spectrum::wavenumber(i, M);
    for (int j = 0; j < M; ++j) {
      const int k2 = Spectrum::wavenumber(j, M);
      const std::size_t n = std::size_t(i) * M + j;
      if ((i == 0 && j == 0) || i == M / 2 || j == M / 2) continue;
      const cplx dbar = -kPi * (double(k2) - double(k1) * g_.tau) / it;
      const cplx d = kPi * (double(k2) - double(k1) * std::conj(g_.tau)) / it;
      u[n] = hat[n] / dbar;
      uz[n] = u[n] * d;
      uzb[n] = hat[n];
    }
  }
  const std::vector<cplx>* spectra[3] = {&u, &uz, &uzb};
  for (int f = 0; f < 3; ++f) {
    std::vector<cplx> v = backward_complex(*spectra[f], M);
    parts_[2 * f] = RealField(M);
    parts_[2 * f + 1] = RealField(M);
    for (std::size_t n = 0; n < v.size(); ++n) {
      parts_[2 * f].v[n] = v[n].real();
      parts_[2 * f + 1].v[n] = v[n].imag();
    }
  }
  deformed_ = g_;
  deformed_.tau = (g_.tau + t * c_ * std::conj(g_.tau)) / (1.0 + t * c_);
  deformed_.p0 = map(g_.p0);
  const auto jac = jacobian(g_.p0);
  deformed_.v = jac[0] * g_.v + jac[1] * std::conj(g_.v);
  deformed_.validate();
}

std::array<cplx, 3> Marking::fields(cplx z) const {
  auto l = g_.lattice(z);
  l[0] -= std::floor(l[0]);
  l[1] -= std::floor(l[1]);
  std::array<cplx, 3> out;
  for (int f = 0; f < 3; ++f) out[f] = {interpolate(parts_[2 * f], l[0], l[1]), interpolate(parts_[2 * f + 1], l[0], l[1])};
  return out;
}

cplx Marking::map(cplx z) const {
  if (t_ == 0) return z;
  const auto f = fields(z);
  return (z + t_ * (c_ * std::conj(z) + f[0])) / (1.0 + t_ * c_);
}

std::array<cplx, 2> Marking::jacobian(cplx z) const {
  if (t_ == 0) return {cplx(1, 0), cplx(0, 0)};
  const auto f = fields(z);
  return {(1.0 + t_ * f[1]) / (1.0 + t_ * c_), t_ * (c_ + f[2]) / (1.0 + t_ * c_)};
}

TangentialLoop Marking::image(const TangentialLoop& loop) const {
  TangentialLoop out;
  out.label = loop.label;
  out.knots = loop.knots;
  const Marking self = *this;
  out.position = [self, pos = loop.position](double s) { return self.map(pos(s)); };
  out.displacement = [self, pos = loop.position, disp = loop.displacement](double s) {
    const cplx z = pos(s);
    const cplx d = disp ? disp(s) : z - pos(s < 0.5 ? 0.0 : 1.0);
    const cplx anchor = z - d;
    cplx du;
    if (std::abs(d) < 1e-6) {
      const auto f = self.fields(anchor);
      du = f[1] * d + f[2] * std::conj(d);
    } else {
      du = self.fields(z)[0] - self.fields(anchor)[0];
    }
    return (d + self.t_ * (self.c_ * std::conj(d) + du)) / (1.0 + self.t_ * self.c_);
  };
  out.velocity = [self, pos = loop.position, vel = loop.velocity](double s) {
    const auto j = self.jacobian(pos(s));
    const cplx d = vel(s);
    return j[0] * d + j[1] * std::conj(d);
  };
  return out;
}

VariationPrediction variation_predict(const ConnectionForm& cf, const BeltramiField& mu, const FSeries& theta_gamma) {
  if (!mu.vanishes_at_p0()) throw std::invalid_argument("variation_predict: mu must vanish at P0");
  const TorusGeometry& g = cf.geometry();
  if (mu.geom.M != g.M || mu.geom.tau != g.tau || mu.geom.p0 != g.p0)
    throw std::invalid_argument("variation_predict: Beltrami field lives on a different torus");
  const int top = cf.degree() + 1;
  if (theta_gamma.dim() != 2 || theta_gamma.trunc() > top - 1)
    throw std::invalid_argument("variation_predict: theta(gamma) must have dim 2 and trunc <= connection degree");

  std::vector<std::size_t> offset(top + 2, 0);
  for (int m = 2; m <= top; ++m) offset[m + 1] = offset[m] + (std::size_t(1) << m);
  std::vector<std::vector<double>> rows(g.M, std::vector<double>(offset[top + 1], 0.0));
  cf.for_each_node(0, 0, [&](int i, int, cplx z, const FormSample& s) {
    const cplx m_dot = mu.value(z);
    if (m_dot == cplx(0, 0)) return;
    for (int m = 2; m <= top; ++m) {
      std::vector<cplx> q = quad_coefficients(cf, s, m);
      if (m == 2) {
        const auto p = prime_product(cf, s, 1, 1);
        for (std::size_t w = 0; w < q.size(); ++w) q[w] -= 2.0 * p[w];
      }
      for (std::size_t w = 0; w < q.size(); ++w) rows[i][offset[m] + w] += 4.0 * std::imag(q[w] * m_dot);
    }
  });
  std::vector<double> sum(offset[top + 1], 0.0);
  for (const auto& r : rows)
    for (std::size_t k = 0; k < r.size(); ++k) sum[k] += r[k];
  const double dA = g.area() / (double(g.M) * g.M);

  VariationPrediction out;
  out.h = FSeries(2, top);
  for (int m = 2; m <= top; ++m)
    for (std::size_t w = 0; w < (std::size_t(1) << m); ++w) out.h.add_term(m, w, sum[offset[m] + w] * dA);
  Derivation<double> u = interior(Symplectic(1), out.h);
  std::vector<FSeries> images;
  for (const auto& img : u.images()) images.push_back(img.with_trunc(theta_gamma.trunc()));
  out.theta_dot = derive(Derivation<double>(images), theta_gamma);
  return out;
}

RauchCheck rauch_check(const BeltramiField& mu, double h) {
  const TorusGeometry& g = mu.geom;
  RauchCheck rc;
  // dz ^ dzbar = -2i dx ^ dy.
  cplx sum = 0;
  for (int i = 0; i < g.M; ++i)
    for (int j = 0; j < g.M; ++j) sum += mu.value(g.grid_point(i, j));
  rc.integral = cplx(0, -2) * sum * (g.area() / (double(g.M) * g.M));
  // Period of the image of the b-cycle under the marking.
  auto period = [&](double t) {
    Marking f(mu, t);
    return f.map(g.p0 + g.tau) - f.map(g.p0);
  };
  rc.tau_dot = (period(h) - period(-h)) / (2 * h);
  rc.relative_error = std::abs(rc.integral - rc.tau_dot) / std::abs(rc.tau_dot);
  return rc;
}

VariationReport variation_check(const TorusGeometry& g, int deg, const BeltramiField& mu, double h,
                                const std::vector<TangentialLoop>& loops, double threshold, const MeshConfig& mesh) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!(h > 0)) throw std::invalid_argument("variation_check: step must be positive");
  ConnectionForm cf(g, deg);
  std::vector<FSeries> base(loops.size());
  for (std::size_t i = 0; i < loops.size(); ++i) base[i] = loop_value(cf, loops[i], mesh);

  std::vector<FSeries> plus(loops.size()), minus(loops.size());
  for (int side = 0; side < 2; ++side) {
    const Marking f(mu, side == 0 ? h : -h);
    ConnectionForm moved(f.deformed(), deg);
    auto& dst = side == 0 ? plus : minus;
    for (std::size_t i = 0; i < loops.size(); ++i) dst[i] = loop_value(moved, f.image(loops[i]), mesh);
  }

  VariationReport rep;
  for (std::size_t i = 0; i < loops.size(); ++i) {
    LoopVariation lv;
    lv.label = loops[i].label;
    lv.predicted = variation_predict(cf, mu, base[i]).theta_dot;
    lv.finite_difference = (plus[i] - minus[i]) * (1.0 / (2 * h));
    lv.max_relative_error.assign(deg + 1, 0.0);
    lv.compared.assign(deg + 1, 0);
    for (int m = 1; m <= deg; ++m) {
      const double np = lv.predicted.component_norm(m), nf = lv.finite_difference.component_norm(m);
      std::map<std::uint64_t, std::pair<double, double>> both;
      for (const auto& [code, c] : lv.predicted.component(m)) both[code].first = c;
      for (const auto& [code, c] : lv.finite_difference.component(m)) both[code].second = c;
      for (const auto& [code, pf] : both) {
        const auto [p, fd] = pf;
        if (std::fabs(p) < threshold * np && std::fabs(fd) < threshold * nf) continue;
        ++lv.compared[m];
        const double err = p == 0 ? std::numeric_limits<double>::infinity() : std::fabs(fd - p) / std::fabs(p);
        lv.max_relative_error[m] = std::max(lv.max_relative_error[m], err);
      }
    }
    rep.loops.push_back(std::move(lv));
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace magnus
