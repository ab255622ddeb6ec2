#include "magnus/torus.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "magnus/parallel.hpp"

namespace magnus {

namespace {
constexpr double kPi = 3.14159265358979323846;

// The layout index of a word code of degree m.
std::size_t dense_index(const DenseSeries& layout, int m, std::uint64_t code) { return layout.offset(m) + code; }

}  // namespace

HarmonicBasis harmonic_basis(const TorusGeometry& g, int trunc) {
  if (!(g.tau.imag() > 0)) throw std::invalid_argument("harmonic_basis: Im tau must be positive");
  HarmonicBasis h;
  h.alpha = {1.0, -g.tau.real() / g.tau.imag()};
  h.beta = {0.0, 1.0 / g.tau.imag()};
  h.intersection = FSeries::word(2, trunc, {1, 2}) - FSeries::word(2, trunc, {2, 1});
  return h;
}

GaussianCutoff default_cutoff(const TorusGeometry& g) {
  const double support = 0.45 * g.shortest_period();
  return GaussianCutoff{support / 8, 8, support};
}

namespace {

// Delta(chi s_k) - chi s_(k-1) = -Delta((1 - chi) s_k) + (1 - chi) s_(k-1) off
// P0. It is O(r^(2N-2) log r) at the centre, so tiny radii contribute zero.
std::vector<double> cutoff_sources(const GaussianCutoff& cut, const LogPolyModels& models, cplx d) {
  std::vector<double> out(models.kmax() + 1, 0.0);
  const double r = std::abs(d);
  if (r >= cut.support || r < 0.05 * cut.sigma) return out;
  Jet c = cut.complement_jet(d.real(), d.imag(), 2);
  std::vector<Jet> s = models.jets(d.real(), d.imag(), 2);
  for (int k = 1; k <= models.kmax(); ++k) {
    out[k] = -(c * s[k]).laplacian();
    if (k >= 2) out[k] += c.value() * s[k - 1].value();
  }
  return out;
}

void normalize_at(Spectrum& s, const TorusGeometry& g, cplx p) {
  s(0, 0) = 0;
  const auto l = g.lattice(p);
  s(0, 0) = -evaluate_exact(s, l[0], l[1]);
}

}  // namespace

GreenSolution green_solve(const RealField& density, const TorusGeometry& g) {
  g.validate();
  if (density.M != g.M) throw std::invalid_argument("green_solve: grid size mismatch");
  for (double x : density.v)
    if (!std::isfinite(x)) throw std::domain_error("green_solve: non-finite density sample");
  GreenSolution sol;
  sol.geom = g;
  sol.cutoff = default_cutoff(g);
  sol.charge = integrate(density, g);
  LogPolyModels models(1);
  RealField rhs = density;
  for (int i = 0; i < g.M; ++i)
    for (int j = 0; j < g.M; ++j)
      rhs(i, j) -= sol.charge * cutoff_sources(sol.cutoff, models, g.nearest_offset(g.grid_point(i, j), g.p0))[1];
  sol.remainder = inverse_laplacian(forward(rhs), g);
  normalize_at(sol.remainder, g, g.p0);
  return sol;
}

double GreenSolution::value(cplx z) const {
  const cplx d = geom.nearest_offset(z, geom.p0);
  const double r = std::abs(d);
  const auto l = geom.lattice(z);
  double v = evaluate_exact(remainder, l[0], l[1]);
  if (r < cutoff.support) v += charge * cutoff.value(r) * (-std::log(r) / (2 * kPi));
  return v;
}

double GreenSolution::laplacian(cplx z) const {
  const cplx d = geom.nearest_offset(z, geom.p0);
  const auto l = geom.lattice(z);
  double v = evaluate_exact(derivative(remainder, geom, 2, 0), l[0], l[1]) +
             evaluate_exact(derivative(remainder, geom, 0, 2), l[0], l[1]);
  LogPolyModels models(1);
  if (std::abs(d) < cutoff.support) v += charge * cutoff_sources(cutoff, models, d)[1];
  return v;
}

GreenTower::GreenTower(const TorusGeometry& g, int kmax, GaussianCutoff cutoff)
    : g_(g), kmax_(kmax), cutoff_(cutoff), models_(kmax), spec_(kmax + 1) {
  g.validate();
  if (kmax < 1 || kmax + 1 > Jet::kMaxOrder) throw std::invalid_argument("green tower: kmax out of range");
  if (cutoff.support >= 0.5 * g.shortest_period()) throw std::invalid_argument("green tower: cutoff overlaps lattice images");
  const int M = g.M;
  std::vector<RealField> source(kmax + 1, RealField(M));
  parallel_for(std::size_t(M), [&](std::size_t ii) {
    const int i = int(ii);
    for (int j = 0; j < M; ++j) {
      const auto src = cutoff_sources(cutoff, models_, g.nearest_offset(g.grid_point(i, j), g.p0));
      for (int k = 1; k <= kmax; ++k) source[k](i, j) = src[k];
    }
  });
  RealField prev(M);
  for (int k = 1; k <= kmax; ++k) {
    RealField rhs(M);
    for (std::size_t n = 0; n < rhs.v.size(); ++n)
      rhs.v[n] = (k == 1 ? 1.0 / g.area() : prev.v[n]) - source[k].v[n];
    spec_[k] = inverse_laplacian(forward(rhs), g);
    normalize_at(spec_[k], g, g.p0);
    prev = backward(spec_[k]);
  }
  base_ = make_fields(0, 0);
}

GreenTower::Fields GreenTower::make_fields(double ds, double dt) const {
  Fields f;
  f.ds = ds;
  f.dt = dt;
  f.r.assign(kmax_ + 1, {});
  struct Job {
    int k, a, b;
  };
  std::vector<Job> jobs;
  for (int k = 1; k <= kmax_; ++k) {
    f.r[k].assign(Jet::index(0, max_order(k)) + 1, RealField());
    for (int o = 0; o <= max_order(k); ++o)
      for (int b = 0; b <= o; ++b) jobs.push_back({k, o - b, b});
  }
  parallel_for(jobs.size(), [&](std::size_t n) {
    const Job& j = jobs[n];
    Spectrum s = derivative(spec_[j.k], g_, j.a, j.b);
    if (ds != 0 || dt != 0) s = shifted(s, ds / g_.M, dt / g_.M);
    f.r[j.k][Jet::index(j.a, j.b)] = backward(s);
  });
  return f;
}

GreenTower::Fields GreenTower::shifted_fields(double ds, double dt) const {
  if (ds == 0 && dt == 0) return base_;
  return make_fields(ds, dt);
}

cplx GreenTower::node_point(const Fields& f, int i, int j) const {
  return g_.point((i + f.ds) / g_.M, (j + f.dt) / g_.M);
}

void GreenTower::add_singular(Sample& s, cplx d) const {
  const double r = std::abs(d);
  if (r >= cutoff_.support) return;
  if (r == 0) {
    for (auto& row : s.d)
      for (double& x : row) x = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  const int order = kmax_ + 1;
  std::vector<Jet> sj = models_.jets(d.real(), d.imag(), order);
  Jet c = cutoff_.complement_jet(d.real(), d.imag(), order);
  for (int k = 1; k <= kmax_; ++k) {
    Jet j = sj[k] - c * sj[k];
    for (int o = 0; o <= max_order(k); ++o)
      for (int b = 0; b <= o; ++b) s.d[k][Jet::index(o - b, b)] += j.derivative(o - b, b);
  }
}

GreenTower::Sample GreenTower::at(cplx z, std::optional<cplx> offset) const {
  Sample s;
  s.d.assign(kmax_ + 1, {});
  auto l = g_.lattice(z);
  l[0] -= std::floor(l[0]);
  l[1] -= std::floor(l[1]);
  for (int k = 1; k <= kmax_; ++k) {
    s.d[k].assign(base_.r[k].size(), 0.0);
    for (std::size_t n = 0; n < base_.r[k].size(); ++n) s.d[k][n] = interpolate(base_.r[k][n], l[0], l[1]);
  }
  add_singular(s, offset ? *offset : g_.nearest_offset(z, g_.p0));
  return s;
}

GreenTower::Sample GreenTower::at_node(const Fields& f, int i, int j) const {
  Sample s;
  s.d.assign(kmax_ + 1, {});
  for (int k = 1; k <= kmax_; ++k) {
    s.d[k].assign(f.r[k].size(), 0.0);
    for (std::size_t n = 0; n < f.r[k].size(); ++n) s.d[k][n] = f.r[k][n](i, j);
  }
  add_singular(s, g_.nearest_offset(node_point(f, i, j), g_.p0));
  return s;
}

ConnectionForm::ConnectionForm(const TorusGeometry& g, int deg) : g_(g), deg_(deg) {
  g.validate();
  if (deg < 2) throw std::invalid_argument("connection form: degree >= 2 required");
  if (deg > Jet::kMaxOrder) throw std::invalid_argument("connection form: degree too large");
  const auto t0 = std::chrono::steady_clock::now();
  basis_ = harmonic_basis(g, deg);
  layout_ = DenseSeries(2, deg);
  green_ = std::make_shared<GreenTower>(g, deg - 1, default_cutoff(g));
  build();
  diag_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

namespace {

std::vector<std::pair<std::size_t, double>> dense_terms(const DenseSeries& layout, const FSeries& s) {
  std::vector<std::pair<std::size_t, double>> out;
  s.for_each([&](int m, std::uint64_t code, double c) { out.push_back({dense_index(layout, m, code), c}); });
  return out;
}

using PotKey = std::tuple<int, int, int>;

}  // namespace

void ConnectionForm::build() {
  const int n = 2, d = deg_;
  potentials_.assign(d + 1, {});
  grids_.assign(d + 1, {});
  consts_.assign(d + 1, {});
  pot_index_.assign(d + 1, {});
  diag_.charge.assign(d + 1, 0.0);

  const FSeries X1 = FSeries::generator(n, d, 1), X2 = FSeries::generator(n, d, 2);
  std::vector<std::pair<ConstantForm, FSeries>> const_terms = {{basis_.alpha, X1}, {basis_.beta, X2}};
  for (const auto& [form, t] : const_terms) {
    std::vector<ScaledIndex> idx;
    for (auto [i, c] : dense_terms(layout_, t)) idx.push_back({i, c});
    consts_[1].push_back({form, idx});
  }

  for (int m = 2; m <= d; ++m) {
    std::map<PotKey, FSeries> pots;
    auto add_pot = [&](int k, int a, int b, const FSeries& coeff) {
      auto it = pots.find({k, a, b});
      if (it == pots.end())
        pots.emplace(PotKey{k, a, b}, coeff);
      else
        it->second += coeff;
    };
    std::map<std::uint64_t, RealField> grid_density;
    auto density_for = [&](std::uint64_t code) -> RealField& {
      auto it = grid_density.find(code);
      if (it == grid_density.end()) it = grid_density.emplace(code, RealField(g_.M)).first;
      return it->second;
    };

    // omega_1 ^ omega_1 = (alpha ^ beta) I: a constant density.
    if (m == 2) {
      for (const auto& [fp, tp] : const_terms)
        for (const auto& [fq, tq] : const_terms) {
          const double w = fp.cx * fq.cy - fp.cy * fq.cx;
          if (w != 0) add_pot(1, 0, 0, (tp * tq) * (w * g_.area()));
        }
    }
    // omega_1 ^ *dF = d_c F and *dF ^ omega_1 = -d_c F.
    for (const auto& [form, t1] : const_terms) {
      for (const auto& pt : potentials_[m - 1]) {
        FSeries left = t1 * pt.coeff, right = pt.coeff * t1;
        FSeries lin = left - right;
        if (form.cx != 0) add_pot(pt.k + 1, pt.a + 1, pt.b, lin * form.cx);
        if (form.cy != 0) add_pot(pt.k + 1, pt.a, pt.b + 1, lin * form.cy);
      }
      for (const auto& gt : grids_[m - 1]) {
        for (int side = 0; side < 2; ++side) {
          const std::uint64_t code = side == 0 ? (std::uint64_t(t1.component(1).begin()->first) * layout_.block(m - 1) + gt.code)
                                               : (gt.code * 2 + t1.component(1).begin()->first);
          RealField& rho = density_for(code);
          const double sign = side == 0 ? 1.0 : -1.0;
          for (std::size_t q = 0; q < rho.v.size(); ++q) rho.v[q] += sign * (form.cx * gt.fx.v[q] + form.cy * gt.fy.v[q]);
        }
      }
    }
    // Products of two non-constant parts are formed on the grid.
    std::vector<std::pair<int, int>> nonlinear;
    for (int p = 2; p + 2 <= m; ++p) nonlinear.push_back({p, m - p});
    if (!nonlinear.empty()) {
      const std::size_t lo = layout_.offset(m), hi = layout_.offset(m + 1);
      std::vector<RealField> rho(hi - lo, RealField(g_.M));
      const double r_min = 0.5 * g_.cell_radius(1);
      for_each_node(0, 0, [&](int i, int j, cplx z, const FormSample& s) {
        if (std::abs(g_.nearest_offset(z, g_.p0)) < r_min) return;
        for (auto [p, q] : nonlinear) {
          const std::size_t op = layout_.offset(p), oq = layout_.offset(q);
          const std::size_t bp = layout_.block(p), bq = layout_.block(q);
          for (std::size_t w1 = 0; w1 < bp; ++w1) {
            const double P1 = s.P[op + w1], Q1 = s.Q[op + w1];
            if (P1 == 0 && Q1 == 0) continue;
            for (std::size_t w2 = 0; w2 < bq; ++w2) {
              const double val = P1 * s.Q[oq + w2] - Q1 * s.P[oq + w2];
              if (val != 0) rho[w1 * bq + w2](i, j) += val;
            }
          }
        }
      });
      for (std::size_t w = 0; w < rho.size(); ++w) {
        if (rho[w].max_abs() == 0) continue;
        RealField& dst = density_for(w);
        for (std::size_t q = 0; q < dst.v.size(); ++q) dst.v[q] += rho[w].v[q];
      }
    }

    for (auto& [key, coeff] : pots) {
      if (coeff.is_zero() || coeff.max_abs() < 1e-300) continue;
      auto [k, a, b] = key;
      potentials_[m].push_back({k, a, b, coeff});
    }
    for (auto& [code, rho] : grid_density) {
      if (rho.max_abs() == 0) continue;
      diag_.charge[m] = std::max(diag_.charge[m], std::fabs(integrate(rho, g_)));
      GridTerm gt;
      gt.degree = m;
      gt.code = code;
      gt.potential = inverse_laplacian(forward(rho), g_);
      gt.fx = backward(derivative(gt.potential, g_, 1, 0));
      gt.fy = backward(derivative(gt.potential, g_, 0, 1));
      RealField lap = backward(derivative(gt.potential, g_, 2, 0));
      RealField lyy = backward(derivative(gt.potential, g_, 0, 2));
      for (std::size_t q = 0; q < lap.v.size(); ++q) lap.v[q] += lyy.v[q];
      gt.lap = std::move(lap);
      grids_[m].push_back(std::move(gt));
    }
    for (const auto& pt : potentials_[m]) {
      std::vector<ScaledIndex> idx;
      for (auto [i, c] : dense_terms(layout_, pt.coeff)) idx.push_back({i, c});
      pot_index_[m].push_back(idx);
    }
  }
}

void ConnectionForm::fill(FormSample& out, const GreenTower::Sample& gs,
                          const std::function<std::array<double, 3>(const GridTerm&)>& grid) const {
  const std::size_t size = layout_.size();
  out.P.assign(size, 0.0);
  out.Q.assign(size, 0.0);
  out.D.assign(size, 0.0);
  for (int m = 1; m <= deg_; ++m) {
    for (const auto& [form, idx] : consts_[m])
      for (const auto& [i, c] : idx) {
        out.P[i] += c * form.cx;
        out.Q[i] += c * form.cy;
      }
    for (std::size_t t = 0; t < potentials_[m].size(); ++t) {
      const PotentialTerm& pt = potentials_[m][t];
      const double fx = gs(pt.k, pt.a + 1, pt.b), fy = gs(pt.k, pt.a, pt.b + 1);
      const double lap = gs(pt.k, pt.a + 2, pt.b) + gs(pt.k, pt.a, pt.b + 2);
      for (const auto& [i, c] : pot_index_[m][t]) {
        out.P[i] -= c * fy;
        out.Q[i] += c * fx;
        out.D[i] += c * lap;
      }
    }
    for (const auto& gt : grids_[m]) {
      const auto v = grid(gt);
      const std::size_t i = dense_index(layout_, m, gt.code);
      out.P[i] -= v[1];
      out.Q[i] += v[0];
      out.D[i] += v[2];
    }
  }
}

FormSample ConnectionForm::sample(cplx z, std::optional<cplx> offset) const {
  FormSample out;
  auto l = g_.lattice(z);
  l[0] -= std::floor(l[0]);
  l[1] -= std::floor(l[1]);
  fill(out, green_->at(z, offset), [&](const GridTerm& gt) {
    return std::array<double, 3>{interpolate(gt.fx, l[0], l[1]), interpolate(gt.fy, l[0], l[1]), interpolate(gt.lap, l[0], l[1])};
  });
  return out;
}

void ConnectionForm::for_each_node(double ds, double dt, const std::function<void(int, int, cplx, const FormSample&)>& f) const {
  const GreenTower::Fields shifted_storage = (ds == 0 && dt == 0) ? GreenTower::Fields{} : green_->shifted_fields(ds, dt);
  const GreenTower::Fields& fields = (ds == 0 && dt == 0) ? green_->base_fields() : shifted_storage;
  // Grid potentials on the shifted grid.
  std::map<const GridTerm*, std::array<RealField, 3>> moved;
  if (ds != 0 || dt != 0) {
    for (int m = 2; m <= deg_; ++m)
      for (const auto& gt : grids_[m]) {
        auto sh = [&](int a, int b) { return backward(shifted(derivative(gt.potential, g_, a, b), ds / g_.M, dt / g_.M)); };
        RealField lap = sh(2, 0), lyy = sh(0, 2);
        for (std::size_t q = 0; q < lap.v.size(); ++q) lap.v[q] += lyy.v[q];
        moved[&gt] = {sh(1, 0), sh(0, 1), std::move(lap)};
      }
  }
  parallel_for(std::size_t(g_.M), [&](std::size_t ii) {
    const int i = int(ii);
    FormSample s;
    for (int j = 0; j < g_.M; ++j) {
      const cplx z = green_->node_point(fields, i, j);
      fill(s, green_->at_node(fields, i, j), [&](const GridTerm& gt) {
        if (ds == 0 && dt == 0) return std::array<double, 3>{gt.fx(i, j), gt.fy(i, j), gt.lap(i, j)};
        const auto& f3 = moved.at(&gt);
        return std::array<double, 3>{f3[0](i, j), f3[1](i, j), f3[2](i, j)};
      });
      f(i, j, z, s);
    }
  });
}

DenseSeries ConnectionForm::pullback(cplx z, cplx velocity, std::optional<cplx> offset) const {
  FormSample s = sample(z, offset);
  DenseSeries out(2, deg_);
  for (std::size_t i = 1; i < out.size(); ++i) out.data()[i] = s.P[i] * velocity.real() + s.Q[i] * velocity.imag();
  return out;
}

TangentialLoop spline_loop(const std::string& label, const std::vector<cplx>& points, cplx v) {
  if (points.size() < 2) throw std::invalid_argument("loop: need at least two points");
  const int K = int(points.size()) - 1;
  std::vector<cplx> tangent(K + 1);
  tangent[0] = v / double(K);
  tangent[K] = -v / double(K);
  for (int i = 1; i < K; ++i) tangent[i] = 0.5 * (points[i + 1] - points[i - 1]);
  auto locate = [K](double t, int& seg, double& u) {
    t = std::min(std::max(t, 0.0), 1.0);
    seg = std::min(int(std::floor(t * K)), K - 1);
    u = t * K - seg;
  };
  TangentialLoop loop;
  loop.label = label;
  for (int i = 1; i < K; ++i) loop.knots.push_back(double(i) / K);
  loop.position = [=](double t) {
    int s;
    double u;
    locate(t, s, u);
    const double h00 = 2 * u * u * u - 3 * u * u + 1, h10 = u * u * u - 2 * u * u + u;
    const double h01 = -2 * u * u * u + 3 * u * u, h11 = u * u * u - u * u;
    return h00 * points[s] + h10 * tangent[s] + h01 * points[s + 1] + h11 * tangent[s + 1];
  };
  loop.displacement = [=](double t) {
    int s;
    double u;
    locate(t, s, u);
    const double h10 = u * u * u - 2 * u * u + u, h11 = u * u * u - u * u;
    if (t < 0.5) {
      if (s > 0) return loop.position(t) - points[0];
      return (-2 * u * u * u + 3 * u * u) * (points[1] - points[0]) + h10 * tangent[0] + h11 * tangent[1];
    }
    if (s < K - 1) return loop.position(t) - points[K];
    return (2 * u * u * u - 3 * u * u + 1) * (points[K - 1] - points[K]) + h10 * tangent[K - 1] + h11 * tangent[K];
  };
  loop.velocity = [=](double t) {
    int s;
    double u;
    locate(t, s, u);
    const double d00 = 6 * u * u - 6 * u, d10 = 3 * u * u - 4 * u + 1;
    const double d01 = -6 * u * u + 6 * u, d11 = 3 * u * u - 2 * u;
    return double(K) * (d00 * points[s] + d10 * tangent[s] + d01 * points[s + 1] + d11 * tangent[s + 1]);
  };
  return loop;
}

std::vector<std::vector<cplx>> default_polylines(const TorusGeometry& g) {
  const std::vector<std::vector<std::array<double, 2>>> lattice_paths = {
      {{0, 0}, {0.5, 0.2}, {1.15, 0.12}, {1, 0}},
      {{0, 0}, {0.25, 0.5}, {0.2, 1}, {0, 1}},
      {{0, 0}, {0.3, 0.5}, {0.6, 1.2}, {1.15, 1.12}, {1, 1}},
  };
  std::vector<std::vector<cplx>> out;
  for (const auto& path : lattice_paths) {
    std::vector<cplx> pts;
    for (const auto& p : path) pts.push_back(g.p0 + g.point(p[0], p[1]));
    out.push_back(pts);
  }
  return out;
}

std::vector<TangentialLoop> default_loops(const TorusGeometry& g) {
  const auto polys = default_polylines(g);
  return {spline_loop("a", polys[0], g.v), spline_loop("b", polys[1], g.v), spline_loop("ab", polys[2], g.v)};
}

namespace {

// Letters a, b and their inverses A, B.
std::array<long, 2> label_abelianization(const std::string& label) {
  std::array<long, 2> e{0, 0};
  for (char ch : label) {
    switch (ch) {
      case 'a': ++e[0]; break;
      case 'A': --e[0]; break;
      case 'b': ++e[1]; break;
      case 'B': --e[1]; break;
      default: throw std::invalid_argument("loop: label letters must be a, b, A, B");
    }
  }
  return e;
}

}  // namespace

LoopCheck validate_loop(const TangentialLoop& loop, const TorusGeometry& g, double rho_min) {
  LoopCheck c;
  const cplx start = loop.position(0), end = loop.position(1);
  auto l = g.lattice(end - g.p0);
  c.displacement = {std::lround(l[0]), std::lround(l[1])};
  const cplx want_end = g.p0 + g.point(double(c.displacement[0]), double(c.displacement[1]));
  c.endpoint_error = std::max({std::abs(start - g.p0), std::abs(end - want_end), std::abs(loop.velocity(0) - g.v),
                               std::abs(loop.velocity(1) + g.v)});
  if (c.endpoint_error > 1e-10) throw std::invalid_argument("loop '" + loop.label + "': endpoint or tangency condition violated");
  c.clearance = 1e300;
  for (int i = 0; i <= 2000; ++i) {
    const double t = 0.05 + 0.9 * i / 2000.0;
    c.clearance = std::min(c.clearance, std::abs(g.nearest_offset(loop.position(t), g.p0)));
  }
  if (c.clearance < rho_min) throw std::invalid_argument("loop '" + loop.label + "': passes too close to P0");
  if (!loop.label.empty() && label_abelianization(loop.label) != c.displacement)
    throw std::invalid_argument("loop '" + loop.label + "': label does not match the lattice displacement");
  return c;
}

FSeries loop_value(const ConnectionForm& cf, const TangentialLoop& loop, const MeshConfig& mesh) {
  validate_loop(loop, cf.geometry());
  SampledForm phi;
  phi.dim_h = 2;
  phi.trunc = cf.degree();
  phi.endpoint = SampledForm::Endpoint::log_power;
  phi.log_power = (cf.degree() - 1) / 2;
  const double near = 0.25 * cf.geometry().shortest_period();
  phi.f = [&cf, &loop, near](double t) {
    const cplx z = loop.position(t);
    std::optional<cplx> offset;
    if (loop.displacement) {
      const cplx d = loop.displacement(t);
      if (std::abs(d) < near) offset = d;
    }
    return cf.pullback(z, loop.velocity(t), offset);
  };
  MeshConfig cfg = mesh;
  cfg.breakpoints.insert(cfg.breakpoints.end(), loop.knots.begin(), loop.knots.end());
  return transport(phi, cfg);
}

const FSeries& TorusExpansion::value(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return values[i];
  throw std::out_of_range("expansion: no loop labelled '" + label + "'");
}

TorusExpansion expansion(const ConnectionForm& cf, const std::vector<TangentialLoop>& loops, const MeshConfig& mesh) {
  TorusExpansion out;
  out.values.assign(loops.size(), FSeries());
  for (const auto& l : loops) out.labels.push_back(l.label);
  parallel_for(loops.size(), [&](std::size_t i) { out.values[i] = loop_value(cf, loops[i], mesh); });
  std::vector<FSeries> gens;
  const int d = cf.degree();
  for (int i = 1; i <= 2; ++i) {
    const FSeries& v = out.value(i == 1 ? "a" : "b");
    FSeries want = FSeries::one(2, d) + FSeries::generator(2, d, i);
    out.degree_one_error = std::max(out.degree_one_error, (v.degree_range(0, 1) - want).max_abs());
    gens.push_back(want + v.degree_range(2, d));
  }
  if (out.degree_one_error > 1e-6) throw std::runtime_error("expansion: degree-1 parts differ from X1, X2 by more than 1e-6");
  out.theta = MagnusExpansion<double>(std::move(gens));
  return out;
}

}  // namespace magnus
