#include "magnus/torus_diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include "magnus/parallel.hpp"

namespace magnus {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Sums per-row partial results in a fixed order.
std::vector<double> reduce_rows(const std::vector<std::vector<double>>& rows) {
  std::vector<double> out(rows.empty() ? 0 : rows[0].size(), 0.0);
  for (const auto& r : rows)
    for (std::size_t k = 0; k < r.size(); ++k) out[k] += r[k];
  return out;
}

double cell_area(const TorusGeometry& g) { return g.area() / (double(g.M) * g.M); }

std::vector<std::pair<int, int>> splittings(int m, int deg) {
  std::vector<std::pair<int, int>> out;
  for (int p = 1; p < m; ++p)
    if (p <= deg && m - p <= deg) out.push_back({p, m - p});
  return out;
}

}  // namespace

IntegrabilityReport integrability_residual(const ConnectionForm& cf, double excision_cells) {
  const TorusGeometry& g = cf.geometry();
  const DenseSeries& L = cf.layout();
  const int d = cf.degree();
  IntegrabilityReport rep;
  rep.r_cut = g.cell_radius(excision_cells);
  std::vector<std::vector<double>> res(g.M, std::vector<double>(d + 1, 0.0)), sc = res;
  cf.for_each_node(0.5, 0.5, [&](int i, int, cplx z, const FormSample& s) {
    if (std::abs(g.nearest_offset(z, g.p0)) < rep.r_cut) return;
    for (int m = 2; m <= d; ++m) {
      const std::size_t om = L.offset(m);
      for (std::size_t w = 0; w < L.block(m); ++w) {
        double wedge = 0;
        for (auto [p, q] : splittings(m, d)) {
          const std::size_t bq = L.block(q);
          const std::size_t a = L.offset(p) + w / bq, b = L.offset(q) + w % bq;
          wedge += s.P[a] * s.Q[b] - s.Q[a] * s.P[b];
        }
        const double r = s.D[om + w] - wedge;
        res[i][m] += r * r;
        sc[i][m] += s.D[om + w] * s.D[om + w];
      }
    }
  });
  const double dA = cell_area(g);
  rep.residual = reduce_rows(res);
  rep.scale = reduce_rows(sc);
  for (int m = 0; m <= d; ++m) {
    rep.residual[m] = std::sqrt(rep.residual[m] * dA);
    rep.scale[m] = std::sqrt(rep.scale[m] * dA);
  }
  return rep;
}

std::vector<WedgeIntegral> wedge_integrals(const ConnectionForm& cf, int max_total) {
  const TorusGeometry& g = cf.geometry();
  const DenseSeries& L = cf.layout();
  const int d = cf.degree();
  if (max_total < 2 || max_total > 2 * d) throw std::invalid_argument("wedge_integrals: total degree out of range");

  std::vector<WedgeIntegral> out;
  std::vector<std::size_t> slot;  // start of each pair's block in the accumulator
  std::size_t width = 0;
  for (int m = 2; m <= max_total; ++m)
    for (auto [p, q] : splittings(m, d)) {
      out.push_back({p, q, FSeries(2, m), 0.0});
      slot.push_back(width);
      width += std::size_t(1) << m;
    }
  auto accumulate = [&](std::vector<double>& acc, const FormSample& s, double weight) {
    for (std::size_t e = 0; e < out.size(); ++e) {
      const int p = out[e].p, q = out[e].q;
      const std::size_t op = L.offset(p), oq = L.offset(q), bq = L.block(q);
      double* dst = acc.data() + slot[e];
      for (std::size_t w1 = 0; w1 < L.block(p); ++w1)
        for (std::size_t w2 = 0; w2 < bq; ++w2)
          dst[w1 * bq + w2] += weight * (s.P[op + w1] * s.Q[oq + w2] - s.Q[op + w1] * s.P[oq + w2]);
    }
  };

  const double R = 0.25 * g.shortest_period();
  const RadialBump psi{0.5 * R, R};
  const double r_cut = g.cell_radius(kExcisionCells);

  // Grid part: the integrand times 1 - psi, plus the off-disk norms.
  const double dA = cell_area(g);
  std::vector<std::vector<double>> rows(g.M, std::vector<double>(width, 0.0));
  std::vector<std::vector<double>> norms(g.M, std::vector<double>(d + 1, 0.0));
  cf.for_each_node(0, 0, [&](int i, int, cplx z, const FormSample& s) {
    const double r = std::abs(g.nearest_offset(z, g.p0));
    if (r >= r_cut)
      for (int m = 1; m <= d; ++m)
        for (std::size_t w = L.offset(m); w < L.offset(m) + L.block(m); ++w) norms[i][m] += s.P[w] * s.P[w] + s.Q[w] * s.Q[w];
    if (r <= psi.inner) return;
    accumulate(rows[i], s, (1.0 - psi.value(r)) * dA);
  });
  std::vector<double> total = reduce_rows(rows);
  std::vector<double> norm = reduce_rows(norms);
  for (double& x : norm) x = std::sqrt(x * dA);

  // Polar part: dyadic Gauss panels in r toward P0, trapezoid in angle.
  std::vector<double> gx, gw;
  gauss_legendre(8, gx, gw);
  std::vector<std::pair<double, double>> panels;
  for (int k = 0; k < 16; ++k) panels.push_back({R * (0.5 + k / 32.0), R * (0.5 + (k + 1) / 32.0)});
  for (int j = 0; j < 48; ++j) panels.push_back({0.5 * R * std::ldexp(1.0, -j - 1), 0.5 * R * std::ldexp(1.0, -j)});
  std::vector<std::pair<double, double>> radial;  // (r, weight)
  for (auto [a, b] : panels)
    for (std::size_t n = 0; n < gx.size(); ++n) radial.push_back({0.5 * (a + b) + 0.5 * (b - a) * gx[n], 0.5 * (b - a) * gw[n]});
  const int n_phi = 128;
  std::vector<std::vector<double>> ring(radial.size(), std::vector<double>(width, 0.0));
  parallel_for(radial.size(), [&](std::size_t k) {
    const auto [r, w] = radial[k];
    const double weight = w * r * psi.value(r) * (2 * kPi / n_phi);
    for (int a = 0; a < n_phi; ++a) {
      const double phi = 2 * kPi * (a + 0.5) / n_phi;
      accumulate(ring[k], cf.sample(g.p0 + std::polar(r, phi)), weight);
    }
  });
  const std::vector<double> polar = reduce_rows(ring);
  for (std::size_t k = 0; k < width; ++k) total[k] += polar[k];

  for (std::size_t e = 0; e < out.size(); ++e) {
    const int m = out[e].p + out[e].q;
    for (std::size_t w = 0; w < (std::size_t(1) << m); ++w) out[e].value.add_term(m, w, total[slot[e] + w]);
    out[e].scale = norm[out[e].p] * norm[out[e].q];
  }
  return out;
}

HarmonicPart harmonic_part(const FSeries& pairing) {
  if (pairing.dim() != 2) throw std::invalid_argument("harmonic_part: genus 1 only");
  HarmonicPart h{FSeries(2, pairing.trunc()), FSeries(2, pairing.trunc())};
  pairing.for_each([&](int m, std::uint64_t code, double c) {
    if (m == 0) throw std::invalid_argument("harmonic_part: pairing has a degree-0 part");
    // (A X1 + B X2) . (alpha X1 + beta X2) pairs X1 . X2 = 1 and X2 . X1 = -1.
    if (code % 2 == 1)
      h.alpha.add_term(m - 1, code / 2, c);
    else
      h.beta.add_term(m - 1, code / 2, -c);
  });
  return h;
}

GrowthEnvelope growth_envelope(const ConnectionForm& cf, int m, double excision_cells) {
  const TorusGeometry& g = cf.geometry();
  const DenseSeries& L = cf.layout();
  if (m < 3 || m > cf.degree()) throw std::invalid_argument("growth_envelope: degree must lie in [3, degree]");
  GrowthEnvelope env;
  env.degree = m;
  env.exponent = (m - 1) / 2;
  env.r_cut = g.cell_radius(excision_cells);
  if (env.r_cut >= 0.5) throw std::invalid_argument("growth_envelope: excision radius too large");
  const int n_phi = 64;
  auto ring_max = [&](double r) {
    double best = 0;
    for (int a = 0; a < n_phi; ++a) {
      const FormSample s = cf.sample(g.p0 + std::polar(r, 2 * kPi * (a + 0.25) / n_phi));
      double v = 0;
      for (std::size_t w = L.offset(m); w < L.offset(m) + L.block(m); ++w) v += std::norm(s.prime(w));
      best = std::max(best, std::sqrt(v));
    }
    return best / std::pow(std::fabs(std::log(r)), env.exponent);
  };
  for (int k = 0; k <= 7; ++k) env.constant = std::max(env.constant, ring_max(env.r_cut * (1 + k / 7.0)));
  if (env.constant == 0) return env;
  for (int j = 1; j <= 8; ++j) {
    const double r = env.r_cut * std::ldexp(1.0, -j);
    env.radii.push_back(r);
    env.ratio.push_back(ring_max(r) / env.constant);
    env.worst_ratio = std::max(env.worst_ratio, env.ratio.back());
  }
  return env;
}

std::vector<cplx> rotate_last_to_front(const std::vector<cplx>& x, int m) {
  std::vector<cplx> out(x.size());
  const std::size_t top = std::size_t(1) << (m - 1);
  for (std::size_t c = 0; c < x.size(); ++c) out[(c % 2) * top + c / 2] = x[c];
  return out;
}

std::vector<cplx> cyclic_sum(const std::vector<cplx>& x, int m) {
  std::vector<cplx> out(x.size());
  const std::size_t top = std::size_t(1) << (m - 1);
  for (std::size_t c = 0; c < x.size(); ++c) {
    std::size_t k = c;
    for (int r = 0; r < m; ++r) {
      out[k] += x[c];
      k = (k % 2) * top + k / 2;
    }
  }
  return out;
}

std::vector<cplx> prime_product(const ConnectionForm& cf, const FormSample& s, int p, int q) {
  const DenseSeries& L = cf.layout();
  const std::size_t bq = L.block(q);
  std::vector<cplx> out(L.block(p) * bq);
  for (std::size_t w1 = 0; w1 < L.block(p); ++w1) {
    const cplx a = s.prime(L.offset(p) + w1);
    for (std::size_t w2 = 0; w2 < bq; ++w2) out[w1 * bq + w2] = a * s.prime(L.offset(q) + w2);
  }
  return out;
}

std::vector<cplx> quad_coefficients(const ConnectionForm& cf, const FormSample& s, int m) {
  std::vector<cplx> sum(std::size_t(1) << m);
  for (auto [p, q] : splittings(m, cf.degree())) {
    const auto pq = prime_product(cf, s, p, q);
    for (std::size_t w = 0; w < sum.size(); ++w) sum[w] += pq[w];
  }
  return cyclic_sum(sum, m);
}

namespace {

// dbar of sum_{p+q=m} omega'_p omega'_q, before symmetrisation.
std::vector<cplx> dbar_product(const ConnectionForm& cf, const FormSample& s, int m) {
  const DenseSeries& L = cf.layout();
  std::vector<cplx> out(std::size_t(1) << m);
  for (auto [p, q] : splittings(m, cf.degree())) {
    const std::size_t bq = L.block(q);
    for (std::size_t w1 = 0; w1 < L.block(p); ++w1) {
      const std::size_t a = L.offset(p) + w1;
      for (std::size_t w2 = 0; w2 < bq; ++w2) {
        const std::size_t b = L.offset(q) + w2;
        out[w1 * bq + w2] += s.dbar_prime(a) * s.prime(b) + s.prime(a) * s.dbar_prime(b);
      }
    }
  }
  return out;
}

double block_norm(const std::vector<cplx>& x) {
  double v = 0;
  for (const cplx& c : x) v += std::norm(c);
  return v;
}

}  // namespace

QuadDifferentialReport quad_differential(const ConnectionForm& cf, double excision_cells) {
  const TorusGeometry& g = cf.geometry();
  const int d = cf.degree();
  if (d < 3) throw std::invalid_argument("quad_differential: connection degree >= 3 required");
  QuadDifferentialReport rep;
  rep.max_degree = d + 1;
  rep.r_cut = g.cell_radius(excision_cells);
  const int top = rep.max_degree;

  // Per row: [norm, dbar, unsymmetrized] per degree, then |q3|^2, |w1 w2|^2,
  // eps defect, max |q|.
  const std::size_t base = 3 * (top + 1);
  const std::size_t width = base + 4;
  std::vector<std::vector<double>> rows(g.M, std::vector<double>(width, 0.0));
  cf.for_each_node(0.5, 0.5, [&](int i, int, cplx z, const FormSample& s) {
    if (std::abs(g.nearest_offset(z, g.p0)) < rep.r_cut) return;
    auto& acc = rows[i];
    for (int m = 2; m <= top; ++m) {
      const auto q = quad_coefficients(cf, s, m);
      acc[3 * m] += block_norm(q);
      acc[3 * m + 1] += block_norm(cyclic_sum(dbar_product(cf, s, m), m));
      std::vector<cplx> raw(q.size());
      for (auto [p, r] : splittings(m, d)) {
        const auto pq = prime_product(cf, s, p, r);
        for (std::size_t w = 0; w < raw.size(); ++w) raw[w] += pq[w];
      }
      acc[3 * m + 2] += block_norm(raw);
      const auto e = rotate_last_to_front(q, m);
      double defect = 0, size = 0;
      for (std::size_t w = 0; w < q.size(); ++w) {
        defect = std::max(defect, std::abs(e[w] - q[w]));
        size = std::max(size, std::abs(q[w]));
      }
      acc[base + 2] = std::max(acc[base + 2], defect);
      acc[base + 3] = std::max(acc[base + 3], size);
      if (m == 3) {
        acc[base] += block_norm(q);
        acc[base + 1] += block_norm(prime_product(cf, s, 1, 2));
      }
    }
  });
  std::vector<double> sum(width, 0.0);
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < base + 2; ++k) sum[k] += r[k];
    sum[base + 2] = std::max(sum[base + 2], r[base + 2]);
    sum[base + 3] = std::max(sum[base + 3], r[base + 3]);
  }
  const double dA = cell_area(g);
  rep.norm.assign(top + 1, 0.0);
  rep.dbar_residual.assign(top + 1, 0.0);
  for (int m = 2; m <= top; ++m) {
    rep.norm[m] = std::sqrt(sum[3 * m] * dA);
    const double res = std::sqrt(sum[3 * m + 1] * dA);
    // Odd degrees can symmetrize to (almost) nothing; measure against the
    // unsymmetrized products then.
    const double raw = std::sqrt(sum[3 * m + 2] * dA);
    const double ref = rep.norm[m] > 1e-12 * raw ? rep.norm[m] : raw;
    rep.dbar_residual[m] = ref > 0 ? res / ref : res;
  }
  rep.degree3_ratio = sum[base + 1] > 0 ? std::sqrt(sum[base] / sum[base + 1]) : 0.0;
  rep.epsilon_defect = sum[base + 3] > 0 ? sum[base + 2] / sum[base + 3] : 0.0;

  // Pole order: growth of max |q_m| on circles shrinking toward P0.
  rep.pole_slope.assign(top + 1, 0.0);
  rep.pole_order.assign(top + 1, 0);
  const int n_circles = 7, n_phi = 32;
  std::vector<std::vector<double>> amp(n_circles, std::vector<double>(top + 1, 0.0));
  parallel_for(std::size_t(n_circles), [&](std::size_t j) {
    const double r = rep.r_cut * std::ldexp(1.0, -int(j));
    for (int a = 0; a < n_phi; ++a) {
      const FormSample s = cf.sample(g.p0 + std::polar(r, 2 * kPi * (a + 0.25) / n_phi));
      for (int m = 2; m <= top; ++m) amp[j][m] = std::max(amp[j][m], std::sqrt(block_norm(quad_coefficients(cf, s, m))));
    }
  });
  const double reference = amp[0][2];
  for (int m = 2; m <= top; ++m) {
    const double inner = amp[n_circles - 1][m], outer = amp[n_circles - 2][m];
    if (inner <= 1e-12 * reference || outer <= 1e-12 * reference) continue;
    rep.pole_slope[m] = std::log2(inner / outer);
    rep.pole_order[m] = std::max(0, int(std::ceil(rep.pole_slope[m] - 0.3)));
  }
  return rep;
}

}  // namespace magnus
