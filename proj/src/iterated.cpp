#include "magnus/iterated.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace magnus {

SampledForm SampledForm::from_series(int dim_h, int trunc, std::function<FSeries(double)> g) {
  SampledForm s;
  s.dim_h = dim_h;
  s.trunc = trunc;
  s.f = [g = std::move(g)](double t) { return DenseSeries::from(g(t)); };
  return s;
}

SampledForm SampledForm::constant(const FSeries& c) {
  SampledForm s;
  s.dim_h = c.dim();
  s.trunc = c.trunc();
  DenseSeries d = DenseSeries::from(c);
  s.f = [d](double) { return d; };
  return s;
}

namespace {

std::vector<double> with_breakpoints(std::vector<double> mesh, const std::vector<double>& points) {
  for (double p : points) {
    if (!(p > 0 && p < 1)) throw std::invalid_argument("graded_mesh: breakpoints must lie in (0, 1)");
    auto it = std::lower_bound(mesh.begin(), mesh.end(), p);
    if (*it - p > 1e-14 && p - *(it - 1) > 1e-14) mesh.insert(it, p);
  }
  return mesh;
}

}  // namespace

std::vector<double> graded_mesh(const MeshConfig& cfg) {
  if (!(cfg.h_max > 0) || cfg.depth < 0 || cfg.per_cell < 1) throw std::invalid_argument("graded_mesh: bad config");
  auto uniform = [&](std::vector<double>& out, double a, double b, int min_steps) {
    int k = std::max(min_steps, int(std::ceil((b - a) / cfg.h_max - 1e-9)));
    for (int i = 1; i <= k; ++i) out.push_back(i == k ? b : a + (b - a) * i / k);
  };
  std::vector<double> left{0.0};
  if (cfg.depth == 0) {
    uniform(left, 0.0, 1.0, 1);
    return with_breakpoints(left, cfg.breakpoints);
  }
  left.push_back(std::ldexp(1.0, -cfg.depth - 2));
  for (int j = cfg.depth + 1; j >= 2; --j) uniform(left, std::ldexp(1.0, -j - 1), std::ldexp(1.0, -j), cfg.per_cell);
  std::vector<double> mesh = left;
  uniform(mesh, 0.25, 0.75, 1);
  for (int i = int(left.size()) - 2; i >= 0; --i) mesh.push_back(1.0 - left[i]);
  return with_breakpoints(mesh, cfg.breakpoints);
}

namespace {

DenseSeries sample(const SampledForm& phi, double t) {
  DenseSeries v = phi.f(t);
  if (v.dim() != phi.dim_h || v.trunc() != phi.trunc) throw std::invalid_argument("sampled form: dim/trunc mismatch");
  if (!v.finite()) {
    std::ostringstream os;
    os << "sampled form: non-finite value at t = " << t;
    throw std::domain_error(os.str());
  }
  if (v.data()[0] != 0.0) {
    std::ostringstream os;
    os << "sampled form: nonzero degree-0 part at t = " << t;
    throw std::domain_error(os.str());
  }
  return v;
}

}  // namespace

FSeries transport(const SampledForm& phi, const MeshConfig& cfg) {
  const std::vector<double> mesh = graded_mesh(cfg);
  const double g1 = 0.5 - std::sqrt(3.0) / 6, g2 = 0.5 + std::sqrt(3.0) / 6;
  const double c3 = std::sqrt(3.0) / 12;
  DenseSeries F = DenseSeries::one(phi.dim_h, phi.trunc);
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
    const double t0 = mesh[i], h = mesh[i + 1] - mesh[i];
    DenseSeries a1 = sample(phi, t0 + g1 * h);
    DenseSeries a2 = sample(phi, t0 + g2 * h);
    DenseSeries omega = a1;
    omega += a2;
    omega *= 0.5 * h;
    omega.axpy(c3 * h * h, commutator(a2, a1));
    F = mul(exp_dense(omega), F);
    if (!F.finite()) {
      std::ostringstream os;
      os << "transport: solution left the finite range on [" << t0 << ", " << mesh[i + 1] << "]";
      throw std::domain_error(os.str());
    }
  }
  return F.to_series();
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 1;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1);
      double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    x[n - 1 - i] = z;
    w[n - 1 - i] = 2 / ((1 - z * z) * dp * dp);
  }
}

namespace {

// P_0..P_{n} at s.
std::vector<double> legendre_values(int n, double s) {
  std::vector<double> p(n + 1);
  p[0] = 1;
  if (n >= 1) p[1] = s;
  for (int k = 2; k <= n; ++k) p[k] = ((2 * k - 1) * s * p[k - 1] - (k - 1) * p[k - 2]) / k;
  return p;
}

// S[i][j] = integral from -1 to x_i of the Lagrange basis polynomial L_j.
std::vector<std::vector<double>> integration_matrix(const std::vector<double>& x, const std::vector<double>& w) {
  const int n = int(x.size());
  std::vector<std::vector<double>> S(n, std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> Px(n);
  for (int j = 0; j < n; ++j) Px[j] = legendre_values(n, x[j]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.5 * (x[i] + 1);
      for (int k = 1; k < n; ++k) acc += 0.5 * Px[j][k] * (Px[i][k + 1] - Px[i][k - 1]);
      S[i][j] = w[j] * acc;
    }
  return S;
}

}  // namespace

FSeries iterated(const std::vector<SampledForm>& forms, const QuadratureConfig& cfg) {
  if (forms.empty()) throw std::invalid_argument("iterated: no forms");
  if (cfg.cells < 1 || cfg.nodes < 1) throw std::invalid_argument("iterated: bad quadrature config");
  const int n = forms[0].dim_h, d = forms[0].trunc;
  for (const auto& f : forms)
    if (f.dim_h != n || f.trunc != d) throw std::invalid_argument("iterated: dim/trunc mismatch");

  std::vector<double> x, w;
  gauss_legendre(cfg.nodes, x, w);
  const auto S = integration_matrix(x, w);
  const int nodes = cfg.nodes, cells = cfg.cells;
  const double half = 0.5 / cells;

  std::vector<double> t(std::size_t(cells) * nodes);
  for (int c = 0; c < cells; ++c)
    for (int i = 0; i < nodes; ++i) t[c * nodes + i] = (c + 0.5) / cells + half * x[i];

  // inner[k] holds the running integral of the innermost forms at every node.
  std::vector<DenseSeries> inner(t.size(), DenseSeries::one(n, d));
  DenseSeries total(n, d);
  for (int q = int(forms.size()) - 1; q >= 0; --q) {
    std::vector<DenseSeries> g(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) g[k] = mul(sample(forms[q], t[k]), inner[k]);
    DenseSeries offset(n, d);
    std::vector<DenseSeries> next(t.size(), DenseSeries(n, d));
    for (int c = 0; c < cells; ++c) {
      for (int i = 0; i < nodes; ++i) {
        DenseSeries v = offset;
        for (int j = 0; j < nodes; ++j) v.axpy(half * S[i][j], g[c * nodes + j]);
        next[c * nodes + i] = std::move(v);
      }
      for (int j = 0; j < nodes; ++j) offset.axpy(half * w[j], g[c * nodes + j]);
    }
    inner = std::move(next);
    total = offset;
  }
  return total.to_series();
}

}  // namespace magnus
