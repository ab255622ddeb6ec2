#include "magnus/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace magnus {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void TorusGeometry::validate() const {
  if (!(tau.imag() > 0)) throw std::invalid_argument("torus: Im tau must be positive");
  if (v == cplx(0, 0)) throw std::invalid_argument("torus: tangent vector v must be nonzero");
  if (M < 16 || (M & (M - 1)) != 0) throw std::invalid_argument("torus: grid size must be a power of two >= 16");
  if (!std::isfinite(p0.real()) || !std::isfinite(p0.imag())) throw std::invalid_argument("torus: P0 must be finite");
}

std::array<double, 2> TorusGeometry::lattice(cplx z) const {
  const double t = z.imag() / tau.imag();
  return {z.real() - t * tau.real(), t};
}

double TorusGeometry::shortest_period() const {
  double best = 1e300;
  for (int a = -4; a <= 4; ++a)
    for (int b = -4; b <= 4; ++b)
      if (a || b) best = std::min(best, std::abs(double(a) + double(b) * tau));
  return best;
}

cplx TorusGeometry::nearest_offset(cplx z, cplx p) const {
  auto d = lattice(z - p);
  d[0] -= std::floor(d[0] + 0.5);
  d[1] -= std::floor(d[1] + 0.5);
  cplx best = point(d[0], d[1]);
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) {
      cplx c = point(d[0] + a, d[1] + b);
      if (std::abs(c) < std::abs(best)) best = c;
    }
  return best;
}

double TorusGeometry::cell_radius(double cells) const {
  return cells * std::max(1.0, std::abs(tau)) / M;
}

double RealField::mean() const {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / double(v.size());
}

double RealField::max_abs() const {
  double r = 0;
  for (double x : v) r = std::max(r, std::fabs(x));
  return r;
}

namespace {

struct PlanCache {
  std::mutex mu;
  std::map<std::pair<int, int>, fftw_plan> plans;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void run_fft(std::vector<cplx>& data, int M, int sign) {
  const std::size_t n = std::size_t(M) * M;
  fftw_complex* buf = fftw_alloc_complex(n);
  fftw_plan plan;
  {
    PlanCache& cache = plan_cache();
    std::lock_guard<std::mutex> lock(cache.mu);
    auto it = cache.plans.find({M, sign});
    if (it == cache.plans.end()) {
      fftw_complex* tmp = fftw_alloc_complex(n);
      plan = fftw_plan_dft_2d(M, M, tmp, tmp, sign, FFTW_ESTIMATE);
      fftw_free(tmp);
      cache.plans[{M, sign}] = plan;
    } else {
      plan = it->second;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    buf[i][0] = data[i].real();
    buf[i][1] = data[i].imag();
  }
  fftw_execute_dft(plan, buf, buf);
  for (std::size_t i = 0; i < n; ++i) data[i] = cplx(buf[i][0], buf[i][1]);
  fftw_free(buf);
}

}  // namespace

std::vector<cplx> forward_complex(const std::vector<cplx>& values, int M) {
  std::vector<cplx> c = values;
  run_fft(c, M, FFTW_FORWARD);
  const double scale = 1.0 / (double(M) * M);
  for (auto& x : c) x *= scale;
  return c;
}

std::vector<cplx> backward_complex(const std::vector<cplx>& coeffs, int M) {
  std::vector<cplx> v = coeffs;
  run_fft(v, M, FFTW_BACKWARD);
  return v;
}

Spectrum forward(const RealField& f) {
  std::vector<cplx> v(f.v.begin(), f.v.end());
  Spectrum s(f.M);
  s.c = forward_complex(v, f.M);
  return s;
}

RealField backward(const Spectrum& s) {
  std::vector<cplx> v = backward_complex(s.c, s.M);
  RealField f(s.M);
  for (std::size_t i = 0; i < v.size(); ++i) f.v[i] = v[i].real();
  return f;
}

Spectrum derivative(const Spectrum& s, const TorusGeometry& g, int a, int b) {
  if (a == 0 && b == 0) return s;
  const int M = s.M;
  const double rt = g.tau.real(), it = g.tau.imag();
  Spectrum out(M);
  for (int i = 0; i < M; ++i) {
    const int k1 = Spectrum::wavenumber(i, M);
    for (int j = 0; j < M; ++j) {
      const int k2 = Spectrum::wavenumber(j, M);
      if (i == M / 2 || j == M / 2) continue;
      const cplx dx(0, 2 * kPi * k1);
      const cplx dy(0, 2 * kPi * (k2 - rt * k1) / it);
      cplx sym = 1;
      for (int r = 0; r < a; ++r) sym *= dx;
      for (int r = 0; r < b; ++r) sym *= dy;
      out(i, j) = s(i, j) * sym;
    }
  }
  return out;
}

Spectrum shifted(const Spectrum& s, double ds, double dt) {
  const int M = s.M;
  Spectrum out(M);
  for (int i = 0; i < M; ++i) {
    const int k1 = Spectrum::wavenumber(i, M);
    for (int j = 0; j < M; ++j) {
      const int k2 = Spectrum::wavenumber(j, M);
      if (i == M / 2 || j == M / 2) continue;
      out(i, j) = s(i, j) * std::polar(1.0, 2 * kPi * (k1 * ds + k2 * dt));
    }
  }
  return out;
}

double laplacian_symbol(const TorusGeometry& g, int k1, int k2) {
  const double w = std::abs(double(k2) - g.tau * double(k1)) / g.tau.imag();
  return -4 * kPi * kPi * w * w;
}

Spectrum inverse_laplacian(const Spectrum& s, const TorusGeometry& g) {
  const int M = s.M;
  Spectrum out(M);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) {
      if (i == 0 && j == 0) continue;
      out(i, j) = s(i, j) / laplacian_symbol(g, Spectrum::wavenumber(i, M), Spectrum::wavenumber(j, M));
    }
  return out;
}

double evaluate_exact(const Spectrum& s, double ls, double lt) {
  const int M = s.M;
  std::vector<cplx> es(M), et(M);
  for (int i = 0; i < M; ++i) {
    es[i] = std::polar(1.0, 2 * kPi * Spectrum::wavenumber(i, M) * ls);
    et[i] = std::polar(1.0, 2 * kPi * Spectrum::wavenumber(i, M) * lt);
  }
  cplx acc = 0;
  for (int i = 0; i < M; ++i) {
    cplx row = 0;
    for (int j = 0; j < M; ++j) row += s(i, j) * et[j];
    acc += row * es[i];
  }
  return acc.real();
}

namespace {

// Weights of the 8-point Lagrange stencil at nodes -3..4 for offset u in [0, 1).
std::array<double, 8> lagrange8(double u) {
  std::array<double, 8> w{};
  for (int a = 0; a < 8; ++a) {
    double num = 1, den = 1;
    const double xa = a - 3;
    for (int b = 0; b < 8; ++b) {
      if (b == a) continue;
      const double xb = b - 3;
      num *= (u - xb);
      den *= (xa - xb);
    }
    w[a] = num / den;
  }
  return w;
}

}  // namespace

double interpolate(const RealField& f, double ls, double lt) {
  const int M = f.M;
  const double us = ls * M, ut = lt * M;
  const double fs = std::floor(us), ft = std::floor(ut);
  const auto ws = lagrange8(us - fs), wt = lagrange8(ut - ft);
  const long is = long(fs), it = long(ft);
  double acc = 0;
  for (int a = 0; a < 8; ++a) {
    const int i = int(((is + a - 3) % M + M) % M);
    const double* row = f.v.data() + std::size_t(i) * M;
    double r = 0;
    for (int b = 0; b < 8; ++b) {
      const int j = int(((it + b - 3) % M + M) % M);
      r += wt[b] * row[j];
    }
    acc += ws[a] * r;
  }
  return acc;
}

double integrate(const RealField& density, const TorusGeometry& g) {
  return density.mean() * g.area();
}

Jet::Jet(int order, double value) : order_(order) {
  if (order < 0 || order > kMaxOrder) throw std::invalid_argument("jet: order out of range");
  c_[0] = value;
}

Jet Jet::variable(int order, double at, int axis) {
  Jet j(order, at);
  if (order >= 1) j.coeff(axis == 0 ? 1 : 0, axis == 0 ? 0 : 1) = 1;
  return j;
}

double Jet::derivative(int p, int q) const {
  double f = 1;
  for (int i = 2; i <= p; ++i) f *= i;
  for (int i = 2; i <= q; ++i) f *= i;
  return f * coeff(p, q);
}

Jet& Jet::operator+=(const Jet& o) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& x : c_) x *= s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  const int K = std::min(a.order_, b.order_);
  Jet out(K);
  for (int m1 = 0; m1 <= K; ++m1)
    for (int q1 = 0; q1 <= m1; ++q1) {
      const double x = a.c_[Jet::index(m1 - q1, q1)];
      if (x == 0) continue;
      for (int m2 = 0; m1 + m2 <= K; ++m2)
        for (int q2 = 0; q2 <= m2; ++q2) out.c_[Jet::index(m1 - q1 + m2 - q2, q1 + q2)] += x * b.c_[Jet::index(m2 - q2, q2)];
    }
  return out;
}

namespace {

// sum_{n=0}^{order} coef[n] h^n for a jet h with zero constant term.
Jet power_sum(const Jet& h, const std::vector<double>& coef) {
  Jet out(h.order(), coef[0]);
  Jet p(h.order(), 1.0);
  for (int n = 1; n <= h.order(); ++n) {
    p = p * h;
    out += p * coef[n];
  }
  return out;
}

}  // namespace

Jet exp(const Jet& a) {
  Jet h = a;
  h.coeff(0, 0) = 0;
  std::vector<double> coef(a.order() + 1);
  double f = std::exp(a.value());
  for (int n = 0; n <= a.order(); ++n) {
    coef[n] = f;
    f /= (n + 1);
  }
  return power_sum(h, coef);
}

Jet log(const Jet& a) {
  const double a0 = a.value();
  if (!(a0 > 0)) throw std::domain_error("jet log: nonpositive value");
  Jet h = a * (1.0 / a0);
  h.coeff(0, 0) = 0;
  std::vector<double> coef(a.order() + 1);
  coef[0] = std::log(a0);
  for (int n = 1; n <= a.order(); ++n) coef[n] = (n % 2 ? 1.0 : -1.0) / n;
  return power_sum(h, coef);
}

Jet reciprocal(const Jet& a) {
  const double a0 = a.value();
  if (a0 == 0) throw std::domain_error("jet reciprocal: zero value");
  Jet h = a * (1.0 / a0);
  h.coeff(0, 0) = 0;
  std::vector<double> coef(a.order() + 1);
  for (int n = 0; n <= a.order(); ++n) coef[n] = (n % 2 ? -1.0 : 1.0) / a0;
  return power_sum(h, coef);
}

namespace {

double smooth_step(double x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  const double f = std::exp(-1 / x), g = std::exp(-1 / (1 - x));
  return f / (f + g);
}

Jet radius_squared(double x, double y, int order) {
  Jet X = Jet::variable(order, x, 0), Y = Jet::variable(order, y, 1);
  return X * X + Y * Y;
}

}  // namespace

double RadialBump::value(double r) const {
  const double u = r * r;
  return smooth_step((outer * outer - u) / (outer * outer - inner * inner));
}

Jet RadialBump::jet(double x, double y, int order) const {
  const double u0 = x * x + y * y;
  const double lo = inner * inner, hi = outer * outer;
  if (u0 <= lo) return Jet(order, 1.0);
  if (u0 >= hi) return Jet(order, 0.0);
  Jet s = (Jet(order, hi) - radius_squared(x, y, order)) * (1.0 / (hi - lo));
  // exp(-1/x) and all its derivatives up to order 8 are below 1e-50 for x < 0.005.
  auto flat_exp = [order](const Jet& x) { return x.value() < 0.005 ? Jet(order, 0.0) : exp(reciprocal(x) * -1.0); };
  Jet f = flat_exp(s);
  Jet g = flat_exp(Jet(order, 1.0) - s);
  return f * reciprocal(f + g);
}

namespace {

// P(N, rho) = 1 - Q(N, rho).
double lower_gamma_ratio(int N, double rho) {
  if (rho < N) {
    // e^-rho sum_{j >= N} rho^j / j!
    double term = std::exp(-rho);
    for (int j = 1; j <= N; ++j) term *= rho / j;
    double sum = 0;
    for (int j = N; term > 1e-18 * sum || j < N + 2; ++j) {
      sum += term;
      term *= rho / (j + 1);
    }
    return sum;
  }
  double term = std::exp(-rho), sum = 0;
  for (int j = 0; j < N; ++j) {
    sum += term;
    term *= rho / (j + 1);
  }
  return 1.0 - sum;
}

}  // namespace

double GaussianCutoff::complement(double r) const {
  if (r >= support) return 1.0;
  return lower_gamma_ratio(flatness, r * r / (sigma * sigma));
}

double GaussianCutoff::value(double r) const {
  if (r >= support) return 0.0;
  const double rho = r * r / (sigma * sigma);
  if (rho < flatness) return 1.0 - lower_gamma_ratio(flatness, rho);
  double term = std::exp(-rho), sum = 0;
  for (int j = 0; j < flatness; ++j) {
    sum += term;
    term *= rho / (j + 1);
  }
  return sum;
}

Jet GaussianCutoff::complement_jet(double x, double y, int order) const {
  if (x * x + y * y >= support * support) return Jet(order, 1.0);
  const double rho0 = (x * x + y * y) / (sigma * sigma);
  // d/drho P(N, rho) = e^-rho rho^(N-1) / (N-1)!; Taylor coefficients in u of
  // e^-(rho0+u) (rho0+u)^(N-1) / (N-1)!, all of one sign per binomial term.
  const int N = flatness;
  std::vector<double> poly(N, 0.0), ex(order, 0.0), f(order, 0.0);
  double fact = 1;
  for (int j = 1; j < N; ++j) fact *= j;
  for (int i = 0; i < N; ++i) {
    double binom = 1;
    for (int j = 0; j < i; ++j) binom = binom * (N - 1 - j) / (j + 1);
    poly[i] = binom * std::pow(rho0, N - 1 - i) / fact;
  }
  double e = std::exp(-rho0);
  for (int i = 0; i < order; ++i) {
    ex[i] = e;
    e *= -1.0 / (i + 1);
  }
  for (int i = 0; i < order; ++i)
    for (int j = 0; j <= i && j < N; ++j) f[i] += poly[j] * ex[i - j];
  Jet X = Jet::variable(order, x, 0), Y = Jet::variable(order, y, 1);
  Jet delta = (X * X + Y * Y) * (1.0 / (sigma * sigma));
  delta.coeff(0, 0) = 0.0;
  Jet out(order, 0.0);
  for (int n = order; n >= 1; --n) {
    out = out * delta;
    out.coeff(0, 0) += f[n - 1] / n;
  }
  out = out * delta;
  out.coeff(0, 0) += lower_gamma_ratio(N, rho0);
  return out;
}

Jet GaussianCutoff::jet(double x, double y, int order) const {
  Jet c = complement_jet(x, y, order);
  Jet out = c * -1.0;
  out.coeff(0, 0) += 1.0;
  return out;
}

LogPolyModels::LogPolyModels(int kmax) : a_(kmax + 1, 0.0), b_(kmax + 1, 0.0) {
  if (kmax < 1) throw std::invalid_argument("log-poly models: kmax >= 1 required");
  a_[1] = -1 / (2 * kPi);
  b_[1] = 0;
  for (int k = 2; k <= kmax; ++k) {
    const double j = k - 1;
    a_[k] = a_[k - 1] / (4 * j * j);
    b_[k] = (b_[k - 1] - 4 * j * a_[k]) / (4 * j * j);
  }
}

double LogPolyModels::value(int k, double r) const {
  return std::pow(r, 2 * (k - 1)) * (a_.at(k) * std::log(r) + b_.at(k));
}

std::vector<Jet> LogPolyModels::jets(double x, double y, int order) const {
  Jet u = radius_squared(x, y, order);
  Jet L = log(u) * 0.5;
  std::vector<Jet> out(kmax() + 1);
  Jet upow(order, 1.0);
  for (int k = 1; k <= kmax(); ++k) {
    if (k >= 2) upow = upow * u;
    out[k] = upow * (L * a_[k] + Jet(order, b_[k]));
  }
  return out;
}

}  // namespace magnus
