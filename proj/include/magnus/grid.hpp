#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace magnus {

using cplx = std::complex<double>;

// Flat torus C / (Z + tau Z) with a marked point and a tangent vector there.
// Lattice coordinates (s, t) are defined by z = s + t tau.
struct TorusGeometry {
  cplx tau{0.0, 1.0};
  cplx p0{0.0, 0.0};
  cplx v{1.0, 0.0};
  int M = 256;

  // Throws std::invalid_argument unless Im tau > 0, v != 0 and M is a power of two >= 16.
  void validate() const;
  double area() const { return tau.imag(); }
  // (s, t) with z = s + t tau.
  std::array<double, 2> lattice(cplx z) const;
  cplx point(double s, double t) const { return s + t * tau; }
  cplx grid_point(int i, int j) const { return point(double(i) / M, double(j) / M); }
  // Length of the shortest nonzero lattice vector.
  double shortest_period() const;
  // Displacement z - P for the lattice image of P nearest to z.
  cplx nearest_offset(cplx z, cplx p) const;
  // Radius of a disk covering `cells` grid cells around a point.
  double cell_radius(double cells) const;
};

// M x M real samples at (s, t) = (i/M, j/M), stored at i*M + j.
struct RealField {
  int M = 0;
  std::vector<double> v;
  RealField() = default;
  explicit RealField(int m) : M(m), v(std::size_t(m) * m, 0.0) {}
  double& operator()(int i, int j) { return v[std::size_t(i) * M + j]; }
  double operator()(int i, int j) const { return v[std::size_t(i) * M + j]; }
  double mean() const;
  double max_abs() const;
};

// Fourier coefficients: f(s, t) = sum c(k1, k2) exp(2 pi i (k1 s + k2 t)),
// with wavenumbers k in [-M/2, M/2) stored at index k mod M.
struct Spectrum {
  int M = 0;
  std::vector<cplx> c;
  Spectrum() = default;
  explicit Spectrum(int m) : M(m), c(std::size_t(m) * m) {}
  cplx& operator()(int i, int j) { return c[std::size_t(i) * M + j]; }
  cplx operator()(int i, int j) const { return c[std::size_t(i) * M + j]; }
  static int wavenumber(int i, int M) { return i < M / 2 ? i : i - M; }
};

Spectrum forward(const RealField& f);
// Real part of the inverse transform.
RealField backward(const Spectrum& s);
std::vector<cplx> forward_complex(const std::vector<cplx>& values, int M);
std::vector<cplx> backward_complex(const std::vector<cplx>& coeffs, int M);

// Symbol of d/dx^a d/dy^b; Nyquist modes are dropped.
Spectrum derivative(const Spectrum& s, const TorusGeometry& g, int a, int b);
// Coefficient k multiplied by exp(2 pi i (k1 ds + k2 dt)): evaluation on the
// grid shifted by (ds, dt).
Spectrum shifted(const Spectrum& s, double ds, double dt);
// Flat Laplacian symbol -(2 pi)^2 |k2 - tau k1|^2 / Im(tau)^2.
double laplacian_symbol(const TorusGeometry& g, int k1, int k2);
// Inverse Laplacian on nonzero modes; the zero mode is set to 0.
Spectrum inverse_laplacian(const Spectrum& s, const TorusGeometry& g);
// Exact trigonometric interpolant at (s, t); O(M^2).
double evaluate_exact(const Spectrum& s, double ls, double lt);

// Periodic tensor-product Lagrange interpolation with 8 x 8 stencils.
double interpolate(const RealField& f, double ls, double lt);

// Integral over C of a density sampled on the grid (trapezoid rule).
double integrate(const RealField& density, const TorusGeometry& g);

// Truncated bivariate Taylor series sum c_pq dx^p dy^q, p + q <= order.
class Jet {
 public:
  static constexpr int kMaxOrder = 8;
  Jet() = default;
  explicit Jet(int order, double value = 0.0);
  static Jet variable(int order, double at, int axis);  // at + dx or at + dy

  int order() const { return order_; }
  double coeff(int p, int q) const { return c_[index(p, q)]; }
  double& coeff(int p, int q) { return c_[index(p, q)]; }
  double value() const { return c_[0]; }
  // d^{p+q} / dx^p dy^q at the expansion point.
  double derivative(int p, int q) const;
  double laplacian() const { return 2 * coeff(2, 0) + 2 * coeff(0, 2); }

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator*(const Jet& a, const Jet& b);

  friend Jet exp(const Jet& a);
  friend Jet log(const Jet& a);
  friend Jet reciprocal(const Jet& a);

  static int index(int p, int q) {
    const int m = p + q;
    return m * (m + 1) / 2 + q;
  }

 private:
  int order_ = 0;
  std::array<double, (kMaxOrder + 1) * (kMaxOrder + 2) / 2> c_{};
};

// Smooth radial cutoff: 1 for r <= inner, 0 for r >= outer.
struct RadialBump {
  double inner = 0.1, outer = 0.4;
  double value(double r) const;
  // Jet in the displacement (x, y) from the centre.
  Jet jet(double x, double y, int order) const;
};

// Radial cutoff chi(r) = Q(N, r^2 / sigma^2) with Q the regularized upper
// incomplete gamma function: 1 - O(r^2N) at the centre and an entire function
// of (x, y), so its Fourier coefficients decay like a Gaussian. Values below
// Q(N, (support / sigma)^2) are dropped: chi is zero for r >= support.
struct GaussianCutoff {
  double sigma = 0.05;
  int flatness = 8;
  double support = 0.4;
  double value(double r) const;
  // 1 - chi, accurate near the centre.
  double complement(double r) const;
  // Jets in the displacement (x, y) from the centre.
  Jet jet(double x, double y, int order) const;
  Jet complement_jet(double x, double y, int order) const;
};

// Radial models s_k with Laplacian s_{k-1} (s_0 = -delta):
// s_k = r^{2(k-1)} (A_k log r + B_k), s_1 = -(1/2 pi) log r.
class LogPolyModels {
 public:
  explicit LogPolyModels(int kmax);
  int kmax() const { return int(a_.size()) - 1; }
  double a(int k) const { return a_.at(k); }
  double b(int k) const { return b_.at(k); }
  double value(int k, double r) const;
  // Jets of s_1..s_kmax at displacement (x, y) != 0; entry 0 is unused.
  std::vector<Jet> jets(double x, double y, int order) const;

 private:
  std::vector<double> a_, b_;
};

}  // namespace magnus
