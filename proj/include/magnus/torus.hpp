#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "magnus/dense.hpp"
#include "magnus/expansion.hpp"
#include "magnus/grid.hpp"
#include "magnus/iterated.hpp"

namespace magnus {

// A constant 1-form cx dx + cy dy.
struct ConstantForm {
  double cx = 0, cy = 0;
};

struct HarmonicBasis {
  ConstantForm alpha, beta;  // periods: alpha on (1, tau) = (1, 0), beta = (0, 1)
  Series<double> intersection;  // I = X1 X2 - X2 X1
};

HarmonicBasis harmonic_basis(const TorusGeometry& g, int trunc);

// Cutoff used to attach the analytic singular parts at P0.
GaussianCutoff default_cutoff(const TorusGeometry& g);

// Solution Phi of d*d Phi = Omega - (int Omega) delta_P0, written as
// charge * chi * s_1 + remainder with a smooth periodic remainder vanishing at P0.
struct GreenSolution {
  TorusGeometry geom;
  GaussianCutoff cutoff;
  double charge = 0;
  Spectrum remainder;  // Fourier coefficients of the remainder
  double value(cplx z) const;
  // Laplacian of Phi at z != P0 (remainder spectrally, singular part analytically).
  double laplacian(cplx z) const;
};

GreenSolution green_solve(const RealField& density, const TorusGeometry& g);

// Iterated Green potentials: Delta G_1 = B - delta_P0 with B = 1/area, and
// Delta G_k = G_{k-1} - mean for k >= 2. Each G_k = chi s_k + R_k with s_k the
// radial log-polynomial model and R_k smooth, solved spectrally.
class GreenTower {
 public:
  GreenTower(const TorusGeometry& g, int kmax, GaussianCutoff cutoff);

  const TorusGeometry& geometry() const { return g_; }
  int kmax() const { return kmax_; }
  // Derivatives of G_k are available up to this order.
  int max_order(int k) const { return k + 1; }
  const GaussianCutoff& cutoff() const { return cutoff_; }
  const LogPolyModels& models() const { return models_; }
  const Spectrum& remainder_spectrum(int k) const { return spec_.at(k); }

  // All derivatives of G_1..G_kmax at one point.
  struct Sample {
    std::vector<std::vector<double>> d;  // d[k][Jet::index(a, b)]
    double operator()(int k, int a, int b) const { return d[k][Jet::index(a, b)]; }
  };

  // Remainder derivative fields on the grid shifted by (ds, dt) cells.
  struct Fields {
    double ds = 0, dt = 0;
    std::vector<std::vector<RealField>> r;  // r[k][Jet::index(a, b)]
  };
  const Fields& base_fields() const { return base_; }
  Fields shifted_fields(double ds, double dt) const;

  // Interpolated remainders; the singular part uses `offset` (z minus the
  // nearest image of P0) when given, else computes it from z.
  Sample at(cplx z, std::optional<cplx> offset = std::nullopt) const;
  Sample at_node(const Fields& f, int i, int j) const;   // node of the (shifted) grid
  cplx node_point(const Fields& f, int i, int j) const;

 private:
  void add_singular(Sample& s, cplx d) const;
  Fields make_fields(double ds, double dt) const;

  TorusGeometry g_;
  int kmax_;
  GaussianCutoff cutoff_;
  LogPolyModels models_;
  std::vector<Spectrum> spec_;
  Fields base_;
};

// *d(d^a_x d^b_y G_k) (x) coeff
struct PotentialTerm {
  int k = 1, a = 0, b = 0;
  FSeries coeff;
};

// *dF (x) X_word for a periodic grid potential F.
struct GridTerm {
  int degree = 0;
  std::uint64_t code = 0;
  Spectrum potential;
  RealField fx, fy, lap;  // on the base grid
};

// Per word of degree <= deg: the 1-form P dx + Q dy and its exterior
// derivative D dx^dy, in DenseSeries layout.
struct FormSample {
  std::vector<double> P, Q, D;
  cplx prime(std::size_t i) const { return 0.5 * cplx(P[i], -Q[i]); }  // dz-coefficient
  cplx dbar_prime(std::size_t i) const { return cplx(0, -0.25 * D[i]); }
};

struct BuildDiagnostics {
  std::vector<double> charge;  // |integral of the grid density| per degree
  double seconds = 0;
};

// The T_1-valued connection form of degrees 1..deg with
// d omega = omega ^ omega - I delta_P0 and each omega_m, m >= 2, co-exact.
class ConnectionForm {
 public:
  ConnectionForm(const TorusGeometry& g, int deg);

  const TorusGeometry& geometry() const { return g_; }
  int degree() const { return deg_; }
  const GreenTower& green() const { return *green_; }
  const HarmonicBasis& basis() const { return basis_; }
  const DenseSeries& layout() const { return layout_; }
  const std::vector<PotentialTerm>& potential_terms(int m) const { return potentials_.at(m); }
  const std::vector<GridTerm>& grid_terms(int m) const { return grids_.at(m); }
  const BuildDiagnostics& diagnostics() const { return diag_; }

  FormSample sample(cplx z, std::optional<cplx> offset = std::nullopt) const;
  // Visits every node of the grid shifted by (ds, dt) cells.
  void for_each_node(double ds, double dt, const std::function<void(int, int, cplx, const FormSample&)>& f) const;

  // Pullback sum_w omega_w(l'(t)) X_w along a parametrized path.
  DenseSeries pullback(cplx z, cplx velocity, std::optional<cplx> offset = std::nullopt) const;

 private:
  struct ScaledIndex {
    std::size_t index;
    double c;
  };
  void fill(FormSample& out, const GreenTower::Sample& gs, const std::function<std::array<double, 3>(const GridTerm&)>& grid) const;
  void build();

  TorusGeometry g_;
  int deg_;
  HarmonicBasis basis_;
  std::shared_ptr<GreenTower> green_;
  DenseSeries layout_;
  std::vector<std::vector<PotentialTerm>> potentials_;
  std::vector<std::vector<GridTerm>> grids_;
  std::vector<std::vector<std::pair<ConstantForm, std::vector<ScaledIndex>>>> consts_;
  std::vector<std::vector<std::vector<ScaledIndex>>> pot_index_;
  BuildDiagnostics diag_;
};

// Closed path l: [0, 1] -> C with l(0) = P0, l(1) = P0 + lattice vector,
// l'(0) = v, l'(1) = -v.
struct TangentialLoop {
  std::string label;
  std::function<cplx(double)> position;
  std::function<cplx(double)> velocity;
  std::vector<double> knots;  // parameters where the second derivative may jump
  // l(t) - l(0) for t < 1/2 and l(t) - l(1) otherwise, free of cancellation
  // near the endpoints. Optional; falls back to differences of positions.
  std::function<cplx(double)> displacement;
};

// C^1 Hermite spline through plane points (Catmull-Rom interior tangents),
// with end tangents v and -v.
TangentialLoop spline_loop(const std::string& label, const std::vector<cplx>& points, cplx v);

// Default realisations of a (P0 -> P0 + 1), b (P0 -> P0 + tau) and ab (the
// path b followed by a, ending at P0 + 1 + tau).
std::vector<std::vector<cplx>> default_polylines(const TorusGeometry& g);
std::vector<TangentialLoop> default_loops(const TorusGeometry& g);

struct LoopCheck {
  double endpoint_error = 0;  // max of position / tangent mismatches
  double clearance = 0;       // min distance to lattice images of P0 on [0.05, 0.95]
  std::array<long, 2> displacement{};
};
// Throws std::invalid_argument on tangency error > 1e-10, clearance below
// rho_min, or a label whose abelianisation differs from the displacement.
LoopCheck validate_loop(const TangentialLoop& loop, const TorusGeometry& g, double rho_min = 0.02);

FSeries loop_value(const ConnectionForm& cf, const TangentialLoop& loop, const MeshConfig& mesh = {});

struct TorusExpansion {
  std::vector<std::string> labels;
  std::vector<FSeries> values;  // theta(loop) per loop
  MagnusExpansion<double> theta;  // from the a and b loops, degree 1 snapped to X_i
  double degree_one_error = 0;
  const FSeries& value(const std::string& label) const;
};

// Integrates every loop; requires loops labelled "a" and "b".
TorusExpansion expansion(const ConnectionForm& cf, const std::vector<TangentialLoop>& loops, const MeshConfig& mesh = {});

}  // namespace magnus
