#pragma once

#include <functional>
#include <vector>

#include "magnus/dense.hpp"
#include "magnus/series.hpp"

namespace magnus {

// A T_1-valued 1-form f(t) dt on [0, 1], sampled through a callback.
struct SampledForm {
  enum class Endpoint { regular, log_power };

  int dim_h = 0;
  int trunc = 0;
  std::function<DenseSeries(double)> f;
  Endpoint endpoint = Endpoint::regular;
  int log_power = 0;  // k in |f(t)| <= C |log min(t, 1-t)|^k

  static SampledForm from_series(int dim_h, int trunc, std::function<FSeries(double)> g);
  static SampledForm constant(const FSeries& c);
};

struct MeshConfig {
  // Dyadic cells [2^{-j-1}, 2^{-j}] toward each endpoint for j = 2..depth+1;
  // depth 0 gives a uniform mesh.
  int depth = 40;
  // Largest step anywhere on the mesh.
  double h_max = 1.0 / 400;
  // Minimum number of steps per dyadic cell.
  int per_cell = 8;
  // Interior points that must be mesh nodes (e.g. spline knots).
  std::vector<double> breakpoints;
};

// Step boundaries 0 = t_0 < ... < t_N = 1.
std::vector<double> graded_mesh(const MeshConfig& cfg);

// F(1) for dF/dt = f(t) F, F(0) = 1, with the fourth-order two-point Gauss
// Magnus integrator. Throws std::domain_error on a non-finite sample or a
// nonzero degree-0 part, naming the offending t.
FSeries transport(const SampledForm& phi, const MeshConfig& cfg = {});

struct QuadratureConfig {
  int cells = 64;
  int nodes = 8;  // Gauss-Legendre nodes per cell
};

// The simplex integral over 1 >= t_1 >= ... >= t_q >= 0 of
// f_1(t_1) ... f_q(t_q) dt_1 ... dt_q, by nested composite Gauss quadrature.
FSeries iterated(const std::vector<SampledForm>& forms, const QuadratureConfig& cfg = {});

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

}  // namespace magnus
