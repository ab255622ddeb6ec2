#pragma once

#include <complex>
#include <vector>

#include "magnus/torus.hpp"

namespace magnus {

// Default excision radius for residual metrics, in grid cells.
inline constexpr double kExcisionCells = 8.0;

// L2 norm of d omega - omega ^ omega off the excision disk, per degree,
// measured on the half-shifted grid (away from the collocation nodes).
struct IntegrabilityReport {
  double r_cut = 0;
  std::vector<double> residual;  // index m; entries below 2 unused
  std::vector<double> scale;     // L2 norm of d omega_(m) on the same region
};
IntegrabilityReport integrability_residual(const ConnectionForm& cf, double excision_cells = kExcisionCells);

// The integrals of omega_(p) ^ omega_(q) over C, for p, q >= 1 and
// p + q <= max_total (max_total <= 2 * degree). Near P0 the integrand is
// integrated in polar coordinates; the rest uses the grid trapezoid rule,
// joined by a smooth partition of unity.
struct WedgeIntegral {
  int p = 0, q = 0;
  FSeries value;       // degree p + q
  double scale = 0;    // product of the off-disk L2 norms of omega_(p), omega_(q)
};
std::vector<WedgeIntegral> wedge_integrals(const ConnectionForm& cf, int max_total);

// For phi with int_C phi ^ omega_(1) = pairing, the harmonic part is
// alpha (x) a-form + beta (x) b-form.
struct HarmonicPart {
  FSeries alpha, beta;
};
HarmonicPart harmonic_part(const FSeries& pairing);

// |omega_(m)(d/dz)| <= C_m |log r|^e near P0 with e = floor((m - 1) / 2),
// C_m fitted on r_cut <= r <= 2 r_cut and checked on annuli shrinking toward P0.
struct GrowthEnvelope {
  int degree = 0;
  int exponent = 0;
  double r_cut = 0;
  double constant = 0;
  std::vector<double> radii;  // inner annuli
  std::vector<double> ratio;  // max |omega'| / (C |log r|^e) on each
  double worst_ratio = 0;
};
GrowthEnvelope growth_envelope(const ConnectionForm& cf, int m, double excision_cells = kExcisionCells);

// N(omega' omega')_(m) at one sample: 2^m complex word coefficients, from the
// products omega'_(p) omega'_(q) with p, q <= degree.
std::vector<cplx> quad_coefficients(const ConnectionForm& cf, const FormSample& s, int m);
// The single product omega'_(p) omega'_(q) (no symmetrisation).
std::vector<cplx> prime_product(const ConnectionForm& cf, const FormSample& s, int p, int q);
// Cyclic symmetrizer N on a degree-m block of word coefficients.
std::vector<cplx> cyclic_sum(const std::vector<cplx>& x, int m);
// Last slot to the front on a degree-m block.
std::vector<cplx> rotate_last_to_front(const std::vector<cplx>& x, int m);

struct QuadDifferentialReport {
  int max_degree = 0;  // degree + 1
  double r_cut = 0;
  std::vector<double> norm;             // off-disk L2 of N(omega' omega')_(m)
  std::vector<double> dbar_residual;    // off-disk L2 of its dbar, relative to norm (or to the unsymmetrized products when norm is ~0)
  std::vector<double> pole_slope;       // fitted exponent k in |q| ~ r^-k at P0
  std::vector<int> pole_order;
  double degree3_ratio = 0;             // ||N(..)_(3)|| / ||omega'_(1) omega'_(2)||
  double epsilon_defect = 0;            // max |eps(q) - q| / max |q| over the samples
};
QuadDifferentialReport quad_differential(const ConnectionForm& cf, double excision_cells = kExcisionCells);

}  // namespace magnus
