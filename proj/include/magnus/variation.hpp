#pragma once

#include <array>
#include <vector>

#include "magnus/torus.hpp"

namespace magnus {

// mu(z) = amplitude * (1 - chi_rho(z - P0)) as the coefficient of d/dz (x) dzbar,
// with chi_rho = 1 for r <= rho / 2 and 0 for r >= rho. rho = 0 gives the
// constant field, which does not vanish at P0.
struct BeltramiField {
  TorusGeometry geom;
  cplx amplitude{0, 0};
  double rho = 0;
  bool vanishes_at_p0() const { return rho > 0; }
  cplx value(cplx z) const;
};

// Throws std::invalid_argument when rho is positive but below four grid cells,
// or reaches half the shortest period.
BeltramiField beltrami_field(const TorusGeometry& g, cplx amplitude, double rho);

// First-order quasiconformal marking f^t(z) = (z + t (c zbar + U(z))) / (1 + t c),
// with c the mean of mu and dbar U = mu - c solved spectrally. f^t maps the
// lattice (1, tau) to (1, tau_t) and carries the base point and direction along.
class Marking {
 public:
  Marking(const BeltramiField& mu, double t);

  double t() const { return t_; }
  cplx mean() const { return c_; }
  // Torus C / (Z + tau_t Z) with P0_t = f^t(P0) and v_t = df^t(v).
  const TorusGeometry& deformed() const { return deformed_; }

  cplx map(cplx z) const;
  // (f_z, f_zbar).
  std::array<cplx, 2> jacobian(cplx z) const;
  TangentialLoop image(const TangentialLoop& loop) const;

 private:
  std::array<cplx, 3> fields(cplx z) const;  // U, U_z, U_zbar by interpolation

  TorusGeometry g_;
  double t_;
  cplx c_;
  std::array<RealField, 6> parts_;  // Re/Im of U, U_z, U_zbar
  TorusGeometry deformed_;
};

struct VariationPrediction {
  FSeries h;          // int_C 2 Re((N(omega' omega') - 2 omega'_(1) omega'_(1)) mu), degrees 2..deg+1
  FSeries theta_dot;  // derivation by the contraction of h, applied to theta(gamma)
};

// Throws std::invalid_argument unless mu vanishes at P0.
VariationPrediction variation_predict(const ConnectionForm& cf, const BeltramiField& mu, const FSeries& theta_gamma);

struct RauchCheck {
  cplx integral;   // int_C mu dz^2 for the a-normalized differential dz
  cplx tau_dot;    // central difference of the deformed period
  double relative_error = 0;
};
RauchCheck rauch_check(const BeltramiField& mu, double h);

struct LoopVariation {
  std::string label;
  FSeries predicted, finite_difference;
  std::vector<double> max_relative_error;  // per degree
  std::vector<int> compared;               // coefficients above the threshold, per degree
};

struct VariationReport {
  std::vector<LoopVariation> loops;
  double seconds = 0;
};

// Central difference of theta over the marking family at t = +-h against
// variation_predict, for every loop. Coefficients below threshold times the
// component norm are not compared.
VariationReport variation_check(const TorusGeometry& g, int deg, const BeltramiField& mu, double h,
                                const std::vector<TangentialLoop>& loops, double threshold = 1e-3,
                                const MeshConfig& mesh = {});

}  // namespace magnus
