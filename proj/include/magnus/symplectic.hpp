#pragma once

#include <vector>

#include "magnus/derivation.hpp"

namespace magnus {

// Standard symplectic basis X_1..X_g, X_{g+1}..X_{2g} of H.
class Symplectic {
 public:
  explicit Symplectic(int genus);

  int genus() const { return g_; }
  int dim() const { return 2 * g_; }

  // X_i . X_j for 1-based i, j.
  int pairing(int i, int j) const;

  // I = sum_i (X_i X_{g+i} - X_{g+i} X_i).
  template <class S>
  Series<S> intersection(int trunc) const;

  // S-valued pairing of two degree-1 series.
  template <class S>
  S pair(const Series<S>& a, const Series<S>& b) const;

 private:
  int g_;
};

// Contraction of the last slot of u against the argument: for u = sum u_i X_i
// the derivation Z -> sum u_i (X_i . Z). Images may have degree 0 or 1.
template <class S>
Derivation<S> interior(const Symplectic& sp, const Series<S>& u);

// As interior(), but rejects u with components in degree <= 2 so that the
// result lies in Lie IA(T).
template <class S>
Derivation<S> interior_ia(const Symplectic& sp, const Series<S>& u);

// Z_1 ^ ... ^ Z_p -> sum_sigma sgn(sigma) Z_sigma(1) ... Z_sigma(p), for
// degree-1 inputs.
template <class S>
Series<S> lambda_embed(const std::vector<Series<S>>& z);

// Contraction of the first two slots: Z1 Z2 Z3... -> (Z1 . Z2) Z3 ...
// Applied to homogeneous tensors of degree >= 2.
template <class S>
Series<S> contraction(const Symplectic& sp, const Series<S>& x);

// Projectors for Lambda^3 H = H (+) U (genus >= 2). Lambda^3 elements are
// carried in their embedded form in H^{(x)3}; U is the kernel of p_H.
template <class S>
Series<S> q_h(const Symplectic& sp, const Series<S>& z);
template <class S>
Series<S> p_h(const Symplectic& sp, const Series<S>& x);
template <class S>
Series<S> p_u(const Symplectic& sp, const Series<S>& x);
template <class S>
Series<S> q_u(const Symplectic& sp, const Series<S>& x);

#define MAGNUS_SYMPLECTIC_EXTERN(S)                                                    \
  extern template Series<S> Symplectic::intersection<S>(int) const;                    \
  extern template S Symplectic::pair<S>(const Series<S>&, const Series<S>&) const;     \
  extern template Derivation<S> interior(const Symplectic&, const Series<S>&);         \
  extern template Derivation<S> interior_ia(const Symplectic&, const Series<S>&);      \
  extern template Series<S> lambda_embed(const std::vector<Series<S>>&);               \
  extern template Series<S> contraction(const Symplectic&, const Series<S>&);          \
  extern template Series<S> q_h(const Symplectic&, const Series<S>&);                  \
  extern template Series<S> p_h(const Symplectic&, const Series<S>&);                  \
  extern template Series<S> p_u(const Symplectic&, const Series<S>&);                  \
  extern template Series<S> q_u(const Symplectic&, const Series<S>&);
MAGNUS_SYMPLECTIC_EXTERN(Rational)
MAGNUS_SYMPLECTIC_EXTERN(double)
#undef MAGNUS_SYMPLECTIC_EXTERN

}  // namespace magnus
