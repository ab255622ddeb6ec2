#pragma once

#include <vector>

#include "magnus/derivation.hpp"
#include "magnus/free_group.hpp"
#include "magnus/symplectic.hpp"

namespace magnus {

// Values theta(x_i) on the free generators; extended multiplicatively.
template <class S>
class MagnusExpansion {
 public:
  MagnusExpansion() = default;
  // Throws unless each value is 1 + X_i + (degree >= 2).
  explicit MagnusExpansion(std::vector<Series<S>> values);

  int dim() const { return int(values_.size()); }
  int trunc() const { return values_[0].trunc(); }
  const Series<S>& value(int i) const { return values_.at(i - 1); }
  const std::vector<Series<S>>& values() const { return values_; }
  const Series<S>& inverse_value(int i) const { return inverses_.at(i - 1); }

 private:
  std::vector<Series<S>> values_;
  std::vector<Series<S>> inverses_;
};

template <class S>
MagnusExpansion<S> std_expansion(int n, int trunc);

template <class S>
Series<S> evaluate(const MagnusExpansion<S>& theta, const FreeWord& w);

// x_i -> U(theta(x_i)).
template <class S>
MagnusExpansion<S> act(const Automorphism<S>& U, const MagnusExpansion<S>& theta);

// The unique U in IA(T) with U o theta = target, solved degree by degree.
template <class S>
Automorphism<S> transporter(const MagnusExpansion<S>& theta, const MagnusExpansion<S>& target);

// |phi|, acting diagonally on tensor degrees, as generator images.
template <class S>
std::vector<Series<S>> linear_images(const IntMatrix& m, int trunc);

// x_i -> |phi|(theta(phi^{-1}(x_i))).
template <class S>
MagnusExpansion<S> pushforward(const MagnusExpansion<S>& theta, const FreeAut& phi);

template <class S>
struct JohnsonMap {
  Automorphism<S> total;  // tau(phi)
  // tau_p: the degree-(p+1) part of tau(phi)|_H.
  HomComponent<S> component(int p) const;
};

template <class S>
JohnsonMap<S> johnson(const MagnusExpansion<S>& theta, const FreeAut& phi);

// tau^{-1}(theta(x_gen)) - pushforward(theta, phi)(x_gen); exactly zero in
// rational mode.
template <class S>
Series<S> johnson_residual(const MagnusExpansion<S>& theta, const FreeAut& phi, const JohnsonMap<S>& tau, int gen);

// theta(w0) - exp(-I).
template <class S>
Series<S> symplectic_defect(const MagnusExpansion<S>& theta, int genus);

// Derivative at t = 0 of exp(t u) o theta evaluated on w.
template <class S>
Series<S> mc_path_derivative(const MagnusExpansion<S>& theta, const Derivation<S>& u, const FreeWord& w);

using QExpansion = MagnusExpansion<Rational>;
using FExpansion = MagnusExpansion<double>;

#define MAGNUS_EXPANSION_EXTERN(S)                                                                                \
  extern template class MagnusExpansion<S>;                                                                      \
  extern template MagnusExpansion<S> std_expansion(int, int);                                                    \
  extern template Series<S> evaluate(const MagnusExpansion<S>&, const FreeWord&);                                \
  extern template MagnusExpansion<S> act(const Automorphism<S>&, const MagnusExpansion<S>&);                     \
  extern template Automorphism<S> transporter(const MagnusExpansion<S>&, const MagnusExpansion<S>&);             \
  extern template std::vector<Series<S>> linear_images(const IntMatrix&, int);                                   \
  extern template MagnusExpansion<S> pushforward(const MagnusExpansion<S>&, const FreeAut&);                     \
  extern template struct JohnsonMap<S>;                                                                          \
  extern template JohnsonMap<S> johnson(const MagnusExpansion<S>&, const FreeAut&);                              \
  extern template Series<S> johnson_residual(const MagnusExpansion<S>&, const FreeAut&, const JohnsonMap<S>&, int); \
  extern template Series<S> symplectic_defect(const MagnusExpansion<S>&, int);                                   \
  extern template Series<S> mc_path_derivative(const MagnusExpansion<S>&, const Derivation<S>&, const FreeWord&);
MAGNUS_EXPANSION_EXTERN(Rational)
MAGNUS_EXPANSION_EXTERN(double)
#undef MAGNUS_EXPANSION_EXTERN

}  // namespace magnus
