#include "magnus/expansion.hpp"

#include <cstdlib>
#include <stdexcept>

namespace magnus {

template <class S>
MagnusExpansion<S>::MagnusExpansion(std::vector<Series<S>> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("expansion: no generators");
  const int n = values_[0].dim(), d = values_[0].trunc();
  if (int(values_.size()) != n) throw std::invalid_argument("expansion: need one value per generator");
  for (int i = 0; i < n; ++i) {
    values_[0].require_compatible(values_[i]);
    Series<S> low = values_[i].degree_range(0, 1);
    Series<S> want = Series<S>::one(n, d);
    if (d >= 1) want += Series<S>::generator(n, d, i + 1);
    if (!(low == want)) throw std::invalid_argument("expansion: value must be 1 + X_i + higher terms");
    inverses_.push_back(group_inverse(values_[i]));
  }
}

template <class S>
MagnusExpansion<S> std_expansion(int n, int trunc) {
  std::vector<Series<S>> v;
  for (int i = 1; i <= n; ++i) v.push_back(Series<S>::one(n, trunc) + Series<S>::generator(n, trunc, i));
  return MagnusExpansion<S>(std::move(v));
}

template <class S>
Series<S> evaluate(const MagnusExpansion<S>& theta, const FreeWord& w) {
  Series<S> acc = Series<S>::one(theta.dim(), theta.trunc());
  for (int x : w.letters()) {
    if (std::abs(x) > theta.dim()) throw std::invalid_argument("evaluate: letter exceeds rank");
    acc = mul(acc, x > 0 ? theta.value(x) : theta.inverse_value(-x));
  }
  return acc;
}

template <class S>
MagnusExpansion<S> act(const Automorphism<S>& U, const MagnusExpansion<S>& theta) {
  std::vector<Series<S>> v;
  for (const auto& s : theta.values()) v.push_back(U.apply(s));
  return MagnusExpansion<S>(std::move(v));
}

template <class S>
Automorphism<S> transporter(const MagnusExpansion<S>& theta, const MagnusExpansion<S>& target) {
  const int n = theta.dim(), d = theta.trunc();
  if (target.dim() != n || target.trunc() != d) throw std::invalid_argument("transporter: dim/trunc mismatch");
  std::vector<Series<S>> images, rest;
  for (int i = 1; i <= n; ++i) {
    images.push_back(Series<S>::generator(n, d, i));
    rest.push_back(theta.value(i).degree_range(2, d));
  }
  // U(theta(x_i)) = 1 + U(X_i) + U(rest_i); the degree-d part of U(rest_i)
  // only involves U's components below degree d.
  for (int deg = 2; deg <= d; ++deg) {
    std::vector<Series<S>> fixes;
    for (int i = 0; i < n; ++i) {
      Series<S> got = substitute(images, rest[i], deg).degree_part(deg);
      fixes.push_back(target.value(i + 1).degree_part(deg) - got);
    }
    for (int i = 0; i < n; ++i) images[i] += fixes[i];
  }
  Automorphism<S> U(std::move(images));
  for (int i = 1; i <= n; ++i) {
    Series<S> r = U.apply(theta.value(i)) - target.value(i);
    bool ok = ScalarTraits<S>::exact ? r.is_zero() : r.max_abs() <= kDefaultTolerance * (1 + target.value(i).max_abs());
    if (!ok) throw std::logic_error("transporter: nonzero residual after solve");
  }
  return U;
}

template <class S>
std::vector<Series<S>> linear_images(const IntMatrix& m, int trunc) {
  const int n = int(m.size());
  std::vector<Series<S>> im;
  for (int j = 0; j < n; ++j) {
    Series<S> s(n, trunc);
    for (int i = 0; i < n; ++i)
      if (m[i][j]) s.add_word({i + 1}, S(m[i][j]));
    im.push_back(std::move(s));
  }
  return im;
}

template <class S>
MagnusExpansion<S> pushforward(const MagnusExpansion<S>& theta, const FreeAut& phi) {
  const int n = theta.dim();
  if (phi.rank() != n) throw std::invalid_argument("pushforward: rank mismatch");
  auto lin = linear_images<S>(phi.matrix(), theta.trunc());
  std::vector<Series<S>> v;
  for (int i = 1; i <= n; ++i) v.push_back(substitute(lin, evaluate(theta, phi.backward().image(i))));
  return MagnusExpansion<S>(std::move(v));
}

template <class S>
HomComponent<S> JohnsonMap<S>::component(int p) const {
  const int n = total.dim();
  HomComponent<S> h(n, p + 1);
  if (p + 1 > total.trunc()) return h;
  for (int i = 0; i < n; ++i) h.images[i] = total.images()[i].component(p + 1);
  return h;
}

template <class S>
JohnsonMap<S> johnson(const MagnusExpansion<S>& theta, const FreeAut& phi) {
  Automorphism<S> tau_inv = transporter(theta, pushforward(theta, phi));
  return JohnsonMap<S>{inverse(tau_inv)};
}

template <class S>
Series<S> johnson_residual(const MagnusExpansion<S>& theta, const FreeAut& phi, const JohnsonMap<S>& tau, int gen) {
  Automorphism<S> tau_inv = inverse(tau.total);
  return tau_inv.apply(theta.value(gen)) - pushforward(theta, phi).value(gen);
}

template <class S>
Series<S> symplectic_defect(const MagnusExpansion<S>& theta, int genus) {
  if (theta.dim() != 2 * genus) throw std::invalid_argument("symplectic_defect: dim_h must be 2g");
  Symplectic sp(genus);
  return evaluate(theta, w0(genus)) - exp_series(-sp.intersection<S>(theta.trunc()));
}

template <class S>
Series<S> mc_path_derivative(const MagnusExpansion<S>& theta, const Derivation<S>& u, const FreeWord& w) {
  return derive(u, evaluate(theta, w));
}

#define MAGNUS_EXPANSION_INSTANTIATE(S)                                                                     \
  template class MagnusExpansion<S>;                                                                       \
  template MagnusExpansion<S> std_expansion(int, int);                                                     \
  template Series<S> evaluate(const MagnusExpansion<S>&, const FreeWord&);                                 \
  template MagnusExpansion<S> act(const Automorphism<S>&, const MagnusExpansion<S>&);                      \
  template Automorphism<S> transporter(const MagnusExpansion<S>&, const MagnusExpansion<S>&);              \
  template std::vector<Series<S>> linear_images(const IntMatrix&, int);                                    \
  template MagnusExpansion<S> pushforward(const MagnusExpansion<S>&, const FreeAut&);                      \
  template struct JohnsonMap<S>;                                                                           \
  template JohnsonMap<S> johnson(const MagnusExpansion<S>&, const FreeAut&);                               \
  template Series<S> johnson_residual(const MagnusExpansion<S>&, const FreeAut&, const JohnsonMap<S>&, int); \
  template Series<S> symplectic_defect(const MagnusExpansion<S>&, int);                                    \
  template Series<S> mc_path_derivative(const MagnusExpansion<S>&, const Derivation<S>&, const FreeWord&);
MAGNUS_EXPANSION_INSTANTIATE(Rational)
MAGNUS_EXPANSION_INSTANTIATE(double)

}  // namespace magnus
