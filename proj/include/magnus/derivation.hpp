#pragma once

#include <vector>

#include "magnus/series.hpp"

namespace magnus {

// Homogeneous linear map H -> H^{(x)arity}; images[i] holds X_{i+1}'s image
// as codes of words of length `arity`.
template <class S>
struct HomComponent {
  int n = 0;
  int arity = 0;
  std::vector<typename Series<S>::Component> images;

  HomComponent() = default;
  HomComponent(int n_, int arity_) : n(n_), arity(arity_), images(n_) {}

  bool is_zero() const {
    for (const auto& c : images)
      if (!c.empty()) return false;
    return true;
  }
  void add(int gen, std::uint64_t code, const S& c) {
    if (ScalarTraits<S>::is_zero(c)) return;
    auto [it, fresh] = images[gen].try_emplace(code, c);
    if (!fresh) {
      it->second += c;
      if (ScalarTraits<S>::is_zero(it->second)) images[gen].erase(it);
    }
  }
  HomComponent& operator+=(const HomComponent& o) {
    for (int i = 0; i < n; ++i)
      for (const auto& [k, c] : o.images[i]) add(i, k, c);
    return *this;
  }
  HomComponent& operator-=(const HomComponent& o) {
    for (int i = 0; i < n; ++i)
      for (const auto& [k, c] : o.images[i]) add(i, k, -c);
    return *this;
  }
  HomComponent& operator*=(const S& s) {
    if (ScalarTraits<S>::is_zero(s)) {
      for (auto& c : images) c.clear();
      return *this;
    }
    for (auto& comp : images)
      for (auto& [k, c] : comp) c *= s;
    return *this;
  }
  friend bool operator==(const HomComponent& a, const HomComponent& b) {
    return a.n == b.n && (a.is_zero() && b.is_zero() ? true : a.arity == b.arity && a.images == b.images);
  }
};

inline std::uint64_t ipow(std::uint64_t base, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= base;
  return r;
}

// (1^a (x) op (x) 1^b) applied after x, where x: H -> H^{(a+b+1)}.
template <class S>
HomComponent<S> apply_slot(int a, const HomComponent<S>& op, int b, const HomComponent<S>& x) {
  if (x.arity != a + b + 1) throw std::invalid_argument("apply_slot: arity mismatch");
  const std::uint64_t n = x.n;
  const std::uint64_t nb = ipow(n, b);
  const std::uint64_t nk = ipow(n, op.arity);
  HomComponent<S> out(x.n, a + b + op.arity);
  for (int i = 0; i < x.n; ++i) {
    for (const auto& [code, c] : x.images[i]) {
      const std::uint64_t suffix = code % nb;
      const std::uint64_t letter = (code / nb) % n;
      const std::uint64_t prefix = code / (nb * n);
      for (const auto& [oc, ov] : op.images[letter]) out.add(i, ((prefix * nk + oc) * nb) + suffix, c * ov);
    }
  }
  return out;
}

// A derivation of T determined by its values on X_1..X_n. Images may have any
// degree; is_ia() tells whether it lies in Lie IA(T) (images in degree >= 2).
template <class S>
class Derivation {
 public:
  Derivation() = default;
  Derivation(int n, int d) : n_(n), d_(d), images_(n, Series<S>(n, d)) {}
  explicit Derivation(std::vector<Series<S>> images) : images_(std::move(images)) {
    if (images_.empty()) throw std::invalid_argument("derivation: no images");
    n_ = images_[0].dim();
    d_ = images_[0].trunc();
    if (int(images_.size()) != n_) throw std::invalid_argument("derivation: need one image per generator");
    for (const auto& s : images_) images_[0].require_compatible(s);
  }

  int dim() const { return n_; }
  int trunc() const { return d_; }
  // 1-based generator index.
  const Series<S>& image(int i) const { return images_.at(i - 1); }
  Series<S>& mutable_image(int i) { return images_.at(i - 1); }
  const std::vector<Series<S>>& images() const { return images_; }

  bool is_ia() const {
    for (const auto& s : images_)
      if (!s.component(0).empty() || (s.trunc() >= 1 && !s.component(1).empty())) return false;
    return true;
  }
  bool is_zero() const {
    for (const auto& s : images_)
      if (!s.is_zero()) return false;
    return true;
  }

  // The degree-(p+1) part of u|_H.
  HomComponent<S> component(int p) const {
    HomComponent<S> h(n_, p + 1);
    if (p + 1 > d_ || p + 1 < 0) return h;
    for (int i = 0; i < n_; ++i) h.images[i] = images_[i].component(p + 1);
    return h;
  }
  void add_component(const HomComponent<S>& h) {
    for (int i = 0; i < n_; ++i)
      for (const auto& [k, c] : h.images[i]) images_[i].add_term(h.arity, k, c);
  }
  static Derivation from_components(int n, int d, const std::vector<HomComponent<S>>& parts) {
    Derivation u(n, d);
    for (const auto& h : parts) u.add_component(h);
    return u;
  }

  Derivation& operator+=(const Derivation& o) {
    for (int i = 0; i < n_; ++i) images_[i] += o.images_[i];
    return *this;
  }
  Derivation& operator-=(const Derivation& o) {
    for (int i = 0; i < n_; ++i) images_[i] -= o.images_[i];
    return *this;
  }
  Derivation& operator*=(const S& c) {
    for (auto& s : images_) s *= c;
    return *this;
  }
  friend Derivation operator+(Derivation a, const Derivation& b) { return a += b; }
  friend Derivation operator-(Derivation a, const Derivation& b) { return a -= b; }
  friend Derivation operator*(const S& c, Derivation a) { return a *= c; }
  friend Derivation operator-(Derivation a) { return a *= S(-1); }
  friend bool operator==(const Derivation& a, const Derivation& b) { return a.images_ == b.images_; }

 private:
  int n_ = 0;
  int d_ = 0;
  std::vector<Series<S>> images_;
};

// Leibniz extension of u to T, truncated.
template <class S>
Series<S> derive(const Derivation<S>& u, const Series<S>& a) {
  if (u.dim() != a.dim() || u.trunc() != a.trunc()) throw std::invalid_argument("derive: dim/trunc mismatch");
  const int d = a.trunc();
  const std::uint64_t n = a.dim();
  Series<S> out(a.dim(), d);
  a.for_each([&](int m, std::uint64_t code, const S& c) {
    for (int j = 0; j < m; ++j) {
      const std::uint64_t tail = a.pow(m - j - 1);
      const std::uint64_t suffix = code % tail;
      const std::uint64_t letter = (code / tail) % n;
      const std::uint64_t prefix = code / (tail * n);
      const Series<S>& img = u.images()[letter];
      for (int k = 0; m - 1 + k <= d; ++k) {
        const std::uint64_t nk = a.pow(k);
        for (const auto& [ic, iv] : img.component(k)) out.add_term(m - 1 + k, (prefix * nk + ic) * tail + suffix, c * iv);
      }
    }
  });
  return out;
}

// Components w_p of (u o v)|_H via the slot-operator formula:
// w_p = sum_{s} sum_{a+b = p-s} (1^a (x) u_s (x) 1^b) v_{p-s}.
// Components above max_p (if given) are skipped.
template <class S>
Derivation<S> compose(const Derivation<S>& u, const Derivation<S>& v, int max_p = -1) {
  if (!u.is_ia() || !v.is_ia()) throw std::invalid_argument("compose: IA derivations required");
  const int n = u.dim(), d = u.trunc();
  Derivation<S> w(n, d);
  for (int p = 2; p + 1 <= d && (max_p < 0 || p <= max_p); ++p) {
    HomComponent<S> wp(n, p + 1);
    for (int s = 1; s <= p - 1; ++s) {
      HomComponent<S> us = u.component(s);
      HomComponent<S> vr = v.component(p - s);
      if (us.is_zero() || vr.is_zero()) continue;
      for (int a = 0; a <= p - s; ++a) wp += apply_slot(a, us, p - s - a, vr);
    }
    w.add_component(wp);
  }
  return w;
}

template <class S>
Derivation<S> bracket(const Derivation<S>& u, const Derivation<S>& v, int max_p = -1) {
  return compose(u, v, max_p) - compose(v, u, max_p);
}

// Algebra homomorphism X_i -> images[i-1] applied to a, keeping degrees <= cap.
template <class S>
Series<S> substitute(const std::vector<Series<S>>& images, const Series<S>& a, int cap = -1);

// Filtered algebra automorphism of T given by its values on generators.
template <class S>
class Automorphism {
 public:
  Automorphism() = default;
  explicit Automorphism(std::vector<Series<S>> images) : images_(std::move(images)) {
    if (images_.empty()) throw std::invalid_argument("automorphism: no images");
    for (const auto& s : images_) images_[0].require_compatible(s);
    if (int(images_.size()) != images_[0].dim()) throw std::invalid_argument("automorphism: need one image per generator");
  }
  static Automorphism identity(int n, int d) {
    std::vector<Series<S>> im;
    for (int i = 1; i <= n; ++i) im.push_back(Series<S>::generator(n, d, i));
    return Automorphism(std::move(im));
  }

  int dim() const { return images_[0].dim(); }
  int trunc() const { return images_[0].trunc(); }
  const Series<S>& image(int i) const { return images_.at(i - 1); }
  const std::vector<Series<S>>& images() const { return images_; }

  // |U| = id and no constant terms.
  bool is_ia() const {
    for (int i = 0; i < dim(); ++i) {
      const auto& s = images_[i];
      if (!s.component(0).empty()) return false;
      if (s.degree_part(1) != Series<S>::generator(dim(), trunc(), i + 1)) return false;
    }
    return true;
  }

  Series<S> apply(const Series<S>& a) const { return substitute(images_, a); }

  friend bool operator==(const Automorphism& a, const Automorphism& b) { return a.images_ == b.images_; }

 private:
  std::vector<Series<S>> images_;
};

// (U o V)(X_i) = U(V(X_i)).
template <class S>
Automorphism<S> compose(const Automorphism<S>& u, const Automorphism<S>& v) {
  std::vector<Series<S>> im;
  for (const auto& s : v.images()) im.push_back(u.apply(s));
  return Automorphism<S>(std::move(im));
}

template <class S>
Automorphism<S> exp_derivation(const Derivation<S>& u);

template <class S>
Derivation<S> log_automorphism(const Automorphism<S>& U);

template <class S>
Automorphism<S> inverse(const Automorphism<S>& U);

using QDerivation = Derivation<Rational>;
using FDerivation = Derivation<double>;
using QAutomorphism = Automorphism<Rational>;
using FAutomorphism = Automorphism<double>;

extern template QSeries substitute(const std::vector<QSeries>&, const QSeries&, int);
extern template FSeries substitute(const std::vector<FSeries>&, const FSeries&, int);
extern template QAutomorphism exp_derivation(const QDerivation&);
extern template FAutomorphism exp_derivation(const FDerivation&);
extern template QDerivation log_automorphism(const QAutomorphism&);
extern template FDerivation log_automorphism(const FAutomorphism&);
extern template QAutomorphism inverse(const QAutomorphism&);
extern template FAutomorphism inverse(const FAutomorphism&);

}  // namespace magnus
