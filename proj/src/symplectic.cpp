#include "magnus/symplectic.hpp"

#include <algorithm>
#include <numeric>

namespace magnus {

Symplectic::Symplectic(int genus) : g_(genus) {
  if (genus < 1) throw std::invalid_argument("symplectic: genus must be >= 1");
}

int Symplectic::pairing(int i, int j) const {
  if (i <= g_ && j == i + g_) return 1;
  if (i > g_ && j == i - g_) return -1;
  return 0;
}

template <class S>
Series<S> Symplectic::intersection(int trunc) const {
  Series<S> s(dim(), trunc);
  for (int i = 1; i <= g_; ++i) {
    s.add_word({i, g_ + i}, S(1));
    s.add_word({g_ + i, i}, S(-1));
  }
  return s;
}

template <class S>
S Symplectic::pair(const Series<S>& a, const Series<S>& b) const {
  S r(0);
  for (const auto& [ka, va] : a.component(1))
    for (const auto& [kb, vb] : b.component(1)) {
      int p = pairing(int(ka) + 1, int(kb) + 1);
      if (p) r += S(p) * va * vb;
    }
  return r;
}

template <class S>
Derivation<S> interior(const Symplectic& sp, const Series<S>& u) {
  if (u.dim() != sp.dim()) throw std::invalid_argument("interior: dim_h must be 2g");
  if (!u.component(0).empty()) throw std::invalid_argument("interior: u must lie in T_1");
  const int n = u.dim();
  Derivation<S> out(n, u.trunc());
  u.for_each([&](int m, std::uint64_t code, const S& c) {
    const int last = int(code % n) + 1;
    const std::uint64_t head = code / n;
    for (int j = 1; j <= n; ++j) {
      int p = sp.pairing(last, j);
      if (p) out.mutable_image(j).add_term(m - 1, head, S(p) * c);
    }
  });
  return out;
}

template <class S>
Derivation<S> interior_ia(const Symplectic& sp, const Series<S>& u) {
  for (int m = 0; m <= std::min(2, u.trunc()); ++m)
    if (!u.component(m).empty())
      throw std::invalid_argument("interior_ia: u has a component in degree <= 2");
  return interior(sp, u);
}

template <class S>
Series<S> lambda_embed(const std::vector<Series<S>>& z) {
  if (z.empty()) throw std::invalid_argument("lambda_embed: empty input");
  const int n = z[0].dim(), d = z[0].trunc();
  const int p = int(z.size());
  std::vector<int> perm(p);
  std::iota(perm.begin(), perm.end(), 0);
  Series<S> out(n, d);
  do {
    int inv = 0;
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j)
        if (perm[i] > perm[j]) ++inv;
    Series<S> prod = Series<S>::one(n, d);
    for (int i = 0; i < p; ++i) prod = mul(prod, z[perm[i]]);
    if (inv % 2)
      out -= prod;
    else
      out += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

template <class S>
Series<S> contraction(const Symplectic& sp, const Series<S>& x) {
  const int n = x.dim();
  Series<S> out(n, x.trunc());
  x.for_each([&](int m, std::uint64_t code, const S& c) {
    if (m < 2) throw std::invalid_argument("contraction: degree >= 2 required");
    const std::uint64_t rest = x.pow(m - 2);
    const int first = int(code / (rest * n)) + 1;
    const int second = int((code / rest) % n) + 1;
    int p = sp.pairing(first, second);
    if (p) out.add_term(m - 2, code % rest, S(p) * c);
  });
  return out;
}

template <class S>
Series<S> q_h(const Symplectic& sp, const Series<S>& z) {
  const int n = z.dim(), d = z.trunc(), g = sp.genus();
  Series<S> out(n, d);
  for (int i = 1; i <= g; ++i)
    out += lambda_embed<S>({z, Series<S>::generator(n, d, i), Series<S>::generator(n, d, g + i)});
  return out;
}

template <class S>
Series<S> p_h(const Symplectic& sp, const Series<S>& x) {
  if (sp.genus() < 2) throw std::invalid_argument("p_h: genus >= 2 required");
  return contraction(sp, x) * ScalarTraits<S>::ratio(1, 2 * sp.genus() - 2);
}

template <class S>
Series<S> p_u(const Symplectic& sp, const Series<S>& x) {
  return x - q_h(sp, p_h(sp, x));
}

template <class S>
Series<S> q_u(const Symplectic&, const Series<S>& x) {
  return x;
}

#define MAGNUS_SYMPLECTIC_INSTANTIATE(S)                                       \
  template Series<S> Symplectic::intersection<S>(int) const;                   \
  template S Symplectic::pair<S>(const Series<S>&, const Series<S>&) const;    \
  template Derivation<S> interior(const Symplectic&, const Series<S>&);        \
  template Derivation<S> interior_ia(const Symplectic&, const Series<S>&);     \
  template Series<S> lambda_embed(const std::vector<Series<S>>&);              \
  template Series<S> contraction(const Symplectic&, const Series<S>&);         \
  template Series<S> q_h(const Symplectic&, const Series<S>&);                 \
  template Series<S> p_h(const Symplectic&, const Series<S>&);                 \
  template Series<S> p_u(const Symplectic&, const Series<S>&);                 \
  template Series<S> q_u(const Symplectic&, const Series<S>&);
MAGNUS_SYMPLECTIC_INSTANTIATE(Rational)
MAGNUS_SYMPLECTIC_INSTANTIATE(double)

}  // namespace magnus
