#include "magnus/derivation.hpp"

#include <algorithm>

namespace magnus {
namespace {

template <class S>
Series<S> mul_capped(const Series<S>& a, const Series<S>& b, int cap) {
  Series<S> out(a.dim(), a.trunc());
  for (int i = 0; i <= cap; ++i) {
    const auto& ca = a.component(i);
    if (ca.empty()) continue;
    for (int j = 0; i + j <= cap; ++j) {
      const auto& cb = b.component(j);
      if (cb.empty()) continue;
      const std::uint64_t shift = a.pow(j);
      for (const auto& [ka, va] : ca)
        for (const auto& [kb, vb] : cb) out.add_term(i + j, ka * shift + kb, va * vb);
    }
  }
  return out;
}

// Substitutes into all words of length m in `comp`, grouping by first letter
// so that shared tails are expanded once.
template <class S>
Series<S> substitute_words(const std::vector<Series<S>>& img, const std::vector<int>& low,
                           const typename Series<S>::Component& comp, int m, int cap, int n, int d) {
  Series<S> out(n, d);
  if (cap < 0 || comp.empty()) return out;
  if (m == 0) {
    out.add_term(0, 0, comp.begin()->second);
    return out;
  }
  const std::uint64_t tail = ipow(n, m - 1);
  std::vector<typename Series<S>::Component> groups(n);
  for (const auto& [code, c] : comp) groups[code / tail].emplace(code % tail, c);
  for (int l = 0; l < n; ++l) {
    if (groups[l].empty() || low[l] < 0) continue;
    Series<S> rest = substitute_words(img, low, groups[l], m - 1, cap - low[l], n, d);
    if (!rest.is_zero()) out += mul_capped(img[l], rest, cap);
  }
  return out;
}

}  // namespace

template <class S>
Series<S> substitute(const std::vector<Series<S>>& images, const Series<S>& a, int cap) {
  const int n = a.dim(), d = a.trunc();
  if (int(images.size()) != n) throw std::invalid_argument("substitute: need one image per generator");
  for (const auto& s : images) a.require_compatible(s);
  cap = cap < 0 ? d : std::min(cap, d);
  std::vector<int> low(n);
  int global_low = d + 1;
  for (int i = 0; i < n; ++i) {
    low[i] = images[i].min_degree();
    if (low[i] >= 0) global_low = std::min(global_low, low[i]);
  }
  Series<S> out(n, d);
  for (int m = 0; m <= d; ++m) {
    if (m > 0 && global_low > 0 && m * global_low > cap) break;
    out += substitute_words(images, low, a.component(m), m, cap, n, d);
  }
  return out;
}

template <class S>
Automorphism<S> exp_derivation(const Derivation<S>& u) {
  if (!u.is_ia()) throw std::invalid_argument("exp_derivation: IA derivation required");
  const int n = u.dim(), d = u.trunc();
  std::vector<Series<S>> im;
  for (int i = 1; i <= n; ++i) {
    Series<S> term = Series<S>::generator(n, d, i);
    Series<S> sum = term;
    for (int k = 1; k <= d; ++k) {
      term = derive(u, term) * ScalarTraits<S>::ratio(1, k);
      if (term.is_zero()) break;
      sum += term;
    }
    im.push_back(std::move(sum));
  }
  return Automorphism<S>(std::move(im));
}

template <class S>
Derivation<S> log_automorphism(const Automorphism<S>& U) {
  if (!U.is_ia()) throw std::invalid_argument("log_automorphism: IA automorphism required");
  const int n = U.dim(), d = U.trunc();
  std::vector<Series<S>> im;
  for (int i = 1; i <= n; ++i) {
    Series<S> term = Series<S>::generator(n, d, i);
    Series<S> sum(n, d);
    for (int k = 1; k <= d; ++k) {
      term = U.apply(term) - term;
      if (term.is_zero()) break;
      sum += term * ScalarTraits<S>::ratio(k % 2 ? 1 : -1, k);
    }
    im.push_back(std::move(sum));
  }
  return Derivation<S>(std::move(im));
}

template <class S>
Automorphism<S> inverse(const Automorphism<S>& U) {
  return exp_derivation(-log_automorphism(U));
}

template QSeries substitute(const std::vector<QSeries>&, const QSeries&, int);
template FSeries substitute(const std::vector<FSeries>&, const FSeries&, int);
template QAutomorphism exp_derivation(const QDerivation&);
template FAutomorphism exp_derivation(const FDerivation&);
template QDerivation log_automorphism(const QAutomorphism&);
template FDerivation log_automorphism(const FAutomorphism&);
template QAutomorphism inverse(const QAutomorphism&);
template FAutomorphism inverse(const FAutomorphism&);

}  // namespace magnus
