#include "magnus/assoc.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "magnus/parallel.hpp"

namespace magnus {

namespace {

bool contains(const Bracket& outer, const Bracket& inner) { return outer.l <= inner.l && inner.r <= outer.r; }

bool laminar(const Bracket& x, const Bracket& y) { return contains(x, y) || contains(y, x) || x.r < y.l || y.r < x.l; }

int parity_sign(long k) { return (k % 2 == 0) ? 1 : -1; }

}  // namespace

AssocCell::AssocCell(int p, std::vector<Bracket> brackets) : p_(p), brackets_(std::move(brackets)) {
  if (p < 1) throw std::invalid_argument("cell: p must be >= 1");
  std::sort(brackets_.begin(), brackets_.end(), bracket_before);
  bool outer = false;
  for (std::size_t i = 0; i < brackets_.size(); ++i) {
    const auto& x = brackets_[i];
    if (x.l < 1 || x.r > p + 1 || x.l >= x.r) throw std::invalid_argument("cell: bad bracket");
    if (x.l == 1 && x.r == p + 1) outer = true;
    for (std::size_t j = i + 1; j < brackets_.size(); ++j) {
      if (x == brackets_[j]) throw std::invalid_argument("cell: repeated bracket");
      if (!laminar(x, brackets_[j])) throw std::invalid_argument("cell: crossing brackets");
    }
  }
  if (!outer) throw std::invalid_argument("cell: outer bracket missing");
}

bool operator<(const AssocCell& a, const AssocCell& b) {
  if (a.p_ != b.p_) return a.p_ < b.p_;
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (std::size_t i = 0; i < a.brackets_.size(); ++i) {
    const auto &x = a.brackets_[i], &y = b.brackets_[i];
    if (!(x == y)) return bracket_before(x, y);
  }
  return false;
}

std::vector<Bracket> AssocCell::children(int k) const {
  const Bracket& B = brackets_.at(k);
  std::vector<Bracket> out;
  int j = B.l;
  while (j <= B.r) {
    int end = j;
    for (const auto& C : brackets_)
      if (!(C == B) && contains(B, C) && C.l == j) end = std::max(end, C.r);
    out.push_back({j, end});
    j = end + 1;
  }
  return out;
}

std::string AssocCell::to_string() const {
  const bool wide = p_ + 1 > 9;
  std::string s;
  for (int j = 1; j <= p_ + 1; ++j) {
    for (const auto& b : brackets_)
      if (b.l == j) s += '(';
    if (wide && j > 1 && s.back() != '(') s += ' ';
    s += std::to_string(j);
    // Closing order does not matter: only parentheses are emitted.
    for (const auto& b : brackets_)
      if (b.r == j) s += ')';
  }
  return s;
}

namespace {

// Bracketings of [l, r] whose outermost bracket is [l, r] (none for a letter).
std::vector<std::vector<Bracket>> enumerate(int l, int r) {
  if (l == r) return {{}};
  std::vector<std::vector<Bracket>> out;
  const int gaps = r - l;
  for (unsigned cuts = 1; cuts < (1u << gaps); ++cuts) {
    std::vector<std::pair<int, int>> parts;
    int start = l;
    for (int g = 0; g < gaps; ++g)
      if (cuts & (1u << g)) {
        parts.push_back({start, l + g});
        start = l + g + 1;
      }
    parts.push_back({start, r});
    std::vector<std::vector<Bracket>> acc{{{l, r}}};
    for (auto [pl, pr] : parts) {
      auto sub = enumerate(pl, pr);
      std::vector<std::vector<Bracket>> next;
      for (const auto& a : acc)
        for (const auto& s : sub) {
          auto v = a;
          v.insert(v.end(), s.begin(), s.end());
          next.push_back(std::move(v));
        }
      acc = std::move(next);
    }
    out.insert(out.end(), acc.begin(), acc.end());
  }
  return out;
}

}  // namespace

std::vector<AssocCell> cells(int p) {
  std::vector<AssocCell> out;
  for (auto& b : enumerate(1, p + 1)) out.emplace_back(p, std::move(b));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> f_vector(int p) {
  std::vector<int> f(p, 0);
  for (const auto& c : cells(p)) ++f[c.dim()];
  return f;
}

int koszul_sort_sign(std::vector<std::pair<Bracket, int>> order) {
  int sign = 1;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j)
      if (bracket_before(order[j].first, order[i].first) && (order[i].second * order[j].second) % 2) sign = -sign;
  return sign;
}

Chain boundary(const AssocCell& c) {
  Chain out;
  const auto& br = c.brackets();
  std::vector<int> dims(br.size());
  for (int k = 0; k < c.degree(); ++k) dims[k] = c.factor_dim(k);
  int prefix = 0;
  for (int k = 0; k < c.degree(); ++k) {
    const auto ch = c.children(k);
    const int nch = int(ch.size());
    const int pb = nch - 1;
    for (int s = 1; s <= pb - 1; ++s)
      for (int a = 0; a + s <= pb; ++a) {
        const int b = pb - a - s;
        if (a + b < 1) continue;
        const Bracket inner{ch[a].l, ch[a + s].r};
        std::vector<std::pair<Bracket, int>> order;
        for (int t = 0; t < c.degree(); ++t) {
          if (t == k) {
            order.push_back({br[t], nch - s - 2});
            order.push_back({inner, s - 1});
          } else {
            order.push_back({br[t], dims[t]});
          }
        }
        const int coef = parity_sign(prefix) * parity_sign((s + 1) * b + a + 1) * koszul_sort_sign(order);
        auto nb = br;
        nb.push_back(inner);
        AssocCell face(c.p(), nb);
        if ((out[face] += coef) == 0) out.erase(face);
      }
    prefix += dims[k];
  }
  return out;
}

Chain boundary(const Chain& chain) {
  Chain out;
  for (const auto& [cell, coef] : chain)
    for (const auto& [f, c] : boundary(cell))
      if ((out[f] += coef * c) == 0) out.erase(f);
  return out;
}

OrientedCell face_map(int a, int pp, int b, const OrientedCell& w, const OrientedCell& u) {
  if (w.cell.p() != a + b || u.cell.p() != pp || pp < 1) throw std::invalid_argument("face_map: arity mismatch");
  auto map_letter_l = [&](int j) { return j <= a + 1 ? j : j + pp; };
  auto map_letter_r = [&](int j) { return j < a + 1 ? j : j + pp; };
  std::vector<std::pair<Bracket, int>> order;
  std::vector<Bracket> all;
  for (int k = 0; k < w.cell.degree(); ++k) {
    const auto& x = w.cell.brackets()[k];
    Bracket y{map_letter_l(x.l), map_letter_r(x.r)};
    order.push_back({y, w.cell.factor_dim(k)});
    all.push_back(y);
  }
  for (int k = 0; k < u.cell.degree(); ++k) {
    const auto& x = u.cell.brackets()[k];
    Bracket y{x.l + a, x.r + a};
    order.push_back({y, u.cell.factor_dim(k)});
    all.push_back(y);
  }
  OrientedCell out;
  out.cell = AssocCell(a + b + pp, all);
  out.sign = w.sign * u.sign * koszul_sort_sign(order);
  return out;
}

std::string EtaTerm::to_string() const {
  std::ostringstream os;
  os << (sign > 0 ? "+" : "-");
  for (const auto& f : factors) os << "(1^" << f.a << "(x)eta" << f.p << "(x)1^" << f.b << ")";
  return os.str();
}

namespace {

bool is_innermost(const AssocCell& c, int k) {
  const auto& B = c.brackets()[k];
  for (const auto& C : c.brackets())
    if (!(C == B) && contains(B, C)) return false;
  return true;
}

// Peels bracket k: returns the collapsed cell and the prefactor so that
// Y(c) = prefactor * (1^a (x) eta_pp (x) 1^b) Y(collapsed).
struct Peel {
  AssocCell rest;
  Slot slot;
  int sign;
};

Peel peel(const AssocCell& c, int k) {
  const auto& beta = c.brackets()[k];
  const int a = beta.l - 1, pp = beta.r - beta.l, b = c.p() + 1 - beta.r;
  auto f = [&](int j) { return j < beta.l ? j : (j <= beta.r ? beta.l : j - pp); };
  std::vector<Bracket> rest;
  std::vector<std::pair<Bracket, int>> order;
  for (int t = 0; t < c.degree(); ++t) {
    if (t == k) continue;
    const auto& x = c.brackets()[t];
    rest.push_back({f(x.l), f(x.r)});
    order.push_back({x, c.factor_dim(t)});
  }
  order.push_back({beta, pp - 1});
  AssocCell w(a + b, rest);
  int sign = koszul_sort_sign(order) * parity_sign(a + (pp + 1) * b + w.degree());
  return {w, Slot{a, pp, b}, sign};
}

void peel_all(const AssocCell& c, EtaTerm prefix, std::vector<EtaTerm>& out) {
  if (c.degree() == 1) {
    prefix.factors.push_back(Slot{0, c.p(), 0});
    if (std::find_if(out.begin(), out.end(), [&](const EtaTerm& t) {
          return t.sign == prefix.sign && t.factors == prefix.factors;
        }) == out.end())
      out.push_back(prefix);
    return;
  }
  for (int k = 1; k < c.degree(); ++k) {
    if (!is_innermost(c, k)) continue;
    Peel pl = peel(c, k);
    EtaTerm next = prefix;
    next.sign *= pl.sign;
    next.factors.push_back(pl.slot);
    peel_all(pl.rest, next, out);
  }
}

}  // namespace

EtaTerm y_cochain(const AssocCell& cell) {
  EtaTerm t;
  AssocCell c = cell;
  while (c.degree() > 1) {
    int k = 1;
    while (!is_innermost(c, k)) ++k;
    Peel pl = peel(c, k);
    t.sign *= pl.sign;
    t.factors.push_back(pl.slot);
    c = pl.rest;
  }
  t.factors.push_back(Slot{0, c.p(), 0});
  return t;
}

std::vector<EtaTerm> y_all_peelings(const AssocCell& cell) {
  std::vector<EtaTerm> out;
  peel_all(cell, EtaTerm{}, out);
  return out;
}

template <class S>
HomComponent<S> evaluate_form(const EtaTerm& term, const std::vector<Derivation<S>>& dirs) {
  const int q = term.form_degree();
  if (int(dirs.size()) != q || q == 0) throw std::invalid_argument("evaluate_form: need one direction per factor");
  if (q > 20) throw std::invalid_argument("evaluate_form: form degree too large");
  const int n = dirs[0].dim();
  // Components are fetched lazily per (direction, p).
  std::map<std::pair<int, int>, HomComponent<S>> comp_cache;
  auto comp = [&](int d, int p) -> const HomComponent<S>& {
    auto key = std::make_pair(d, p);
    auto it = comp_cache.find(key);
    if (it == comp_cache.end()) it = comp_cache.emplace(key, dirs[d].component(p)).first;
    return it->second;
  };
  const Slot& last = term.factors.back();
  if (last.a != 0 || last.b != 0) throw std::invalid_argument("evaluate_form: rightmost factor must be bare");
  std::map<unsigned, HomComponent<S>> level;
  for (int d = 0; d < q; ++d) level.emplace(1u << d, comp(d, last.p));
  for (int j = q - 2; j >= 0; --j) {
    const Slot& f = term.factors[j];
    std::map<unsigned, HomComponent<S>> next;
    for (const auto& [mask, val] : level) {
      if (val.is_zero()) continue;
      for (int d = 0; d < q; ++d) {
        if (mask & (1u << d)) continue;
        const HomComponent<S>& op = comp(d, f.p);
        if (op.is_zero()) continue;
        HomComponent<S> piece = apply_slot(f.a, op, f.b, val);
        if (__builtin_popcount(mask & ((1u << d) - 1)) % 2) piece *= S(-1);
        auto it = next.find(mask | (1u << d));
        if (it == next.end())
          next.emplace(mask | (1u << d), std::move(piece));
        else
          it->second += piece;
      }
    }
    level = std::move(next);
  }
  int arity = 1;
  for (const auto& f : term.factors) arity += f.p;
  HomComponent<S> out(n, arity);
  auto it = level.find((1u << q) - 1);
  if (it != level.end() && !it->second.is_zero()) out = it->second;
  out.arity = arity;
  if (term.sign < 0) out *= S(-1);
  return out;
}

template <class S>
HomComponent<S> exterior_derivative(const EtaTerm& term, const std::vector<Derivation<S>>& dirs) {
  const int q1 = int(dirs.size());
  if (q1 != term.form_degree() + 1) throw std::invalid_argument("exterior_derivative: need q+1 directions");
  int arity = 1;
  for (const auto& f : term.factors) arity += f.p;
  int max_p = 0;
  for (const auto& f : term.factors) max_p = std::max(max_p, f.p);
  HomComponent<S> out(dirs[0].dim(), arity);
  for (int i = 0; i < q1; ++i)
    for (int j = i + 1; j < q1; ++j) {
      std::vector<Derivation<S>> args{bracket(dirs[i], dirs[j], max_p)};
      for (int k = 0; k < q1; ++k)
        if (k != i && k != j) args.push_back(dirs[k]);
      HomComponent<S> v = evaluate_form(term, args);
      if ((i + j + 1) % 2) v *= S(-1);
      out += v;
    }
  return out;
}

template <class S>
HomComponent<S> evaluate_chain(const Chain& chain, const std::vector<Derivation<S>>& dirs) {
  HomComponent<S> out(dirs.at(0).dim(), 0);
  for (const auto& [cell, coef] : chain) {
    HomComponent<S> v = evaluate_form(y_cochain(cell), dirs);
    v *= S(coef);
    out.arity = v.arity;
    out += v;
  }
  return out;
}

QDerivation random_ia_derivation(int n, int trunc, int max_arity, std::mt19937_64& rng, double density) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> num(-3, 3), den(1, 3);
  QDerivation u(n, trunc);
  for (int i = 1; i <= n; ++i) {
    QSeries& img = u.mutable_image(i);
    for (int m = 2; m <= std::min(max_arity, trunc); ++m) {
      const std::uint64_t words = ipow(n, m);
      for (std::uint64_t code = 0; code < words; ++code) {
        if (coin(rng) >= density) continue;
        int a = num(rng);
        if (a == 0) a = 1;
        img.add_term(m, code, ScalarTraits<Rational>::ratio(a, den(rng)));
      }
    }
  }
  return u;
}

Derivation<Checked64> integer_scaled(const QDerivation& u, long scale) {
  Derivation<Checked64> out(u.dim(), u.trunc());
  for (int i = 1; i <= u.dim(); ++i)
    u.image(i).for_each([&](int m, std::uint64_t code, const Rational& c) {
      Rational v = c * scale;
      if (v.get_den() != 1 || !v.get_num().fits_slong_p()) throw std::domain_error("integer_scaled: non-integral value");
      out.mutable_image(i).add_term(m, code, Checked64(v.get_num().get_si()));
    });
  return out;
}

CocycleReport verify_cocycle(int p, int dim_h, int trunc, int tuples, std::uint64_t seed) {
  if (trunc < p + 1) throw std::invalid_argument("verify_cocycle: trunc must be >= p+1");
  CocycleReport rep{p, dim_h, trunc, tuples, seed, {}};
  const auto all = cells(p);
  rep.cells.resize(all.size());
  parallel_for(all.size(), [&](std::size_t idx) {
    const AssocCell& w = all[idx];
    CellCheck chk;
    chk.cell = w;
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (idx + 1)));
    const EtaTerm y = y_cochain(w);
    const Chain dw = boundary(w);
    for (int t = 0; t < tuples && chk.equal; ++t) {
      std::vector<ZDerivation> dirs;
      for (int k = 0; k <= w.degree(); ++k)
        dirs.push_back(integer_scaled(random_ia_derivation(dim_h, trunc, p + 1, rng), 6));
      ZHom lhs = exterior_derivative(y, dirs);
      ZHom rhs = evaluate_chain(dw, dirs);
      rhs.arity = lhs.arity;
      ++chk.tuples;
      if (!(lhs == rhs)) {
        chk.equal = false;
        chk.detail = "tuple " + std::to_string(t) + ": dY and Y(boundary) differ";
      }
    }
    rep.cells[idx] = std::move(chk);
  });
  return rep;
}

template QHom evaluate_form(const EtaTerm&, const std::vector<QDerivation>&);
template QHom exterior_derivative(const EtaTerm&, const std::vector<QDerivation>&);
template QHom evaluate_chain(const Chain&, const std::vector<QDerivation>&);
template ZHom evaluate_form(const EtaTerm&, const std::vector<ZDerivation>&);
template ZHom exterior_derivative(const EtaTerm&, const std::vector<ZDerivation>&);
template ZHom evaluate_chain(const Chain&, const std::vector<ZDerivation>&);

}  // namespace magnus
