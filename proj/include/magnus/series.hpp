#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace magnus {

using Rational = mpq_class;

// A word X_{w1} ... X_{wm}, letters 1-based.
using Word = std::vector<int>;

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* mode = "exact";
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static Rational ratio(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  static double to_double(const Rational& x) { return x.get_d(); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr const char* mode = "float";
  static bool is_zero(double x) { return x == 0.0; }
  static double ratio(long num, long den) { return double(num) / double(den); }
  static double to_double(double x) { return x; }
};

// Truncated element of the completed tensor algebra on H = span(X_1..X_n).
//
// Component m holds a sparse map from word codes to coefficients. A word of
// length m is encoded as the base-n number with digits (w_j - 1), most
// significant first, so code order is lexicographic word order.
template <class S>
class Series {
 public:
  using Scalar = S;
  using Component = std::map<std::uint64_t, S>;
  using Traits = ScalarTraits<S>;

  Series() = default;
  Series(int dim_h, int trunc) : n_(dim_h), d_(trunc), comps_(trunc + 1) {
    if (dim_h < 1 || trunc < 0) throw std::invalid_argument("series: bad dim/trunc");
    pow_.assign(trunc + 2, 1);
    for (int k = 1; k <= trunc + 1; ++k) {
      if (pow_[k - 1] > (std::uint64_t(1) << 62) / std::uint64_t(dim_h))
        throw std::invalid_argument("series: dim_h^trunc too large for word codes");
      pow_[k] = pow_[k - 1] * std::uint64_t(dim_h);
    }
  }

  static Series one(int n, int d) {
    Series s(n, d);
    s.add_term(0, 0, S(1));
    return s;
  }
  static Series constant(int n, int d, const S& c) {
    Series s(n, d);
    s.add_term(0, 0, c);
    return s;
  }
  static Series generator(int n, int d, int i, const S& c = S(1)) {
    Series s(n, d);
    s.add_word(Word{i}, c);
    return s;
  }
  static Series word(int n, int d, const Word& w, const S& c = S(1)) {
    Series s(n, d);
    s.add_word(w, c);
    return s;
  }

  int dim() const { return n_; }
  int trunc() const { return d_; }
  std::uint64_t pow(int k) const { return pow_[k]; }
  const Component& component(int m) const { return comps_.at(m); }
  Component& mutable_component(int m) { return comps_.at(m); }

  std::uint64_t encode(const Word& w) const {
    std::uint64_t c = 0;
    for (int x : w) {
      if (x < 1 || x > n_) throw std::invalid_argument("series: letter out of range");
      c = c * n_ + std::uint64_t(x - 1);
    }
    return c;
  }
  Word decode(int m, std::uint64_t code) const {
    Word w(m);
    for (int j = m - 1; j >= 0; --j) {
      w[j] = int(code % n_) + 1;
      code /= n_;
    }
    return w;
  }

  // Adds c to the coefficient of the given word; drops words above trunc.
  void add_term(int m, std::uint64_t code, const S& c) {
    if (m > d_ || Traits::is_zero(c)) return;
    if constexpr (!Traits::exact) {
      if (!std::isfinite(c)) throw std::domain_error("series: non-finite coefficient");
    }
    auto& comp = comps_[m];
    auto [it, fresh] = comp.try_emplace(code, c);
    if (!fresh) {
      it->second += c;
      if (Traits::is_zero(it->second)) comp.erase(it);
    }
  }
  void add_word(const Word& w, const S& c) {
    if (int(w.size()) > d_) return;
    add_term(int(w.size()), encode(w), c);
  }

  S coeff(const Word& w) const {
    if (int(w.size()) > d_) return S(0);
    const auto& comp = comps_[w.size()];
    auto it = comp.find(encode(w));
    return it == comp.end() ? S(0) : it->second;
  }

  // Visits every stored term as f(degree, code, coefficient).
  template <class F>
  void for_each(F&& f) const {
    for (int m = 0; m <= d_; ++m)
      for (const auto& [code, c] : comps_[m]) f(m, code, c);
  }

  bool is_zero() const {
    for (const auto& c : comps_)
      if (!c.empty()) return false;
    return true;
  }
  std::size_t nnz() const {
    std::size_t k = 0;
    for (const auto& c : comps_) k += c.size();
    return k;
  }
  // Lowest degree with a nonzero coefficient, or -1 for the zero series.
  int min_degree() const {
    for (int m = 0; m <= d_; ++m)
      if (!comps_[m].empty()) return m;
    return -1;
  }

  Series degree_part(int m) const {
    Series s(n_, d_);
    if (m >= 0 && m <= d_) s.comps_[m] = comps_[m];
    return s;
  }
  // Keeps degrees in [lo, hi].
  Series degree_range(int lo, int hi) const {
    Series s(n_, d_);
    for (int m = std::max(lo, 0); m <= std::min(hi, d_); ++m) s.comps_[m] = comps_[m];
    return s;
  }
  Series with_trunc(int d) const {
    Series s(n_, d);
    for (int m = 0; m <= std::min(d, d_); ++m) s.comps_[m] = comps_[m];
    return s;
  }

  void require_compatible(const Series& o) const {
    if (n_ != o.n_ || d_ != o.d_)
      throw std::invalid_argument("series: dim_h/trunc mismatch (" + std::to_string(n_) + "," +
                                  std::to_string(d_) + ") vs (" + std::to_string(o.n_) + "," +
                                  std::to_string(o.d_) + ")");
  }

  Series& operator+=(const Series& o) {
    require_compatible(o);
    o.for_each([&](int m, std::uint64_t k, const S& c) { add_term(m, k, c); });
    return *this;
  }
  Series& operator-=(const Series& o) {
    require_compatible(o);
    o.for_each([&](int m, std::uint64_t k, const S& c) { add_term(m, k, -c); });
    return *this;
  }
  Series& operator*=(const S& c) {
    if (Traits::is_zero(c)) {
      for (auto& comp : comps_) comp.clear();
      return *this;
    }
    for (auto& comp : comps_)
      for (auto it = comp.begin(); it != comp.end();) {
        it->second *= c;
        if (Traits::is_zero(it->second))
          it = comp.erase(it);
        else
          ++it;
      }
    return *this;
  }

  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator-(Series a) { return a *= S(-1); }
  friend Series operator*(Series a, const S& c) { return a *= c; }
  friend Series operator*(const S& c, Series a) { return a *= c; }

  // Exact equality of stored terms (float mode compares bitwise; use near()).
  friend bool operator==(const Series& a, const Series& b) {
    return a.n_ == b.n_ && a.d_ == b.d_ && a.comps_ == b.comps_;
  }

  double max_abs() const {
    double r = 0;
    for_each([&](int, std::uint64_t, const S& c) { r = std::max(r, std::fabs(Traits::to_double(c))); });
    return r;
  }
  double component_norm(int m) const {
    double r = 0;
    for (const auto& [k, c] : comps_.at(m)) {
      double v = Traits::to_double(c);
      r += v * v;
    }
    return std::sqrt(r);
  }

 private:
  int n_ = 0;
  int d_ = -1;
  std::vector<std::uint64_t> pow_;
  std::vector<Component> comps_;
};

using QSeries = Series<Rational>;
using FSeries = Series<double>;

// Degreewise convolution, truncated.
template <class S>
Series<S> mul(const Series<S>& a, const Series<S>& b) {
  a.require_compatible(b);
  const int d = a.trunc();
  Series<S> out(a.dim(), d);
  for (int i = 0; i <= d; ++i) {
    const auto& ca = a.component(i);
    if (ca.empty()) continue;
    for (int j = 0; i + j <= d; ++j) {
      const auto& cb = b.component(j);
      if (cb.empty()) continue;
      const std::uint64_t shift = a.pow(j);
      for (const auto& [ka, va] : ca)
        for (const auto& [kb, vb] : cb) out.add_term(i + j, ka * shift + kb, va * vb);
    }
  }
  return out;
}

template <class S>
Series<S> operator*(const Series<S>& a, const Series<S>& b) {
  return mul(a, b);
}

template <class S>
S constant_term(const Series<S>& a) {
  const auto& c = a.component(0);
  return c.empty() ? S(0) : c.begin()->second;
}

// Inverse in the group 1 + T_1.
template <class S>
Series<S> group_inverse(const Series<S>& a) {
  if (constant_term(a) != S(1)) throw std::invalid_argument("group_inverse: degree-0 part must be 1");
  Series<S> t = a - Series<S>::one(a.dim(), a.trunc());
  Series<S> neg_t = -t;
  Series<S> sum = Series<S>::one(a.dim(), a.trunc());
  Series<S> power = sum;
  for (int k = 1; k <= a.trunc(); ++k) {
    power = mul(power, neg_t);
    if (power.is_zero()) break;
    sum += power;
  }
  return sum;
}

template <class S>
Series<S> exp_series(const Series<S>& u) {
  if (!u.component(0).empty()) throw std::invalid_argument("exp: degree-0 part must vanish");
  Series<S> sum = Series<S>::one(u.dim(), u.trunc());
  Series<S> term = sum;
  for (int k = 1; k <= u.trunc(); ++k) {
    term = mul(term, u) * ScalarTraits<S>::ratio(1, k);
    if (term.is_zero()) break;
    sum += term;
  }
  return sum;
}

template <class S>
Series<S> log_series(const Series<S>& a) {
  if (constant_term(a) != S(1)) throw std::invalid_argument("log: degree-0 part must be 1");
  Series<S> t = a - Series<S>::one(a.dim(), a.trunc());
  Series<S> sum(a.dim(), a.trunc());
  Series<S> power = t;
  for (int k = 1; k <= a.trunc() && !power.is_zero(); ++k) {
    sum += power * ScalarTraits<S>::ratio(k % 2 ? 1 : -1, k);
    power = mul(power, t);
  }
  return sum;
}

// Moves the last tensor slot to the front: Z1...Zm -> Zm Z1...Z(m-1).
template <class S>
Series<S> epsilon(const Series<S>& a) {
  Series<S> out(a.dim(), a.trunc());
  const std::uint64_t n = a.dim();
  a.for_each([&](int m, std::uint64_t code, const S& c) {
    if (m < 2) {
      out.add_term(m, code, c);
      return;
    }
    out.add_term(m, (code % n) * a.pow(m - 1) + code / n, c);
  });
  return out;
}

// N = 1 + eps + ... + eps^(m-1) on degree m.
template <class S>
Series<S> n_operator(const Series<S>& a) {
  Series<S> out(a.dim(), a.trunc());
  const std::uint64_t n = a.dim();
  a.for_each([&](int m, std::uint64_t code, const S& c) {
    std::uint64_t k = code;
    for (int r = 0; r < std::max(m, 1); ++r) {
      out.add_term(m, k, c);
      if (m >= 2) k = (k % n) * a.pow(m - 1) + k / n;
    }
  });
  return out;
}

// N divided by the degree (identity on degrees 0 and 1).
template <class S>
Series<S> ncheck_operator(const Series<S>& a) {
  Series<S> na = n_operator(a);
  Series<S> out(a.dim(), a.trunc());
  na.for_each([&](int m, std::uint64_t code, const S& c) {
    out.add_term(m, code, m >= 2 ? S(c * ScalarTraits<S>::ratio(1, m)) : c);
  });
  return out;
}

inline FSeries to_float(const QSeries& a) {
  FSeries out(a.dim(), a.trunc());
  a.for_each([&](int m, std::uint64_t k, const Rational& c) { out.add_term(m, k, c.get_d()); });
  return out;
}

template <class S>
double max_abs_diff(const Series<S>& a, const Series<S>& b) {
  return (a - b).max_abs();
}

// Float comparison with the library default tolerance on coefficients.
constexpr double kDefaultTolerance = 1e-9;

template <class S>
bool near(const Series<S>& a, const Series<S>& b, double tol = kDefaultTolerance) {
  if constexpr (ScalarTraits<S>::exact) {
    (void)tol;
    return a == b;
  } else {
    return max_abs_diff(a, b) <= tol;
  }
}

std::string word_to_string(const Word& w);

template <class S>
std::string to_string(const Series<S>& a);

extern template std::string to_string(const QSeries&);
extern template std::string to_string(const FSeries&);

}  // namespace magnus
