#include "magnus/free_group.hpp"

#include <gmpxx.h>

#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace magnus {

std::vector<int> reduce(std::vector<int> letters) {
  std::vector<int> out;
  out.reserve(letters.size());
  for (int x : letters) {
    if (x == 0) throw std::invalid_argument("free word: zero letter");
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

FreeWord::FreeWord(std::vector<int> letters) : letters_(reduce(std::move(letters))) {}

int FreeWord::max_index() const {
  int m = 0;
  for (int x : letters_) m = std::max(m, std::abs(x));
  return m;
}

FreeWord FreeWord::inverse() const {
  std::vector<int> r(letters_.rbegin(), letters_.rend());
  for (int& x : r) x = -x;
  FreeWord w;
  w.letters_ = std::move(r);
  return w;
}

FreeWord operator*(const FreeWord& a, const FreeWord& b) {
  std::vector<int> l = a.letters_;
  l.insert(l.end(), b.letters_.begin(), b.letters_.end());
  return FreeWord(std::move(l));
}

FreeWord generator_word(int i) { return FreeWord({i}); }

FreeWord parse_word(const std::string& text) {
  std::istringstream is(text);
  std::vector<int> l;
  std::string tok;
  while (is >> tok) {
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("word: bad token '" + tok + "'");
    }
    if (pos != tok.size()) throw std::invalid_argument("word: bad token '" + tok + "'");
    l.push_back(v);
  }
  return FreeWord(std::move(l));
}

std::string format_word(const FreeWord& w) {
  std::string s;
  for (std::size_t i = 0; i < w.length(); ++i) {
    if (i) s += ' ';
    s += std::to_string(w.letters()[i]);
  }
  return s;
}

FreeWord w0(int genus) {
  if (genus < 1) throw std::invalid_argument("w0: genus must be >= 1");
  std::vector<int> l;
  for (int i = 1; i <= genus; ++i) {
    l.insert(l.end(), {i, genus + i, -i, -(genus + i)});
  }
  return FreeWord(std::move(l));
}

std::vector<long> abelianize(const FreeWord& w, int n) {
  std::vector<long> v(n, 0);
  for (int x : w.letters()) {
    if (std::abs(x) > n) throw std::invalid_argument("abelianize: letter exceeds rank");
    v[std::abs(x) - 1] += x > 0 ? 1 : -1;
  }
  return v;
}

FreeEndo::FreeEndo(int n, std::vector<FreeWord> images) : n_(n), images_(std::move(images)) {
  if (n < 1 || int(images_.size()) != n) throw std::invalid_argument("endo: need one image per generator");
  for (const auto& w : images_)
    if (w.max_index() > n) throw std::invalid_argument("endo: image uses a letter beyond the rank");
}

FreeEndo FreeEndo::identity(int n) {
  std::vector<FreeWord> im;
  for (int i = 1; i <= n; ++i) im.push_back(generator_word(i));
  return FreeEndo(n, std::move(im));
}

FreeWord FreeEndo::apply(const FreeWord& w) const {
  std::vector<int> l;
  for (int x : w.letters()) {
    if (std::abs(x) > n_) throw std::invalid_argument("endo: letter exceeds rank");
    const FreeWord& img = images_[std::abs(x) - 1];
    if (x > 0) {
      l.insert(l.end(), img.letters().begin(), img.letters().end());
    } else {
      for (auto it = img.letters().rbegin(); it != img.letters().rend(); ++it) l.push_back(-*it);
    }
  }
  return FreeWord(std::move(l));
}

FreeEndo compose(const FreeEndo& f, const FreeEndo& g) {
  if (f.rank() != g.rank()) throw std::invalid_argument("compose: rank mismatch");
  std::vector<FreeWord> im;
  for (const auto& w : g.images()) im.push_back(f.apply(w));
  return FreeEndo(f.rank(), std::move(im));
}

IntMatrix induced_matrix(const FreeEndo& f) {
  const int n = f.rank();
  IntMatrix m(n, std::vector<long>(n, 0));
  for (int j = 0; j < n; ++j) {
    auto col = abelianize(f.images()[j], n);
    for (int i = 0; i < n; ++i) m[i][j] = col[i];
  }
  return m;
}

IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t n = a.size();
  IntMatrix c(n, std::vector<long>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

namespace {

// Bareiss fraction-free determinant.
mpz_class determinant(const IntMatrix& m) {
  const std::size_t n = m.size();
  std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

}  // namespace

FreeAut::FreeAut(FreeEndo forward, FreeEndo backward) : forward_(std::move(forward)), backward_(std::move(backward)) {
  if (forward_.rank() != backward_.rank()) throw std::invalid_argument("aut: rank mismatch");
  const int n = forward_.rank();
  for (int i = 1; i <= n; ++i) {
    if (!(forward_.apply(backward_.image(i)) == generator_word(i)) ||
        !(backward_.apply(forward_.image(i)) == generator_word(i)))
      throw std::invalid_argument("aut: inverse certificate does not compose to the identity");
  }
  mpz_class det = determinant(induced_matrix(forward_));
  if (det != 1 && det != -1) throw std::invalid_argument("aut: induced matrix not invertible over Z");
}

FreeAut FreeAut::identity(int n) { return FreeAut(FreeEndo::identity(n), FreeEndo::identity(n)); }

FreeAut compose(const FreeAut& f, const FreeAut& g) {
  return FreeAut(compose(f.forward(), g.forward()), compose(g.backward(), f.backward()));
}

namespace nielsen {
namespace {

FreeEndo with_image(int n, int i, FreeWord w) {
  FreeEndo id = FreeEndo::identity(n);
  std::vector<FreeWord> im = id.images();
  im.at(i - 1) = std::move(w);
  return FreeEndo(n, std::move(im));
}

void check_pair(int n, int i, int j) {
  if (i < 1 || i > n || j < 1 || j > n || i == j) throw std::invalid_argument("nielsen: bad generator indices");
}

}  // namespace

FreeAut swap(int n, int i, int j) {
  check_pair(n, i, j);
  std::vector<FreeWord> im = FreeEndo::identity(n).images();
  std::swap(im[i - 1], im[j - 1]);
  FreeEndo f(n, im);
  return FreeAut(f, f);
}

FreeAut invert(int n, int i) {
  FreeEndo f = with_image(n, i, FreeWord({-i}));
  return FreeAut(f, f);
}

FreeAut right_multiply(int n, int i, int j, int e) {
  check_pair(n, i, j);
  return FreeAut(with_image(n, i, FreeWord({i, e * j})), with_image(n, i, FreeWord({i, -e * j})));
}

FreeAut left_multiply(int n, int i, int j, int e) {
  check_pair(n, i, j);
  return FreeAut(with_image(n, i, FreeWord({e * j, i})), with_image(n, i, FreeWord({-e * j, i})));
}

FreeAut random(int n, int k, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 3), gen(1, n), sign(0, 1);
  FreeAut acc = FreeAut::identity(n);
  for (int step = 0; step < k; ++step) {
    int i = gen(rng), j = gen(rng);
    while (n > 1 && j == i) j = gen(rng);
    int e = sign(rng) ? 1 : -1;
    FreeAut m;
    switch (n > 1 ? kind(rng) : 1) {
      case 0: m = swap(n, i, j); break;
      case 1: m = invert(n, i); break;
      case 2: m = right_multiply(n, i, j, e); break;
      default: m = left_multiply(n, i, j, e); break;
    }
    acc = compose(m, acc);
  }
  return acc;
}

}  // namespace nielsen

FreeWord random_word(int n, int length, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> gen(1, n), sign(0, 1);
  std::vector<int> l;
  for (int k = 0; k < length; ++k) l.push_back(sign(rng) ? gen(rng) : -gen(rng));
  return FreeWord(std::move(l));
}

}  // namespace magnus
