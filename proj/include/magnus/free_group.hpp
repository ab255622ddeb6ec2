#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace magnus {

// Freely reduced word in F_n; letter +i is x_i, -i is x_i^{-1}.
class FreeWord {
 public:
  FreeWord() = default;
  // Reduces the given letters; throws on a zero letter.
  explicit FreeWord(std::vector<int> letters);

  const std::vector<int>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  int max_index() const;

  FreeWord inverse() const;
  friend FreeWord operator*(const FreeWord& a, const FreeWord& b);
  friend bool operator==(const FreeWord& a, const FreeWord& b) { return a.letters_ == b.letters_; }

 private:
  std::vector<int> letters_;
};

std::vector<int> reduce(std::vector<int> letters);
FreeWord generator_word(int i);

// "1 2 -1 -2" <-> word.
FreeWord parse_word(const std::string& text);
std::string format_word(const FreeWord& w);

// prod_i x_i x_{g+i} x_i^{-1} x_{g+i}^{-1}.
FreeWord w0(int genus);

// Signed letter counts, length n.
std::vector<long> abelianize(const FreeWord& w, int n);

// Endomorphism of F_n by generator images.
class FreeEndo {
 public:
  FreeEndo() = default;
  FreeEndo(int n, std::vector<FreeWord> images);
  static FreeEndo identity(int n);

  int rank() const { return n_; }
  const FreeWord& image(int i) const { return images_.at(i - 1); }
  const std::vector<FreeWord>& images() const { return images_; }
  FreeWord apply(const FreeWord& w) const;

  friend bool operator==(const FreeEndo& a, const FreeEndo& b) { return a.n_ == b.n_ && a.images_ == b.images_; }

 private:
  int n_ = 0;
  std::vector<FreeWord> images_;
};

// (f o g)(x) = f(g(x)).
FreeEndo compose(const FreeEndo& f, const FreeEndo& g);

// Column j is the abelianization of the image of x_j.
using IntMatrix = std::vector<std::vector<long>>;
IntMatrix induced_matrix(const FreeEndo& f);
IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b);

// Automorphism with a certified inverse.
class FreeAut {
 public:
  FreeAut() = default;
  // Throws std::invalid_argument unless backward is a two-sided inverse and
  // the induced matrix is invertible over the integers.
  FreeAut(FreeEndo forward, FreeEndo backward);
  static FreeAut identity(int n);

  int rank() const { return forward_.rank(); }
  const FreeEndo& forward() const { return forward_; }
  const FreeEndo& backward() const { return backward_; }
  FreeAut inverse() const { return FreeAut(backward_, forward_); }
  IntMatrix matrix() const { return induced_matrix(forward_); }

 private:
  FreeEndo forward_, backward_;
};

FreeAut compose(const FreeAut& f, const FreeAut& g);

// Nielsen generators.
namespace nielsen {
FreeAut swap(int n, int i, int j);
FreeAut invert(int n, int i);
// x_i -> x_i x_j^{e}.
FreeAut right_multiply(int n, int i, int j, int e);
// x_i -> x_j^{e} x_i.
FreeAut left_multiply(int n, int i, int j, int e);
// Composition of k generators drawn uniformly.
FreeAut random(int n, int k, std::mt19937_64& rng);
}  // namespace nielsen

FreeWord random_word(int n, int length, std::mt19937_64& rng);

}  // namespace magnus
