#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "magnus/checked_int.hpp"
#include "magnus/derivation.hpp"

namespace magnus {

// Inclusive letter interval [l, r] of the word 1 2 ... p+1.
struct Bracket {
  int l = 0, r = 0;
  friend bool operator==(const Bracket& a, const Bracket& b) { return a.l == b.l && a.r == b.r; }
};

// Canonical bracket order: by left end, outer brackets first.
inline bool bracket_before(const Bracket& a, const Bracket& b) { return a.l != b.l ? a.l < b.l : a.r > b.r; }

// A cell of K_{p+1}: a non-crossing set of brackets containing [1, p+1].
//
// The cell is identified with the product of one K_{c} per bracket (c = the
// bracket's number of children); its canonical orientation is the product
// orientation in canonical bracket order.
class AssocCell {
 public:
  AssocCell() = default;
  // Sorts the brackets; throws if the set is not a valid bracketing.
  AssocCell(int p, std::vector<Bracket> brackets);
  static AssocCell top(int p) { return AssocCell(p, {{1, p + 1}}); }

  int p() const { return p_; }
  int letters() const { return p_ + 1; }
  const std::vector<Bracket>& brackets() const { return brackets_; }
  int degree() const { return int(brackets_.size()); }
  int dim() const { return p_ - degree(); }

  // Children (sub-brackets and single letters) of brackets()[k], left to right.
  std::vector<Bracket> children(int k) const;
  int factor_dim(int k) const { return int(children(k).size()) - 2; }

  std::string to_string() const;

  friend bool operator==(const AssocCell& a, const AssocCell& b) { return a.p_ == b.p_ && a.brackets_ == b.brackets_; }
  friend bool operator<(const AssocCell& a, const AssocCell& b);

 private:
  int p_ = 0;
  std::vector<Bracket> brackets_;
};

struct OrientedCell {
  AssocCell cell;
  int sign = 1;
};

// Integer cellular chain.
using Chain = std::map<AssocCell, long>;

// All cells of K_{p+1}, ordered by degree then canonical order.
std::vector<AssocCell> cells(int p);
std::vector<int> f_vector(int p);  // counts by dimension 0..p-1

Chain boundary(const AssocCell& cell);
Chain boundary(const Chain& chain);

// Image of w x u under the face map substituting u for letter a+1 of w;
// w lies in K_{a+b+1}, u in K_{p'+1}.
OrientedCell face_map(int a, int pp, int b, const OrientedCell& w, const OrientedCell& u);

// Sign of the permutation sorting `order` into canonical order, with factor
// dimensions as Koszul degrees.
int koszul_sort_sign(std::vector<std::pair<Bracket, int>> order);

// 1^a (x) eta_p (x) 1^b.
struct Slot {
  int a = 0, p = 1, b = 0;
  friend bool operator==(const Slot& x, const Slot& y) { return x.a == y.a && x.p == y.p && x.b == y.b; }
};

// sign * F_1 F_2 ... F_q, F_1 leftmost; the rightmost factor is a bare eta.
struct EtaTerm {
  int sign = 1;
  std::vector<Slot> factors;
  int form_degree() const { return int(factors.size()); }
  std::string to_string() const;
};

// Y of the canonically oriented cell, peeling the leftmost innermost bracket.
EtaTerm y_cochain(const AssocCell& cell);
// Y for every choice sequence of innermost brackets.
std::vector<EtaTerm> y_all_peelings(const AssocCell& cell);

// Evaluates the form on directions u^(1..q) by the alternating sum
// sum_sigma sgn(sigma) F_1(u^sigma(1)) ... F_q(u^sigma(q)), where
// eta_p(u) = u_p. The sum is organised over subsets rather than permutations.
template <class S>
HomComponent<S> evaluate_form(const EtaTerm& term, const std::vector<Derivation<S>>& dirs);

// (d psi)(u_0..u_q) = sum_{i<j} (-1)^{i+j+1} psi([u_i,u_j], u_0..^i..^j..u_q)
// for the invariant q-form psi = term. With this sign d(eta) = eta^eta.
template <class S>
HomComponent<S> exterior_derivative(const EtaTerm& term, const std::vector<Derivation<S>>& dirs);

// Sum of coefficient * Y(cell) over a chain, evaluated on dirs.
template <class S>
HomComponent<S> evaluate_chain(const Chain& chain, const std::vector<Derivation<S>>& dirs);

// Random IA derivation with components of arity 2..max_arity; entries are
// small rationals, each present with probability `density`.
QDerivation random_ia_derivation(int n, int trunc, int max_arity, std::mt19937_64& rng, double density = 0.6);

// scale * u with integer coefficients; throws if some coefficient of scale * u
// is not an integer.
Derivation<Checked64> integer_scaled(const QDerivation& u, long scale);

struct CellCheck {
  AssocCell cell;
  bool equal = true;
  int tuples = 0;
  std::string detail;
};

struct CocycleReport {
  int p = 0, dim_h = 0, trunc = 0, tuples = 0;
  std::uint64_t seed = 0;
  std::vector<CellCheck> cells;
  bool all_equal() const {
    for (const auto& c : cells)
      if (!c.equal) return false;
    return true;
  }
};

// Checks dY(w) = Y(boundary w) on every cell of K_{p+1}, exactly.
//
// Directions are random rationals with denominators dividing 6. Both sides
// are multilinear in the p+1 directions, so they are compared after scaling
// every direction by 6, in overflow-checked integer arithmetic.
CocycleReport verify_cocycle(int p, int dim_h, int trunc, int tuples, std::uint64_t seed);

using QHom = HomComponent<Rational>;
using ZHom = HomComponent<Checked64>;
using ZDerivation = Derivation<Checked64>;
extern template QHom evaluate_form(const EtaTerm&, const std::vector<QDerivation>&);
extern template QHom exterior_derivative(const EtaTerm&, const std::vector<QDerivation>&);
extern template QHom evaluate_chain(const Chain&, const std::vector<QDerivation>&);
extern template ZHom evaluate_form(const EtaTerm&, const std::vector<ZDerivation>&);
extern template ZHom exterior_derivative(const EtaTerm&, const std::vector<ZDerivation>&);
extern template ZHom evaluate_chain(const Chain&, const std::vector<ZDerivation>&);

}  // namespace magnus
