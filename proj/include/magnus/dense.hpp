#pragma once

#include <cstddef>
#include <vector>

#include "magnus/series.hpp"

namespace magnus {

// Dense truncated float tensor: all words of length <= trunc, degree blocks
// stored consecutively. Used in inner loops where map-based Series are slow.
class DenseSeries {
 public:
  DenseSeries() = default;
  DenseSeries(int dim_h, int trunc);
  static DenseSeries one(int dim_h, int trunc);
  static DenseSeries from(const FSeries& s);
  FSeries to_series() const;

  int dim() const { return n_; }
  int trunc() const { return d_; }
  std::size_t offset(int m) const { return off_[m]; }
  std::size_t block(int m) const { return off_[m + 1] - off_[m]; }
  double* data() { return c_.data(); }
  const double* data() const { return c_.data(); }
  std::size_t size() const { return c_.size(); }
  double& at(int m, std::uint64_t code) { return c_[off_[m] + code]; }
  double at(int m, std::uint64_t code) const { return c_[off_[m] + code]; }

  DenseSeries& operator+=(const DenseSeries& o);
  DenseSeries& operator-=(const DenseSeries& o);
  DenseSeries& operator*=(double s);
  // this += s * o
  void axpy(double s, const DenseSeries& o);
  bool finite() const;
  double max_abs() const;

 private:
  int n_ = 0, d_ = -1;
  std::vector<std::size_t> off_;
  std::vector<double> c_;
};

DenseSeries mul(const DenseSeries& a, const DenseSeries& b);
// exp of an element with vanishing degree-0 part.
DenseSeries exp_dense(const DenseSeries& u);
DenseSeries commutator(const DenseSeries& a, const DenseSeries& b);

}  // namespace magnus
