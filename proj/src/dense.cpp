#include "magnus/dense.hpp"

#include <cmath>

namespace magnus {

DenseSeries::DenseSeries(int dim_h, int trunc) : n_(dim_h), d_(trunc) {
  if (dim_h < 1 || trunc < 0) throw std::invalid_argument("dense series: bad dim/trunc");
  off_.assign(trunc + 2, 0);
  std::size_t block = 1;
  for (int m = 0; m <= trunc; ++m) {
    off_[m + 1] = off_[m] + block;
    block *= std::size_t(dim_h);
  }
  c_.assign(off_[trunc + 1], 0.0);
}

DenseSeries DenseSeries::one(int dim_h, int trunc) {
  DenseSeries s(dim_h, trunc);
  s.c_[0] = 1.0;
  return s;
}

DenseSeries DenseSeries::from(const FSeries& s) {
  DenseSeries d(s.dim(), s.trunc());
  s.for_each([&](int m, std::uint64_t code, double c) { d.at(m, code) = c; });
  return d;
}

FSeries DenseSeries::to_series() const {
  FSeries s(n_, d_);
  for (int m = 0; m <= d_; ++m)
    for (std::size_t k = 0; k < block(m); ++k) s.add_term(m, k, c_[off_[m] + k]);
  return s;
}

DenseSeries& DenseSeries::operator+=(const DenseSeries& o) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

DenseSeries& DenseSeries::operator-=(const DenseSeries& o) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

DenseSeries& DenseSeries::operator*=(double s) {
  for (double& x : c_) x *= s;
  return *this;
}

void DenseSeries::axpy(double s, const DenseSeries& o) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += s * o.c_[i];
}

bool DenseSeries::finite() const {
  for (double x : c_)
    if (!std::isfinite(x)) return false;
  return true;
}

double DenseSeries::max_abs() const {
  double r = 0;
  for (double x : c_) r = std::max(r, std::fabs(x));
  return r;
}

DenseSeries mul(const DenseSeries& a, const DenseSeries& b) {
  if (a.dim() != b.dim() || a.trunc() != b.trunc()) throw std::invalid_argument("dense mul: dim/trunc mismatch");
  const int d = a.trunc();
  DenseSeries out(a.dim(), d);
  for (int i = 0; i <= d; ++i) {
    const double* pa = a.data() + a.offset(i);
    const std::size_t na = a.block(i);
    for (int j = 0; i + j <= d; ++j) {
      const double* pb = b.data() + b.offset(j);
      const std::size_t nb = b.block(j);
      double* po = out.data() + out.offset(i + j);
      for (std::size_t ka = 0; ka < na; ++ka) {
        const double va = pa[ka];
        if (va == 0.0) continue;
        double* row = po + ka * nb;
        for (std::size_t kb = 0; kb < nb; ++kb) row[kb] += va * pb[kb];
      }
    }
  }
  return out;
}

DenseSeries exp_dense(const DenseSeries& u) {
  if (u.data()[0] != 0.0) throw std::invalid_argument("exp: degree-0 part must vanish");
  DenseSeries sum = DenseSeries::one(u.dim(), u.trunc());
  DenseSeries term = sum;
  for (int k = 1; k <= u.trunc(); ++k) {
    term = mul(term, u);
    term *= 1.0 / k;
    sum += term;
  }
  return sum;
}

DenseSeries commutator(const DenseSeries& a, const DenseSeries& b) {
  DenseSeries r = mul(a, b);
  r -= mul(b, a);
  return r;
}

}  // namespace magnus
