#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>

#include "magnus/series.hpp"

namespace magnus {

// 64-bit integer that throws on overflow. Used where an exact identity can be
// checked after clearing denominators, so ring operations suffice.
class Checked64 {
 public:
  Checked64() = default;
  Checked64(long long v) : v_(v) {}  // NOLINT(google-explicit-constructor)

  long long value() const { return v_; }

  Checked64& operator+=(Checked64 o) {
    if (__builtin_add_overflow(v_, o.v_, &v_)) throw std::overflow_error("checked64: overflow in +");
    return *this;
  }
  Checked64& operator-=(Checked64 o) {
    if (__builtin_sub_overflow(v_, o.v_, &v_)) throw std::overflow_error("checked64: overflow in -");
    return *this;
  }
  Checked64& operator*=(Checked64 o) {
    if (__builtin_mul_overflow(v_, o.v_, &v_)) throw std::overflow_error("checked64: overflow in *");
    return *this;
  }
  friend Checked64 operator+(Checked64 a, Checked64 b) { return a += b; }
  friend Checked64 operator-(Checked64 a, Checked64 b) { return a -= b; }
  friend Checked64 operator*(Checked64 a, Checked64 b) { return a *= b; }
  friend Checked64 operator-(Checked64 a) { return Checked64(0) - a; }
  friend bool operator==(Checked64 a, Checked64 b) { return a.v_ == b.v_; }
  friend bool operator!=(Checked64 a, Checked64 b) { return a.v_ != b.v_; }
  friend std::ostream& operator<<(std::ostream& os, Checked64 a) { return os << a.v_; }

 private:
  long long v_ = 0;
};

template <>
struct ScalarTraits<Checked64> {
  static constexpr bool exact = true;
  static constexpr const char* mode = "exact";
  static bool is_zero(Checked64 x) { return x.value() == 0; }
  static Checked64 ratio(long num, long den) {
    if (den == 0 || num % den) throw std::domain_error("checked64: non-integral ratio");
    return Checked64(num / den);
  }
  static double to_double(Checked64 x) { return double(x.value()); }
};

}  // namespace magnus
