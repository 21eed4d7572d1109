// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

namespace schrodk {

// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2, about 106 bits.
class DoubleDouble {
 public:
  constexpr DoubleDouble() = default;
  constexpr DoubleDouble(double x) : hi_(x), lo_(0.0) {}  // NOLINT(google-explicit-constructor)
  constexpr DoubleDouble(double hi, double lo) : hi_(hi), lo_(lo) {}

  static DoubleDouble from_int(std::int64_t v);
  static DoubleDouble from_uint(std::uint64_t v);

  constexpr double hi() const { return hi_; }
  constexpr double lo() const { return lo_; }
  constexpr double to_double() const { return hi_ + lo_; }

  DoubleDouble operator-() const { return {-hi_, -lo_}; }

  friend DoubleDouble operator+(DoubleDouble a, DoubleDouble b);
  friend DoubleDouble operator-(DoubleDouble a, DoubleDouble b) { return a + (-b); }
  friend DoubleDouble operator*(DoubleDouble a, DoubleDouble b);
  friend DoubleDouble operator*(DoubleDouble a, double b);
  friend DoubleDouble operator*(double a, DoubleDouble b) { return b * a; }
  friend DoubleDouble operator/(DoubleDouble a, double b);
  friend DoubleDouble operator/(DoubleDouble a, DoubleDouble b);

  DoubleDouble& operator+=(DoubleDouble b) { return *this = *this + b; }
  DoubleDouble& operator-=(DoubleDouble b) { return *this = *this - b; }
  DoubleDouble& operator*=(DoubleDouble b) { return *this = *this * b; }

  friend bool operator<(DoubleDouble a, DoubleDouble b) {
    return a.hi_ < b.hi_ || (a.hi_ == b.hi_ && a.lo_ < b.lo_);
  }
  friend bool operator>(DoubleDouble a, DoubleDouble b) { return b < a; }
  friend bool operator<=(DoubleDouble a, DoubleDouble b) { return !(b < a); }
  friend bool operator>=(DoubleDouble a, DoubleDouble b) { return !(a < b); }
  friend bool operator==(DoubleDouble a, DoubleDouble b) { return a.hi_ == b.hi_ && a.lo_ == b.lo_; }

  DoubleDouble floor() const;
  DoubleDouble abs() const { return hi_ < 0 ? -*this : *this; }

 private:
  double hi_ = 0.0;
  double lo_ = 0.0;
};

inline DoubleDouble two_sum(double a, double b) {
  double s = a + b;
  double v = s - a;
  double e = (a - (s - v)) + (b - v);
  return {s, e};
}

inline DoubleDouble fast_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline DoubleDouble two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
  DoubleDouble s = two_sum(a.hi_, b.hi_);
  DoubleDouble t = two_sum(a.lo_, b.lo_);
  DoubleDouble u = fast_two_sum(s.hi_, s.lo_ + t.hi_);
  return fast_two_sum(u.hi_, u.lo_ + t.lo_);
}

inline DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
  DoubleDouble p = two_prod(a.hi_, b.hi_);
  return fast_two_sum(p.hi_, p.lo_ + (a.hi_ * b.lo_ + a.lo_ * b.hi_));
}

inline DoubleDouble operator*(DoubleDouble a, double b) {
  DoubleDouble p = two_prod(a.hi_, b);
  return fast_two_sum(p.hi_, p.lo_ + a.lo_ * b);
}

// 2*pi split into three non-overlapping doubles.
inline constexpr double kTwoPiHi = 6.283185307179586;
inline constexpr double kTwoPiMid = 2.4492935982947064e-16;
inline constexpr double kTwoPiLo = -5.989539619436679e-33;
inline constexpr double kTwoPi = kTwoPiHi;
inline constexpr double kPi = 3.141592653589793;

// Largest |x| for which reduce_two_pi keeps about 1e-12 absolute accuracy.
inline constexpr double kReductionSafeRange = 0x1p70;

// x mod 2*pi in [0, 2*pi), with the quotient formed from the dd value.
double reduce_two_pi(DoubleDouble x);

// x mod 2*pi for a plain double; exact reduction of the stored value.
inline double reduce_two_pi(double x) { return reduce_two_pi(DoubleDouble(x)); }

// integer power of a dd value
DoubleDouble pow(DoubleDouble x, unsigned e);

}  // namespace schrodk
