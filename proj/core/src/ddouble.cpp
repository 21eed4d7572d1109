// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#include "schrodk/ddouble.hpp"

#include "schrodk/int128.hpp"

namespace schrodk {

DoubleDouble DoubleDouble::from_int(std::int64_t v) {
  double hi = static_cast<double>(v);
  // |v - hi| < 2^11, exactly representable after the int subtraction
  auto rest = static_cast<std::int64_t>(static_cast<int128>(v) - static_cast<int128>(hi));
  return fast_two_sum(hi, static_cast<double>(rest));
}

DoubleDouble DoubleDouble::from_uint(std::uint64_t v) {
  double hi = static_cast<double>(v);
  auto rest = static_cast<std::int64_t>(static_cast<int128>(v) - static_cast<int128>(hi));
  return fast_two_sum(hi, static_cast<double>(rest));
}

DoubleDouble operator/(DoubleDouble a, double b) {
  double q1 = a.hi_ / b;
  DoubleDouble r = a - two_prod(q1, b);
  double q2 = r.hi_ / b;
  r = r - two_prod(q2, b);
  double q3 = r.hi_ / b;
  return fast_two_sum(q1, q2) + DoubleDouble(q3);
}

DoubleDouble operator/(DoubleDouble a, DoubleDouble b) {
  double q1 = a.hi_ / b.hi_;
  DoubleDouble r = a - b * q1;
  double q2 = r.hi_ / b.hi_;
  r = r - b * q2;
  double q3 = r.hi_ / b.hi_;
  return fast_two_sum(q1, q2) + DoubleDouble(q3);
}

DoubleDouble DoubleDouble::floor() const {
  double fh = std::floor(hi_);
  if (fh != hi_) return {fh, 0.0};
  return fast_two_sum(fh, std::floor(lo_));
}

double reduce_two_pi(DoubleDouble x) {
  double n = std::nearbyint(x.hi() / kTwoPiHi);
  // n * 2pi to roughly 150 bits, subtracted in pieces
  DoubleDouble r = x - two_prod(n, kTwoPiHi);
  r = r - two_prod(n, kTwoPiMid);
  r = r - DoubleDouble(n * kTwoPiLo);
  double v = r.to_double();
  // the quotient estimate can be off by one near multiples of 2pi
  while (v < 0.0) {
    r = r + DoubleDouble(kTwoPiHi, kTwoPiMid);
    v = r.to_double();
  }
  while (v >= kTwoPiHi) {
    r = r - DoubleDouble(kTwoPiHi, kTwoPiMid);
    v = r.to_double();
  }
  return v;
}

DoubleDouble pow(DoubleDouble x, unsigned e) {
  DoubleDouble result(1.0);
  while (e > 0) {
    if (e & 1U) result *= x;
    x *= x;
    e >>= 1U;
  }
  return result;
}

}  // namespace schrodk
