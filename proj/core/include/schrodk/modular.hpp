// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "schrodk/int128.hpp"

namespace schrodk {

// A prime modulus. Construction through make() certifies primality.
class PrimeModulus {
 public:
  static PrimeModulus make(std::uint64_t q);

  std::uint64_t value() const noexcept { return q_; }
  operator std::uint64_t() const noexcept { return q_; }

 private:
  explicit PrimeModulus(std::uint64_t q) : q_(q) {}
  std::uint64_t q_;
};

bool is_prime(std::uint64_t m);

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  return static_cast<std::uint64_t>(static_cast<uint128>(a) * b % q);
}

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t q);

// Inverse modulo a prime q; a must be nonzero mod q.
std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t q);

// Reduces a signed integer into [0, q).
inline std::uint64_t reduce_signed(std::int64_t a, std::uint64_t q) {
  std::int64_t r = a % static_cast<std::int64_t>(q);
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(q) : r);
}

std::vector<PrimeModulus> primes_in_range(std::uint64_t lo, std::uint64_t hi);

struct PrimeWindowReport {
  std::uint64_t Q = 0;
  std::uint64_t count = 0;     // primes in [ceil(Q/2), Q]
  double required = 0.0;       // Q / (4 log Q)
  bool satisfied = false;
};

PrimeWindowReport prime_window(std::uint64_t Q);

}  // namespace schrodk
