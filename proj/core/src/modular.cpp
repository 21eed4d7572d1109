// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#include "schrodk/modular.hpp"

#include <cmath>
#include <string>

#include "schrodk/error.hpp"

namespace schrodk {

namespace {

// This base set is deterministic for every n < 3.3e24.
constexpr std::uint64_t kWitnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

bool miller_rabin(std::uint64_t n) {
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (std::uint64_t a : kWitnesses) {
    if (a % n == 0) continue;
    std::uint64_t x = mod_pow(a % n, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

constexpr std::uint64_t kSieveLimit = 10'000'000;

}  // namespace

bool is_prime(std::uint64_t m) {
  if (m < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (m % p == 0) return m == p;
  }
  if (m < 41 * 41) return true;
  return miller_rabin(m);
}

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t q) {
  if (q == 1) return 0;
  std::uint64_t result = 1;
  base %= q;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, q);
    base = mul_mod(base, base, q);
    exp >>= 1;
  }
  return result;
}

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t q) {
  if (a % q == 0) throw InvalidArgument("mod_inverse: zero has no inverse");
  return mod_pow(a, q - 2, q);
}

PrimeModulus PrimeModulus::make(std::uint64_t q) {
  if (q >= (1ULL << 63)) throw InvalidArgument("PrimeModulus: q must be below 2^63");
  if (!is_prime(q)) throw InvalidArgument("PrimeModulus: " + std::to_string(q) + " is not prime");
  return PrimeModulus(q);
}

std::vector<PrimeModulus> primes_in_range(std::uint64_t lo, std::uint64_t hi) {
  if (lo < 2 || lo > hi) throw InvalidArgument("primes_in_range: need 2 <= lo <= hi");
  std::vector<PrimeModulus> out;
  if (hi <= kSieveLimit) {
    std::vector<bool> composite(hi + 1, false);
    for (std::uint64_t p = 2; p * p <= hi; ++p) {
      if (composite[p]) continue;
      for (std::uint64_t m = p * p; m <= hi; m += p) composite[m] = true;
    }
    for (std::uint64_t m = lo; m <= hi; ++m) {
      if (!composite[m]) out.push_back(PrimeModulus::make(m));
    }
    return out;
  }
  for (std::uint64_t m = lo; m <= hi && m >= lo; ++m) {
    if (is_prime(m)) out.push_back(PrimeModulus::make(m));
  }
  return out;
}

PrimeWindowReport prime_window(std::uint64_t Q) {
  PrimeWindowReport r;
  r.Q = Q;
  std::uint64_t lo = (Q + 1) / 2;
  if (lo < 2) lo = 2;
  if (Q >= lo) r.count = primes_in_range(lo, Q).size();
  r.required = Q > 1 ? static_cast<double>(Q) / (4.0 * std::log(static_cast<double>(Q))) : 0.0;
  r.satisfied = static_cast<double>(r.count) >= r.required;
  return r;
}

}  // namespace schrodk
