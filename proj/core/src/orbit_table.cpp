// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#include "schrodk/orbit_table.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "schrodk/error.hpp"

namespace schrodk {

OrbitTable OrbitTable::build(unsigned k, std::uint64_t q) {
  if (q < 3 || !is_prime(q)) throw InvalidArgument("orbit_table: q must be an odd prime");
  if (k < 2) throw InvalidArgument("orbit_table: k must be at least 2");
  if (q > std::numeric_limits<std::uint32_t>::max()) throw InvalidArgument("orbit_table: q too large");

  OrbitTable t(k, q);
  constexpr std::uint8_t kUnassigned = 0xFF;
  t.class_of_.assign(q, kUnassigned);
  t.scale_.assign(q, 0);

  std::vector<std::uint64_t> kth(q);
  for (std::uint64_t u = 1; u < q; ++u) kth[u] = mod_pow(u, k, q);

  std::uint64_t assigned = 0;
  for (std::uint64_t r = 1; r < q && assigned < q - 1; ++r) {
    if (t.class_of_[r] != kUnassigned) continue;
    const std::size_t c = t.representatives_.size();
    if (c >= kUnassigned) throw InvalidArgument("orbit_table: too many classes");
    t.representatives_.push_back(r);
    for (std::uint64_t u = 1; u < q; ++u) {
      const std::uint64_t a1 = mul_mod(r, kth[u], q);
      if (t.class_of_[a1] != kUnassigned) continue;
      t.class_of_[a1] = static_cast<std::uint8_t>(c);
      t.scale_[a1] = static_cast<std::uint32_t>(mod_inverse(u, q));
      ++assigned;
    }
  }

  t.member_offsets_.assign(t.representatives_.size() + 1, 0);
  for (std::uint64_t a1 = 1; a1 < q; ++a1) ++t.member_offsets_[t.class_of_[a1] + 1];
  for (std::size_t c = 0; c < t.representatives_.size(); ++c) {
    t.member_offsets_[c + 1] += t.member_offsets_[c];
  }
  t.members_.resize(q - 1);
  std::vector<std::size_t> fill(t.member_offsets_.begin(), t.member_offsets_.end() - 1);
  for (std::uint64_t a1 = 1; a1 < q; ++a1) {
    t.members_[fill[t.class_of_[a1]]++] = static_cast<std::uint32_t>(a1);
  }

  const auto roots = roots_of_unity(q);
  std::vector<std::complex<double>> in(q), out(q);
  t.rows_.resize(t.representatives_.size() * q);
  for (std::size_t c = 0; c < t.representatives_.size(); ++c) {
    const std::uint64_t r = t.representatives_[c];
    in[0] = 1.0;
    for (std::uint64_t m = 1; m < q; ++m) in[m] = roots[mul_mod(r, kth[m], q)];
    dft_row(in, out);
    for (std::uint64_t b = 0; b < q; ++b) t.rows_[c * q + b] = std::hypot(out[b].real(), out[b].imag());
  }
  return t;
}

}  // namespace schrodk
