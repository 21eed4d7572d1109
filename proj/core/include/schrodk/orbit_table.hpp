// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "schrodk/expsum.hpp"

namespace schrodk {

// |T(a1, b; q)| stored once per coset of the k-th powers in (Z/q)^*.
// With a1 = r_c u^k, |T(a1, b)| = |T(r_c, b u^{-1})|, so d = gcd(k, q-1)
// rows and two O(q) index arrays replace the q x q table.
class OrbitTable final : public MagnitudeTable {
 public:
  static OrbitTable build(unsigned k, std::uint64_t q);

  std::size_t class_count() const override { return representatives_.size(); }
  std::span<const double> class_row(std::size_t c) const override {
    return {rows_.data() + c * q(), q()};
  }
  std::span<const std::uint32_t> class_members(std::size_t c) const override {
    return {members_.data() + member_offsets_[c], member_offsets_[c + 1] - member_offsets_[c]};
  }
  std::size_t class_of(std::uint64_t a1) const override { return class_of_[a1]; }
  std::uint64_t scale_of(std::uint64_t a1) const override { return scale_[a1]; }
  bool dilation_closed() const override { return true; }

  std::uint64_t representative(std::size_t c) const { return representatives_[c]; }

 private:
  OrbitTable(unsigned k, std::uint64_t q) : MagnitudeTable(q, k) {}

  std::vector<std::uint64_t> representatives_;
  std::vector<double> rows_;
  std::vector<std::uint8_t> class_of_;
  std::vector<std::uint32_t> scale_;  // u^{-1} with a1 = r_c u^k
  std::vector<std::uint32_t> members_;
  std::vector<std::size_t> member_offsets_;
};

}  // namespace schrodk
