// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "schrodk/expsum.hpp"

namespace schrodk {

// Tuples (a1, ..., an) mod q with q not dividing a1 and
//   (1/2)^{n-1} q^{(n-1)/2} <= prod_{j>=2} |T(a1, aj; q)| <= (k-1)^{n-1} q^{(n-1)/2}.
// Membership is evaluated lazily against a magnitude table.
class GoodSet {
 public:
  GoodSet(std::shared_ptr<const MagnitudeTable> table, unsigned n);

  std::uint64_t q() const noexcept { return table_->q(); }
  unsigned k() const noexcept { return table_->k(); }
  unsigned n() const noexcept { return n_; }
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  const MagnitudeTable& table() const noexcept { return *table_; }

  // False when q < 16 k^2, where the size bound is not guaranteed.
  bool size_bound_guaranteed() const noexcept;
  // (alpha2/2)^n (1 - 2^{-n}) q^n with alpha2 = k^{-2}/4
  double size_bound() const;

  bool in_range(double product) const { return at_least(product, lower_) && at_most(product, upper_); }
  bool contains(std::span<const std::uint64_t> a) const;

  std::uint64_t count() const;
  // n = 2 only: #{a1 != 0 : (a1, a2) in the set}
  std::uint64_t column_count(std::uint64_t a2) const;
  // n = 2 only: every a1 with (a1, a2) in the set, ascending
  std::vector<std::uint32_t> column_members(std::uint64_t a2) const;

  // Visits members in lexicographic order. Cost q^n.
  void for_each(const std::function<void(std::span<const std::uint64_t>)>& fn) const;

  // Uniform member.
  std::vector<std::uint64_t> sample(std::mt19937_64& rng) const;

 private:
  struct ClassStats {
    std::uint64_t tuples = 0;       // good (b2..bn) for the class row
    std::vector<double> sorted;     // class row, ascending
    std::vector<std::uint32_t> good_columns;  // n = 2: indices b with row[b] in range
  };
  std::uint64_t count_row(const ClassStats& s, std::size_t depth, double prefix) const;

  std::shared_ptr<const MagnitudeTable> table_;
  unsigned n_;
  double lower_;
  double upper_;
  std::vector<ClassStats> stats_;
  std::vector<std::uint64_t> column_counts_;  // n = 2 with dilation-closed tables
};

}  // namespace schrodk
