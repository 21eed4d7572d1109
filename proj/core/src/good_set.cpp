// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#include "schrodk/good_set.hpp"

#include <algorithm>
#include <cmath>

#include "schrodk/error.hpp"
#include "schrodk/random.hpp"

namespace schrodk {

GoodSet::GoodSet(std::shared_ptr<const MagnitudeTable> table, unsigned n)
    : table_(std::move(table)), n_(n) {
  if (!table_) throw InvalidArgument("good_set: null table");
  if (n_ < 2) throw InvalidArgument("good_set: n must be at least 2");
  const double q = static_cast<double>(table_->q());
  const double half_power = std::pow(q, 0.5 * (n_ - 1));
  lower_ = std::pow(0.5, n_ - 1) * half_power;
  upper_ = std::pow(static_cast<double>(table_->k() - 1), n_ - 1) * half_power;

  stats_.resize(table_->class_count());
  for (std::size_t c = 0; c < stats_.size(); ++c) {
    auto row = table_->class_row(c);
    ClassStats& s = stats_[c];
    s.sorted.assign(row.begin(), row.end());
    std::sort(s.sorted.begin(), s.sorted.end());
    s.tuples = count_row(s, n_ - 1, 1.0);
    if (n_ == 2) {
      for (std::uint64_t b = 0; b < row.size(); ++b) {
        if (in_range(row[b])) s.good_columns.push_back(static_cast<std::uint32_t>(b));
      }
    }
  }
  if (n_ == 2 && table_->dilation_closed()) {
    // columns a2 != 0 all have the same count
    std::uint64_t total = 0;
    const std::uint64_t qm1 = table_->q() - 1;
    for (std::size_t c = 0; c < stats_.size(); ++c) {
      const auto& cols = stats_[c].good_columns;
      const std::uint64_t nonzero =
          cols.size() - ((!cols.empty() && cols.front() == 0) ? 1 : 0);
      total += nonzero * table_->class_members(c).size() / qm1;
    }
    column_counts_.push_back(total);
  }
}

bool GoodSet::size_bound_guaranteed() const noexcept {
  return table_->q() >= 16ULL * table_->k() * table_->k();
}

double GoodSet::size_bound() const {
  const double alpha2 = 0.25 / (static_cast<double>(k()) * k());
  return std::pow(alpha2 / 2.0, n_) * (1.0 - std::pow(0.5, n_)) *
         std::pow(static_cast<double>(q()), n_);
}

std::uint64_t GoodSet::count_row(const ClassStats& s, std::size_t depth, double prefix) const {
  if (prefix <= 0.0) return 0;
  if (depth == 1) {
    auto lo = std::partition_point(s.sorted.begin(), s.sorted.end(),
                                   [&](double v) { return !at_least(prefix * v, lower_); });
    auto hi = std::partition_point(lo, s.sorted.end(),
                                   [&](double v) { return at_most(prefix * v, upper_); });
    return static_cast<std::uint64_t>(hi - lo);
  }
  std::uint64_t total = 0;
  for (double v : s.sorted) total += count_row(s, depth - 1, prefix * v);
  return total;
}

bool GoodSet::contains(std::span<const std::uint64_t> a) const {
  if (a.size() != n_) return false;
  const std::uint64_t qq = q();
  const std::uint64_t a1 = a[0] % qq;
  if (a1 == 0) return false;
  auto row = table_->class_row(table_->class_of(a1));
  const std::uint64_t scale = table_->scale_of(a1);
  double product = 1.0;
  for (std::size_t j = 1; j < n_; ++j) product *= row[mul_mod(a[j] % qq, scale, qq)];
  return in_range(product);
}

std::uint64_t GoodSet::count() const {
  std::uint64_t total = 0;
  for (std::size_t c = 0; c < stats_.size(); ++c) {
    total += stats_[c].tuples * table_->class_members(c).size();
  }
  return total;
}

std::uint64_t GoodSet::column_count(std::uint64_t a2) const {
  if (n_ != 2) throw InvalidArgument("column_count: only defined for n = 2");
  a2 %= q();
  if (a2 == 0) {
    std::uint64_t total = 0;
    for (std::size_t c = 0; c < stats_.size(); ++c) {
      if (in_range(table_->class_row(c)[0])) total += table_->class_members(c).size();
    }
    return total;
  }
  if (!column_counts_.empty()) return column_counts_.front();
  return column_members(a2).size();
}

std::vector<std::uint32_t> GoodSet::column_members(std::uint64_t a2) const {
  if (n_ != 2) throw InvalidArgument("column_members: only defined for n = 2");
  std::vector<std::uint32_t> out;
  const std::uint64_t pair[2] = {0, a2 % q()};
  std::uint64_t tuple[2] = {0, pair[1]};
  for (std::uint64_t a1 = 1; a1 < q(); ++a1) {
    tuple[0] = a1;
    if (contains(tuple)) out.push_back(static_cast<std::uint32_t>(a1));
  }
  return out;
}

void GoodSet::for_each(const std::function<void(std::span<const std::uint64_t>)>& fn) const {
  const std::uint64_t qq = q();
  std::vector<std::uint64_t> a(n_, 0);
  for (std::uint64_t a1 = 1; a1 < qq; ++a1) {
    a[0] = a1;
    std::fill(a.begin() + 1, a.end(), 0);
    while (true) {
      if (contains(a)) fn(a);
      std::size_t j = n_ - 1;
      while (j >= 1 && ++a[j] == qq) {
        a[j] = 0;
        --j;
      }
      if (j == 0) break;
    }
  }
}

std::vector<std::uint64_t> GoodSet::sample(std::mt19937_64& rng) const {
  const std::uint64_t total = count();
  if (total == 0) throw InvalidArgument("good_set: cannot sample from an empty set");
  std::uint64_t pick = uniform_below(rng, total);
  std::size_t c = 0;
  for (; c < stats_.size(); ++c) {
    const std::uint64_t w = stats_[c].tuples * table_->class_members(c).size();
    if (pick < w) break;
    pick -= w;
  }
  const auto members = table_->class_members(c);
  const std::uint64_t a1 = members[pick / stats_[c].tuples];
  const std::uint64_t qq = q();
  const std::uint64_t unscale = mod_inverse(table_->scale_of(a1), qq);
  std::vector<std::uint64_t> a(n_);
  a[0] = a1;
  if (n_ == 2) {
    const auto& cols = stats_[c].good_columns;
    a[1] = mul_mod(cols[uniform_below(rng, cols.size())], unscale, qq);
    return a;
  }
  while (true) {
    for (std::size_t j = 1; j < n_; ++j) a[j] = uniform_below(rng, qq);
    if (contains(a)) return a;
  }
}

}  // namespace schrodk
