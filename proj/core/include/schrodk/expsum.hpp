// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "schrodk/modular.hpp"

namespace schrodk {

// Exponents k1 > k2 > ... > ks = 1 with s >= 2 and k1 >= 2.
class ExponentPattern {
 public:
  static ExponentPattern make(std::vector<unsigned> exponents);
  static ExponentPattern top_linear(unsigned k) { return make({k, 1}); }

  const std::vector<unsigned>& exponents() const noexcept { return exponents_; }
  std::size_t size() const noexcept { return exponents_.size(); }
  unsigned degree() const noexcept { return exponents_.front(); }

 private:
  explicit ExponentPattern(std::vector<unsigned> e) : exponents_(std::move(e)) {}
  std::vector<unsigned> exponents_;
};

// e(2 pi j / q) for j in [0, q), evaluated in extended precision.
std::vector<std::complex<double>> roots_of_unity(std::uint64_t q);

// Sum over n mod q of e(2 pi (a_1 n^{k_1} + ... + a_s n^{k_s}) / q).
// Each phase numerator is reduced exactly, then looked up in a root table.
std::complex<double> complete_sum(const ExponentPattern& pattern,
                                  std::span<const std::uint64_t> coeffs, std::uint64_t q);

// Relative slack applied to every magnitude threshold comparison.
inline constexpr double kThresholdTolerance = 1e-9;
inline bool at_least(double v, double threshold) {
  return v >= threshold * (1.0 - kThresholdTolerance);
}
inline bool at_most(double v, double threshold) {
  return v <= threshold * (1.0 + kThresholdTolerance);
}

// Source of |T(a1, b; q)| for the pattern (k, 1). Nonzero a1 are grouped
// into classes; within a class, |T(a1, b)| = row(class_of(a1))[b * scale_of(a1) mod q].
class MagnitudeTable {
 public:
  virtual ~MagnitudeTable() = default;

  std::uint64_t q() const noexcept { return q_; }
  unsigned k() const noexcept { return k_; }

  virtual std::size_t class_count() const = 0;
  virtual std::span<const double> class_row(std::size_t c) const = 0;
  virtual std::span<const std::uint32_t> class_members(std::size_t c) const = 0;
  virtual std::size_t class_of(std::uint64_t a1) const = 0;
  virtual std::uint64_t scale_of(std::uint64_t a1) const = 0;
  // True when each class is a full orbit a1 -> a1 u^k, so rows of members
  // are dilations of the class row.
  virtual bool dilation_closed() const = 0;

  double magnitude(std::uint64_t a1, std::uint64_t b) const;

 protected:
  MagnitudeTable(std::uint64_t q, unsigned k) : q_(q), k_(k) {}

 private:
  std::uint64_t q_;
  unsigned k_;
};

// Every |T(a1, b; q)| for one prime q, rows by length-q DFT.
class SumTable final : public MagnitudeTable {
 public:
  static SumTable build(unsigned k, std::uint64_t q, unsigned threads = 1);

  std::span<const double> row(std::uint64_t a1) const {
    return {magnitudes_.data() + a1 * q(), q()};
  }
  const std::vector<double>& magnitudes() const noexcept { return magnitudes_; }

  std::size_t class_count() const override { return q() - 1; }
  std::span<const double> class_row(std::size_t c) const override { return row(c + 1); }
  std::span<const std::uint32_t> class_members(std::size_t c) const override {
    return {members_.data() + c, 1};
  }
  std::size_t class_of(std::uint64_t a1) const override { return a1 - 1; }
  std::uint64_t scale_of(std::uint64_t) const override { return 1; }
  bool dilation_closed() const override { return false; }

 private:
  SumTable(unsigned k, std::uint64_t q) : MagnitudeTable(q, k) {}
  std::vector<double> magnitudes_;
  std::vector<std::uint32_t> members_;
};

// Length-q DFT row: out[b] = sum_m in[m] e(2 pi b m / q).
void dft_row(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);

struct ParsevalReport {
  std::uint64_t q = 0;
  unsigned k = 0;
  double sum = 0.0;
  double expected = 0.0;
  double residual = 0.0;
};

ParsevalReport parseval_check(const SumTable& table);
ParsevalReport parseval_check(unsigned k, std::uint64_t q);

struct WeilReport {
  std::uint64_t q = 0;
  unsigned k = 0;
  bool applicable = false;
  double max_ratio = 0.0;
  std::uint64_t argmax_a1 = 0;
  std::uint64_t argmax_b = 0;
  bool pass = false;  // max_ratio <= 1 + 1e-9, or inapplicable
};

WeilReport weil_margin(const SumTable& table);
WeilReport weil_margin(unsigned k, std::uint64_t q);

inline constexpr double kCensusBinWidth = 0.05;

struct CensusReport {
  std::uint64_t q = 0;
  unsigned k = 0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  std::uint64_t count_large = 0;
  double fraction = 0.0;
  double bin_width = kCensusBinWidth;
  std::vector<std::uint64_t> histogram;  // counts of |T|/sqrt(q) per bin
  bool bound_satisfied = false;          // count_large >= alpha2 q^2
};

// alpha2 defaults to k^-2 / 4; the bound check is exact integer arithmetic
// in that case.
CensusReport census(const SumTable& table, double alpha1, double alpha2 = 0.0);
CensusReport census(unsigned k, std::uint64_t q, double alpha1, double alpha2 = 0.0);

struct IncompleteSumResult {
  std::complex<double> value;
  double ratio = 0.0;  // |S(H)| / (sqrt(q) log q)
};

// Sum over 1 <= n <= H of e(2 pi P(n) / q), with P given lowest
// coefficient first.
IncompleteSumResult incomplete_sum(std::span<const std::int64_t> poly_coeffs, std::uint64_t q,
                                   std::uint64_t H);

struct RationalTopReport {
  std::int64_t M = 0;
  std::uint64_t N = 0;
  std::uint64_t a1 = 0;
  std::uint64_t b = 0;
  std::uint64_t q = 0;
  unsigned k = 0;
  double y = 0.0;
  double V = 0.0;
  std::complex<double> direct;
  double main = 0.0;
  double measured_error = 0.0;
  double budget_shape = 0.0;  // N V (floor(N/q) sqrt q + sqrt q log q) + sqrt q log q
  double audit_constant = 0.0;
  double error_budget = 0.0;
  bool pass = false;
};

// Splits sum_{M < n <= M+N} e(2 pi a1 n^k / q + y n) into the periodic main
// term and a remainder, and checks the remainder against the budget.
RationalTopReport rational_top_sum(std::int64_t M, std::uint64_t N, std::uint64_t a1,
                                   std::uint64_t b, std::uint64_t q, double y, unsigned k,
                                   double audit_constant);
RationalTopReport rational_top_sum(std::int64_t M, std::uint64_t N, std::uint64_t a1,
                                   std::uint64_t b, std::uint64_t q, double y, unsigned k);

}  // namespace schrodk
