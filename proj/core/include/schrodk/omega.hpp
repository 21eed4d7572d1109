// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "schrodk/counterexample.hpp"
#include "schrodk/good_set.hpp"

namespace schrodk {

// A box is identified by its provenance (q, a1, ..., an); the center is
// 2 pi a / q and the half-widths are c4/q on axis 1 and
// c5 / q^{1 + 1/(n-1)} on the others.
struct Box {
  std::uint64_t q = 0;
  std::vector<std::uint64_t> a;
};

struct BoxShape {
  unsigned n = 2;
  double c4 = 1.0 / 32.0;
  double c5 = 1.0 / 32.0;

  double half_width(std::size_t axis, std::uint64_t q) const;
  double measure(std::uint64_t q) const;
};

// Circular distance between 2 pi a/q and 2 pi b/r, from the exact integer
// numerator a r - b q.
double center_distance(std::uint64_t a, std::uint64_t q, std::uint64_t b, std::uint64_t r);

// Open boxes on the torus intersect iff every axis distance is below the
// sum of half-widths.
bool boxes_intersect(const BoxShape& shape, const Box& x, const Box& y);

enum class TableSource { Full, Orbit };

struct PrimeCell {
  std::uint64_t q = 0;
  std::shared_ptr<const GoodSet> good;
  std::uint64_t count = 0;
};

struct DdgReport {
  std::uint64_t min_count = 0;
  std::uint64_t max_count = 0;
  double ratio = 0.0;                  // max / min
  double min_normalized = 0.0;         // min |G*(q)| / q^n
  double max_normalized = 0.0;
};

class BoxList;

class BoxSystem {
 public:
  BoxSystem(unsigned k, std::uint64_t Q, BoxShape shape, std::vector<PrimeCell> cells);

  unsigned n() const noexcept { return shape_.n; }
  unsigned k() const noexcept { return k_; }
  std::uint64_t Q() const noexcept { return Q_; }
  const BoxShape& shape() const noexcept { return shape_; }
  const std::vector<PrimeCell>& cells() const noexcept { return cells_; }

  std::uint64_t box_count() const noexcept { return box_count_; }
  double total_box_measure() const;
  double min_box_measure() const;
  double max_box_measure() const;
  DdgReport ddg() const;

  bool contains(std::span<const double> y) const;

  // Every box, in (q, lexicographic a) order; throws SizingError above cap.
  BoxList materialize(std::size_t cap) const;
  // `count` distinct boxes drawn uniformly; for n = 2 a fraction of them
  // comes from the a2 = 0 columns, where boxes of different q pile up.
  BoxList sample(std::size_t count, std::uint64_t seed, double zero_column_fraction = 0.0) const;

 private:
  unsigned k_;
  std::uint64_t Q_;
  BoxShape shape_;
  std::vector<PrimeCell> cells_;
  std::uint64_t box_count_ = 0;
};

class BoxList {
 public:
  BoxList(BoxShape shape, std::vector<Box> boxes);

  const BoxShape& shape() const noexcept { return shape_; }
  const std::vector<Box>& boxes() const noexcept { return boxes_; }
  std::size_t size() const noexcept { return boxes_.size(); }

  bool contains(std::span<const double> y) const;

  void write(std::ostream& out) const;
  static BoxList read(std::istream& in);

 private:
  BoxShape shape_;
  std::vector<Box> boxes_;
  std::vector<std::uint64_t> primes_;             // distinct q, ascending
  std::vector<std::vector<std::uint64_t>> keys_;  // sorted tuple keys per prime

 public:
  const std::vector<std::uint64_t>& primes() const noexcept { return primes_; }
  bool has(std::uint64_t q, std::span<const std::uint64_t> a) const;
};

// Base-q key of a tuple, a1 + a2 q + ...
std::uint64_t tuple_key(std::uint64_t q, std::span<const std::uint64_t> a);

struct OmegaConfig {
  std::uint64_t Q = 2048;
  unsigned n = 2;
  unsigned k = 3;
  double c4 = 1.0 / 32.0;
  double c5 = 1.0 / 32.0;
  TableSource source = TableSource::Orbit;
  bool enforce_thresholds = true;
  unsigned threads = 1;
};

BoxSystem build_omega(const OmegaConfig& config);

inline constexpr std::size_t kDefaultExactCap = 8'000'000;

struct UnionMeasure {
  double measure = 0.0;
  std::size_t strips = 0;
  std::size_t components = 0;     // overlap components with more than one strip
  std::size_t materialized = 0;   // boxes handed to the sweep
};

// n = 2: strips (q, a2) are grouped by overlap in y2. A strip that meets no
// other strip is a disjoint union of count * |box|; larger components are
// materialized and swept. `cap` bounds the number of materialized boxes.
UnionMeasure union_measure_exact(const BoxSystem& system, std::size_t cap = kDefaultExactCap);
// Explicit lists, n <= 3; the list itself must have at most `cap` boxes.
double union_measure_exact(const BoxList& list, std::size_t cap = 10'000);

struct McEstimate {
  double estimate = 0.0;
  double half_width = 0.0;  // 99% Wilson half-width, in measure units
  double lo = 0.0;
  double hi = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
};

inline constexpr std::uint64_t kMcChunk = 1ULL << 16;

McEstimate union_measure_mc(const BoxSystem& system, std::uint64_t samples, std::uint64_t seed,
                            unsigned threads = 1);
McEstimate union_measure_mc(const BoxList& list, std::uint64_t samples, std::uint64_t seed,
                            unsigned threads = 1);

struct OverlapCensus {
  std::uint64_t boxes = 0;
  std::uint64_t pairs = 0;   // ordered intersecting pairs, diagonal included
  double C1 = 0.0;           // pairs / boxes
  double C1_bound = 0.0;
  double B0 = 0.0;           // smallest box measure
  double B1 = 0.0;           // largest box measure
  double lemma_factor = 0.0; // B0 / (B1 C1)
  bool pass = false;         // C1 <= C1_bound
};

// Ordered pairs from the arithmetic of the centers: across q != q', the
// numerators a q' - a' q of intersecting pairs are bounded per axis, so
// candidates are enumerated numerator by numerator.

OverlapCensus overlap_census(const BoxSystem& system);
OverlapCensus overlap_census(const BoxList& list);
// Quadratic oracle: every ordered pair tested directly.
std::uint64_t overlap_pairs_brute_force(const BoxList& list);

struct OmegaPoint {
  std::uint64_t q = 0;
  std::vector<std::uint64_t> a;
  std::vector<double> offset;       // y - center, per axis
  std::vector<double> y;            // in [0, 2 pi)
  std::vector<DoubleDouble> x;      // physical representative
  std::vector<std::int64_t> shift;  // 2 pi multiples used per axis
  std::vector<std::int64_t> admissible;  // number of admissible shifts per axis

  std::vector<Phase> linear_phases() const;  // y_j for j >= 2
};

// Inverts the change of variables for one box point. Offsets default to 0
// (the center).
OmegaPoint to_omega_star(const Box& box, const CounterexampleParams& params,
                         std::span<const double> offset = {});
std::vector<OmegaPoint> map_to_omega_star(const BoxList& list, const CounterexampleParams& params);

// y reconstructed from x through the forward change of variables.
std::vector<double> forward_map(std::span<const DoubleDouble> x, const CounterexampleParams& params);

struct ChosenTime {
  Time t;
  double s = 0.0;
  double tau = 0.0;
  double u = 0.0;  // R^{k-1} t
};

ChosenTime choose_t(const OmegaPoint& point, const CounterexampleParams& params);

struct LowerBoundReport {
  double S_magnitude = 0.0;
  double M1_floor = 0.0;        // 2^{-2(n-1)} (R/(L Q^{1/2}))^{n-1}
  double E2_shape = 0.0;        // (c5 + Q^{-Delta0/2}) (R/(L Q^{1/2}))^{n-1}
  double audit_constant = 0.0;
  double E2_budget = 0.0;
  std::vector<double> coordinate_main;     // floor(rho/q) |T(a1, aj)|
  std::vector<double> coordinate_error;    // |S_j| - main_j
  std::vector<double> coordinate_budget;   // C (c5 + Q^{-Delta0/2}) R/(L Q^{1/2})
  bool decomposition_pass = false;
  bool precision_ok = true;
  bool pass = false;
};

// |T(a1, aj)| comes from `table` when given, else from complete_sum.
LowerBoundReport verify_lower_bound(const OmegaPoint& point, const ChosenTime& time,
                                    const CounterexampleParams& params,
                                    const MagnitudeTable* table = nullptr);
LowerBoundReport verify_lower_bound(const OmegaPoint& point, const ChosenTime& time,
                                    const CounterexampleParams& params,
                                    const MagnitudeTable* table, double audit_constant);

}  // namespace schrodk
