// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#include "schrodk/omega.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "schrodk/audit.hpp"
#include "schrodk/box_union.hpp"
#include "schrodk/error.hpp"
#include "schrodk/int128.hpp"
#include "schrodk/modular.hpp"
#include "schrodk/orbit_table.hpp"
#include "schrodk/parallel.hpp"
#include "schrodk/random.hpp"

namespace schrodk {

namespace {

constexpr unsigned kMaxDim = 8;
constexpr double kWilsonZ99 = 2.5758293035489004;
const DoubleDouble kTwoPiDD(kTwoPiHi, kTwoPiMid);

// 2 pi |N| / (q q'), the circular distance for a reduced numerator.
double numerator_distance(std::uint64_t abs_num, std::uint64_t qq) {
  return kTwoPi * static_cast<double>(abs_num) / static_cast<double>(qq);
}

// Signed representative of a r - b q modulo q r, in (-q r / 2, q r / 2].
std::int64_t signed_numerator(std::uint64_t a, std::uint64_t q, std::uint64_t b, std::uint64_t r) {
  const int128 qr = static_cast<int128>(q) * r;
  int128 v = (static_cast<int128>(a) * r - static_cast<int128>(b) * q) % qr;
  if (v < 0) v += qr;
  if (2 * v > qr) v -= qr;
  return static_cast<std::int64_t>(v);
}

// Nearest center index and its distance for one coordinate.
struct Snap {
  std::uint64_t a;
  double dist;
};

Snap snap(double y, std::uint64_t q) {
  const double r = y * static_cast<double>(q) / kTwoPi;
  const double ai = std::nearbyint(r);
  const double dist = std::abs(r - ai) * kTwoPi / static_cast<double>(q);
  auto a = static_cast<std::int64_t>(ai);
  return {reduce_signed(a, q), dist};
}

void check_shape(const BoxShape& shape) {
  if (shape.n < 1 || shape.n > kMaxDim) throw InvalidArgument("box dimension must be in [1, 8]");
  if (!(shape.c4 > 0.0) || !(shape.c5 > 0.0)) throw InvalidArgument("c4 and c5 must be positive");
}

}  // namespace

double BoxShape::half_width(std::size_t axis, std::uint64_t q) const {
  const auto qd = static_cast<double>(q);
  if (axis == 0) return c4 / qd;
  const double beta = n > 1 ? 1.0 + 1.0 / (n - 1) : 1.0;
  return c5 / std::pow(qd, beta);
}

double BoxShape::measure(std::uint64_t q) const {
  double m = 1.0;
  for (unsigned d = 0; d < n; ++d) m *= 2.0 * half_width(d, q);
  return m;
}

double center_distance(std::uint64_t a, std::uint64_t q, std::uint64_t b, std::uint64_t r) {
  const std::int64_t v = signed_numerator(a, q, b, r);
  return numerator_distance(static_cast<std::uint64_t>(v < 0 ? -v : v), q * r);
}

bool boxes_intersect(const BoxShape& shape, const Box& x, const Box& y) {
  for (unsigned d = 0; d < shape.n; ++d) {
    const double w = shape.half_width(d, x.q) + shape.half_width(d, y.q);
    if (!(center_distance(x.a[d], x.q, y.a[d], y.q) < w)) return false;
  }
  return true;
}

std::uint64_t tuple_key(std::uint64_t q, std::span<const std::uint64_t> a) {
  std::uint64_t key = 0;
  for (std::size_t d = a.size(); d-- > 0;) key = key * q + a[d];
  return key;
}

// ---------------------------------------------------------------- BoxSystem

BoxSystem::BoxSystem(unsigned k, std::uint64_t Q, BoxShape shape, std::vector<PrimeCell> cells)
    : k_(k), Q_(Q), shape_(shape), cells_(std::move(cells)) {
  check_shape(shape_);
  for (const auto& c : cells_) box_count_ += c.count;
}

double BoxSystem::total_box_measure() const {
  double total = 0.0;
  for (const auto& c : cells_) total += static_cast<double>(c.count) * shape_.measure(c.q);
  return total;
}

double BoxSystem::min_box_measure() const {
  double m = 0.0;
  for (const auto& c : cells_) {
    if (c.count > 0 && (m == 0.0 || shape_.measure(c.q) < m)) m = shape_.measure(c.q);
  }
  return m;
}

double BoxSystem::max_box_measure() const {
  double m = 0.0;
  for (const auto& c : cells_) {
    if (c.count > 0) m = std::max(m, shape_.measure(c.q));
  }
  return m;
}

DdgReport BoxSystem::ddg() const {
  DdgReport r;
  bool first = true;
  for (const auto& c : cells_) {
    const double norm = static_cast<double>(c.count) / std::pow(static_cast<double>(c.q), shape_.n);
    if (first) {
      r.min_count = r.max_count = c.count;
      r.min_normalized = r.max_normalized = norm;
      first = false;
      continue;
    }
    r.min_count = std::min(r.min_count, c.count);
    r.max_count = std::max(r.max_count, c.count);
    r.min_normalized = std::min(r.min_normalized, norm);
    r.max_normalized = std::max(r.max_normalized, norm);
  }
  r.ratio = r.min_count > 0 ? static_cast<double>(r.max_count) / static_cast<double>(r.min_count) : 0.0;
  return r;
}

bool BoxSystem::contains(std::span<const double> y) const {
  std::array<std::uint64_t, kMaxDim> a{};
  for (const auto& c : cells_) {
    bool inside = true;
    for (unsigned d = 0; d < shape_.n && inside; ++d) {
      const Snap s = snap(y[d], c.q);
      a[d] = s.a;
      inside = s.dist < shape_.half_width(d, c.q);
    }
    if (inside && c.good->contains(std::span<const std::uint64_t>(a.data(), shape_.n))) return true;
  }
  return false;
}

BoxList BoxSystem::materialize(std::size_t cap) const {
  if (box_count_ > cap) {
    throw SizingError("materialize: " + std::to_string(box_count_) + " boxes exceed the cap of " +
                      std::to_string(cap));
  }
  std::vector<Box> boxes;
  boxes.reserve(box_count_);
  for (const auto& c : cells_) {
    const std::size_t start = boxes.size();
    if (shape_.n == 2) {
      for (std::uint64_t a2 = 0; a2 < c.q; ++a2) {
        for (std::uint32_t a1 : c.good->column_members(a2)) boxes.push_back({c.q, {a1, a2}});
      }
      std::sort(boxes.begin() + static_cast<std::ptrdiff_t>(start), boxes.end(),
                [](const Box& x, const Box& y) { return x.a < y.a; });
    } else {
      c.good->for_each([&](std::span<const std::uint64_t> a) {
        boxes.push_back({c.q, std::vector<std::uint64_t>(a.begin(), a.end())});
      });
    }
  }
  return BoxList(shape_, std::move(boxes));
}

BoxList BoxSystem::sample(std::size_t count, std::uint64_t seed, double zero_column_fraction) const {
  if (count > box_count_ / 2) {
    throw InvalidArgument("sample: more than half of the system requested; materialize instead");
  }
  if (zero_column_fraction < 0.0 || zero_column_fraction > 1.0) {
    throw InvalidArgument("sample: zero_column_fraction must lie in [0, 1]");
  }
  if (zero_column_fraction > 0.0 && shape_.n != 2) {
    throw InvalidArgument("sample: zero-column bias needs n = 2");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> cumulative;
  cumulative.reserve(cells_.size());
  std::uint64_t acc = 0;
  for (const auto& c : cells_) cumulative.push_back(acc += c.count);

  std::vector<std::vector<std::uint32_t>> zero_members;
  std::vector<std::uint64_t> zero_cumulative;
  std::uint64_t zero_total = 0;
  if (zero_column_fraction > 0.0) {
    for (const auto& c : cells_) {
      zero_members.push_back(c.good->column_members(0));
      zero_cumulative.push_back(zero_total += zero_members.back().size());
    }
  }
  const auto zero_wanted = static_cast<std::size_t>(
      std::min<double>(std::round(zero_column_fraction * static_cast<double>(count)),
                       static_cast<double>(zero_total)));

  std::set<std::pair<std::uint64_t, std::vector<std::uint64_t>>> seen;
  std::vector<Box> boxes;
  boxes.reserve(count);
  auto pick = [](const std::vector<std::uint64_t>& cum, std::uint64_t r) {
    return static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), r) - cum.begin());
  };
  while (boxes.size() < count) {
    Box b;
    if (boxes.size() < zero_wanted) {
      const std::size_t ci = pick(zero_cumulative, uniform_below(rng, zero_total));
      const auto& members = zero_members[ci];
      b.q = cells_[ci].q;
      b.a = {members[uniform_below(rng, members.size())], 0};
    } else {
      const std::size_t ci = pick(cumulative, uniform_below(rng, acc));
      b.q = cells_[ci].q;
      b.a = cells_[ci].good->sample(rng);
    }
    if (seen.emplace(b.q, b.a).second) boxes.push_back(std::move(b));
  }
  std::sort(boxes.begin(), boxes.end(),
            [](const Box& x, const Box& y) { return x.q != y.q ? x.q < y.q : x.a < y.a; });
  return BoxList(shape_, std::move(boxes));
}

// ---------------------------------------------------------------- BoxList

BoxList::BoxList(BoxShape shape, std::vector<Box> boxes) : shape_(shape), boxes_(std::move(boxes)) {
  check_shape(shape_);
  std::map<std::uint64_t, std::vector<std::uint64_t>> by_prime;
  for (const Box& b : boxes_) {
    if (b.a.size() != shape_.n) throw InvalidArgument("BoxList: tuple length differs from n");
    if (b.q < 2) throw InvalidArgument("BoxList: q must be at least 2");
    for (std::uint64_t v : b.a) {
      if (v >= b.q) throw InvalidArgument("BoxList: tuple entry not reduced mod q");
    }
    by_prime[b.q].push_back(tuple_key(b.q, b.a));
  }
  for (auto& [q, keys] : by_prime) {
    std::sort(keys.begin(), keys.end());
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) {
      throw InvalidArgument("BoxList: duplicate box for q = " + std::to_string(q));
    }
    primes_.push_back(q);
    keys_.push_back(std::move(keys));
  }
}

bool BoxList::has(std::uint64_t q, std::span<const std::uint64_t> a) const {
  auto it = std::lower_bound(primes_.begin(), primes_.end(), q);
  if (it == primes_.end() || *it != q) return false;
  const auto& keys = keys_[static_cast<std::size_t>(it - primes_.begin())];
  return std::binary_search(keys.begin(), keys.end(), tuple_key(q, a));
}

bool BoxList::contains(std::span<const double> y) const {
  std::array<std::uint64_t, kMaxDim> a{};
  for (std::uint64_t q : primes_) {
    bool inside = true;
    for (unsigned d = 0; d < shape_.n && inside; ++d) {
      const Snap s = snap(y[d], q);
      a[d] = s.a;
      inside = s.dist < shape_.half_width(d, q);
    }
    if (inside && has(q, std::span<const std::uint64_t>(a.data(), shape_.n))) return true;
  }
  return false;
}

namespace {
constexpr const char* kListMagic = "schrodk-boxes";
constexpr int kListVersion = 1;
}  // namespace

void BoxList::write(std::ostream& out) const {
  std::ostringstream head;
  head.precision(17);
  head << kListMagic << ' ' << kListVersion << ' ' << shape_.n << ' ' << shape_.c4 << ' ' << shape_.c5;
  out << head.str() << '\n';
  for (const Box& b : boxes_) {
    out << b.q;
    for (std::uint64_t v : b.a) out << ' ' << v;
    out << '\n';
  }
}

BoxList BoxList::read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("box list: missing header");
  std::istringstream head(line);
  std::string magic;
  int version = 0;
  BoxShape shape;
  if (!(head >> magic >> version >> shape.n >> shape.c4 >> shape.c5) || magic != kListMagic) {
    throw InvalidArgument("box list: malformed header '" + line + "'");
  }
  if (version != kListVersion) throw InvalidArgument("box list: unsupported version " + std::to_string(version));
  std::vector<Box> boxes;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    Box b;
    b.a.resize(shape.n);
    if (!(row >> b.q)) throw InvalidArgument("box list: bad q on line " + std::to_string(lineno));
    for (auto& v : b.a) {
      if (!(row >> v)) throw InvalidArgument("box list: short tuple on line " + std::to_string(lineno));
    }
    std::string extra;
    if (row >> extra) throw InvalidArgument("box list: trailing data on line " + std::to_string(lineno));
    boxes.push_back(std::move(b));
  }
  return BoxList(shape, std::move(boxes));
}

// ---------------------------------------------------------------- build

BoxSystem build_omega(const OmegaConfig& config) {
  const unsigned n = config.n, k = config.k;
  if (n < 2 || n > kMaxDim) throw InvalidArgument("build_omega: n must be in [2, 8]");
  if (k < 2) throw InvalidArgument("build_omega: k must be at least 2");
  if (config.enforce_thresholds) {
    const double qmin = std::max(32.0 * k * k, kQ0);
    if (!(static_cast<double>(config.Q) > qmin)) {
      std::ostringstream os;
      os << "Q = " << config.Q << " must exceed max(32 k^2, Q0) = " << qmin;
      throw ConstraintViolation("Q_min", os.str());
    }
    if (!(config.c4 < 1.0 / 16) || !(config.c5 < 1.0 / 16)) {
      std::ostringstream os;
      os << "c4 = " << config.c4 << ", c5 = " << config.c5 << " must both be below 1/16";
      throw ConstraintViolation("c4_c5_small", os.str());
    }
  }
  const std::uint64_t lo = std::max<std::uint64_t>(2, (config.Q + 1) / 2);
  if (config.Q < lo) throw ConstraintViolation("prime_window", "no primes in [Q/2, Q] for Q < 2");
  std::vector<PrimeModulus> primes = primes_in_range(lo, config.Q);
  if (primes.empty()) {
    throw ConstraintViolation("prime_window", "no primes in [" + std::to_string(lo) + ", " +
                                                  std::to_string(config.Q) + "]");
  }
  BoxShape shape{n, config.c4, config.c5};
  std::vector<PrimeCell> cells(primes.size());
  const bool parallel_outer = config.source == TableSource::Orbit;
  parallel_for(cells.size(), parallel_outer ? config.threads : 1U, [&](std::size_t i) {
    const std::uint64_t q = primes[i];
    std::shared_ptr<const MagnitudeTable> table;
    if (config.source == TableSource::Orbit) {
      table = std::make_shared<OrbitTable>(OrbitTable::build(k, q));
    } else {
      table = std::make_shared<SumTable>(SumTable::build(k, q, config.threads));
    }
    auto good = std::make_shared<GoodSet>(std::move(table), n);
    cells[i] = {q, good, good->count()};
  });
  return BoxSystem(k, config.Q, shape, std::move(cells));
}

// ---------------------------------------------------------------- exact union

namespace {

struct Strip {
  double lo;
  double hi;
  std::uint32_t cell;
  std::uint32_t a2;
  std::uint64_t count;
};

}  // namespace

UnionMeasure union_measure_exact(const BoxSystem& system, std::size_t cap) {
  if (system.n() != 2) {
    throw InvalidArgument("union_measure_exact: the strip sweep needs n = 2; use a BoxList or Monte Carlo");
  }
  const BoxShape& shape = system.shape();
  const auto& cells = system.cells();
  std::vector<Strip> strips;
  for (std::uint32_t ci = 0; ci < cells.size(); ++ci) {
    const auto& c = cells[ci];
    if (c.count == 0) continue;
    const double h = shape.half_width(1, c.q);
    for (std::uint64_t a2 = 0; a2 < c.q; ++a2) {
      const std::uint64_t cnt = c.good->column_count(a2);
      if (cnt == 0) continue;
      const double center = kTwoPi * static_cast<double>(a2) / static_cast<double>(c.q);
      strips.push_back({center - h, center + h, ci, static_cast<std::uint32_t>(a2), cnt});
    }
  }
  std::sort(strips.begin(), strips.end(), [](const Strip& x, const Strip& y) {
    return x.lo != y.lo ? x.lo < y.lo : (x.cell != y.cell ? x.cell < y.cell : x.a2 < y.a2);
  });

  // components: [begin, end) runs of strips, plus a wrap link first <-> last
  struct Run {
    std::size_t begin, end;
    double hi;
  };
  std::vector<Run> runs;
  for (std::size_t i = 0; i < strips.size(); ++i) {
    if (!runs.empty() && strips[i].lo < runs.back().hi) {
      runs.back().end = i + 1;
      runs.back().hi = std::max(runs.back().hi, strips[i].hi);
    } else {
      runs.push_back({i, i + 1, strips[i].hi});
    }
  }
  bool wrap = runs.size() > 1 && runs.back().hi - kTwoPi > strips[runs.front().begin].lo;

  UnionMeasure out;
  out.strips = strips.size();
  std::vector<std::vector<std::size_t>> multi;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const bool joined = wrap && (r == 0 || r + 1 == runs.size());
    if (!joined && runs[r].end - runs[r].begin == 1) {
      const Strip& s = strips[runs[r].begin];
      out.measure += static_cast<double>(s.count) * shape.measure(cells[s.cell].q);
      continue;
    }
    if (joined && r + 1 == runs.size()) continue;
    std::vector<std::size_t> members;
    for (std::size_t i = runs[r].begin; i < runs[r].end; ++i) members.push_back(i);
    if (joined) {
      for (std::size_t i = runs.back().begin; i < runs.back().end; ++i) members.push_back(i);
    }
    multi.push_back(std::move(members));
  }
  out.components = multi.size();

  std::size_t total = 0;
  for (const auto& m : multi) {
    for (std::size_t i : m) total += strips[i].count;
  }
  if (total > cap) {
    throw SizingError("union_measure_exact: overlapping strips hold " + std::to_string(total) +
                      " boxes, above the cap of " + std::to_string(cap) +
                      "; use union_measure_mc instead");
  }
  out.materialized = total;

  std::vector<Rect> rects;
  for (const auto& m : multi) {
    rects.clear();
    const Strip& ref = strips[m.front()];
    const std::uint64_t q_ref = cells[ref.cell].q;
    for (std::size_t i : m) {
      const Strip& s = strips[i];
      const std::uint64_t q = cells[s.cell].q;
      const double local = kTwoPi * static_cast<double>(signed_numerator(s.a2, q, ref.a2, q_ref)) /
                           static_cast<double>(q * q_ref);
      const double h2 = shape.half_width(1, q);
      const double h1 = shape.half_width(0, q);
      for (std::uint32_t a1 : cells[s.cell].good->column_members(s.a2)) {
        const double c1 = kTwoPi * static_cast<double>(a1) / static_cast<double>(q);
        rects.push_back({c1 - h1, c1 + h1, local - h2, local + h2});
      }
    }
    out.measure += union_area(rects);
  }
  return out;
}

double union_measure_exact(const BoxList& list, std::size_t cap) {
  const BoxShape& shape = list.shape();
  if (shape.n > 3) throw InvalidArgument("union_measure_exact: explicit lists support n <= 3");
  if (list.size() > cap) {
    throw SizingError("union_measure_exact: " + std::to_string(list.size()) +
                      " boxes exceed the cap of " + std::to_string(cap) + "; use union_measure_mc instead");
  }
  std::vector<Cuboid> pieces;
  for (const Box& b : list.boxes()) {
    // split each axis at the torus seam
    std::array<std::vector<std::pair<double, double>>, 3> parts;
    for (unsigned d = 0; d < shape.n; ++d) {
      const double c = kTwoPi * static_cast<double>(b.a[d]) / static_cast<double>(b.q);
      const double h = shape.half_width(d, b.q);
      const double lo = c - h, hi = c + h;
      if (lo < 0.0) {
        parts[d] = {{0.0, hi}, {lo + kTwoPi, kTwoPi}};
      } else if (hi > kTwoPi) {
        parts[d] = {{lo, kTwoPi}, {0.0, hi - kTwoPi}};
      } else {
        parts[d] = {{lo, hi}};
      }
    }
    std::array<std::size_t, 3> idx{};
    while (true) {
      Cuboid cub;
      for (unsigned d = 0; d < shape.n; ++d) {
        cub.lo[d] = parts[d][idx[d]].first;
        cub.hi[d] = parts[d][idx[d]].second;
      }
      pieces.push_back(cub);
      unsigned d = 0;
      while (d < shape.n && ++idx[d] == parts[d].size()) idx[d++] = 0;
      if (d == shape.n) break;
    }
  }
  return union_volume(pieces, shape.n);
}

// ---------------------------------------------------------------- Monte Carlo

namespace {

template <typename Contains>
McEstimate monte_carlo(unsigned n, std::uint64_t samples, std::uint64_t seed, unsigned threads,
                       const Contains& contains) {
  if (samples < 10'000) throw InvalidArgument("union_measure_mc: need at least 10^4 samples");
  const std::uint64_t chunks = (samples + kMcChunk - 1) / kMcChunk;
  std::vector<std::uint64_t> hits(chunks, 0);
  parallel_for(chunks, threads, [&](std::size_t c) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(c)));
    const std::uint64_t begin = c * kMcChunk;
    const std::uint64_t end = std::min(samples, begin + kMcChunk);
    std::array<double, kMaxDim> y{};
    std::uint64_t h = 0;
    for (std::uint64_t i = begin; i < end; ++i) {
      for (unsigned d = 0; d < n; ++d) y[d] = kTwoPi * uniform01(rng);
      if (contains(std::span<const double>(y.data(), n))) ++h;
    }
    hits[c] = h;
  });
  McEstimate e;
  e.samples = samples;
  e.hits = std::accumulate(hits.begin(), hits.end(), std::uint64_t{0});
  const double N = static_cast<double>(samples);
  const double p = static_cast<double>(e.hits) / N;
  const double z2 = kWilsonZ99 * kWilsonZ99;
  const double denom = 1.0 + z2 / N;
  const double center = (p + z2 / (2 * N)) / denom;
  const double half = kWilsonZ99 / denom * std::sqrt(p * (1 - p) / N + z2 / (4 * N * N));
  const double vol = std::pow(kTwoPi, n);
  e.estimate = vol * p;
  e.half_width = vol * half;
  e.lo = vol * std::max(0.0, center - half);
  e.hi = vol * std::min(1.0, center + half);
  return e;
}

}  // namespace

McEstimate union_measure_mc(const BoxSystem& system, std::uint64_t samples, std::uint64_t seed,
                            unsigned threads) {
  return monte_carlo(system.n(), samples, seed, threads,
                     [&](std::span<const double> y) { return system.contains(y); });
}

McEstimate union_measure_mc(const BoxList& list, std::uint64_t samples, std::uint64_t seed,
                            unsigned threads) {
  return monte_carlo(list.shape().n, samples, seed, threads,
                     [&](std::span<const double> y) { return list.contains(y); });
}

// ---------------------------------------------------------------- overlap census

namespace {

// Candidate partner coordinates for one axis: pairs (a, a') with
// 2 pi |a q' - a' q| / (q q') < w, where a ranges over all residues mod q.
// For q != q' each admissible numerator N fixes a = N q'^{-1} mod q.
struct AxisPair {
  std::uint64_t a;
  std::uint64_t b;
};

std::vector<AxisPair> axis_pairs(std::uint64_t q, std::uint64_t r, double w) {
  std::vector<AxisPair> out;
  const std::uint64_t qr = q * r;
  const auto bound = static_cast<std::int64_t>(std::ceil(w * static_cast<double>(qr) / kTwoPi)) + 1;
  const std::uint64_t r_inv = mod_inverse(r % q, q);
  for (std::int64_t N = -bound; N <= bound; ++N) {
    if (!(numerator_distance(static_cast<std::uint64_t>(N < 0 ? -N : N), qr) < w)) continue;
    if (2 * static_cast<std::uint64_t>(N < 0 ? -N : N) > qr) continue;
    const std::uint64_t a = mul_mod(reduce_signed(N, q), r_inv, q);
    // a r - N = b q exactly, then reduce b mod r
    const int128 num = static_cast<int128>(a) * r - N;
    const auto b = static_cast<std::uint64_t>(((num / static_cast<int128>(q)) % r + r) % r);
    out.push_back({a, b});
  }
  return out;
}

std::uint64_t cross_pairs(const BoxShape& shape, std::uint64_t q, std::uint64_t r,
                          const std::function<bool(std::span<const std::uint64_t>)>& in_q,
                          const std::function<bool(std::span<const std::uint64_t>)>& in_r) {
  const unsigned n = shape.n;
  std::vector<std::vector<AxisPair>> axes(n);
  for (unsigned d = 0; d < n; ++d) {
    axes[d] = axis_pairs(q, r, shape.half_width(d, q) + shape.half_width(d, r));
    if (axes[d].empty()) return 0;
  }
  std::uint64_t count = 0;
  std::array<std::size_t, kMaxDim> idx{};
  std::array<std::uint64_t, kMaxDim> a{}, b{};
  while (true) {
    for (unsigned d = 0; d < n; ++d) {
      a[d] = axes[d][idx[d]].a;
      b[d] = axes[d][idx[d]].b;
    }
    if (in_q(std::span<const std::uint64_t>(a.data(), n)) && in_r(std::span<const std::uint64_t>(b.data(), n))) {
      ++count;
    }
    unsigned d = 0;
    while (d < n && ++idx[d] == axes[d].size()) idx[d++] = 0;
    if (d == n) break;
  }
  return count;
}

// Same-q boxes differ by 2 pi m / q on some axis; they meet off the
// diagonal only if 2 pi / q < 2 h_d(q) on that axis.
bool same_q_separated(const BoxShape& shape, std::uint64_t q) {
  for (unsigned d = 0; d < shape.n; ++d) {
    if (!(kTwoPi / static_cast<double>(q) >= 2.0 * shape.half_width(d, q))) return false;
  }
  return true;
}

void finish(OverlapCensus& c) {
  c.C1 = c.boxes > 0 ? static_cast<double>(c.pairs) / static_cast<double>(c.boxes) : 0.0;
  c.C1_bound = audit::kOverlapC1;
  c.lemma_factor = c.B1 > 0 && c.C1 > 0 ? c.B0 / (c.B1 * c.C1) : 0.0;
  c.pass = c.C1 <= c.C1_bound;
}

}  // namespace

OverlapCensus overlap_census(const BoxSystem& system) {
  const BoxShape& shape = system.shape();
  const auto& cells = system.cells();
  OverlapCensus c;
  c.boxes = system.box_count();
  c.B0 = system.min_box_measure();
  c.B1 = system.max_box_measure();
  c.pairs = c.boxes;
  for (const auto& cell : cells) {
    if (!same_q_separated(shape, cell.q)) {
      throw InvalidArgument("overlap_census: boxes of one q overlap; c4 and c5 must be below pi");
    }
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t j = i + 1; j < cells.size(); ++j) {
      const auto& gi = *cells[i].good;
      const auto& gj = *cells[j].good;
      c.pairs += 2 * cross_pairs(shape, cells[i].q, cells[j].q,
                                 [&](std::span<const std::uint64_t> a) { return gi.contains(a); },
                                 [&](std::span<const std::uint64_t> a) { return gj.contains(a); });
    }
  }
  finish(c);
  return c;
}

OverlapCensus overlap_census(const BoxList& list) {
  const BoxShape& shape = list.shape();
  const auto& primes = list.primes();
  OverlapCensus c;
  c.boxes = list.size();
  c.pairs = c.boxes;
  for (std::uint64_t q : primes) {
    const double m = shape.measure(q);
    c.B0 = c.B0 == 0.0 ? m : std::min(c.B0, m);
    c.B1 = std::max(c.B1, m);
    if (!same_q_separated(shape, q)) {
      throw InvalidArgument("overlap_census: boxes of one q overlap; c4 and c5 must be below pi");
    }
  }
  // per-prime tuples for membership on the smaller side
  std::map<std::uint64_t, std::vector<const Box*>> by_prime;
  for (const Box& b : list.boxes()) by_prime[b.q].push_back(&b);
  for (std::size_t i = 0; i < primes.size(); ++i) {
    for (std::size_t j = i + 1; j < primes.size(); ++j) {
      const std::uint64_t q = primes[i], r = primes[j];
      const auto& bq = by_prime[q];
      const auto& br = by_prime[r];
      std::uint64_t found = 0;
      if (bq.size() * br.size() <= 64 || std::gcd(q, r) != 1) {
        for (const Box* x : bq) {
          for (const Box* y : br) found += boxes_intersect(shape, *x, *y) ? 1 : 0;
        }
      } else {
        found = cross_pairs(shape, q, r, [&](std::span<const std::uint64_t> a) { return list.has(q, a); },
                            [&](std::span<const std::uint64_t> a) { return list.has(r, a); });
      }
      c.pairs += 2 * found;
    }
  }
  finish(c);
  return c;
}

std::uint64_t overlap_pairs_brute_force(const BoxList& list) {
  const auto& boxes = list.boxes();
  std::uint64_t pairs = 0;
  for (const Box& x : boxes) {
    for (const Box& y : boxes) pairs += boxes_intersect(list.shape(), x, y) ? 1 : 0;
  }
  return pairs;
}

// ---------------------------------------------------------------- Omega*

namespace {

DoubleDouble m1_dd(const CounterexampleParams& p) {
  return pow(DoubleDouble(p.L), p.k) / (pow(DoubleDouble(p.R), p.k - 1) * static_cast<double>(p.k));
}

std::int64_t to_int(DoubleDouble v) {
  return static_cast<std::int64_t>(v.hi()) + static_cast<std::int64_t>(v.lo());
}

// smallest integer J with v + 2 pi J >= bound
std::int64_t ceil_shift(DoubleDouble v, DoubleDouble bound) {
  return -to_int(((v - bound) / kTwoPiDD).floor());
}

}  // namespace

std::vector<Phase> OmegaPoint::linear_phases() const {
  std::vector<Phase> out;
  for (std::size_t j = 1; j < a.size(); ++j) out.push_back(Phase::rational(a[j], q, offset[j]));
  return out;
}

OmegaPoint to_omega_star(const Box& box, const CounterexampleParams& params,
                         std::span<const double> offset) {
  const unsigned n = params.n;
  if (box.a.size() != n) throw InvalidArgument("to_omega_star: tuple length differs from n");
  if (!offset.empty() && offset.size() != n) throw InvalidArgument("to_omega_star: offset length differs from n");
  if (params.k * std::log(params.L) <= (params.k - 1) * std::log(params.R)) {
    throw ConstraintViolation("lambda", "k log L must exceed (k-1) log R");
  }
  OmegaPoint p;
  p.q = box.q;
  p.a = box.a;
  p.offset.assign(n, 0.0);
  if (!offset.empty()) std::copy(offset.begin(), offset.end(), p.offset.begin());
  p.x.resize(n);
  p.y.resize(n);
  p.shift.resize(n);
  p.admissible.resize(n);

  const double c1 = params.c.c1;
  for (unsigned d = 0; d < n; ++d) {
    const DoubleDouble yd = kTwoPiDD * static_cast<double>(box.a[d]) / static_cast<double>(box.q) +
                            DoubleDouble(p.offset[d]);
    p.y[d] = reduce_two_pi(yd);
    if (d == 0) {
      // x1 = -(y1 + 2 pi J) / M1 with y1 + 2 pi J in [M1 c1 / 2, M1 c1)
      const DoubleDouble M = m1_dd(params);
      const DoubleDouble lo = M * (c1 / 2), hi = M * c1;
      const std::int64_t j_min = ceil_shift(yd, lo);
      const std::int64_t j_end = ceil_shift(yd, hi);  // first J with y + 2 pi J >= M c1
      p.admissible[d] = j_end - j_min;
      if (p.admissible[d] <= 0) {
        std::ostringstream os;
        os << "no admissible shift for x1: M1 = " << M.to_double() << ", M1 c1 / 2 = " << lo.to_double();
        throw ConstraintViolation("rescale_x1", os.str());
      }
      p.shift[d] = j_min + (p.admissible[d] - 1) / 2;
      p.x[d] = -(yd + kTwoPiDD * static_cast<double>(p.shift[d])) / M;
    } else {
      // x_j = (y_j + 2 pi J) / L, |x_j| <= c1, J minimizing |x_j|
      const DoubleDouble L(params.L);
      const DoubleDouble lim = L * c1;
      const std::int64_t j_min = ceil_shift(yd, -lim);
      const std::int64_t j_end = to_int(((lim - yd) / kTwoPiDD).floor()) + 1;
      p.admissible[d] = j_end - j_min;
      if (p.admissible[d] <= 0) {
        std::ostringstream os;
        os << "no admissible shift for x" << d + 1 << ": L = " << params.L;
        throw ConstraintViolation("rescale_xj", os.str());
      }
      p.shift[d] = -to_int((yd / kTwoPiDD + DoubleDouble(0.5)).floor());
      p.x[d] = (yd + kTwoPiDD * static_cast<double>(p.shift[d])) / L;
    }
  }
  return p;
}

std::vector<OmegaPoint> map_to_omega_star(const BoxList& list, const CounterexampleParams& params) {
  std::vector<OmegaPoint> out;
  out.reserve(list.size());
  for (const Box& b : list.boxes()) out.push_back(to_omega_star(b, params));
  return out;
}

std::vector<double> forward_map(std::span<const DoubleDouble> x, const CounterexampleParams& params) {
  if (x.size() != params.n) throw InvalidArgument("forward_map: point has the wrong dimension");
  std::vector<double> y(x.size());
  y[0] = reduce_two_pi(-(m1_dd(params) * x[0]));
  for (std::size_t j = 1; j < x.size(); ++j) y[j] = reduce_two_pi(x[j] * params.L);
  return y;
}

ChosenTime choose_t(const OmegaPoint& point, const CounterexampleParams& params) {
  const auto& c = params.c;
  const unsigned k = params.k;
  if (!(2 * c.c4 < c.c2 * params.delta0 / k)) {
    std::ostringstream os;
    os << "2 c4 = " << 2 * c.c4 << " must be below c2 delta0 / k = " << c.c2 * params.delta0 / k;
    throw ConstraintViolation("c4_window", os.str());
  }
  ChosenTime ct;
  ct.s = -point.offset[0];
  const DoubleDouble Rk1 = pow(DoubleDouble(params.R), k - 1);
  const DoubleDouble tau = DoubleDouble(ct.s) / pow(DoubleDouble(params.L), k);
  const DoubleDouble t = -point.x[0] / (Rk1 * static_cast<double>(k)) + tau;
  ct.tau = tau.to_double();
  ct.t.value = t;
  ct.t.top = Phase::rational(point.a[0], point.q);
  ct.u = (Rk1 * t).to_double();

  const double tv = t.to_double();
  if (!(tv > 0.0 && tv < 1.0)) {
    std::ostringstream os;
    os << "t = " << tv << " is outside (0, 1)";
    throw ConstraintViolation("t_range", os.str());
  }
  const double cond1 = c.c2 * params.delta0 / params.S1;
  const double lhs1 = std::abs((Rk1 * tau * static_cast<double>(k)).to_double());
  if (!(lhs1 <= cond1)) {
    std::ostringstream os;
    os << "k R^{k-1} |tau| = " << lhs1 << " exceeds c2 delta0 / S1 = " << cond1;
    throw ConstraintViolation("t_condition_1", os.str());
  }
  const double cond2 = c.c3 * params.R / (params.S1 * params.S1);
  if (!(std::abs(ct.u) <= cond2)) {
    std::ostringstream os;
    os << "R^{k-1} t = " << ct.u << " exceeds c3 R / S1^2 = " << cond2;
    throw ConstraintViolation("t_condition_2", os.str());
  }
  return ct;
}

LowerBoundReport verify_lower_bound(const OmegaPoint& point, const ChosenTime& time,
                                    const CounterexampleParams& params, const MagnitudeTable* table) {
  return verify_lower_bound(point, time, params, table, audit::kLowerBoundE2);
}

LowerBoundReport verify_lower_bound(const OmegaPoint& point, const ChosenTime& time,
                                    const CounterexampleParams& params, const MagnitudeTable* table,
                                    double audit_constant) {
  const unsigned n = params.n, k = params.k;
  if (point.a.size() != n) throw InvalidArgument("verify_lower_bound: point has the wrong dimension");
  if (table && (table->q() != point.q || table->k() != k)) {
    throw InvalidArgument("verify_lower_bound: table does not match the point's q and k");
  }
  if (!time.t.top) throw InvalidArgument("verify_lower_bound: time carries no exact top phase");
  LowerBoundReport r;
  const double X = params.X();
  const double shape = params.c.c5 + std::pow(params.Q, -params.Delta0 / 2);
  r.M1_floor = std::pow(2.0, -2.0 * (n - 1)) * std::pow(X, n - 1);
  r.E2_shape = shape * std::pow(X, n - 1);
  r.audit_constant = audit_constant;
  r.E2_budget = audit_constant * r.E2_shape;

  const auto phases = point.linear_phases();
  const double periods = std::floor(params.rho() / static_cast<double>(point.q));
  const ExponentPattern pattern = ExponentPattern::top_linear(k);
  r.S_magnitude = 1.0;
  r.decomposition_pass = true;
  for (unsigned j = 1; j < n; ++j) {
    const SumValue s = one_dim_sum(2.0 * params.rho(), phases[j - 1], *time.t.top, params.rho(), k);
    r.precision_ok = r.precision_ok && s.precision_ok;
    const double mag = std::abs(s.value);
    r.S_magnitude *= mag;
    double T = 0.0;
    if (table) {
      T = table->magnitude(point.a[0], point.a[j]);
    } else {
      const std::array<std::uint64_t, 2> coeffs{point.a[0], point.a[j]};
      T = std::abs(complete_sum(pattern, coeffs, point.q));
    }
    const double main = periods * T;
    const double budget = audit_constant * shape * X;
    r.coordinate_main.push_back(main);
    r.coordinate_error.push_back(mag - main);
    r.coordinate_budget.push_back(budget);
    r.decomposition_pass = r.decomposition_pass && std::abs(mag - main) <= budget;
  }
  r.pass = r.precision_ok && r.S_magnitude >= r.M1_floor - r.E2_budget;
  return r;
}

}  // namespace schrodk
