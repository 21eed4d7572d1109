#include <gtest/gtest.h>

#include <array>
#include <functional>
#include <cmath>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include "schrodk/error.hpp"
#include "schrodk/omega.hpp"

using namespace schrodk;

namespace {

std::shared_ptr<const BumpProfile> profile() {
  static const auto p = std::make_shared<const BumpProfile>(BumpProfile::build());
  return p;
}

CounterexampleParams desk_params(unsigned k, double rho_factor) {
  SmallConstants c;
  const double d0 = delta0_for(c.c0, *profile());
  c.c4 = c.c2 * d0 / (4.0 * k);
  auto p = CounterexampleParams::desk(2, k, 2048, rho_factor * 2048, 64, c, d0);
  p.validate();
  return p;
}

const BoxSystem& system_k3() {
  static const BoxSystem sys = [] {
    OmegaConfig oc;
    oc.c4 = desk_params(3, 32).c.c4;
    return build_omega(oc);
  }();
  return sys;
}

double interval_overlap(double c1, double h1, double c2, double h2) {
  return std::max(0.0, std::min(c1 + h1, c2 + h2) - std::max(c1 - h1, c2 - h2));
}

std::string violated(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ConstraintViolation& e) {
    return e.constraint();
  }
  return "";
}

double direct_magnitude(unsigned k, std::uint64_t a1, std::uint64_t b, std::uint64_t q) {
  const std::array<std::uint64_t, 2> c{a1, b};
  return std::abs(complete_sum(ExponentPattern::top_linear(k), c, q));
}

}  // namespace

TEST(BoxShape, WidthsAndMeasure) {
  const BoxShape s2{2, 0.03, 0.02};
  EXPECT_DOUBLE_EQ(s2.half_width(0, 101), 0.03 / 101);
  EXPECT_DOUBLE_EQ(s2.half_width(1, 101), 0.02 / (101.0 * 101.0));
  EXPECT_NEAR(s2.measure(101), (0.06 / 101) * (0.04 / (101.0 * 101.0)), 1e-22);
  const BoxShape s3{3, 0.03, 0.02};
  EXPECT_NEAR(s3.half_width(2, 101), 0.02 / std::pow(101.0, 1.5), 1e-18);
}

TEST(BoxShape, CenterDistanceIsCircular) {
  EXPECT_NEAR(center_distance(1, 5, 2, 11), std::abs(kTwoPi / 5 - 2 * kTwoPi / 11), 1e-15);
  EXPECT_NEAR(center_distance(0, 5, 10, 11), kTwoPi / 11, 1e-15);
  EXPECT_EQ(center_distance(3, 7, 3, 7), 0.0);
}

TEST(BuildOmega, ModerateWindowCounts) {
  OmegaConfig oc;
  oc.Q = 512;
  oc.k = 2;
  oc.enforce_thresholds = false;
  const BoxSystem sys = build_omega(oc);
  std::uint64_t total = 0;
  for (const auto& cell : sys.cells()) {
    EXPECT_EQ(cell.count, cell.good->count());
    EXPECT_GE(static_cast<double>(cell.count), std::pow(1.0 / 32.0, 2) * 0.75 * cell.q * cell.q);
    total += cell.count;
  }
  EXPECT_EQ(sys.box_count(), total);
  EXPECT_EQ(sys.cells().size(), primes_in_range(256, 512).size());
  const auto ddg = sys.ddg();
  EXPECT_GE(ddg.ratio, 1.0);
  EXPECT_EQ(ddg.ratio, static_cast<double>(ddg.max_count) / ddg.min_count);
}

TEST(BuildOmega, NamedRejections) {
  OmegaConfig oc;
  oc.Q = 1024;
  EXPECT_EQ(violated([&] { build_omega(oc); }), "Q_min");
  oc.Q = 2048;
  oc.c5 = 0.07;
  EXPECT_EQ(violated([&] { build_omega(oc); }), "c4_c5_small");
  oc.enforce_thresholds = false;
  oc.Q = 1;
  EXPECT_EQ(violated([&] { build_omega(oc); }), "prime_window");
}

TEST(BuildOmega, SampledCentersSatisfyProductBound) {
  const BoxSystem& sys = system_k3();
  const BoxList list = sys.sample(300, 5, 0.25);
  for (const Box& b : list.boxes()) {
    const double m = direct_magnitude(3, b.a[0], b.a[1], b.q);
    EXPECT_GE(m, 0.5 * std::sqrt(static_cast<double>(b.q)) * (1 - 1e-9));
    EXPECT_LE(m, 2.0 * std::sqrt(static_cast<double>(b.q)) * (1 + 1e-9));
    EXPECT_NE(b.a[0], 0U);
    const std::array<double, 2> y{kTwoPi * b.a[0] / b.q, kTwoPi * b.a[1] / b.q};
    EXPECT_TRUE(sys.contains(y));
    EXPECT_TRUE(list.contains(y));
  }
}

TEST(BuildOmega, SourcesAndThreadsAgree) {
  OmegaConfig oc;
  oc.Q = 512;
  oc.k = 2;
  oc.enforce_thresholds = false;
  oc.threads = 4;
  const BoxSystem a = build_omega(oc);
  oc.source = TableSource::Full;
  oc.threads = 1;
  const BoxSystem b = build_omega(oc);
  EXPECT_EQ(a.box_count(), b.box_count());
}

TEST(BoxList, RoundTripAndValidation) {
  const BoxList list = system_k3().sample(50, 1);
  std::stringstream ss;
  list.write(ss);
  const BoxList back = BoxList::read(ss);
  ASSERT_EQ(back.size(), list.size());
  for (std::size_t i = 0; i < list.size(); ++i) {
    EXPECT_EQ(back.boxes()[i].q, list.boxes()[i].q);
    EXPECT_EQ(back.boxes()[i].a, list.boxes()[i].a);
  }
  EXPECT_EQ(back.shape().c4, list.shape().c4);

  const BoxShape s{2, 1.0 / 32, 1.0 / 32};
  EXPECT_THROW(BoxList(s, {{7, {1, 2}}, {7, {1, 2}}}), InvalidArgument);
  EXPECT_THROW(BoxList(s, {{7, {7, 2}}}), InvalidArgument);
  EXPECT_THROW(BoxList(s, {{7, {1}}}), InvalidArgument);
  std::stringstream bad("schrodk-boxes 1 2 0.03125 0.03125\n7 1\n");
  EXPECT_THROW(BoxList::read(bad), InvalidArgument);
}

TEST(BoxSystem, SampleRules) {
  const BoxSystem& sys = system_k3();
  const BoxList a = sys.sample(100, 9, 0.25), b = sys.sample(100, 9, 0.25);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.boxes()[i].a, b.boxes()[i].a);
  std::size_t zero = 0;
  for (const Box& box : a.boxes()) zero += box.a[1] == 0;
  EXPECT_GE(zero, 20U);
  EXPECT_THROW(sys.sample(sys.box_count(), 1), InvalidArgument);
}

TEST(UnionExact, HandValues) {
  const BoxShape s{2, 0.5, 0.5};
  const BoxList one(s, {{5, {1, 0}}});
  EXPECT_NEAR(union_measure_exact(one), s.measure(5), 1e-15);

  const BoxList two(s, {{5, {1, 0}}, {5, {3, 2}}});
  EXPECT_NEAR(union_measure_exact(two), 2 * s.measure(5), 1e-15);

  // A = (5; 1, 0), B = (11; 2, 0), C = (17; 3, 0): A meets B, B meets C, A misses C
  const BoxList three(s, {{5, {1, 0}}, {11, {2, 0}}, {17, {3, 0}}});
  auto c0 = [](double a, double q) { return kTwoPi * a / q; };
  auto w0 = [&](double q) { return s.half_width(0, static_cast<std::uint64_t>(q)); };
  auto w1 = [&](double q) { return s.half_width(1, static_cast<std::uint64_t>(q)); };
  const double ab = interval_overlap(c0(1, 5), w0(5), c0(2, 11), w0(11)) * 2 * std::min(w1(5), w1(11));
  const double bc = interval_overlap(c0(2, 11), w0(11), c0(3, 17), w0(17)) * 2 * std::min(w1(11), w1(17));
  const double ac = interval_overlap(c0(1, 5), w0(5), c0(3, 17), w0(17));
  ASSERT_GT(ab, 0.0);
  ASSERT_GT(bc, 0.0);
  ASSERT_EQ(ac, 0.0);
  const double hand = s.measure(5) + s.measure(11) + s.measure(17) - ab - bc;
  EXPECT_NEAR(union_measure_exact(three), hand, 1e-15);
  const auto census = overlap_census(three);
  EXPECT_EQ(census.pairs, 3U + 4U);
  EXPECT_EQ(overlap_pairs_brute_force(three), 7U);
}

TEST(UnionExact, SystemStripSweepMatchesListPath) {
  OmegaConfig oc;
  oc.Q = 128;
  oc.k = 2;
  oc.c4 = 1.5;
  oc.c5 = 1.5;
  oc.enforce_thresholds = false;
  const BoxSystem sys = build_omega(oc);
  const double fast = union_measure_exact(sys).measure;
  const BoxList all = sys.materialize(200000);
  EXPECT_NEAR(fast, union_measure_exact(all, 200000), 1e-12 * fast);
}

TEST(UnionExact, CapIsEnforced) {
  EXPECT_THROW(union_measure_exact(system_k3(), 10), SizingError);
  const BoxList list = system_k3().sample(200, 1);
  EXPECT_THROW(union_measure_exact(list, 100), SizingError);
}

TEST(UnionMc, SingleBoxBernoulli) {
  // one box holding 1e-3 of the torus
  const double c5 = 2 * 1e-3 * 4 * kPi * kPi / 0.2;
  const BoxShape s{2, 0.2, c5};
  const BoxList one(s, {{2, {0, 0}}});
  const double exact = s.measure(2);
  ASSERT_NEAR(exact / (4 * kPi * kPi), 1e-3, 1e-12);
  const auto mc = union_measure_mc(one, 400'000, 3);
  EXPECT_LE(std::abs(mc.estimate - exact), 3 * mc.half_width);
  EXPECT_LE(mc.lo, exact);
  EXPECT_GE(mc.hi, exact);
  EXPECT_THROW(union_measure_mc(one, 100, 3), InvalidArgument);
}

TEST(UnionMc, AgreesWithExactOnWideBoxSystems) {
  for (unsigned k : {2U, 3U}) {
    OmegaConfig oc;
    oc.Q = 128;
    oc.k = k;
    oc.c4 = 1.5;
    oc.c5 = 1.5;
    oc.enforce_thresholds = false;
    const BoxSystem sys = build_omega(oc);
    const double exact = union_measure_exact(sys).measure;
    const auto mc = union_measure_mc(sys, 2'000'000, 11, 4);
    EXPECT_GE(exact, mc.lo) << k;
    EXPECT_LE(exact, mc.hi) << k;
  }
}

TEST(UnionMc, Reproducible) {
  const auto a = union_measure_mc(system_k3(), 200'000, 42, 1);
  const auto b = union_measure_mc(system_k3(), 200'000, 42, 4);
  EXPECT_EQ(a.hits, b.hits);
  EXPECT_EQ(a.estimate, b.estimate);
}

TEST(OverlapCensus, DisjointSystemCountsDiagonal) {
  const BoxShape s{2, 1.0 / 32, 1.0 / 32};
  const BoxList list(s, {{101, {1, 2}}, {101, {50, 3}}, {103, {70, 9}}});
  const auto c = overlap_census(list);
  EXPECT_EQ(c.pairs, 3U);
  EXPECT_EQ(c.C1, 1.0);
}

TEST(OverlapCensus, SameQNeverOverlaps) {
  const BoxShape s{2, 1.0 / 17, 1.0 / 17};
  for (std::uint64_t q : {5ULL, 7ULL, 13ULL}) {
    std::vector<Box> boxes;
    for (std::uint64_t a1 = 0; a1 < q; ++a1) {
      for (std::uint64_t a2 = 0; a2 < q; ++a2) boxes.push_back({q, {a1, a2}});
    }
    const BoxList list(s, boxes);
    EXPECT_EQ(overlap_pairs_brute_force(list), list.size());
  }
}

TEST(OverlapCensus, ArithmeticCensusMatchesBruteForce) {
  const BoxSystem& sys = system_k3();
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const BoxList list = sys.sample(3000, seed, 0.5);
    EXPECT_EQ(overlap_census(list).pairs, overlap_pairs_brute_force(list));
  }
  OmegaConfig oc;
  oc.Q = 64;
  oc.k = 2;
  oc.c4 = 1.5;
  oc.c5 = 1.5;
  oc.enforce_thresholds = false;
  const BoxSystem wide = build_omega(oc);
  const BoxList all = wide.materialize(100000);
  const auto census = overlap_census(wide);
  EXPECT_EQ(census.pairs, overlap_pairs_brute_force(all));
  EXPECT_EQ(census.pairs, overlap_census(all).pairs);
  EXPECT_GT(census.pairs, census.boxes);
}

TEST(OverlapCensus, UnionFloorOnBuiltSystem) {
  const BoxSystem& sys = system_k3();
  const auto c = overlap_census(sys);
  EXPECT_TRUE(c.pass);
  const double exact = union_measure_exact(sys).measure;
  EXPECT_GE(exact, c.lemma_factor * sys.total_box_measure());
  EXPECT_LE(exact, sys.total_box_measure() * (1 + 1e-12));
}

TEST(OmegaStar, RoundTripAndShiftCounts) {
  for (unsigned k : {2U, 3U}) {
    const auto p = desk_params(k, 32);
    OmegaConfig oc;
    oc.k = k;
    oc.c4 = p.c.c4;
    const BoxSystem sys = build_omega(oc);
    const BoxList list = sys.sample(200, 4, 0.25);
    const auto points = map_to_omega_star(list, p);
    ASSERT_EQ(points.size(), list.size());
    const auto need1 = static_cast<std::int64_t>(std::floor(p.M1() * p.c.c1 / (4 * kPi)));
    const auto need2 = static_cast<std::int64_t>(std::floor(p.L * p.c.c1 / (4 * kPi)));
    for (const auto& pt : points) {
      const double x1 = pt.x[0].to_double();
      EXPECT_LT(x1, 0.0);
      EXPECT_GE(x1, -p.c.c1);
      EXPECT_LE(x1, -p.c.c1 / 2);
      EXPECT_LE(std::abs(pt.x[1].to_double()), p.c.c1);
      const auto back = forward_map(pt.x, p);
      for (unsigned d = 0; d < 2; ++d) {
        const double gap = std::abs(back[d] - pt.y[d]);
        EXPECT_LE(std::min(gap, kTwoPi - gap), 1e-12);
      }
      EXPECT_GE(pt.admissible[0], need1);
      EXPECT_GE(pt.admissible[1], need2);
    }
  }
}

TEST(OmegaStar, RejectsShortScale) {
  auto p = desk_params(3, 32);
  p.L = 4;
  const Box b{1031, {5, 7}};
  EXPECT_EQ(violated([&] { to_omega_star(b, p); }), "lambda");
}

TEST(ChooseT, CenterAndInteriorPoints) {
  const auto p = desk_params(3, 32);
  const Box b{1031, {5, 7}};
  const OmegaPoint center = to_omega_star(b, p);
  const ChosenTime ct = choose_t(center, p);
  EXPECT_NEAR(ct.tau, 0.0, 1e-30);
  const double expected = -center.x[0].to_double() / (3 * std::pow(p.R, 2));
  EXPECT_NEAR(ct.t.value.to_double() / expected, 1.0, 1e-12);
  EXPECT_GT(ct.t.value.to_double(), 0.0);
  ASSERT_TRUE(ct.t.top.has_value());
  EXPECT_EQ(ct.t.top->num, 5U);
  EXPECT_EQ(ct.t.top->den, 1031U);
  EXPECT_EQ(ct.t.top->offset, 0.0);

  const double cond1 = p.c.c2 * p.delta0 / (3 * p.S1 * std::pow(p.R, 2));
  BoxShape shape{2, p.c.c4, p.c.c5};
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-0.999, 0.999);
  for (int i = 0; i < 100; ++i) {
    const std::array<double, 2> off{u(rng) * shape.half_width(0, 1031), u(rng) * shape.half_width(1, 1031)};
    const OmegaPoint pt = to_omega_star(b, p, off);
    const ChosenTime t = choose_t(pt, p);
    EXPECT_LE(std::abs(t.tau), cond1);
    EXPECT_GT(t.t.value.to_double(), 0.0);
    EXPECT_LT(t.t.value.to_double(), 1.0);
    EXPECT_EQ(t.t.top->num, 5U);
  }
}

TEST(ChooseT, RejectsWideC4) {
  auto p = desk_params(3, 32);
  p.c.c4 = 1.0 / 32;
  const Box b{1031, {5, 7}};
  EXPECT_EQ(violated([&] { choose_t(to_omega_star(b, p), p); }), "c4_window");
}

TEST(LowerBound, SampledPointsPass) {
  for (unsigned k : {2U, 3U}) {
    const auto p = desk_params(k, 32);
    OmegaConfig oc;
    oc.k = k;
    oc.c4 = p.c.c4;
    const BoxSystem sys = build_omega(oc);
    std::map<std::uint64_t, const MagnitudeTable*> tables;
    for (const auto& cell : sys.cells()) tables[cell.q] = &cell.good->table();
    const BoxList list = sys.sample(100, 77, 0.25);
    for (const Box& b : list.boxes()) {
      const OmegaPoint pt = to_omega_star(b, p);
      const ChosenTime ct = choose_t(pt, p);
      const auto r = verify_lower_bound(pt, ct, p, tables.at(b.q));
      EXPECT_TRUE(r.pass);
      EXPECT_TRUE(r.decomposition_pass);
      EXPECT_TRUE(r.precision_ok);
      const auto direct = verify_lower_bound(pt, ct, p);
      EXPECT_NEAR(direct.coordinate_main[0], r.coordinate_main[0], 1e-9);
      EXPECT_EQ(r.coordinate_main[0],
                std::floor(p.rho() / b.q) * tables.at(b.q)->magnitude(b.a[0], b.a[1]));
    }
  }
}

TEST(LowerBound, OffCenterNegativeControlIsRecorded) {
  const auto p = desk_params(3, 32);
  const Box b{1031, {5, 7}};
  const double off = 2 * p.c.c5 / (1031.0 * 1031.0);
  const std::array<double, 2> offset{0.0, off};
  const OmegaPoint pt = to_omega_star(b, p, offset);
  const auto r = verify_lower_bound(pt, choose_t(pt, p), p);
  RecordProperty("off_center_S", std::to_string(r.S_magnitude));
  RecordProperty("off_center_floor", std::to_string(r.M1_floor - r.E2_budget));
  SUCCEED();
}

TEST(Reduction, OmegaRepresentativePasses) {
  const auto p = desk_params(3, 4);
  const DataFunction fn(p, profile());
  OmegaConfig oc;
  oc.c4 = p.c.c4;
  const BoxList list = build_omega(oc).sample(1, 123);
  const OmegaPoint pt = to_omega_star(list.boxes()[0], p);
  const ChosenTime ct = choose_t(pt, p);
  const auto phases = pt.linear_phases();
  const auto r = verify_reduction(pt.x, ct.t, fn, 256, phases);
  EXPECT_TRUE(r.pass);
  EXPECT_GE(r.oracle, r.main - r.e1_budget);
}
