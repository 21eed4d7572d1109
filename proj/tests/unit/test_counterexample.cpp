#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <random>

#include "oracles/frozen_oracles.hpp"
#include "schrodk/counterexample.hpp"
#include "schrodk/error.hpp"
#include "schrodk/expsum.hpp"

using namespace schrodk;

namespace {

std::shared_ptr<const BumpProfile> profile() {
  static const auto p = std::make_shared<const BumpProfile>(BumpProfile::build());
  return p;
}

SmallConstants window_constants(unsigned k) {
  SmallConstants c;
  c.c4 = c.c2 * delta0_for(c.c0, *profile()) / (4.0 * k);
  return c;
}

CounterexampleParams desk_params(unsigned k, double rho_factor) {
  return CounterexampleParams::desk(2, k, 2048, rho_factor * 2048, 64, window_constants(k),
                                    delta0_for(0.1, *profile()));
}

// Small hand-sized instance; not a valid counterexample, only a quadrature target.
CounterexampleParams toy(unsigned n, unsigned k) {
  CounterexampleParams p;
  p.n = n;
  p.k = k;
  p.L = 64;
  p.R = 64 * 16;
  p.S1 = 8;
  p.Q = 2;
  p.delta0 = delta0_for(0.1, *profile());
  return p;
}

std::string violated(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ConstraintViolation& e) {
    return e.constraint();
  }
  return "";
}

}  // namespace

TEST(Params, DeskValidates) {
  for (unsigned k : {2U, 3U}) {
    for (double f : {4.0, 32.0}) {
      const auto p = desk_params(k, f);
      EXPECT_NO_THROW(p.validate());
      EXPECT_NEAR(p.rho(), f * 2048, 1e-9);
      EXPECT_GE(p.M1() * p.c.c1, 8 * kPi);
      EXPECT_GE(p.L * p.c.c1, 2 * kPi);
      for (const auto& ch : p.checks()) EXPECT_TRUE(ch.ok) << ch.name;
    }
  }
}

TEST(Params, NamedViolations) {
  const double d0 = delta0_for(0.1, *profile());
  auto p = CounterexampleParams::desk(2, 3, 2048, 32 * 2048, 64, SmallConstants{}, d0);
  EXPECT_EQ(violated([&] { p.validate(); }), "c4_window");
  p = CounterexampleParams::desk(2, 3, 1024, 32 * 1024, 64, window_constants(3), d0);
  EXPECT_EQ(violated([&] { p.validate(); }), "Q_min");
  p = desk_params(3, 32);
  p.S1 = std::sqrt(p.R) * 2;
  EXPECT_EQ(violated([&] { p.validate(); }), "sigma");
  EXPECT_THROW(CounterexampleParams::desk(1, 3, 2048, 4096, 64, SmallConstants{}, d0), InvalidArgument);
}

TEST(Params, FromExponents) {
  const auto p = CounterexampleParams::from_exponents(2, 3, 0x1p20, 0.8, 0.5, 0.1, 0.5, SmallConstants{}, 0.2);
  EXPECT_NEAR(p.L, 0x1p16, 1e-6);
  EXPECT_NEAR(p.S1, 0x1p10, 1e-9);
  EXPECT_NEAR(p.Q, 4.0, 1e-12);
  const DataFunction fn(p, profile());
  const double phi2 = profile()->l2_norm_phi() * profile()->l2_norm_phi();
  EXPECT_NEAR(l2_norm(fn), phi2 * std::pow(2.0, -5) * 4.0, 1e-12);
}

TEST(L2Norm, ClosedFormScaling) {
  auto p = toy(2, 3);
  p.S1 = p.rho();
  const double phi2 = profile()->l2_norm_phi() * profile()->l2_norm_phi();
  EXPECT_NEAR(l2_norm(DataFunction(p, profile())), phi2, 1e-12);
  auto q = toy(2, 3);
  const double base = l2_norm(DataFunction(q, profile()));
  q.R *= 2;
  EXPECT_NEAR(l2_norm(DataFunction(q, profile())) / base, std::sqrt(2.0), 1e-12);
  q.L = 2;
  EXPECT_THROW(l2_norm(DataFunction(q, profile())), ConstraintViolation);
}

TEST(L2Norm, MatchesGridQuadrature) {
  const auto p = toy(2, 3);
  const DataFunction fn(p, profile());
  // f(x1, x2) = g(x1) h(x2) with g(0) = 1, so ||f||^2 = ||f(., 0)||^2 ||f(0, .)||^2 / |f(0, 0)|^2
  const double h = 1.0 / 512;
  double g2 = 0.0, h2 = 0.0;
  for (double x = -32.0; x <= 32.0; x += h / p.S1) {
    const std::array<DoubleDouble, 2> pt{DoubleDouble(x), DoubleDouble(0.0)};
    g2 += std::norm(fn.evaluate(pt));
  }
  g2 *= h / p.S1;
  for (double x = -200.0; x <= 200.0; x += h) {
    const std::array<DoubleDouble, 2> pt{DoubleDouble(0.0), DoubleDouble(x)};
    h2 += std::norm(fn.evaluate(pt));
  }
  h2 *= h;
  const std::array<DoubleDouble, 2> origin{DoubleDouble(0.0), DoubleDouble(0.0)};
  const double quad = std::sqrt(g2 * h2) / std::abs(fn.evaluate(origin));
  EXPECT_NEAR(quad / l2_norm(fn), 1.0, 1e-4);
}

TEST(HsRatio, Bounds) {
  const auto zero = hs_ratio_bounds(100, 0, 2);
  EXPECT_EQ(zero.lo, 1.0);
  EXPECT_EQ(zero.hi, 1.0);
  const double C = 4 * std::sqrt(2.0);
  const auto half = hs_ratio_bounds(100, 0.5, 2);
  EXPECT_NEAR(half.lo, std::pow(1 + (100 / C) * (100 / C), 0.25), 1e-12);
  EXPECT_NEAR(half.hi, std::pow(1 + (100 * C) * (100 * C), 0.25), 1e-12);
}

TEST(HsRatio, ShellSpectrumInsideInterval) {
  // radial |hat f|^2 = exp(-(r - R)^2) in the plane; the Sobolev ratio by quadrature
  for (double R : {50.0, 400.0}) {
    for (double s : {0.25, 0.5, 1.0}) {
      double num = 0.0, den = 0.0;
      for (double r = R - 12; r <= R + 12; r += 1e-3) {
        const double w = std::exp(-(r - R) * (r - R)) * r;
        num += w * std::pow(1 + r * r, s);
        den += w;
      }
      const double ratio = std::sqrt(num / den);
      const auto b = hs_ratio_bounds(R, s, 2);
      EXPECT_GE(ratio, b.lo);
      EXPECT_LE(ratio, b.hi);
    }
  }
}

TEST(OneDimSum, CountWhenPhasesVanish) {
  auto s = one_dim_sum(20.0, Phase{}, Phase{}, 10.0, 3);
  EXPECT_EQ(s.value, std::complex<double>(10.0, 0.0));
  // fractional limits: m runs over ceil(m_lo) <= m < u
  s = one_dim_sum(20.5, Phase{}, Phase{}, 9.5, 3);
  EXPECT_EQ(s.value.real(), 11.0);
}

TEST(OneDimSum, RationalPhasesGiveCompleteSums) {
  for (unsigned k : {2U, 3U}) {
    const std::uint64_t q = 101;
    for (std::uint64_t a1 : {1ULL, 5ULL, 77ULL}) {
      for (std::uint64_t b : {0ULL, 7ULL, 100ULL}) {
        const auto s = one_dim_sum(1000.0 + q, Phase::rational(b, q), Phase::rational(a1, q), 1000.0, k);
        const std::array<std::uint64_t, 2> c{a1, b};
        EXPECT_NEAR(std::abs(s.value), std::abs(complete_sum(ExponentPattern::top_linear(k), c, q)), 1e-10);
      }
    }
  }
}

TEST(OneDimSum, ExtendedPrecisionOracle) {
  const auto s = one_dim_sum(2000.0, Phase::real(0.7234567890123), Phase::real(0.3183098861837907), 1000.0, 3);
  EXPECT_TRUE(s.precision_ok);
  EXPECT_NEAR(s.value.real(), oracle::kOneDimRe, 1e-8);
  EXPECT_NEAR(s.value.imag(), oracle::kOneDimIm, 1e-8);
}

TEST(OneDimSum, ExactPhasePeriodInM) {
  const auto t = mode_terms(1000.0 + 3 * 97, Phase::rational(13, 97), Phase::rational(40, 97), 1000.0, 3);
  ASSERT_EQ(t.terms.size(), 3U * 97U);
  for (std::size_t i = 0; i + 97 < t.terms.size(); ++i) EXPECT_EQ(t.terms[i], t.terms[i + 97]);
}

TEST(OneDimSum, FlagsPrecisionLoss) {
  const auto s = one_dim_sum(0x1p24 + 4, Phase{}, Phase::real(1.0), 0x1p24, 3);
  EXPECT_FALSE(s.precision_ok);
}

TEST(FullSum, OriginAndFactorization) {
  auto p = toy(3, 3);
  const std::array<DoubleDouble, 2> zero{DoubleDouble(0.0), DoubleDouble(0.0)};
  const auto s = full_sum(zero, Time{DoubleDouble(0.0), std::nullopt}, p);
  EXPECT_NEAR(s.value.real(), 16.0 * 16.0, 1e-9);

  const std::array<Phase, 2> y{Phase::real(0.3), Phase::real(2.1)};
  const Phase w = Phase::real(1.234);
  const auto prod = full_sum(y, w, p);
  const auto a = one_dim_sum(2 * p.rho(), y[0], w, p.rho(), 3);
  const auto b = one_dim_sum(2 * p.rho(), y[1], w, p.rho(), 3);
  EXPECT_NEAR(std::abs(prod.value - a.value * b.value), 0.0, 1e-12);
}

TEST(FullSum, NeverExceedsModeCount) {
  const auto p = toy(3, 3);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  for (int i = 0; i < 200; ++i) {
    const std::array<Phase, 2> y{Phase::real(u(rng)), Phase::real(u(rng))};
    EXPECT_LE(std::abs(full_sum(y, Phase::real(u(rng)), p).value), 256.0 * (1 + 1e-12));
  }
}

TEST(FullSum, LatticePeriodic) {
  const auto p = toy(2, 3);
  const Time t{DoubleDouble(1e-7), std::nullopt};
  for (double x : {0.013, -0.4, 1.7}) {
    const std::array<DoubleDouble, 1> a{DoubleDouble(x)};
    const std::array<DoubleDouble, 1> b{DoubleDouble(x) + DoubleDouble(kTwoPiHi, kTwoPiMid) / p.L};
    EXPECT_NEAR(std::abs(full_sum(a, t, p).value - full_sum(b, t, p).value), 0.0, 1e-9);
  }
}

TEST(Ttf, TimeZeroReproducesData) {
  const auto p = toy(2, 3);
  const DataFunction fn(p, profile());
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    const std::array<DoubleDouble, 2> x{DoubleDouble(u(rng) / p.S1), DoubleDouble(u(rng))};
    const auto v = evaluate_Ttf(x, Time{DoubleDouble(0.0), std::nullopt}, fn, 256);
    const auto f = fn.evaluate(x);
    EXPECT_TRUE(v.converged);
    EXPECT_LE(std::abs(v.value - f), 1e-6 * std::abs(f)) << i;
  }
}

TEST(Ttf, Conjugation) {
  const auto p = toy(2, 2);
  const DataFunction fn(p, profile());
  for (double t : {1e-7, 3e-6}) {
    const std::array<DoubleDouble, 2> x{DoubleDouble(0.02), DoubleDouble(0.37)};
    const std::array<DoubleDouble, 2> xm{DoubleDouble(-0.02), DoubleDouble(-0.37)};
    const auto a = evaluate_Ttf(x, Time{DoubleDouble(t), std::nullopt}, fn, 256);
    const auto b = evaluate_Ttf(xm, Time{DoubleDouble(-t), std::nullopt}, fn, 256);
    EXPECT_NEAR(std::abs(a.value - std::conj(b.value)), 0.0, 1e-9 * std::max(1.0, std::abs(a.value)));
  }
}

TEST(Ttf, OscillationBudgetGate) {
  const auto p = toy(2, 3);
  const DataFunction fn(p, profile());
  const std::array<DoubleDouble, 2> x{DoubleDouble(0.0), DoubleDouble(0.0)};
  EXPECT_THROW(evaluate_Ttf(x, Time{DoubleDouble(0.5), std::nullopt}, fn, 256), SizingError);
  EXPECT_THROW(evaluate_Ttf(x, Time{DoubleDouble(0.0), std::nullopt}, fn, 32), InvalidArgument);
}

namespace {

// k = 2, R = 1e4, L = 100, S1 = 100: condition 2 reads R |t| <= c3 = 1e-3
CounterexampleParams gate_params(double c0) {
  CounterexampleParams p;
  p.n = 2;
  p.k = 2;
  p.R = 1e4;
  p.L = 100;
  p.S1 = 100;
  p.Q = 2;
  p.c.c0 = c0;
  p.c.c1 = 0.03;
  p.c.c3 = 1e-3;
  p.delta0 = delta0_for(0.1, *profile());
  return p;
}

}  // namespace

TEST(Reduction, ConditionGates) {
  const DataFunction fn(gate_params(0.1), profile());
  // tau = 0 with u = R t = 10 x (c3 R / S1^2)
  const double u = 1e-2;
  std::array<DoubleDouble, 2> x{DoubleDouble(-2 * u), DoubleDouble(0.01)};
  EXPECT_EQ(violated([&] { verify_reduction(x, Time{DoubleDouble(u / 1e4), std::nullopt}, fn); }),
            "t_condition_2");
  x[0] = DoubleDouble(-0.02);
  EXPECT_EQ(violated([&] { verify_reduction(x, Time{DoubleDouble(0.5e-6 + 1e-6), std::nullopt}, fn); }),
            "t_condition_1");
  EXPECT_EQ(violated([&] { verify_reduction(x, Time{DoubleDouble(-1e-7), std::nullopt}, fn); }), "t_range");
  x[1] = DoubleDouble(0.5);
  EXPECT_EQ(violated([&] { verify_reduction(x, Time{DoubleDouble(1e-7), std::nullopt}, fn); }), "x_box");
}

TEST(Reduction, MainTermApproachesFullSumAsC0Shrinks) {
  const double u = 1e-4;
  const std::array<DoubleDouble, 2> x{DoubleDouble(-2 * u), DoubleDouble(0.01)};
  const Time t{DoubleDouble(u / 1e4), std::nullopt};
  double prev = 0.0;
  for (double c0 : {0.3, 0.1, 0.01, 0.001}) {
    const DataFunction fn(gate_params(c0), profile());
    const auto r = verify_reduction(x, t, fn);
    EXPECT_NEAR(r.main, std::pow(1 - c0, 2) * r.full_sum, 1e-12 * r.full_sum);
    EXPECT_GT(r.main, prev);
    prev = r.main;
    if (c0 == 0.001) EXPECT_NEAR(r.main / r.full_sum, 1.0, 2.1e-3);
  }
}

TEST(Baseline, OneDimensionalRun) {
  BaselineParams bp;
  bp.n = 1;
  bp.R = 1024;
  bp.grid = 200;
  const auto r = baseline_quarter(bp, *profile());
  EXPECT_NEAR(r.at_origin, 1.0, 1e-6);
  EXPECT_NEAR(r.S1, 32.0, 1e-12);
  EXPECT_GE(r.fraction, kBaselineMinFraction);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.ratio_proxy, std::sqrt(r.S1) * r.mass, 1e-12);
}
