// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "schrodk/bump.hpp"
#include "schrodk/ddouble.hpp"

namespace schrodk {

struct SmallConstants {
  double c0 = 0.1;
  double c1 = 0.01;
  double c2 = 0.01;
  double c3 = 0.01;
  double c4 = 1.0 / 32.0;
  double c5 = 1.0 / 32.0;
};

struct ConstraintCheck {
  std::string name;
  std::string relation;  // human-readable inequality
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

inline constexpr double kQ0 = 1500.0;

struct CounterexampleParams {
  unsigned n = 2;
  unsigned k = 3;
  double R = 0.0;
  double L = 0.0;
  double S1 = 0.0;
  double Q = 0.0;
  double Delta0 = 0.0;
  double C = 1.0;  // constant in the two ratio conditions
  SmallConstants c;
  double delta0 = 0.0;

  double rho() const { return R / L; }
  // L^k / (k R^{k-1})
  double M1() const;
  // R / (L Q^{1/2})
  double X() const;

  // L = R^lambda, S1 = R^sigma, Q = R^kappa.
  static CounterexampleParams from_exponents(unsigned n, unsigned k, double R, double lambda,
                                             double sigma, double kappa, double Delta0,
                                             SmallConstants c, double delta0);

  // Direct knobs (Q, R/L, S1). L is the smallest power of two with
  // M1 c1 >= 8 pi and L c1 >= 2 pi; Delta0 is the largest admissible value.
  static CounterexampleParams desk(unsigned n, unsigned k, double Q, double rho, double S1,
                                   SmallConstants c, double delta0);

  std::vector<ConstraintCheck> checks() const;
  // Throws ConstraintViolation naming the first failed check.
  void validate() const;
};

// theta = 2 pi num / den + offset. Rational phases keep offset = 0 so
// multiples are reduced in exact integer arithmetic.
struct Phase {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  double offset = 0.0;

  static Phase rational(std::uint64_t num, std::uint64_t den, double offset = 0.0) {
    return {num % den, den, offset};
  }
  static Phase real(double value) { return {0, 1, value}; }
  double value() const;
};

// A time together with L^k t mod 2 pi, when that is known exactly.
struct Time {
  DoubleDouble value;
  std::optional<Phase> top;
};

struct SumValue {
  std::complex<double> value;
  bool precision_ok = true;
};

// e(m y + m^k w) for ceil(m_lo) <= m < ceil(u).
struct ModeTerms {
  std::int64_t m_first = 0;
  std::vector<std::complex<double>> terms;
  bool precision_ok = true;
};
ModeTerms mode_terms(double u, const Phase& y, const Phase& w, double m_lo, unsigned k);

SumValue one_dim_sum(double u, const Phase& y, const Phase& w, double m_lo, unsigned k);

// Product over j >= 2 of sums over R/L <= m < 2R/L of e(m y_j + m^k w).
SumValue full_sum(std::span<const Phase> y, const Phase& w, const CounterexampleParams& params);
// Physical coordinates: y_j = L x_j, w = L^k t mod 2 pi (or t.top when set).
SumValue full_sum(std::span<const DoubleDouble> x_prime, const Time& t,
                  const CounterexampleParams& params);

class DataFunction {
 public:
  DataFunction(CounterexampleParams params, std::shared_ptr<const BumpProfile> profile)
      : params_(params), profile_(std::move(profile)) {}

  const CounterexampleParams& params() const noexcept { return params_; }
  const BumpProfile& profile() const noexcept { return *profile_; }
  std::shared_ptr<const BumpProfile> profile_ptr() const noexcept { return profile_; }

  // phi(S1 x1) e(R x1) prod_j phi(x_j) sum_m e(L m x_j)
  std::complex<double> evaluate(std::span<const DoubleDouble> x) const;

 private:
  CounterexampleParams params_;
  std::shared_ptr<const BumpProfile> profile_;
};

// S1^{-1/2} (R/L)^{(n-1)/2} ||phi||^n
double l2_norm(const DataFunction& fn);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// [(1 + (R/C)^2)^{s/2}, (1 + (C R)^2)^{s/2}] with C = 4 sqrt(n)
Interval hs_ratio_bounds(double R, double s, unsigned n);

struct TtfValue {
  std::complex<double> value;
  std::complex<double> lambda_factor;
  std::vector<std::complex<double>> xi_factors;
  unsigned evaluations = 0;
  bool converged = true;
  bool precision_ok = true;
};

// T_t f(x) in factorized form: a lambda-integral times one xi-integral per
// coordinate j >= 2, each by adaptive quadrature. y_phases, when given,
// replaces L x_j mod 2 pi by exact phases.
TtfValue evaluate_Ttf(std::span<const DoubleDouble> x, const Time& t, const DataFunction& fn,
                      unsigned quad_order = 256, std::span<const Phase> y_phases = {});

struct ReductionReport {
  double oracle = 0.0;        // |T_t f(x)|
  double full_sum = 0.0;      // |S|
  double main = 0.0;          // (1 - c0)^n |S|
  double envelope_main = 0.0; // |phi(S1 (x1 + k u))| prod_j |phi(x_j + k u)| |S|
  double measured_e1 = 0.0;   // | oracle - envelope_main |
  double e1_shape = 0.0;      // (c1 + c2 delta0) (R/(L Q^{1/2}))^{n-1}
  double audit_constant = 0.0;
  double e1_budget = 0.0;
  double tau = 0.0;
  double u = 0.0;             // R^{k-1} t
  bool precision_ok = true;
  bool pass = false;
};

// Checks the time conditions and x in [-c1, c1]^n (throws
// ConstraintViolation), then compares the oracle with the main term.
ReductionReport verify_reduction(std::span<const DoubleDouble> x, const Time& t,
                                 const DataFunction& fn, unsigned quad_order = 256,
                                 std::span<const Phase> y_phases = {});
ReductionReport verify_reduction(std::span<const DoubleDouble> x, const Time& t,
                                 const DataFunction& fn, unsigned quad_order,
                                 std::span<const Phase> y_phases, double audit_constant);

struct BaselineParams {
  unsigned n = 1;
  unsigned k = 2;
  double R = 4096.0;       // S1 = sqrt(R)
  unsigned grid = 48;      // points per axis across [-1, 1]
  unsigned time_steps = 8; // t offsets on each side, spaced 1/(2 S1)
  double threshold = 0.5;
};

struct BaselineReport {
  BaselineParams params;
  double S1 = 0.0;
  double mass = 0.0;          // measure of {x in B(0,1): max_t |T_t f| >= threshold}
  double ball_measure = 0.0;
  double fraction = 0.0;
  double ratio_proxy = 0.0;   // S1^{1/2} mass
  double at_origin = 0.0;     // |T_0 f(0)|
  double min_fraction = 0.0;  // frozen lower bound on fraction
  bool pass = false;
};

inline constexpr double kBaselineMinFraction = 0.348;

// Single-mode data phi(S1 x1) e(R x1) prod_j phi(x_j) e(R x_j).
BaselineReport baseline_quarter(const BaselineParams& params, const BumpProfile& profile,
                                unsigned quad_order = 128);

}  // namespace schrodk
