// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#include "schrodk/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "schrodk/audit.hpp"
#include "schrodk/error.hpp"
#include "schrodk/modular.hpp"
#include "schrodk/quadrature.hpp"

namespace schrodk {

namespace {

constexpr double kRelTol = 1e-12;

double binomial(unsigned k, unsigned l) {
  double b = 1.0;
  for (unsigned i = 1; i <= l; ++i) b = b * (k - l + i) / i;
  return b;
}

std::complex<double> expi(double angle) { return {std::cos(angle), std::sin(angle)}; }

ConstraintCheck make_check(std::string name, std::string relation, double lhs, double rhs, bool ok) {
  return {std::move(name), std::move(relation), lhs, rhs, ok};
}

bool leq(double a, double b) { return a <= b + kRelTol * std::abs(b); }

std::complex<double> pairwise_sum(const std::complex<double>* v, std::size_t n) {
  if (n <= 16) {
    std::complex<double> s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

}  // namespace

double CounterexampleParams::M1() const { return L * std::pow(1.0 / rho(), k - 1) / k; }

double CounterexampleParams::X() const { return rho() / std::sqrt(Q); }

CounterexampleParams CounterexampleParams::from_exponents(unsigned n, unsigned k, double R,
                                                          double lambda, double sigma,
                                                          double kappa, double Delta0,
                                                          SmallConstants c, double delta0) {
  CounterexampleParams p;
  p.n = n;
  p.k = k;
  p.R = R;
  p.L = std::pow(R, lambda);
  p.S1 = std::pow(R, sigma);
  p.Q = std::pow(R, kappa);
  p.Delta0 = Delta0;
  p.c = c;
  p.delta0 = delta0;
  return p;
}

CounterexampleParams CounterexampleParams::desk(unsigned n, unsigned k, double Q, double rho,
                                                double S1, SmallConstants c, double delta0) {
  if (n < 2 || k < 2) throw InvalidArgument("desk: need n >= 2 and k >= 2");
  if (!(rho > 1.0) || !(Q > 1.0) || !(S1 > 0.0)) throw InvalidArgument("desk: knobs must be positive");
  CounterexampleParams p;
  p.n = n;
  p.k = k;
  p.Q = Q;
  p.S1 = S1;
  p.c = c;
  p.delta0 = delta0;
  const double shrink = std::pow(1.0 / rho, k - 1) / k;
  double L = 4.0;
  while (L * shrink * c.c1 < 8.0 * kPi || L * c.c1 < 2.0 * kPi) L *= 2.0;
  p.L = L;
  p.R = rho * L;
  p.Delta0 = std::min(1.0 / (n - 1), std::log(rho / p.C) / std::log(Q) - 1.0);
  return p;
}

std::vector<ConstraintCheck> CounterexampleParams::checks() const {
  std::vector<ConstraintCheck> out;
  const double lR = std::log(R), lL = std::log(L), lS = std::log(S1), lQ = std::log(Q);
  const double r = rho();
  out.push_back(make_check("n_min", "n >= 2", n, 2, n >= 2));
  out.push_back(make_check("k_min", "k >= 2", k, 2, k >= 2));
  out.push_back(make_check("sigma", "S1^2 <= R", 2 * lS, lR, leq(2 * lS, lR)));
  out.push_back(make_check("lambda", "k log L > (k-1) log R", k * lL, (k - 1) * lR, k * lL > (k - 1) * lR));
  const double qmin = std::max(32.0 * k * k, kQ0);
  out.push_back(make_check("Q_min", "Q > max(32 k^2, Q0)", Q, qmin, Q > qmin));
  out.push_back(make_check("L_min", "L >= 4", L, 4, L >= 4));
  out.push_back(make_check("cond_top", "S1 R^{k-1} <= Q L^k (logs)", lS + (k - 1) * lR, lQ + k * lL,
                           leq(lS + (k - 1) * lR, lQ + k * lL)));
  const double upper = C * std::pow(Q, static_cast<double>(n) / (n - 1));
  out.push_back(make_check("cond_ratio_upper", "R/L <= C Q^{n/(n-1)}", r, upper, leq(r, upper)));
  const double lower = C * std::pow(Q, 1.0 + Delta0);
  out.push_back(make_check("cond_ratio_lower", "R/L >= C Q^{1+Delta0}", r, lower, leq(lower, r)));
  out.push_back(make_check("Delta0_range", "0 < Delta0 <= 1/(n-1)", Delta0, 1.0 / (n - 1),
                           Delta0 > 0 && leq(Delta0, 1.0 / (n - 1))));
  const double cs[] = {c.c0, c.c1, c.c2, c.c3, c.c4, c.c5};
  const bool small = std::all_of(std::begin(cs), std::end(cs), [](double v) { return v > 0 && v < 0.5; });
  out.push_back(make_check("small_constants", "0 < c_i < 1/2", *std::max_element(std::begin(cs), std::end(cs)),
                           0.5, small));
  out.push_back(make_check("c4_c5_small", "c4, c5 < 1/16", std::max(c.c4, c.c5), 1.0 / 16,
                           c.c4 < 1.0 / 16 && c.c5 < 1.0 / 16));
  out.push_back(make_check("delta0_positive", "0 < delta0 < 1/2", delta0, 0.5, delta0 > 0 && delta0 < 0.5));
  out.push_back(make_check("c4_window", "2 c4 < c2 delta0 / k", 2 * c.c4, c.c2 * delta0 / k,
                           2 * c.c4 < c.c2 * delta0 / k));
  out.push_back(make_check("rescale_x1", "M1 c1 >= 4 pi", M1() * c.c1, 4 * kPi, M1() * c.c1 >= 4 * kPi));
  out.push_back(make_check("rescale_xj", "L c1 >= 2 pi", L * c.c1, 2 * kPi, L * c.c1 >= 2 * kPi));
  out.push_back(make_check("ratio_window", "R/L >= 2 Q", r, 2 * Q, r >= 2 * Q));
  // t ranges over c1/(2 k R^{k-1}) -+ c2 delta0/(k S1 R^{k-1}) .. c1/(k R^{k-1}) + ...
  const double top = std::log((c.c1 + c.c2 * delta0 / S1) / k);
  out.push_back(make_check("t_window_upper", "largest admissible t < 1 (logs)", top, (k - 1) * lR,
                           top < (k - 1) * lR));
  out.push_back(make_check("t_window_lower", "c1 S1 / 2 > c2 delta0", c.c1 * S1 / 2, c.c2 * delta0,
                           c.c1 * S1 / 2 > c.c2 * delta0));
  const double u_max = (c.c1 + c.c2 * delta0 / S1) / k;
  out.push_back(make_check("t_condition_2_feasible", "R^{k-1} t <= c3 R / S1^2", u_max,
                           c.c3 * R / (S1 * S1), leq(u_max, c.c3 * R / (S1 * S1))));
  return out;
}

void CounterexampleParams::validate() const {
  for (const auto& ch : checks()) {
    if (!ch.ok) {
      std::ostringstream os;
      os.precision(17);
      os << ch.relation << " fails with lhs = " << ch.lhs << ", rhs = " << ch.rhs;
      throw ConstraintViolation(ch.name, os.str());
    }
  }
}

double Phase::value() const {
  return kTwoPi * static_cast<double>(num) / static_cast<double>(den) + offset;
}

ModeTerms mode_terms(double u, const Phase& y, const Phase& w, double m_lo, unsigned k) {
  ModeTerms out;
  out.m_first = static_cast<std::int64_t>(std::ceil(m_lo));
  const auto m_end = static_cast<std::int64_t>(std::ceil(u));
  if (m_end <= out.m_first) return out;
  out.terms.resize(static_cast<std::size_t>(m_end - out.m_first));
  const double scale_y = kTwoPi / static_cast<double>(y.den);
  const double scale_w = kTwoPi / static_cast<double>(w.den);
  for (std::int64_t m = out.m_first; m < m_end; ++m) {
    const std::uint64_t ry = mul_mod(reduce_signed(m, y.den), y.num, y.den);
    const std::uint64_t rw = mul_mod(mod_pow(reduce_signed(m, w.den), k, w.den), w.num, w.den);
    double angle = scale_y * static_cast<double>(ry) + scale_w * static_cast<double>(rw);
    if (y.offset != 0.0) angle += reduce_two_pi(DoubleDouble(y.offset) * static_cast<double>(m));
    if (w.offset != 0.0) {
      const DoubleDouble mk = pow(DoubleDouble::from_int(m), k);
      const DoubleDouble arg = mk * w.offset;
      if (std::abs(arg.hi()) > kReductionSafeRange) out.precision_ok = false;
      angle += reduce_two_pi(arg);
    }
    out.terms[static_cast<std::size_t>(m - out.m_first)] = expi(angle);
  }
  return out;
}

SumValue one_dim_sum(double u, const Phase& y, const Phase& w, double m_lo, unsigned k) {
  ModeTerms t = mode_terms(u, y, w, m_lo, k);
  return {pairwise_sum(t.terms.data(), t.terms.size()), t.precision_ok};
}

SumValue full_sum(std::span<const Phase> y, const Phase& w, const CounterexampleParams& params) {
  if (y.size() + 1 != params.n) throw InvalidArgument("full_sum: need n - 1 linear phases");
  SumValue out{1.0, true};
  for (const Phase& yj : y) {
    SumValue s = one_dim_sum(2.0 * params.rho(), yj, w, params.rho(), params.k);
    out.value *= s.value;
    out.precision_ok = out.precision_ok && s.precision_ok;
  }
  return out;
}

namespace {

Phase top_phase(const Time& t, const CounterexampleParams& p, bool* ok) {
  if (t.top) return *t.top;
  const DoubleDouble arg = pow(DoubleDouble(p.L), p.k) * t.value;
  if (std::abs(arg.hi()) > kReductionSafeRange && ok) *ok = false;
  return Phase::real(reduce_two_pi(arg));
}

std::vector<Phase> linear_phases(std::span<const DoubleDouble> x_prime, const CounterexampleParams& p) {
  std::vector<Phase> y;
  y.reserve(x_prime.size());
  for (const DoubleDouble& xj : x_prime) y.push_back(Phase::real(reduce_two_pi(xj * p.L)));
  return y;
}

}  // namespace

SumValue full_sum(std::span<const DoubleDouble> x_prime, const Time& t,
                  const CounterexampleParams& params) {
  bool ok = true;
  const Phase w = top_phase(t, params, &ok);
  const auto y = linear_phases(x_prime, params);
  SumValue s = full_sum(y, w, params);
  s.precision_ok = s.precision_ok && ok;
  return s;
}

std::complex<double> DataFunction::evaluate(std::span<const DoubleDouble> x) const {
  const auto& p = params_;
  if (x.size() != p.n) throw InvalidArgument("DataFunction: point has the wrong dimension");
  std::complex<double> v = profile_->phi(p.S1 * x[0].to_double()) * expi(reduce_two_pi(x[0] * p.R));
  for (std::size_t j = 1; j < p.n; ++j) {
    const Phase y = Phase::real(reduce_two_pi(x[j] * p.L));
    v *= profile_->phi(x[j].to_double()) * one_dim_sum(2.0 * p.rho(), y, Phase{}, p.rho(), p.k).value;
  }
  return v;
}

double l2_norm(const DataFunction& fn) {
  const auto& p = fn.params();
  if (p.L < 4.0) throw ConstraintViolation("L_min", "L >= 4 is required for disjoint supports");
  return std::pow(p.S1, -0.5) * std::pow(p.rho(), 0.5 * (p.n - 1)) *
         std::pow(fn.profile().l2_norm_phi(), p.n);
}

Interval hs_ratio_bounds(double R, double s, unsigned n) {
  if (R < 1.0 || s < 0.0) throw InvalidArgument("hs_ratio_bounds: need R >= 1 and s >= 0");
  const double C = 4.0 * std::sqrt(static_cast<double>(n));
  return {std::pow(1.0 + (R / C) * (R / C), s / 2.0), std::pow(1.0 + (C * R) * (C * R), s / 2.0)};
}

namespace {

// Panels start as a multiple of the table cells of hat phi, so no panel
// straddles a knot of the piecewise-cubic interpolant.
QuadratureOptions quad_options(unsigned quad_order, double width, double scale,
                               const BumpProfile& profile) {
  QuadratureOptions o;
  const auto cells = std::max(1U, static_cast<unsigned>(std::lround(width * profile.resolution())));
  const auto wanted = std::max(1U, static_cast<unsigned>(std::ceil(quad_order * width / 15.0)));
  o.initial_panels = cells * ((wanted + cells - 1) / cells);
  o.max_panels = 64 * o.initial_panels;
  o.abs_tol = 1e-13 * std::max(1.0, scale);
  o.rel_tol = 1e-11;
  return o;
}

// (2 pi)^{-1} int hat phi(l) e(l drift + sum_{l>=2} coef[l] l^l) dl
std::complex<double> modulated_factor(const BumpProfile& profile, double drift,
                                      const std::vector<double>& coef, unsigned quad_order,
                                      unsigned* evaluations, bool* converged) {
  const double s = profile.phi_hat_support();
  auto f = [&](double l) -> std::complex<double> {
    const double w = profile.phi_hat(l);
    if (w == 0.0) return 0.0;
    double phase = l * drift;
    double lp = l;
    for (std::size_t e = 2; e < coef.size(); ++e) {
      lp *= l;
      phase += coef[e] * lp;
    }
    return w * expi(phase);
  };
  QuadratureResult r = integrate_gk15(f, -s, s, quad_options(quad_order, 2 * s, 1.0, profile));
  if (evaluations) *evaluations += r.evaluations;
  if (converged) *converged = *converged && r.converged;
  return r.value / (2.0 * std::numbers::pi);
}

double phase_rate(double drift, const std::vector<double>& coef, double s) {
  double rate = std::abs(drift);
  double sp = 1.0;
  for (std::size_t e = 2; e < coef.size(); ++e) {
    sp *= s;
    rate += static_cast<double>(e) * std::abs(coef[e]) * sp;
  }
  return rate;
}

void enforce_budget(double rate, unsigned quad_order, const char* which) {
  if (rate > quad_order / 10.0) {
    std::ostringstream os;
    os << "oscillation budget exceeded in the " << which << " integral: phase rate " << rate
       << " rad per unit exceeds quad_order/10 = " << quad_order / 10.0
       << "; raise quad_order or shrink S1 / t";
    throw SizingError(os.str());
  }
}

}  // namespace

TtfValue evaluate_Ttf(std::span<const DoubleDouble> x, const Time& t, const DataFunction& fn,
                      unsigned quad_order, std::span<const Phase> y_phases) {
  const auto& p = fn.params();
  const auto& profile = fn.profile();
  if (quad_order < 64) throw InvalidArgument("evaluate_Ttf: quad_order must be at least 64");
  if (x.size() != p.n) throw InvalidArgument("evaluate_Ttf: point has the wrong dimension");
  if (!y_phases.empty() && y_phases.size() + 1 != p.n) {
    throw InvalidArgument("evaluate_Ttf: need n - 1 exact phases");
  }
  const unsigned k = p.k;
  const double s = profile.phi_hat_support();
  const DoubleDouble u = pow(DoubleDouble(p.R), k - 1) * t.value;
  const double ud = u.to_double();

  // lambda factor: drift S1 (x1 + k u), curvature binom(k,l) R u (S1/R)^l
  const double drift1 = ((x[0] + u * static_cast<double>(k)) * p.S1).to_double();
  std::vector<double> coef1(k + 1, 0.0);
  for (unsigned l = 2; l <= k; ++l) coef1[l] = binomial(k, l) * p.R * ud * std::pow(p.S1 / p.R, l);
  enforce_budget(phase_rate(drift1, coef1, s), quad_order, "lambda");

  // xi factors: per-mode coefficients binom(k,l) (m/rho)^{k-l} u R^{1-l}
  double xi_rate = 0.0;
  for (std::size_t j = 1; j < p.n; ++j) {
    double r = std::abs(x[j].to_double());
    double sp = 1.0;
    for (unsigned l = 1; l <= k; ++l) {
      r += l * std::abs(binomial(k, l) * std::pow(2.0, k - l) * ud * std::pow(p.R, 1.0 - l)) * sp;
      sp *= s;
    }
    xi_rate = std::max(xi_rate, r);
  }
  enforce_budget(xi_rate, quad_order, "xi");

  TtfValue out;
  const double global = reduce_two_pi((x[0] + u) * p.R);
  out.lambda_factor = expi(global) * modulated_factor(profile, drift1, coef1, quad_order,
                                                      &out.evaluations, &out.converged);
  out.value = out.lambda_factor;

  bool ok = true;
  const Phase w = top_phase(t, p, &ok);
  const std::vector<Phase> derived = y_phases.empty() ? linear_phases(x.subspan(1), p) : std::vector<Phase>{};
  const std::span<const Phase> y = y_phases.empty() ? std::span<const Phase>(derived) : y_phases;

  for (std::size_t j = 1; j < p.n; ++j) {
    ModeTerms modes = mode_terms(2.0 * p.rho(), y[j - 1], w, p.rho(), k);
    ok = ok && modes.precision_ok;
    const std::size_t count = modes.terms.size();
    std::vector<double> c(count * k);
    for (std::size_t i = 0; i < count; ++i) {
      const double ratio = static_cast<double>(modes.m_first + static_cast<std::int64_t>(i)) / p.rho();
      for (unsigned l = 1; l <= k; ++l) {
        c[i * k + (l - 1)] = binomial(k, l) * std::pow(ratio, k - l) * ud * std::pow(p.R, 1.0 - l);
      }
    }
    const double xj = x[j].to_double();
    std::vector<std::complex<double>> scratch(count);
    auto f = [&](double xi) -> std::complex<double> {
      const double wgt = profile.phi_hat(xi);
      if (wgt == 0.0) return 0.0;
      for (std::size_t i = 0; i < count; ++i) {
        double phase = xi * xj;
        double xp = 1.0;
        for (unsigned l = 0; l < k; ++l) {
          xp *= xi;
          phase += c[i * k + l] * xp;
        }
        scratch[i] = modes.terms[i] * expi(phase);
      }
      return wgt * pairwise_sum(scratch.data(), count);
    };
    QuadratureResult r = integrate_gk15(f, -s, s, quad_options(quad_order, 2 * s, static_cast<double>(count), profile));
    out.evaluations += r.evaluations;
    out.converged = out.converged && r.converged;
    const std::complex<double> factor = r.value / (2.0 * std::numbers::pi);
    out.xi_factors.push_back(factor);
    out.value *= factor;
  }
  out.precision_ok = ok;
  return out;
}

ReductionReport verify_reduction(std::span<const DoubleDouble> x, const Time& t,
                                 const DataFunction& fn, unsigned quad_order,
                                 std::span<const Phase> y_phases) {
  return verify_reduction(x, t, fn, quad_order, y_phases, audit::kReductionE1);
}

ReductionReport verify_reduction(std::span<const DoubleDouble> x, const Time& t,
                                 const DataFunction& fn, unsigned quad_order,
                                 std::span<const Phase> y_phases, double audit_constant) {
  const auto& p = fn.params();
  const auto& profile = fn.profile();
  if (x.size() != p.n) throw InvalidArgument("verify_reduction: point has the wrong dimension");
  const unsigned k = p.k;
  const double tv = t.value.to_double();
  if (!(tv > 0.0 && tv < 1.0)) throw ConstraintViolation("t_range", "t must lie in (0, 1)");
  for (std::size_t j = 0; j < p.n; ++j) {
    if (std::abs(x[j].to_double()) > p.c.c1) {
      throw ConstraintViolation("x_box", "coordinate " + std::to_string(j + 1) + " outside [-c1, c1]");
    }
  }
  const DoubleDouble u = pow(DoubleDouble(p.R), k - 1) * t.value;
  // k R^{k-1} tau = x1 + k u
  const double ktau_scaled = (x[0] + u * static_cast<double>(k)).to_double();
  const double cond1 = p.c.c2 * p.delta0 / p.S1;
  if (std::abs(ktau_scaled) > cond1) {
    std::ostringstream os;
    os << "|x1 + k R^{k-1} t| = " << std::abs(ktau_scaled) << " exceeds c2 delta0 / S1 = " << cond1;
    throw ConstraintViolation("t_condition_1", os.str());
  }
  const double cond2 = p.c.c3 * p.R / (p.S1 * p.S1);
  if (std::abs(u.to_double()) > cond2) {
    std::ostringstream os;
    os << "R^{k-1} |t| = " << std::abs(u.to_double()) << " exceeds c3 R / S1^2 = " << cond2;
    throw ConstraintViolation("t_condition_2", os.str());
  }

  ReductionReport r;
  r.u = u.to_double();
  r.tau = ktau_scaled / (k * std::pow(p.R, k - 1));
  TtfValue ttf = evaluate_Ttf(x, t, fn, quad_order, y_phases);

  bool ok = true;
  const Phase w = top_phase(t, p, &ok);
  const std::vector<Phase> derived = y_phases.empty() ? linear_phases(x.subspan(1), p) : std::vector<Phase>{};
  const std::span<const Phase> y = y_phases.empty() ? std::span<const Phase>(derived) : y_phases;
  SumValue S = full_sum(y, w, p);

  r.oracle = std::abs(ttf.value);
  r.full_sum = std::abs(S.value);
  r.main = std::pow(1.0 - p.c.c0, p.n) * r.full_sum;
  double envelope = std::abs(profile.phi(p.S1 * ktau_scaled));
  for (std::size_t j = 1; j < p.n; ++j) envelope *= std::abs(profile.phi(x[j].to_double() + k * r.u));
  r.envelope_main = envelope * r.full_sum;
  r.measured_e1 = std::abs(r.oracle - r.envelope_main);
  r.e1_shape = (p.c.c1 + p.c.c2 * p.delta0) * std::pow(p.X(), p.n - 1);
  r.audit_constant = audit_constant;
  r.e1_budget = audit_constant * r.e1_shape;
  r.precision_ok = ok && S.precision_ok && ttf.precision_ok;
  r.pass = r.precision_ok && ttf.converged && r.oracle >= r.main - r.e1_budget;
  return r;
}

BaselineReport baseline_quarter(const BaselineParams& params, const BumpProfile& profile,
                                unsigned quad_order) {
  if (params.n < 1 || params.n > 3) throw InvalidArgument("baseline_quarter: n must be 1, 2 or 3");
  if (params.k < 2) throw InvalidArgument("baseline_quarter: k must be at least 2");
  if (!(params.R > 1.0)) throw InvalidArgument("baseline_quarter: R must exceed 1");
  if (params.grid < 2) throw InvalidArgument("baseline_quarter: grid must be at least 2");
  BaselineReport rep;
  rep.params = params;
  const unsigned n = params.n, k = params.k;
  const double R = params.R;
  rep.S1 = std::sqrt(R);
  const double s = profile.phi_hat_support();

  // |T_t f(x)| = |F(S1; x1)| prod_j |F(1; x_j)|, F(a; x) the modulated factor
  auto magnitude = [&](std::span<const double> x, const DoubleDouble& u) {
    const double ud = u.to_double();
    double value = 1.0;
    for (unsigned j = 0; j < n; ++j) {
      const double a = j == 0 ? rep.S1 : 1.0;
      const double drift = ((DoubleDouble(x[j]) + u * static_cast<double>(k)) * a).to_double();
      std::vector<double> coef(k + 1, 0.0);
      for (unsigned l = 2; l <= k; ++l) coef[l] = binomial(k, l) * R * ud * std::pow(a / R, l);
      enforce_budget(phase_rate(drift, coef, s), quad_order, j == 0 ? "lambda" : "xi");
      value *= std::abs(modulated_factor(profile, drift, coef, quad_order, nullptr, nullptr));
      if (value < params.threshold) break;
    }
    return value;
  };

  std::vector<double> origin(n, 0.0);
  rep.at_origin = magnitude(origin, DoubleDouble(0.0));

  const double h = 2.0 / params.grid;
  const double cell = std::pow(h, n);
  const DoubleDouble Rk1 = pow(DoubleDouble(R), k - 1);
  std::vector<double> x(n);
  std::vector<unsigned> idx(n, 0);
  while (true) {
    double norm2 = 0.0;
    for (unsigned j = 0; j < n; ++j) {
      x[j] = -1.0 + (idx[j] + 0.5) * h;
      norm2 += x[j] * x[j];
    }
    if (norm2 <= 1.0) {
      rep.ball_measure += cell;
      for (int i = -static_cast<int>(params.time_steps); i <= static_cast<int>(params.time_steps); ++i) {
        const double delta = i / (2.0 * rep.S1);
        const DoubleDouble u = (DoubleDouble(-x[0]) + DoubleDouble(delta)) / static_cast<double>(k);
        if (!(u.to_double() > 0.0)) continue;
        if ((u / Rk1.to_double()).to_double() >= 1.0) continue;
        if (magnitude(x, u) >= params.threshold) {
          rep.mass += cell;
          break;
        }
      }
    }
    unsigned j = 0;
    while (j < n && ++idx[j] == params.grid) idx[j++] = 0;
    if (j == n) break;
  }
  rep.fraction = rep.ball_measure > 0 ? rep.mass / rep.ball_measure : 0.0;
  rep.ratio_proxy = std::sqrt(rep.S1) * rep.mass;
  rep.min_fraction = kBaselineMinFraction;
  rep.pass = rep.fraction >= kBaselineMinFraction && std::abs(rep.at_origin - 1.0) <= 1e-6;
  return rep;
}

}  // namespace schrodk
