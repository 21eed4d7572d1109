// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#include "schrodk/optimizer.hpp"

#include <cmath>

#include "schrodk/error.hpp"
#include "schrodk/parallel.hpp"

namespace schrodk {

namespace {

void check_nk(unsigned n, unsigned k, const char* who) {
  if (n < 2 || k < 2) throw InvalidArgument(std::string(who) + ": need n >= 2 and k >= 2");
}

double D(unsigned n, unsigned k) { return static_cast<double>((k - 1) * n + 1); }

Slack make_slack(std::string name, std::string relation, double value, bool strict) {
  return {std::move(name), std::move(relation), value, strict, strict ? value > 0 : value >= -1e-12};
}

}  // namespace

double threshold(unsigned n, unsigned k) {
  if (n < 1 || k < 2) throw InvalidArgument("threshold: need n >= 1 and k >= 2");
  return 0.25 + (n - 1.0) / (4.0 * D(n, k));
}

double threshold_product_form(unsigned n, unsigned k) {
  if (n < 1 || k < 2) throw InvalidArgument("threshold: need n >= 1 and k >= 2");
  return static_cast<double>(k) * n / (4.0 * D(n, k));
}

double exponent_objective(unsigned n, double lambda, double kappa, double sigma) {
  return (n - 1.0) / 2.0 + sigma / 2.0 - (kappa + lambda) * (n - 1.0) / 2.0;
}

bool exponents_feasible(unsigned n, unsigned k, double lambda, double kappa, double sigma,
                        double margin) {
  const double kd = k;
  return sigma > 0 && sigma <= 0.5 && sigma + (kd - 1) <= kd * lambda + kappa &&
         lambda + kappa * n / (n - 1.0) >= 1.0 && lambda > (kd - 1) / kd + margin &&
         kappa > margin && kappa < 1.0 - lambda - margin && lambda < 1.0;
}

ExponentSolution solve_exponents(unsigned n, unsigned k) {
  check_nk(n, k, "solve_exponents");
  ExponentSolution s;
  s.n = n;
  s.k = k;
  const double d = D(n, k);
  const double kd = k;
  s.sigma = 0.5;
  s.lambda = 1.0 - n / (2.0 * d);
  s.kappa = (n - 1.0) / (2.0 * d);
  s.s_star = threshold(n, k);
  s.closed_form_gap = s.s_star - threshold_product_form(n, k);
  s.Delta0_max = std::min(1.0 / (n - 1), (1.0 - s.lambda) / s.kappa - 1.0);
  s.equality_residual = s.lambda + s.kappa - (n + s.sigma / (kd - 1)) / (n + 1.0 / (kd - 1));

  s.slack.push_back(make_slack("sigma_max", "sigma <= 1/2", 0.5 - s.sigma, false));
  s.slack.push_back(make_slack("lam_kap", "sigma + (k-1) <= k lambda + kappa",
                               kd * s.lambda + s.kappa - s.sigma - (kd - 1), false));
  s.slack.push_back(make_slack("ratio_upper", "lambda + kappa n/(n-1) >= 1",
                               s.lambda + s.kappa * n / (n - 1.0) - 1.0, false));
  s.slack.push_back(make_slack("lambda_min", "lambda > (k-1)/k", s.lambda - (kd - 1) / kd, true));
  s.slack.push_back(make_slack("kappa_positive", "kappa > 0", s.kappa, true));
  s.slack.push_back(make_slack("Delta0", "kappa (1 + Delta0) <= 1 - lambda, some Delta0 in (0, 1/(n-1)]",
                               1.0 - s.lambda - s.kappa, true));
  s.feasible = true;
  for (const auto& sl : s.slack) s.feasible = s.feasible && sl.ok;
  return s;
}

OptimalityReport verify_optimality(unsigned n, unsigned k, double step, unsigned threads) {
  check_nk(n, k, "verify_optimality");
  if (!(step > 0.0) || step > 1e-3) throw InvalidArgument("verify_optimality: step must lie in (0, 1e-3]");
  OptimalityReport r;
  r.n = n;
  r.k = k;
  r.step = step;
  r.s_star = threshold(n, k);
  const double kd = k;
  const double lambda0 = (kd - 1) / kd + kGridMargin;
  const auto slices = static_cast<std::size_t>(std::ceil((1.0 - lambda0) / step));

  struct Best {
    double value = -1.0;
    double lambda = 0, kappa = 0, sigma = 0;
    unsigned long long points = 0;
  };
  std::vector<Best> best(slices);
  parallel_for(slices, threads, [&](std::size_t i) {
    const double lambda = lambda0 + static_cast<double>(i) * step;
    Best b;
    for (std::size_t j = 0;; ++j) {
      const double kappa = kGridMargin + static_cast<double>(j) * step;
      if (kappa >= 1.0 - lambda - kGridMargin) break;
      // largest grid sigma = 1/2 - m step satisfying the coupling constraint
      const double cap = std::min(0.5, kd * lambda + kappa - (kd - 1));
      if (cap <= 0) continue;
      const double m = std::ceil((0.5 - cap) / step - 1e-9);
      const double sigma = 0.5 - m * step;
      if (!exponents_feasible(n, k, lambda, kappa, sigma, kGridMargin)) continue;
      ++b.points;
      const double v = exponent_objective(n, lambda, kappa, sigma);
      if (v > b.value) b = {v, lambda, kappa, sigma, b.points};
    }
    best[i] = b;
  });
  Best top;
  for (const auto& b : best) {
    r.points += b.points;
    if (b.value > top.value) top = b;
  }
  r.grid_max = top.value;
  r.arg_lambda = top.lambda;
  r.arg_kappa = top.kappa;
  r.arg_sigma = top.sigma;
  r.grid_gap = r.s_star - r.grid_max;
  r.within = std::abs(r.grid_gap) <= step * (n - 1);
  return r;
}

}  // namespace schrodk
