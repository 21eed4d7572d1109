// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace schrodk {

struct Slack {
  std::string name;
  std::string relation;
  double value = 0.0;  // >= 0 when satisfied; strict relations need > 0
  bool strict = false;
  bool ok = false;
};

struct ExponentSolution {
  unsigned n = 0;
  unsigned k = 0;
  double lambda = 0.0;
  double kappa = 0.0;
  double sigma = 0.0;
  double s_star = 0.0;
  double Delta0_max = 0.0;          // largest Delta0 with kappa (1 + Delta0) <= 1 - lambda
  double equality_residual = 0.0;   // lambda + kappa - (n + sigma/(k-1)) / (n + 1/(k-1))
  double closed_form_gap = 0.0;     // difference of the two closed forms of s*
  std::vector<Slack> slack;
  bool feasible = false;
};

// sigma = 1/2, lambda = 1 - n/(2D), kappa = (n-1)/(2D), D = (k-1) n + 1.
ExponentSolution solve_exponents(unsigned n, unsigned k);

// 1/4 + (n-1) / (4 ((k-1) n + 1))
double threshold(unsigned n, unsigned k);
// k n / (4 ((k-1) n + 1))
double threshold_product_form(unsigned n, unsigned k);

// (n-1)/2 + sigma/2 - (kappa + lambda)(n-1)/2
double exponent_objective(unsigned n, double lambda, double kappa, double sigma);

// Feasible region, with strict inequalities taken with `margin`.
bool exponents_feasible(unsigned n, unsigned k, double lambda, double kappa, double sigma,
                        double margin = 0.0);

inline constexpr double kGridMargin = 1e-9;

struct OptimalityReport {
  unsigned n = 0;
  unsigned k = 0;
  double step = 0.0;
  double s_star = 0.0;
  double grid_max = 0.0;
  double grid_gap = 0.0;  // s_star - grid_max
  double arg_lambda = 0.0;
  double arg_kappa = 0.0;
  double arg_sigma = 0.0;
  unsigned long long points = 0;  // feasible grid points visited
  bool within = false;            // |gap| <= step (n - 1)
};

OptimalityReport verify_optimality(unsigned n, unsigned k, double step, unsigned threads = 1);

}  // namespace schrodk
