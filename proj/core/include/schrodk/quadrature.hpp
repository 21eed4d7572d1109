// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <functional>

namespace schrodk {

struct QuadratureOptions {
  unsigned initial_panels = 8;
  unsigned max_panels = 4096;
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
};

struct QuadratureResult {
  std::complex<double> value;
  double error_estimate = 0.0;
  unsigned evaluations = 0;
  bool converged = false;
};

// Adaptive Gauss-Kronrod (7, 15) on [a, b]. Panels are bisected largest
// error first; the final sum runs over panels in left-to-right order so the
// result does not depend on refinement history.
QuadratureResult integrate_gk15(const std::function<std::complex<double>(double)>& f, double a,
                                double b, const QuadratureOptions& options = {});

}  // namespace schrodk
