// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace schrodk {

// Tabulated bump phi = |check psi|^2 with psi(xi) = c exp(-1/(1 - 16 xi^2))
// on |xi| < 1/4, normalized so (2 pi)^{-1} int psi = 1. Then phi >= 0,
// phi(0) = 1, and hat phi = (2 pi)^{-1} psi * psi(-.) lives in [-1/2, 1/2].
class BumpProfile {
 public:
  static constexpr unsigned kDefaultResolution = 256;
  static constexpr double kDefaultRange = 256.0;

  static BumpProfile build(unsigned resolution = kDefaultResolution,
                           double range = kDefaultRange);

  // Arbitrary tables, mainly for mocks. phi covers [-range, range] and
  // phi_hat covers [-1, 1], both at `resolution` samples per unit.
  static BumpProfile from_samples(unsigned resolution, double range, std::vector<double> phi,
                                  std::vector<double> phi_hat, double phi_hat_support);

  // Cubic interpolation on the grid; zero outside the tabulated range.
  double phi(double x) const;
  double phi_hat(double xi) const;

  unsigned resolution() const noexcept { return resolution_; }
  double range() const noexcept { return range_; }
  double phi_hat_support() const noexcept { return phi_hat_support_; }
  const std::vector<double>& phi_samples() const noexcept { return phi_; }
  const std::vector<double>& phi_hat_samples() const noexcept { return phi_hat_; }
  double phi_grid_point(std::size_t i) const { return -range_ + static_cast<double>(i) / resolution_; }

  double l2_norm_phi() const noexcept { return l2_phi_; }
  double l1_norm_phi_hat() const noexcept { return l1_phi_hat_; }
  double l2_norm_phi_hat() const noexcept { return l2_phi_hat_; }
  // max |phi| over the outermost unit of the grid
  double tail_max() const noexcept { return tail_max_; }

  void save(const std::string& path) const;
  static BumpProfile load(const std::string& path);

 private:
  BumpProfile() = default;
  void compute_norms();

  unsigned resolution_ = 0;
  double range_ = 0.0;
  double phi_hat_support_ = 1.0;
  std::vector<double> phi_;
  std::vector<double> phi_hat_;
  double l2_phi_ = 0.0;
  double l1_phi_hat_ = 0.0;
  double l2_phi_hat_ = 0.0;
  double tail_max_ = 0.0;
};

// Largest grid point delta0 < 1/2 with phi(y) >= 1 - c0/2 for |y| <= delta0.
// Returns 0 (and logs a warning) when no positive value qualifies.
double delta0_for(double c0, const BumpProfile& profile);

}  // namespace schrodk
