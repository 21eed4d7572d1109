// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
//
// Measures the ratios behind the frozen audit constants on a calibration
// grid disjoint from the acceptance cases (other Q, q ranges and seeds)
// and prints max ratio and max ratio * headroom for each.

#include <cmath>
#include <iostream>
#include <map>
#include <memory>
#include <random>

#include <nlohmann/json.hpp>

#include "schrodk/audit.hpp"
#include "schrodk/bump.hpp"
#include "schrodk/counterexample.hpp"
#include "schrodk/expsum.hpp"
#include "schrodk/modular.hpp"
#include "schrodk/omega.hpp"
#include "schrodk/random.hpp"

using namespace schrodk;
using nlohmann::json;

namespace {

constexpr std::uint64_t kSeed = 0xCA11B2A7E;

json entry(double max_ratio) {
  return {{"max_ratio", max_ratio}, {"frozen", max_ratio * audit::kHeadroom}};
}

double incomplete_sums() {
  std::mt19937_64 rng(kSeed);
  double worst = 0.0;
  for (unsigned k = 2; k <= 5; ++k) {
    for (const auto& p : primes_in_range(11, 211)) {
      const std::uint64_t q = p.value();
      if (q % k == 0) continue;
      for (int rep = 0; rep < 4; ++rep) {
        std::vector<std::int64_t> coeffs(k + 1);
        for (auto& c : coeffs) c = static_cast<std::int64_t>(uniform_below(rng, q));
        coeffs[k] = 1 + static_cast<std::int64_t>(uniform_below(rng, q - 1));
        const std::uint64_t H = 1 + uniform_below(rng, q);
        worst = std::max(worst, incomplete_sum(coeffs, q, H).ratio);
      }
    }
  }
  return worst;
}

double rational_tops() {
  std::mt19937_64 rng(kSeed + 1);
  const auto primes = primes_in_range(53, 211);
  const double Vs[] = {0.0, 1e-5, 1e-4};
  double worst = 0.0;
  for (int rep = 0; rep < 120; ++rep) {
    const unsigned k = 2 + rep % 2;
    const std::uint64_t q = primes[uniform_below(rng, primes.size())].value();
    const std::uint64_t N = 10 * q + uniform_below(rng, 90 * q + 1);
    const std::uint64_t a1 = 1 + uniform_below(rng, q - 1);
    const std::uint64_t b = 1 + uniform_below(rng, q);
    const double V = Vs[rep % 3] * (uniform01(rng) < 0.5 ? -1.0 : 1.0);
    const auto M = static_cast<std::int64_t>(uniform_below(rng, 1'000'000));
    const double y = kTwoPi * static_cast<double>(b) / static_cast<double>(q) + V;
    const auto r = rational_top_sum(M, N, a1, b, q, y, k, 1.0);
    worst = std::max(worst, std::abs(r.measured_error) / r.budget_shape);
  }
  return worst;
}

CounterexampleParams desk(unsigned k, double Q, double rho_factor,
                          const std::shared_ptr<const BumpProfile>& profile) {
  SmallConstants sc;
  const double delta0 = delta0_for(sc.c0, *profile);
  sc.c4 = sc.c2 * delta0 / (4.0 * k);
  auto p = CounterexampleParams::desk(2, k, Q, rho_factor * Q, 64.0, sc, delta0);
  p.validate();
  return p;
}

BoxSystem system_for(const CounterexampleParams& p) {
  OmegaConfig oc;
  oc.Q = static_cast<std::uint64_t>(p.Q);
  oc.n = p.n;
  oc.k = p.k;
  oc.c4 = p.c.c4;
  oc.c5 = p.c.c5;
  oc.threads = 0;
  return build_omega(oc);
}

double lower_bound_e2(const std::shared_ptr<const BumpProfile>& profile) {
  double worst = 0.0;
  for (unsigned k : {2U, 3U}) {
    for (double Q : {1600.0, 3000.0}) {
      for (double rho : {4.0, 32.0}) {
        const auto p = desk(k, Q, rho, profile);
        const BoxSystem sys = system_for(p);
        std::map<std::uint64_t, const MagnitudeTable*> tables;
        for (const auto& cell : sys.cells()) tables[cell.q] = &cell.good->table();
        const BoxList list = sys.sample(100, kSeed + k, 0.25);
        for (const Box& b : list.boxes()) {
          const OmegaPoint pt = to_omega_star(b, p);
          const auto r = verify_lower_bound(pt, choose_t(pt, p), p, tables.at(b.q), 1.0);
          for (std::size_t j = 0; j < r.coordinate_error.size(); ++j) {
            worst = std::max(worst, std::abs(r.coordinate_error[j]) / r.coordinate_budget[j]);
          }
        }
      }
    }
  }
  return worst;
}

double reduction_e1(const std::shared_ptr<const BumpProfile>& profile) {
  double worst = 0.0;
  for (unsigned k : {2U, 3U}) {
    const auto p = desk(k, 1600.0, 4.0, profile);
    const DataFunction fn(p, profile);
    const BoxSystem sys = system_for(p);
    const BoxList list = sys.sample(6, kSeed + 10 + k, 0.25);
    for (const Box& b : list.boxes()) {
      const OmegaPoint pt = to_omega_star(b, p);
      const ChosenTime ct = choose_t(pt, p);
      const auto phases = pt.linear_phases();
      const auto r = verify_reduction(pt.x, ct.t, fn, 256, phases, 1.0);
      worst = std::max(worst, r.measured_e1 / r.e1_shape);
    }
  }
  return worst;
}

double overlap_c1() {
  double worst = 0.0;
  for (unsigned k : {2U, 3U}) {
    for (std::uint64_t Q : {1600ULL, 3000ULL}) {
      OmegaConfig oc;
      oc.Q = Q;
      oc.k = k;
      oc.threads = 0;
      worst = std::max(worst, overlap_census(build_omega(oc)).C1);
    }
  }
  return worst;
}

double baseline_fraction(const BumpProfile& profile) {
  double lowest = 1.0;
  for (unsigned n : {1U, 2U}) {
    for (double R : {1024.0, 8192.0}) {
      BaselineParams bp;
      bp.n = n;
      bp.R = R;
      bp.grid = n == 1 ? 400 : 48;
      lowest = std::min(lowest, baseline_quarter(bp, profile).fraction);
    }
  }
  return lowest;
}

}  // namespace

int main() {
  auto profile = std::make_shared<const BumpProfile>(BumpProfile::build());
  json out;
  out["headroom"] = audit::kHeadroom;
  out["incomplete_sum"] = entry(incomplete_sums());
  out["rational_top"] = entry(rational_tops());
  out["overlap_c1"] = entry(overlap_c1());
  out["lower_bound_e2"] = entry(lower_bound_e2(profile));
  out["reduction_e1"] = entry(reduction_e1(profile));
  const double frac = baseline_fraction(*profile);
  out["baseline_min_fraction"] = {{"min_fraction", frac}, {"frozen", frac / audit::kHeadroom}};
  std::cout << out.dump(2) << '\n';
}
