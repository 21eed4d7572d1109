// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "schrodk/audit.hpp"
#include "schrodk/counterexample.hpp"
#include "schrodk/expsum.hpp"
#include "schrodk/good_set.hpp"
#include "schrodk/modular.hpp"
#include "schrodk/omega.hpp"
#include "schrodk/optimizer.hpp"
#include "schrodk/orbit_table.hpp"
#include "schrodk/parallel.hpp"
#include "schrodk/random.hpp"

using namespace schrodk;

namespace {

constexpr std::uint64_t kSeed = 0xACCE97;
unsigned g_threads = 0;

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

std::shared_ptr<const BumpProfile> profile() {
  static const auto p = std::make_shared<const BumpProfile>(BumpProfile::build());
  return p;
}

CounterexampleParams desk(unsigned k, double Q, double rho_factor) {
  SmallConstants sc;
  const double d0 = delta0_for(sc.c0, *profile());
  sc.c4 = sc.c2 * d0 / (4.0 * k);
  auto p = CounterexampleParams::desk(2, k, Q, rho_factor * Q, 64.0, sc, d0);
  p.validate();
  return p;
}

BoxSystem system_for(const CounterexampleParams& p) {
  OmegaConfig oc;
  oc.Q = static_cast<std::uint64_t>(p.Q);
  oc.k = p.k;
  oc.c4 = p.c.c4;
  oc.c5 = p.c.c5;
  oc.threads = g_threads;
  return build_omega(oc);
}

Verdict parseval() {
  Verdict v;
  double worst = 0.0;
  for (unsigned k = 2; k <= 5; ++k) {
    for (const auto& p : primes_in_range(3, 199)) worst = std::max(worst, parseval_check(k, p.value()).residual);
  }
  v.pass = worst < 1e-8;
  v.detail = "max relative residual " + fmt(worst);
  return v;
}

Verdict weil() {
  Verdict v;
  double worst = 0.0;
  for (unsigned k = 2; k <= 5; ++k) {
    for (const auto& p : primes_in_range(3, 499)) {
      const WeilReport r = weil_margin(k, p.value());
      if (!r.applicable) continue;
      worst = std::max(worst, r.max_ratio);
      v.pass = v.pass && r.pass;
    }
  }
  v.pass = v.pass && worst <= 1 + 1e-9;
  v.detail = "max |T| / ((k-1) sqrt q) = " + fmt(worst);
  return v;
}

Verdict census_bound() {
  Verdict v;
  double slack = 1e9;
  for (unsigned k = 2; k <= 5; ++k) {
    for (const auto& p : primes_in_range(3, 499)) {
      const std::uint64_t q = p.value();
      if (q % k == 0) continue;
      const CensusReport r = census(k, q, 0.5);
      v.pass = v.pass && r.bound_satisfied;
      slack = std::min(slack, r.fraction * k * k * 4.0);
    }
  }
  v.detail = "min fraction / (k^-2/4) = " + fmt(slack);
  return v;
}

Verdict good_set_size() {
  Verdict v;
  double slack = 1e9;
  std::size_t cases = 0;
  for (unsigned k : {2U, 3U}) {
    for (const auto& p : primes_in_range(16 * k * k, 499)) {
      const auto table = std::make_shared<const OrbitTable>(OrbitTable::build(k, p.value()));
      for (unsigned n : {2U, 3U}) {
        const GoodSet g(table, n);
        const double ratio = static_cast<double>(g.count()) / g.size_bound();
        slack = std::min(slack, ratio);
        v.pass = v.pass && ratio >= 1.0;
        ++cases;
      }
    }
  }
  v.detail = std::to_string(cases) + " cases, min |G*| / bound = " + fmt(slack);
  return v;
}

Verdict dft_equivalence() {
  Verdict v;
  double worst = 0.0;  // max |table - direct| / q
  std::size_t sampled = 0;
  std::mt19937_64 rng(kSeed + 5);
  for (unsigned k = 2; k <= 5; ++k) {
    for (const auto& p : primes_in_range(3, 499)) {
      const std::uint64_t q = p.value();
      const SumTable t = SumTable::build(k, q);
      const auto pattern = ExponentPattern::top_linear(k);
      auto check = [&](std::uint64_t a1, std::uint64_t b) {
        const std::array<std::uint64_t, 2> c{a1, b};
        const double d = std::abs(t.row(a1)[b] - std::abs(complete_sum(pattern, c, q)));
        worst = std::max(worst, d / static_cast<double>(q));
      };
      if (q <= 61) {
        for (std::uint64_t a1 = 1; a1 < q; ++a1) {
          for (std::uint64_t b = 0; b < q; ++b) check(a1, b);
        }
      } else {
        for (int i = 0; i < 12; ++i) {
          check(1 + uniform_below(rng, q - 1), uniform_below(rng, q));
          ++sampled;
        }
      }
    }
  }
  v.pass = worst <= 1e-9 && sampled >= 1000;
  v.detail = "max |diff| / q = " + fmt(worst) + ", " + std::to_string(sampled) + " sampled entries for q > 61";
  return v;
}

Verdict rational_top() {
  Verdict v;
  std::mt19937_64 rng(kSeed + 6);
  const auto primes = primes_in_range(101, 499);
  const double Vs[] = {0.0, 1e-5, 1e-4};
  double worst = 0.0, periodic = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const unsigned k = 2 + rep % 2;
    const std::uint64_t q = primes[uniform_below(rng, primes.size())].value();
    const bool whole = rep % 10 == 0;
    const std::uint64_t N = whole ? q * (10 + uniform_below(rng, 91)) : 10 * q + uniform_below(rng, 90 * q + 1);
    const std::uint64_t a1 = 1 + uniform_below(rng, q - 1);
    const std::uint64_t b = 1 + uniform_below(rng, q);
    const double V = whole ? 0.0 : Vs[rep % 3] * (uniform01(rng) < 0.5 ? -1.0 : 1.0);
    const auto M = static_cast<std::int64_t>(uniform_below(rng, 1'000'000));
    const double y = kTwoPi * static_cast<double>(b) / static_cast<double>(q) + V;
    const RationalTopReport r = rational_top_sum(M, N, a1, b, q, y, k);
    worst = std::max(worst, std::abs(r.measured_error) / r.error_budget);
    v.pass = v.pass && r.pass;
    if (whole) {
      const double rel = std::abs(r.measured_error) / static_cast<double>(N);
      periodic = std::max(periodic, rel);
      v.pass = v.pass && rel < 1e-8;
    }
  }
  v.detail = "worst error / budget " + fmt(worst) + " (constant " + fmt(audit::kRationalTop) +
             "), periodic error / N " + fmt(periodic);
  return v;
}

Verdict overlap_floor() {
  Verdict v;
  std::ostringstream os;
  for (unsigned k : {2U, 3U}) {
    for (std::uint64_t Q : {2048ULL, 4096ULL}) {
      OmegaConfig oc;
      oc.Q = Q;
      oc.k = k;
      oc.threads = g_threads;
      const BoxSystem sys = build_omega(oc);
      const OverlapCensus c = overlap_census(sys);
      const double exact = union_measure_exact(sys).measure;
      const double floor = c.lemma_factor * sys.total_box_measure();
      const bool ok = c.pass && exact >= floor;
      v.pass = v.pass && ok;
      os << "k=" << k << " Q=" << Q << " C1=" << fmt(c.C1) << " |U|/floor=" << fmt(exact / floor) << "; ";
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const BoxList list = sys.sample(3000, kSeed + 70 + seed, 0.5);
        const bool same = overlap_census(list).pairs == overlap_pairs_brute_force(list);
        v.pass = v.pass && same;
        if (!same) os << "census mismatch (seed " << seed << "); ";
      }
    }
  }
  v.detail = os.str() + "subsample census = brute force";
  return v;
}

Verdict omega_scaling() {
  Verdict v;
  std::vector<double> scaled;
  std::ostringstream os;
  for (std::uint64_t Q : {2048ULL, 4096ULL, 8192ULL, 16384ULL}) {
    OmegaConfig oc;
    oc.Q = Q;
    oc.k = 3;
    oc.threads = g_threads;
    const double m = union_measure_exact(build_omega(oc)).measure;
    scaled.push_back(m * std::log(static_cast<double>(Q)));
    os << "Q=" << Q << ": " << fmt(scaled.back()) << "; ";
  }
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  v.pass = *lo > 0 && *hi / *lo <= 4.0;
  v.detail = os.str() + "spread " + fmt(*hi / *lo);
  return v;
}

Verdict lower_bound() {
  Verdict v;
  std::ostringstream os;
  for (unsigned k : {2U, 3U}) {
    for (double rho : {4.0, 32.0}) {
      const auto p = desk(k, 2048, rho);
      const BoxSystem sys = system_for(p);
      std::map<std::uint64_t, const MagnitudeTable*> tables;
      for (const auto& cell : sys.cells()) tables[cell.q] = &cell.good->table();
      const BoxList list = sys.sample(200, kSeed + 90 + k, 0.25);
      std::atomic<std::size_t> passed{0};
      std::vector<double> ratio(list.size(), 0.0);
      parallel_for(list.size(), g_threads, [&](std::size_t i) {
        const Box& b = list.boxes()[i];
        try {
          const OmegaPoint pt = to_omega_star(b, p);
          const auto r = verify_lower_bound(pt, choose_t(pt, p), p, tables.at(b.q));
          if (r.pass && r.decomposition_pass) ++passed;
          for (std::size_t j = 0; j < r.coordinate_error.size(); ++j) {
            ratio[i] = std::max(ratio[i], std::abs(r.coordinate_error[j]) / r.coordinate_budget[j]);
          }
        } catch (const std::exception&) {
        }
      });
      v.pass = v.pass && passed == list.size();
      os << "k=" << k << " R/L=" << rho << "Q: " << passed << "/" << list.size()
         << " worst coord error/budget " << fmt(*std::max_element(ratio.begin(), ratio.end())) << "; ";
    }
  }
  v.detail = os.str();
  return v;
}

Verdict reduction() {
  Verdict v;
  std::ostringstream os;
  std::size_t total = 0, passed = 0;
  for (unsigned k : {2U, 3U}) {
    const auto p = desk(k, 2048, 4.0);
    const DataFunction fn(p, profile());
    const BoxList list = system_for(p).sample(10, kSeed + 100 + k, 0.25);
    std::vector<double> ratio(list.size(), -1.0);
    std::vector<char> ok(list.size(), 0);
    parallel_for(list.size(), g_threads, [&](std::size_t i) {
      try {
        const OmegaPoint pt = to_omega_star(list.boxes()[i], p);
        const ChosenTime ct = choose_t(pt, p);
        const auto phases = pt.linear_phases();
        const auto r = verify_reduction(pt.x, ct.t, fn, 256, phases);
        ok[i] = r.pass;
        ratio[i] = r.measured_e1 / r.e1_budget;
      } catch (const std::exception&) {
      }
    });
    total += list.size();
    passed += std::count(ok.begin(), ok.end(), 1);
    os << "k=" << k << " worst E1/budget " << fmt(*std::max_element(ratio.begin(), ratio.end())) << "; ";
  }

  const auto p = desk(3, 2048, 4.0);
  const DataFunction fn(p, profile());
  std::mt19937_64 rng(kSeed + 110);
  std::vector<std::array<DoubleDouble, 2>> xs(50);
  for (auto& x : xs) {
    x[0] = DoubleDouble((4.0 * uniform01(rng) - 2.0) / p.S1);
    x[1] = DoubleDouble(4.0 * uniform01(rng) - 2.0);
  }
  std::vector<double> rel(xs.size(), 1.0);
  parallel_for(xs.size(), g_threads, [&](std::size_t i) {
    const std::complex<double> f = fn.evaluate(xs[i]);
    const TtfValue t0 = evaluate_Ttf(xs[i], Time{DoubleDouble(0.0), std::nullopt}, fn);
    rel[i] = std::abs(t0.value - f) / std::abs(f);
  });
  const double worst_rel = *std::max_element(rel.begin(), rel.end());
  v.pass = passed == total && total >= 20 && worst_rel <= 1e-6;
  v.detail = std::to_string(passed) + "/" + std::to_string(total) + " points; " + os.str() +
             "t=0 worst relative error " + fmt(worst_rel) + " over 50 points";
  return v;
}

Verdict optimizer() {
  Verdict v;
  double worst_gap = 0.0;
  for (unsigned n : {2U, 3U}) {
    for (unsigned k : {2U, 3U, 4U}) {
      const ExponentSolution s = solve_exponents(n, k);
      v.pass = v.pass && s.feasible;
      for (const Slack& sl : s.slack) v.pass = v.pass && sl.ok && sl.value >= 0;
      const OptimalityReport r = verify_optimality(n, k, 5e-4, g_threads);
      worst_gap = std::max(worst_gap, std::abs(r.grid_gap));
      v.pass = v.pass && std::abs(r.grid_gap) <= 1e-3;
    }
  }
  // exact up to the last bit of the two double evaluations
  double worst_k2 = 0.0;
  for (unsigned n = 1; n <= 10; ++n) {
    const double want = n / (2.0 * (n + 1));
    worst_k2 = std::max(worst_k2, std::abs(threshold(n, 2) - want) / std::numeric_limits<double>::epsilon());
  }
  v.pass = v.pass && worst_k2 <= 1.0;
  v.detail = "worst grid gap " + fmt(worst_gap) + ", k=2 threshold off by " + fmt(worst_k2) + " ulp";
  return v;
}

Verdict baseline() {
  Verdict v;
  std::ostringstream os;
  for (unsigned n : {1U, 2U}) {
    BaselineParams bp;
    bp.n = n;
    bp.R = 4096;
    bp.grid = n == 1 ? 400 : 48;
    const BaselineReport a = baseline_quarter(bp, *profile());
    bp.R *= 16;
    const BaselineReport b = baseline_quarter(bp, *profile());
    const double growth = b.ratio_proxy / a.ratio_proxy;
    v.pass = v.pass && std::abs(growth - 2.0) <= 0.2;
    os << "n=" << n << " growth " << fmt(growth) << "; ";
  }
  v.detail = os.str() + "target 2 +- 10%";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::strcmp(argv[i], "--threads") == 0) g_threads = static_cast<unsigned>(std::stoul(argv[i + 1]));
  }
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"Parseval identity", parseval},
      {"Weil bound", weil},
      {"large-sum census", census_bound},
      {"good-set size", good_set_size},
      {"DFT/naive equivalence", dft_equivalence},
      {"rational-top decomposition", rational_top},
      {"union lower bound and census oracle", overlap_floor},
      {"|Omega| log Q stability", omega_scaling},
      {"lower bound on Omega*", lower_bound},
      {"reduction oracle", reduction},
      {"exponent optimizer", optimizer},
      {"single-mode baseline growth", baseline},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !v.pass;
    std::printf("%s %2zu %s: %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
