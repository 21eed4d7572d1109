// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#include "schrodk/expsum.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "schrodk/audit.hpp"
#include "schrodk/ddouble.hpp"
#include "schrodk/error.hpp"
#include "schrodk/parallel.hpp"

namespace schrodk {

ExponentPattern ExponentPattern::make(std::vector<unsigned> exponents) {
  if (exponents.size() < 2) throw InvalidArgument("ExponentPattern: need at least two exponents");
  if (exponents.back() != 1) throw InvalidArgument("ExponentPattern: last exponent must be 1");
  for (std::size_t i = 1; i < exponents.size(); ++i) {
    if (exponents[i] >= exponents[i - 1]) {
      throw InvalidArgument("ExponentPattern: exponents must be strictly decreasing");
    }
  }
  return ExponentPattern(std::move(exponents));
}

std::vector<std::complex<double>> roots_of_unity(std::uint64_t q) {
  if (q == 0) throw InvalidArgument("roots_of_unity: q = 0");
  std::vector<std::complex<double>> roots(q);
  const long double step = 2.0L * std::numbers::pi_v<long double> / static_cast<long double>(q);
  for (std::uint64_t j = 0; j < q; ++j) {
    long double a = step * static_cast<long double>(j);
    roots[j] = {static_cast<double>(std::cos(a)), static_cast<double>(std::sin(a))};
  }
  return roots;
}

std::complex<double> complete_sum(const ExponentPattern& pattern,
                                  std::span<const std::uint64_t> coeffs, std::uint64_t q) {
  if (q == 0) throw InvalidArgument("complete_sum: q = 0");
  if (coeffs.size() != pattern.size()) {
    throw InvalidArgument("complete_sum: coefficient count does not match the pattern");
  }
  auto roots = roots_of_unity(q);
  std::complex<double> sum = 0.0;
  for (std::uint64_t n = 0; n < q; ++n) {
    std::uint64_t phase = 0;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      std::uint64_t term = mul_mod(coeffs[i] % q, mod_pow(n, pattern.exponents()[i], q), q);
      phase = (phase + term) % q;
    }
    sum += roots[phase];
  }
  return sum;
}

double MagnitudeTable::magnitude(std::uint64_t a1, std::uint64_t b) const {
  a1 %= q_;
  b %= q_;
  if (a1 == 0) return b == 0 ? static_cast<double>(q_) : 0.0;
  return class_row(class_of(a1))[mul_mod(b, scale_of(a1), q_)];
}

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan p) const {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};
using Plan = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDeleter>;

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

Plan make_plan(std::size_t n, fftw_complex* in, fftw_complex* out) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  // FFTW_BACKWARD uses the e^{+i} kernel, matching T(a1, b).
  return Plan(fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_BACKWARD, FFTW_ESTIMATE));
}

}  // namespace

void dft_row(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
  const std::size_t n = in.size();
  if (out.size() != n) throw InvalidArgument("dft_row: size mismatch");
  FftwBuffer a(n), b(n);
  Plan plan = make_plan(n, a.data, b.data);
  for (std::size_t i = 0; i < n; ++i) {
    a.data[i][0] = in[i].real();
    a.data[i][1] = in[i].imag();
  }
  fftw_execute_dft(plan.get(), a.data, b.data);
  for (std::size_t i = 0; i < n; ++i) out[i] = {b.data[i][0], b.data[i][1]};
}

SumTable SumTable::build(unsigned k, std::uint64_t q, unsigned threads) {
  if (q < 3) throw InvalidArgument("sum_table: q must be at least 3");
  if (!is_prime(q)) throw InvalidArgument("sum_table: " + std::to_string(q) + " is not prime");
  if (k < 2) throw InvalidArgument("sum_table: k must be at least 2");
  SumTable table(k, q);
  table.magnitudes_.assign(q * q, 0.0);
  table.members_.resize(q - 1);
  for (std::uint64_t a = 1; a < q; ++a) table.members_[a - 1] = static_cast<std::uint32_t>(a);

  // row 0 is the geometric sum
  table.magnitudes_[0] = static_cast<double>(q);

  const auto roots = roots_of_unity(q);
  std::vector<std::uint64_t> powers(q);
  for (std::uint64_t m = 0; m < q; ++m) powers[m] = mod_pow(m, k, q);

  FftwBuffer probe_in(q), probe_out(q);
  Plan plan = make_plan(q, probe_in.data, probe_out.data);
  const unsigned workers = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(q - 1));
  parallel_for(workers, workers, [&](std::size_t w) {
    FftwBuffer in(q), out(q);
    std::uint64_t begin = 1 + (q - 1) * w / workers;
    std::uint64_t end = 1 + (q - 1) * (w + 1) / workers;
    for (std::uint64_t a1 = begin; a1 < end; ++a1) {
      for (std::uint64_t m = 0; m < q; ++m) {
        const auto& r = roots[mul_mod(a1, powers[m], q)];
        in.data[m][0] = r.real();
        in.data[m][1] = r.imag();
      }
      fftw_execute_dft(plan.get(), in.data, out.data);
      double* dst = table.magnitudes_.data() + a1 * q;
      for (std::uint64_t b = 0; b < q; ++b) dst[b] = std::hypot(out.data[b][0], out.data[b][1]);
    }
  });
  return table;
}

ParsevalReport parseval_check(const SumTable& table) {
  ParsevalReport r;
  r.q = table.q();
  r.k = table.k();
  long double sum = 0.0L;
  for (double v : table.magnitudes()) sum += static_cast<long double>(v) * v;
  r.sum = static_cast<double>(sum);
  r.expected = std::pow(static_cast<double>(r.q), 3.0);
  r.residual = std::abs(r.sum - r.expected) / r.expected;
  return r;
}

ParsevalReport parseval_check(unsigned k, std::uint64_t q) {
  return parseval_check(SumTable::build(k, q));
}

WeilReport weil_margin(const SumTable& table) {
  WeilReport r;
  r.q = table.q();
  r.k = table.k();
  r.applicable = r.q % r.k != 0;
  if (!r.applicable) {
    r.pass = true;
    return r;
  }
  const double scale = (r.k - 1) * std::sqrt(static_cast<double>(r.q));
  for (std::uint64_t a1 = 1; a1 < r.q; ++a1) {
    auto row = table.row(a1);
    for (std::uint64_t b = 0; b < r.q; ++b) {
      double ratio = row[b] / scale;
      if (ratio > r.max_ratio) {
        r.max_ratio = ratio;
        r.argmax_a1 = a1;
        r.argmax_b = b;
      }
    }
  }
  r.pass = r.max_ratio <= 1.0 + 1e-9;
  return r;
}

WeilReport weil_margin(unsigned k, std::uint64_t q) { return weil_margin(SumTable::build(k, q)); }

CensusReport census(const SumTable& table, double alpha1, double alpha2) {
  if (!(alpha1 > 0.0)) throw InvalidArgument("census: alpha1 must be positive");
  CensusReport r;
  r.q = table.q();
  r.k = table.k();
  r.alpha1 = alpha1;
  const bool default_alpha2 = alpha2 <= 0.0;
  r.alpha2 = default_alpha2 ? 0.25 / (static_cast<double>(r.k) * r.k) : alpha2;
  const double root = std::sqrt(static_cast<double>(r.q));
  const double threshold = alpha1 * root;
  for (double v : table.magnitudes()) {
    if (at_least(v, threshold)) ++r.count_large;
    auto bin = static_cast<std::size_t>(v / root / r.bin_width);
    if (bin >= r.histogram.size()) r.histogram.resize(bin + 1, 0);
    ++r.histogram[bin];
  }
  const std::uint64_t total = r.q * r.q;
  r.fraction = static_cast<double>(r.count_large) / static_cast<double>(total);
  if (default_alpha2) {
    // count >= q^2 / (4 k^2), in integers
    r.bound_satisfied = static_cast<uint128>(r.count_large) * 4 * r.k * r.k >=
                        static_cast<uint128>(total);
  } else {
    r.bound_satisfied = static_cast<double>(r.count_large) >= r.alpha2 * static_cast<double>(total);
  }
  return r;
}

CensusReport census(unsigned k, std::uint64_t q, double alpha1, double alpha2) {
  return census(SumTable::build(k, q), alpha1, alpha2);
}

IncompleteSumResult incomplete_sum(std::span<const std::int64_t> poly_coeffs, std::uint64_t q,
                                   std::uint64_t H) {
  if (poly_coeffs.size() < 2) throw InvalidArgument("incomplete_sum: polynomial must have degree >= 1");
  if (!is_prime(q)) throw InvalidArgument("incomplete_sum: q must be prime");
  if (H < 1 || H > q) throw InvalidArgument("incomplete_sum: need 1 <= H <= q");
  const std::uint64_t k = poly_coeffs.size() - 1;
  if (reduce_signed(poly_coeffs.back(), q) == 0) {
    throw ConstraintViolation("leading_coefficient", "q divides the leading coefficient");
  }
  if (k % q == 0) throw ConstraintViolation("degree_mod_q", "q divides the degree");
  std::vector<std::uint64_t> c(poly_coeffs.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = reduce_signed(poly_coeffs[i], q);
  const auto roots = roots_of_unity(q);
  std::complex<double> sum = 0.0;
  for (std::uint64_t n = 1; n <= H; ++n) {
    std::uint64_t v = 0;
    for (std::size_t i = c.size(); i-- > 0;) v = (mul_mod(v, n % q, q) + c[i]) % q;
    sum += roots[v];
  }
  IncompleteSumResult r;
  r.value = sum;
  r.ratio = std::abs(sum) / (std::sqrt(static_cast<double>(q)) * std::log(static_cast<double>(q)));
  return r;
}

RationalTopReport rational_top_sum(std::int64_t M, std::uint64_t N, std::uint64_t a1,
                                   std::uint64_t b, std::uint64_t q, double y, unsigned k,
                                   double audit_constant) {
  if (!is_prime(q)) throw InvalidArgument("rational_top_sum: q must be prime");
  if (a1 % q == 0) throw ConstraintViolation("top_coefficient", "q divides a1");
  if (a1 >= q) throw InvalidArgument("rational_top_sum: need 1 <= a1 < q");
  if (b < 1 || b > q) throw InvalidArgument("rational_top_sum: need 1 <= b <= q");
  if (N < 1) throw InvalidArgument("rational_top_sum: N must be positive");
  if (!std::isfinite(y)) throw InvalidArgument("rational_top_sum: y must be finite");

  RationalTopReport r;
  r.M = M;
  r.N = N;
  r.a1 = a1;
  r.b = b;
  r.q = q;
  r.k = k;
  r.y = y;
  r.V = std::abs(y - kTwoPi * static_cast<double>(b) / static_cast<double>(q));
  r.audit_constant = audit_constant;

  const auto roots = roots_of_unity(q);
  std::complex<long double> sum = 0.0L;
  const DoubleDouble ydd(y);
  for (std::uint64_t i = 1; i <= N; ++i) {
    const std::int64_t n = M + static_cast<std::int64_t>(i);
    const std::uint64_t top = mul_mod(a1, mod_pow(reduce_signed(n, q), k, q), q);
    const double lin = reduce_two_pi(ydd * static_cast<double>(n));
    const std::complex<double> term = roots[top] * std::polar(1.0, lin);
    sum += std::complex<long double>(term.real(), term.imag());
  }
  r.direct = {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};

  const std::uint64_t coeffs[] = {a1, b % q};
  const double T = std::abs(complete_sum(ExponentPattern::top_linear(k), coeffs, q));
  const double periods = std::floor(static_cast<double>(N) / static_cast<double>(q));
  r.main = periods * T;
  r.measured_error = std::abs(r.direct) - r.main;

  const double rq = std::sqrt(static_cast<double>(q));
  const double lq = std::log(static_cast<double>(q));
  r.budget_shape = static_cast<double>(N) * r.V * (periods * rq + rq * lq) + rq * lq;
  r.error_budget = audit_constant * r.budget_shape;
  r.pass = std::abs(r.measured_error) <= r.error_budget;
  return r;
}

RationalTopReport rational_top_sum(std::int64_t M, std::uint64_t N, std::uint64_t a1,
                                   std::uint64_t b, std::uint64_t q, double y, unsigned k) {
  return rational_top_sum(M, N, a1, b, q, y, k, audit::kRationalTop);
}

}  // namespace schrodk
