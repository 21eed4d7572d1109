// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#include "schrodk/bump.hpp"

#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <iostream>
#include <numbers>

#include "schrodk/error.hpp"

namespace schrodk {

namespace {

constexpr double kPsiRadius = 0.25;
constexpr unsigned kPsiNodes = 4096;  // trapezoid nodes across the psi support

double psi_shape(double xi) {
  const double s = 16.0 * xi * xi;
  if (s >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s));
}

// Four-point Lagrange interpolation on a uniform grid starting at x0.
double interpolate(const std::vector<double>& v, double x0, double h, double x) {
  const double u = (x - x0) / h;
  if (u < 0.0 || u > static_cast<double>(v.size() - 1)) return 0.0;
  auto i = static_cast<std::ptrdiff_t>(std::floor(u));
  const auto last = static_cast<std::ptrdiff_t>(v.size()) - 1;
  if (i == last) return v[static_cast<std::size_t>(last)];
  const double t = u - static_cast<double>(i);
  auto at = [&](std::ptrdiff_t j) {
    return (j < 0 || j > last) ? 0.0 : v[static_cast<std::size_t>(j)];
  };
  const double p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
  return p1 + t * (-p0 / 3.0 - p1 / 2.0 + p2 - p3 / 6.0) +
         t * t * (p0 / 2.0 - p1 + p2 / 2.0) + t * t * t * (-p0 / 6.0 + p1 / 2.0 - p2 / 2.0 + p3 / 6.0);
}

constexpr char kMagic[8] = {'S', 'C', 'H', 'B', 'U', 'M', 'P', '\0'};
constexpr std::uint32_t kCacheVersion = 1;

std::uint64_t fnv1a(const std::vector<double>& v) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto* p = reinterpret_cast<const unsigned char*>(v.data());
  for (std::size_t i = 0; i < v.size() * sizeof(double); ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

BumpProfile BumpProfile::build(unsigned resolution, double range) {
  if (resolution < 256) throw InvalidArgument("build_bump: resolution must be at least 256");
  if (!(range >= 1.0)) throw InvalidArgument("build_bump: range must be at least 1");

  // psi on trapezoid nodes; the endpoints vanish to all orders
  const double h = 2.0 * kPsiRadius / kPsiNodes;
  std::vector<double> nodes(kPsiNodes + 1), psi(kPsiNodes + 1);
  double mass = 0.0;
  for (unsigned j = 0; j <= kPsiNodes; ++j) {
    nodes[j] = -kPsiRadius + j * h;
    psi[j] = psi_shape(nodes[j]);
    mass += psi[j];
  }
  mass *= h;
  if (mass < 1e-3) throw InvalidArgument("build_bump: degenerate normalization integral");
  const double c = 2.0 * std::numbers::pi / mass;
  for (double& v : psi) v *= c;

  BumpProfile p;
  p.resolution_ = resolution;
  p.range_ = range;
  p.phi_hat_support_ = 2.0 * kPsiRadius;

  const auto half = static_cast<std::size_t>(std::llround(range * resolution));
  p.phi_.assign(2 * half + 1, 0.0);
  for (std::size_t i = 0; i <= half; ++i) {
    const double x = static_cast<double>(i) / resolution;
    // sum psi_j cos(x xi_j), rotating e^{i x h} from the left endpoint
    const std::complex<double> step = std::polar(1.0, x * h);
    std::complex<double> z = std::polar(1.0, x * nodes[0]);
    double acc = 0.0;
    for (unsigned j = 0; j <= kPsiNodes; ++j) {
      if ((j & 255U) == 0) z = std::polar(1.0, x * nodes[j]);
      acc += psi[j] * z.real();
      z *= step;
    }
    const double check = acc * h / (2.0 * std::numbers::pi);
    p.phi_[half + i] = check * check;
    p.phi_[half - i] = check * check;
  }

  const auto hat_half = static_cast<std::size_t>(resolution);
  p.phi_hat_.assign(2 * hat_half + 1, 0.0);
  for (std::size_t i = 0; i <= hat_half; ++i) {
    const double xi = static_cast<double>(i) / resolution;
    if (xi >= 2.0 * kPsiRadius) break;
    // (2 pi)^{-1} int psi(eta) psi(eta - xi) d eta over the overlap
    const double lo = xi - kPsiRadius, hi = kPsiRadius;
    const double w = (hi - lo) / kPsiNodes;
    double acc = 0.0;
    for (unsigned j = 1; j < kPsiNodes; ++j) {
      const double eta = lo + j * w;
      acc += psi_shape(eta) * psi_shape(eta - xi);
    }
    const double value = c * c * acc * w / (2.0 * std::numbers::pi);
    p.phi_hat_[hat_half + i] = value;
    p.phi_hat_[hat_half - i] = value;
  }
  p.compute_norms();
  return p;
}

BumpProfile BumpProfile::from_samples(unsigned resolution, double range, std::vector<double> phi,
                                      std::vector<double> phi_hat, double phi_hat_support) {
  const auto half = static_cast<std::size_t>(std::llround(range * resolution));
  if (resolution == 0 || phi.size() != 2 * half + 1 || phi_hat.size() != 2 * std::size_t{resolution} + 1) {
    throw InvalidArgument("BumpProfile::from_samples: table sizes do not match the grid");
  }
  BumpProfile p;
  p.resolution_ = resolution;
  p.range_ = range;
  p.phi_hat_support_ = phi_hat_support;
  p.phi_ = std::move(phi);
  p.phi_hat_ = std::move(phi_hat);
  p.compute_norms();
  return p;
}

void BumpProfile::compute_norms() {
  const double h = 1.0 / resolution_;
  auto trapezoid = [h](const std::vector<double>& v, auto&& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double w = (i == 0 || i + 1 == v.size()) ? 0.5 : 1.0;
      s += w * g(v[i]);
    }
    return s * h;
  };
  l2_phi_ = std::sqrt(trapezoid(phi_, [](double v) { return v * v; }));
  l1_phi_hat_ = trapezoid(phi_hat_, [](double v) { return std::abs(v); });
  l2_phi_hat_ = std::sqrt(trapezoid(phi_hat_, [](double v) { return v * v; }));
  tail_max_ = 0.0;
  for (std::size_t i = 0; i <= resolution_ && i < phi_.size(); ++i) {
    tail_max_ = std::max({tail_max_, std::abs(phi_[i]), std::abs(phi_[phi_.size() - 1 - i])});
  }
}

double BumpProfile::phi(double x) const {
  return interpolate(phi_, -range_, 1.0 / resolution_, x);
}

double BumpProfile::phi_hat(double xi) const {
  if (std::abs(xi) >= phi_hat_support_) return 0.0;
  return interpolate(phi_hat_, -1.0, 1.0 / resolution_, xi);
}

void BumpProfile::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("BumpProfile::save: cannot open " + path);
  const std::uint64_t n_phi = phi_.size(), n_hat = phi_hat_.size();
  const std::uint64_t sum_phi = fnv1a(phi_), sum_hat = fnv1a(phi_hat_);
  out.write(kMagic, sizeof(kMagic));
  out.write(reinterpret_cast<const char*>(&kCacheVersion), sizeof(kCacheVersion));
  out.write(reinterpret_cast<const char*>(&resolution_), sizeof(resolution_));
  out.write(reinterpret_cast<const char*>(&range_), sizeof(range_));
  out.write(reinterpret_cast<const char*>(&phi_hat_support_), sizeof(phi_hat_support_));
  out.write(reinterpret_cast<const char*>(&n_phi), sizeof(n_phi));
  out.write(reinterpret_cast<const char*>(&n_hat), sizeof(n_hat));
  out.write(reinterpret_cast<const char*>(&sum_phi), sizeof(sum_phi));
  out.write(reinterpret_cast<const char*>(&sum_hat), sizeof(sum_hat));
  out.write(reinterpret_cast<const char*>(phi_.data()), static_cast<std::streamsize>(n_phi * sizeof(double)));
  out.write(reinterpret_cast<const char*>(phi_hat_.data()), static_cast<std::streamsize>(n_hat * sizeof(double)));
  if (!out) throw InvalidArgument("BumpProfile::save: write failed for " + path);
}

BumpProfile BumpProfile::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("BumpProfile::load: cannot open " + path);
  char magic[8];
  std::uint32_t version = 0, resolution = 0;
  double range = 0.0, support = 0.0;
  std::uint64_t n_phi = 0, n_hat = 0, sum_phi = 0, sum_hat = 0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw InvalidArgument("BumpProfile::load: not a bump cache file");
  }
  if (version != kCacheVersion) throw InvalidArgument("BumpProfile::load: unsupported cache version");
  in.read(reinterpret_cast<char*>(&resolution), sizeof(resolution));
  in.read(reinterpret_cast<char*>(&range), sizeof(range));
  in.read(reinterpret_cast<char*>(&support), sizeof(support));
  in.read(reinterpret_cast<char*>(&n_phi), sizeof(n_phi));
  in.read(reinterpret_cast<char*>(&n_hat), sizeof(n_hat));
  in.read(reinterpret_cast<char*>(&sum_phi), sizeof(sum_phi));
  in.read(reinterpret_cast<char*>(&sum_hat), sizeof(sum_hat));
  if (!in || n_phi > (1ULL << 28) || n_hat > (1ULL << 28)) {
    throw InvalidArgument("BumpProfile::load: truncated header");
  }
  std::vector<double> phi(n_phi), hat(n_hat);
  in.read(reinterpret_cast<char*>(phi.data()), static_cast<std::streamsize>(n_phi * sizeof(double)));
  in.read(reinterpret_cast<char*>(hat.data()), static_cast<std::streamsize>(n_hat * sizeof(double)));
  if (!in) throw InvalidArgument("BumpProfile::load: truncated payload");
  if (fnv1a(phi) != sum_phi || fnv1a(hat) != sum_hat) {
    throw InvalidArgument("BumpProfile::load: checksum mismatch");
  }
  return from_samples(resolution, range, std::move(phi), std::move(hat), support);
}

double delta0_for(double c0, const BumpProfile& profile) {
  if (!(c0 > 0.0 && c0 < 0.5)) throw InvalidArgument("delta0_for: need 0 < c0 < 1/2");
  const double floor_value = 1.0 - c0 / 2.0;
  const double h = 1.0 / profile.resolution();
  double delta = 0.0;
  for (unsigned i = 1;; ++i) {
    const double y = i * h;
    if (y >= 0.5) break;
    if (profile.phi(y) < floor_value || profile.phi(-y) < floor_value) break;
    delta = y;
  }
  if (delta == 0.0) std::clog << "warning: delta0_for found no positive delta0\n";
  return delta;
}

}  // namespace schrodk
