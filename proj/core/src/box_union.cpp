// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#include "schrodk/box_union.hpp"

#include <algorithm>
#include <numeric>

#include "schrodk/error.hpp"

namespace schrodk {

namespace {

class CoverTree {
 public:
  explicit CoverTree(std::vector<double> xs) : xs_(std::move(xs)), cover_(4 * xs_.size()), len_(4 * xs_.size()) {}

  void update(std::size_t l, std::size_t r, int delta) {
    if (l < r) update(1, 0, xs_.size() - 1, l, r, delta);
  }
  double covered() const { return len_[1]; }

 private:
  // node spans elementary intervals [lo, hi) over xs_
  void update(std::size_t node, std::size_t lo, std::size_t hi, std::size_t l, std::size_t r, int delta) {
    if (r <= lo || hi <= l) return;
    if (l <= lo && hi <= r) {
      cover_[node] += delta;
    } else {
      const std::size_t mid = (lo + hi) / 2;
      update(2 * node, lo, mid, l, r, delta);
      update(2 * node + 1, mid, hi, l, r, delta);
    }
    if (cover_[node] > 0) {
      len_[node] = xs_[hi] - xs_[lo];
    } else if (hi - lo == 1) {
      len_[node] = 0.0;
    } else {
      len_[node] = len_[2 * node] + len_[2 * node + 1];
    }
  }

  std::vector<double> xs_;
  std::vector<int> cover_;
  std::vector<double> len_;
};

struct Event {
  double y;
  std::uint32_t l, r;
  int delta;
};

}  // namespace

double union_area(std::span<const Rect> rects) {
  std::vector<double> xs;
  xs.reserve(2 * rects.size());
  for (const Rect& r : rects) {
    if (!(r.x1 > r.x0) || !(r.y1 > r.y0)) continue;
    xs.push_back(r.x0);
    xs.push_back(r.x1);
  }
  if (xs.size() < 2) return 0.0;
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  auto index = [&](double x) {
    return static_cast<std::uint32_t>(std::lower_bound(xs.begin(), xs.end(), x) - xs.begin());
  };
  std::vector<Event> events;
  events.reserve(2 * rects.size());
  for (const Rect& r : rects) {
    if (!(r.x1 > r.x0) || !(r.y1 > r.y0)) continue;
    const auto l = index(r.x0), h = index(r.x1);
    events.push_back({r.y0, l, h, +1});
    events.push_back({r.y1, l, h, -1});
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return a.y < b.y || (a.y == b.y && a.delta > b.delta);
  });
  CoverTree tree(std::move(xs));
  long double area = 0.0L;
  double last_y = events.front().y;
  for (const Event& e : events) {
    area += static_cast<long double>(tree.covered()) * (e.y - last_y);
    last_y = e.y;
    tree.update(e.l, e.r, e.delta);
  }
  return static_cast<double>(area);
}

namespace {

double box_volume(const Cuboid& b, unsigned dim) {
  double v = 1.0;
  for (unsigned d = 0; d < dim; ++d) v *= std::max(0.0, b.hi[d] - b.lo[d]);
  return v;
}

bool overlap(const Cuboid& a, const Cuboid& b, unsigned dim) {
  for (unsigned d = 0; d < dim; ++d) {
    if (!(a.lo[d] < b.hi[d] && b.lo[d] < a.hi[d])) return false;
  }
  return true;
}

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
  std::vector<std::size_t> parent;
};

double component_volume(const std::vector<Cuboid>& boxes, unsigned dim) {
  if (boxes.size() == 1) return box_volume(boxes[0], dim);
  if (dim == 1) {
    std::vector<std::pair<double, double>> iv;
    for (const auto& b : boxes) iv.emplace_back(b.lo[0], b.hi[0]);
    std::sort(iv.begin(), iv.end());
    double total = 0.0, cur_lo = iv[0].first, cur_hi = iv[0].second;
    for (const auto& [lo, hi] : iv) {
      if (lo > cur_hi) {
        total += cur_hi - cur_lo;
        cur_lo = lo;
        cur_hi = hi;
      } else {
        cur_hi = std::max(cur_hi, hi);
      }
    }
    return total + (cur_hi - cur_lo);
  }
  if (dim == 2) {
    std::vector<Rect> rects;
    rects.reserve(boxes.size());
    for (const auto& b : boxes) rects.push_back({b.lo[0], b.hi[0], b.lo[1], b.hi[1]});
    return union_area(rects);
  }
  std::vector<double> cuts;
  for (const auto& b : boxes) {
    cuts.push_back(b.lo[0]);
    cuts.push_back(b.hi[0]);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  long double total = 0.0L;
  std::vector<Rect> slab;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    slab.clear();
    for (const auto& b : boxes) {
      if (b.lo[0] < mid && mid < b.hi[0]) slab.push_back({b.lo[1], b.hi[1], b.lo[2], b.hi[2]});
    }
    if (!slab.empty()) total += static_cast<long double>(union_area(slab)) * (cuts[i + 1] - cuts[i]);
  }
  return static_cast<double>(total);
}

}  // namespace

double union_volume(std::span<const Cuboid> boxes, unsigned dim) {
  if (dim < 1 || dim > 3) throw InvalidArgument("union_volume: dimension must be 1, 2 or 3");
  if (boxes.empty()) return 0.0;
  std::vector<std::size_t> order(boxes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return boxes[a].lo[0] < boxes[b].lo[0]; });
  DisjointSets sets(boxes.size());
  // sweep along axis 0 keeping boxes whose interval is still open
  std::vector<std::size_t> active;
  for (std::size_t idx : order) {
    const Cuboid& b = boxes[idx];
    std::erase_if(active, [&](std::size_t a) { return boxes[a].hi[0] <= b.lo[0]; });
    for (std::size_t a : active) {
      if (overlap(boxes[a], b, dim)) sets.unite(a, idx);
    }
    active.push_back(idx);
  }
  std::vector<std::vector<Cuboid>> groups;
  std::vector<std::ptrdiff_t> group_of(boxes.size(), -1);
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const std::size_t root = sets.find(i);
    if (group_of[root] < 0) {
      group_of[root] = static_cast<std::ptrdiff_t>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(group_of[root])].push_back(boxes[i]);
  }
  long double total = 0.0L;
  for (const auto& g : groups) total += component_volume(g, dim);
  return static_cast<double>(total);
}

}  // namespace schrodk
