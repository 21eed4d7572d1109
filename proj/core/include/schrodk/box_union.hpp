// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace schrodk {

struct Rect {
  double x0, x1, y0, y1;
};

// Axis-aligned box in up to three dimensions; unused axes are ignored.
struct Cuboid {
  std::array<double, 3> lo{};
  std::array<double, 3> hi{};
};

// Area of a union of rectangles: sweep in y, segment tree over x.
double union_area(std::span<const Rect> rects);

// Volume of a union of boxes in dimension 1, 2 or 3. Boxes are first split
// into overlap components; singletons contribute their own volume and
// larger components are cut into slabs along axis 0.
double union_volume(std::span<const Cuboid> boxes, unsigned dim);

}  // namespace schrodk
