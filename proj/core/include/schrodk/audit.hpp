// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Frozen audit constants. Each is the maximum of the corresponding ratio
// over the calibration grid in tools/calibrate.cpp, times a headroom
// factor. Reports echo the constant they used.

namespace schrodk::audit {

inline constexpr double kHeadroom = 1.5;

// max |S(H)| / (sqrt(q) log q) for incomplete sums of degree k <= 5
inline constexpr double kIncompleteSum = 1.09;

// max | |direct| - floor(N/q)|T| | / (N V (floor(N/q) sqrt q + sqrt q log q) + sqrt q log q)
inline constexpr double kRationalTop = 0.391;

// max | |S_j| - floor(rho/q)|T| | / ((c5 + Q^{-Delta0/2}) R/(L Q^{1/2})), n = 2
inline constexpr double kLowerBoundE2 = 1.26;

// max | |T_t f| - |main factor| | / ((c1 + c2 delta0) (R/(L Q^{1/2}))^{n-1})
inline constexpr double kReductionE1 = 7.3e-4;

// max over built systems of (ordered intersecting pairs) / (boxes)
inline constexpr double kOverlapC1 = 1.51;

}  // namespace schrodk::audit
