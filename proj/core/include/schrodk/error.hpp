// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace schrodk {

// Bad argument that no configuration could fix (wrong sizes, non-prime q).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A named admissibility constraint failed. `constraint` is a stable
// identifier suitable for reports; what() carries the values involved.
class ConstraintViolation : public std::runtime_error {
 public:
  ConstraintViolation(std::string constraint, const std::string& detail)
      : std::runtime_error(constraint + ": " + detail),
        constraint_(std::move(constraint)) {}

  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string constraint_;
};

// The requested computation does not fit the chosen sizing (quadrature
// budget, box cap, precision range).
class SizingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace schrodk
