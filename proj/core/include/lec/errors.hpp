/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The lec authors
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lec {

/// Raised when an operation is applied outside its mathematical domain
/// (division by zero, negative square root, malformed region, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Exact evaluation hit a zero denominator.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A coefficient formula degenerates at the requested point. `quantity()`
/// names the vanishing quantity (e.g. "delta1", "mu_r").
class DegeneratePointError : public DomainError {
 public:
  DegeneratePointError(std::string quantity, const std::string& what)
      : DomainError(what), quantity_(std::move(quantity)) {}
  const std::string& quantity() const noexcept { return quantity_; }

 private:
  std::string quantity_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Internal consistency check failed (e.g. a symbolic reassembly identity).
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace lec
