#pragma once

#include <stdexcept>
#include <string>

namespace skewfill {

/// Malformed text input (shape grids, filling grids, pattern tokens, catalog lines).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// An operation was called outside its domain (non-skew shape, filling not in the
/// required class, region not contained in the shape, ...).
class DomainError : public std::logic_error {
 public:
  explicit DomainError(const std::string& what) : std::logic_error(what) {}
};

/// A verification request exceeded the default enumeration budget without an override.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace skewfill
