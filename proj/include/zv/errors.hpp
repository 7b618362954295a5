#pragma once

#include <stdexcept>
#include <string>

namespace zv {

// Malformed or contract-violating input (bad dimensions, non-canonical data,
// unmet preconditions).  CLI maps this to exit code 2.
class input_error : public std::runtime_error {
public:
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// A configured resource guard tripped (combinatorial size, dimension cap).
// CLI maps this to exit code 3.
class resource_error : public std::runtime_error {
public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// An internal exactness check failed.  Certificates are re-verified before
// being returned; this firing means a bug, never bad user input.
class internal_error : public std::logic_error {
public:
  explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

} // namespace zv
