#pragma once

#include <stdexcept>
#include <string>

namespace sigcomp {

// Malformed or out-of-range input: bad documents, indices, incompatible
// partitions, incomplete certificates. Maps to CLI exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// An exhaustive search would exceed its configured budget. Maps to CLI
// exit code 3; the report layer turns it into "skipped" verdicts instead.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sigcomp
