#pragma once

#include <stdexcept>
#include <string>

namespace ccfront {

// Level set X_nu is empty: the objective bound lies below the domain minimum.
struct infeasible_level : std::runtime_error {
  explicit infeasible_level(const std::string& what) : std::runtime_error(what) {}
};

// Malformed configuration (unknown key, bad type, missing problem, ...).
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Scenario initializer failed to reach a feasible point before the penalty cap.
struct init_failure : std::runtime_error {
  explicit init_failure(const std::string& what) : std::runtime_error(what) {}
};

// A capability the caller asked for is absent on this instance (e.g. no
// analytic risk oracle).
struct unsupported_capability : std::runtime_error {
  explicit unsupported_capability(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ccfront
