#pragma once

#include <stdexcept>
#include <string>

namespace prfair {

// Error categories; the CLI maps them to exit codes
// (config=2, data=3, algorithm=4, internal=5).

/// Invalid parameters or option combinations.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (files, graphs, groups).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An algorithm cannot make progress (e.g. no legal rewiring exists).
class AlgorithmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Violated internal invariant; indicates a bug, not a user error.
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace prfair
