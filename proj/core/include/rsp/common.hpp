#pragma once

#include <stdexcept>
#include <string>

namespace rsp {

// Error taxonomy shared by all modules. The CLI maps these onto exit codes,
// so new error kinds should subclass one of the existing categories.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file (JSON case, CSV time series, config).
struct ParseError : Error {
  using Error::Error;
};

// Structurally readable input that violates a documented invariant.
struct ValidationError : Error {
  using Error::Error;
};

// Argument outside an operation's stated domain.
struct DomainError : Error {
  using Error::Error;
};

// Optimization failure that is not an expected model status (numerical
// breakdown, backend missing, size guard tripped).
struct SolverError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace rsp
