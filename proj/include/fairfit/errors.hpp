#pragma once

#include <stdexcept>
#include <string>

namespace fairfit {

// Schema / usage problems: bad roles, unknown columns, malformed input files,
// incompatible estimator-family combinations. CLI maps these to exit code 2.
struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

// Cell-level parse failures while reading tabular data.
struct ParseError : SchemaError {
  explicit ParseError(const std::string& msg) : SchemaError(msg) {}
};

// Numerical failures: non-convergence, domain violations, infeasible bounds.
// CLI maps these to exit code 3.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// A fairness evaluator violated its contract (missing "value", non-finite,
// or far outside [0, 1]).
struct ContractError : std::runtime_error {
  explicit ContractError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fairfit
