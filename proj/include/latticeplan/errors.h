#pragma once

#include <stdexcept>
#include <string>

namespace latticeplan {

/// Bad argument to an operation (out-of-range index, duplicate target, unknown name).
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A precondition on the shape of the input was violated (unresolved choice node,
/// unmeasured ancilla, non-classical gate handed to the reversible evaluator).
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

/// A guardrail on problem size was exceeded.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Physical error rate is at or above the surface code threshold.
struct ThresholdError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Malformed command line or config file.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace latticeplan
