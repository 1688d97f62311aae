#pragma once

#include <string>
#include <string_view>

#include "latticeplan/circuit.h"

namespace latticeplan {

/// Line-oriented circuit format, one operation per line:
///
///     QUBITS 4
///     INIT + 2 3
///     CZ 2 3
///     CX 0 2 @consumption
///     M 2
///     MZX 3 if m0
///     FRAME_Z 0 if m0 ^ m1&m2
///
/// Blank lines and text after '#' are ignored. See README for the full grammar.
Circuit parse_circuit(std::string_view text);
std::string format_circuit(const Circuit &circuit);

Condition parse_condition(std::string_view text);
std::string format_condition(const Condition &condition);

}  // namespace latticeplan
