#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "latticeplan/factory_model.h"
#include "latticeplan/layout.h"
#include "latticeplan/scheduler.h"

namespace latticeplan {

/// Settings shared by every command. Unset fields fall back to the documented defaults.
struct RunConfig {
    std::optional<double> cycle_time_us;
    std::optional<double> reaction_time_us;
    std::optional<double> gate_error;
    std::optional<double> target_volume;
    std::optional<int> d1;
    std::optional<int> d2;
    std::optional<std::string> injection;  // overlapped | legacy
    std::optional<int> m;
    std::optional<std::int64_t> entries;
    std::optional<std::int64_t> output_bits;
    std::optional<std::int64_t> lookup_toffolis;
    std::optional<int> sides;
    std::optional<std::int64_t> factories;
    std::optional<std::string> mode;     // adder | lookup | timeline
    std::optional<std::string> pattern;  // adder | R_L_L_R
    std::optional<int> rows;
    std::optional<int> width;
    std::optional<int> stride;
    std::optional<std::string> out;

    /// Fields set in `overrides` replace ours.
    void merge(const RunConfig &overrides);
    /// Rejects out-of-range values and unknown enumerations with UsageError or the
    /// pipeline's own error type.
    void validate() const;

    PhysicalAssumptions assumptions() const;
    /// Uses d1/d2 when given, otherwise the distances selected for `target_volume` (default 1e8).
    FactorySpec factory_spec() const;
    LookupSpec lookup_spec() const;
    LayoutOptions layout_options() const;
};

inline constexpr double kDefaultTargetVolume = 1e8;

/// `key = value` lines; `#` starts a comment. Errors are UsageError prefixed "line N:".
RunConfig parse_config(std::string_view text);
/// IoError when the file cannot be read.
RunConfig load_config(const std::string &path);

}  // namespace latticeplan
