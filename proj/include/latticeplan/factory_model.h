#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace latticeplan {

using Rational = boost::rational<std::int64_t>;

enum class Connectivity { Planar };

/// Times in microseconds.
struct PhysicalAssumptions {
    double cycle_time_us = 1.0;
    double reaction_time_us = 10.0;
    double gate_error = 1e-3;
    Connectivity connectivity = Connectivity::Planar;

    /// ArgumentError for non-positive values, ThresholdError for gate_error >= 1%.
    void validate() const;
    /// Exact values at picosecond resolution.
    Rational cycle_time() const;
    Rational reaction_time() const;
};

enum class InjectionStyle { Legacy, Overlapped };

struct FactorySpec {
    int d1 = 17;
    int d2 = 27;
    InjectionStyle injection = InjectionStyle::Overlapped;

    static constexpr int kT1FactoryCount = 6;
    static constexpr int kTStatesPerCcz = 8;
    static constexpr int kFootprintWidth = 15;
    static constexpr int kFootprintHeight = 8;
    static constexpr int kFootprintPatches = kFootprintWidth * kFootprintHeight;

    /// ArgumentError unless d1 and d2 are odd and at least 3.
    void validate() const;
    /// 5 d2 overlapped, 5.5 d2 legacy.
    Rational ccz_depth_cycles() const;
    /// 5.75 d1; the earlier layout needed 6.25 d1.
    Rational t1_depth_cycles(bool legacy = false) const;
};

enum class LimitingFactor { Level1, Level2 };
std::string limiting_factor_name(LimitingFactor f);

struct ThroughputReport {
    Rational level2_rate_khz;
    Rational level1_bound_khz;
    Rational effective_rate_khz;
    LimitingFactor limiting_factor = LimitingFactor::Level2;
    std::int64_t factories_needed = 0;
    std::int64_t physical_qubits_total = 0;
};

ThroughputReport ccz_rate(const FactorySpec &spec, const PhysicalAssumptions &assumptions);
std::int64_t factories_for_reaction_limit(const FactorySpec &spec, const PhysicalAssumptions &assumptions);

std::int64_t qubits_per_patch(int d);
std::int64_t physical_qubits(const FactorySpec &spec, std::int64_t n_factories);

/// Surface-code logical error fit used for distance selection.
struct ErrorModel {
    double prefactor = 0.1;
    double threshold = 0.01;
    /// Allowed total logical error over the whole computation.
    double budget = 0.01;
    /// Level-2 spacetime volume per CCZ state, in patch x d-cycle units.
    double ccz_volume = 12000;
    /// Level-1 T states must satisfy p_L(d1) <= level1_margin * p_L(d2)^level1_exponent.
    double level1_margin = 0.01;
    double level1_exponent = 0.5;
    /// Above this many Toffolis the CCZ factory output is advised against.
    double t_factory_fallback_volume = 1e13;

    /// Per patch per d cycles.
    double logical_error(double gate_error, int d) const;
};

struct DistanceSelection {
    int d1;
    int d2;
    bool t_factory_fallback = false;
};

DistanceSelection select_code_distances(const PhysicalAssumptions &assumptions, double target_volume,
                                        const ErrorModel &model = {});

/// Rounds to two significant digits for display, e.g. 7.407 -> "7.4", 74.07 -> "74".
std::string format_sig2(double value);
double to_double(const Rational &r);

/// Quoted overall qubit figure, kept for comparison only.
inline constexpr std::int64_t kQuotedTotalQubits = 5'000'000;

}  // namespace latticeplan
