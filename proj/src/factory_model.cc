#include "latticeplan/factory_model.h"

#include <cmath>

#include <fmt/format.h>

#include "latticeplan/errors.h"

namespace latticeplan {

namespace {

constexpr std::int64_t kPicosPerMicro = 1'000'000;

Rational picoseconds(double us, const char *what) {
    auto ps = std::llround(us * kPicosPerMicro);
    if (ps <= 0) {
        throw ArgumentError(fmt::format("{} must be positive, got {}", what, us));
    }
    return Rational(ps, kPicosPerMicro);
}

std::int64_t ceil_rational(const Rational &r) {
    auto q = r.numerator() / r.denominator();
    if (q * r.denominator() < r.numerator()) {
        q++;
    }
    return q;
}

}  // namespace

void PhysicalAssumptions::validate() const {
    if (!(cycle_time_us > 0)) {
        throw ArgumentError(fmt::format("cycle time must be positive, got {}", cycle_time_us));
    }
    if (!(reaction_time_us > 0)) {
        throw ArgumentError(fmt::format("reaction time must be positive, got {}", reaction_time_us));
    }
    if (!(gate_error > 0)) {
        throw ArgumentError(fmt::format("gate error must be positive, got {}", gate_error));
    }
    if (gate_error >= 0.01) {
        throw ThresholdError(fmt::format("gate error {} is too close to threshold for tractable computation",
                                         gate_error));
    }
}

Rational PhysicalAssumptions::cycle_time() const {
    return picoseconds(cycle_time_us, "cycle time");
}

Rational PhysicalAssumptions::reaction_time() const {
    return picoseconds(reaction_time_us, "reaction time");
}

void FactorySpec::validate() const {
    for (int d : {d1, d2}) {
        if (d < 3 || d % 2 == 0) {
            throw ArgumentError(fmt::format("code distances must be odd and at least 3, got {}", d));
        }
    }
}

Rational FactorySpec::ccz_depth_cycles() const {
    return injection == InjectionStyle::Overlapped ? Rational(5 * d2) : Rational(11 * d2, 2);
}

Rational FactorySpec::t1_depth_cycles(bool legacy) const {
    return legacy ? Rational(25 * d1, 4) : Rational(23 * d1, 4);
}

std::string limiting_factor_name(LimitingFactor f) {
    return f == LimitingFactor::Level1 ? "level1" : "level2";
}

ThroughputReport ccz_rate(const FactorySpec &spec, const PhysicalAssumptions &assumptions) {
    spec.validate();
    assumptions.validate();
    Rational cycle = assumptions.cycle_time();
    ThroughputReport r;
    // 1 / microseconds is MHz; scale by 1000 for kHz.
    r.level2_rate_khz = Rational(1000) / (spec.ccz_depth_cycles() * cycle);
    r.level1_bound_khz = Rational(1000) / (spec.t1_depth_cycles() * cycle *
                                           Rational(FactorySpec::kTStatesPerCcz, FactorySpec::kT1FactoryCount));
    if (r.level2_rate_khz <= r.level1_bound_khz) {
        r.effective_rate_khz = r.level2_rate_khz;
        r.limiting_factor = LimitingFactor::Level2;
    } else {
        r.effective_rate_khz = r.level1_bound_khz;
        r.limiting_factor = LimitingFactor::Level1;
    }
    Rational demand_khz = Rational(1000) / assumptions.reaction_time();
    r.factories_needed = std::max<std::int64_t>(1, ceil_rational(demand_khz / r.effective_rate_khz));
    r.physical_qubits_total = physical_qubits(spec, r.factories_needed);
    return r;
}

std::int64_t factories_for_reaction_limit(const FactorySpec &spec, const PhysicalAssumptions &assumptions) {
    return ccz_rate(spec, assumptions).factories_needed;
}

std::int64_t qubits_per_patch(int d) {
    return 2 * std::int64_t(d + 1) * (d + 1);
}

std::int64_t physical_qubits(const FactorySpec &spec, std::int64_t n_factories) {
    spec.validate();
    if (n_factories < 1) {
        throw ArgumentError(fmt::format("need at least one factory, got {}", n_factories));
    }
    return n_factories * FactorySpec::kFootprintPatches * qubits_per_patch(spec.d2);
}

double ErrorModel::logical_error(double gate_error, int d) const {
    return prefactor * std::pow(gate_error / threshold, (d + 1) / 2.0);
}

DistanceSelection select_code_distances(const PhysicalAssumptions &assumptions, double target_volume,
                                        const ErrorModel &model) {
    assumptions.validate();
    if (!(target_volume >= 1)) {
        throw ArgumentError(fmt::format("target volume must be at least 1, got {}", target_volume));
    }
    if (assumptions.gate_error >= model.threshold) {
        throw ThresholdError(fmt::format("gate error {} is too close to threshold for tractable computation",
                                         assumptions.gate_error));
    }
    constexpr int kMaxDistance = 999;
    DistanceSelection s{0, 0, target_volume > model.t_factory_fallback_volume};
    for (int d = 3; d <= kMaxDistance; d += 2) {
        if (target_volume * model.ccz_volume * model.logical_error(assumptions.gate_error, d) < model.budget) {
            s.d2 = d;
            break;
        }
    }
    if (s.d2 == 0) {
        throw CapacityError("no code distance up to 999 meets the error budget");
    }
    double level1_target =
        model.level1_margin * std::pow(model.logical_error(assumptions.gate_error, s.d2), model.level1_exponent);
    for (int d = 3; d <= s.d2; d += 2) {
        if (model.logical_error(assumptions.gate_error, d) <= level1_target) {
            s.d1 = d;
            break;
        }
    }
    if (s.d1 == 0) {
        s.d1 = s.d2;
    }
    return s;
}

double to_double(const Rational &r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::string format_sig2(double value) {
    if (value == 0 || !std::isfinite(value)) {
        return fmt::format("{}", value);
    }
    int magnitude = static_cast<int>(std::floor(std::log10(std::abs(value))));
    int decimals = std::max(0, 1 - magnitude);
    double scale = std::pow(10.0, 1 - magnitude);
    double rounded = std::round(value * scale) / scale;
    return fmt::format("{:.{}f}", rounded, decimals);
}

}  // namespace latticeplan
