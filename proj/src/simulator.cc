#include "latticeplan/simulator.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "latticeplan/errors.h"

namespace latticeplan {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_gate_targets(std::size_t num_qubits, GateKind kind, std::span<const std::size_t> targets) {
    if (targets.size() != gate_arity(kind)) {
        throw ArgumentError(fmt::format("{} takes {} targets, got {}", gate_name(kind), gate_arity(kind),
                                        targets.size()));
    }
    for (std::size_t i = 0; i < targets.size(); i++) {
        if (targets[i] >= num_qubits) {
            throw ArgumentError(fmt::format("target {} out of range for {} qubits", targets[i], num_qubits));
        }
        for (std::size_t j = 0; j < i; j++) {
            if (targets[i] == targets[j]) {
                throw ArgumentError(fmt::format("duplicate target {}", targets[i]));
            }
        }
    }
}

void apply_raw(std::span<Complex> amps, GateKind kind, std::span<const std::size_t> t) {
    const std::size_t n = amps.size();
    switch (kind) {
        case GateKind::X: {
            std::size_t m = std::size_t{1} << t[0];
            for (std::size_t i = 0; i < n; i++) {
                if (!(i & m)) {
                    std::swap(amps[i], amps[i | m]);
                }
            }
            break;
        }
        case GateKind::Z: {
            std::size_t m = std::size_t{1} << t[0];
            for (std::size_t i = 0; i < n; i++) {
                if (i & m) {
                    amps[i] = -amps[i];
                }
            }
            break;
        }
        case GateKind::H: {
            std::size_t m = std::size_t{1} << t[0];
            for (std::size_t i = 0; i < n; i++) {
                if (!(i & m)) {
                    Complex a = amps[i];
                    Complex b = amps[i | m];
                    amps[i] = (a + b) * kInvSqrt2;
                    amps[i | m] = (a - b) * kInvSqrt2;
                }
            }
            break;
        }
        case GateKind::S: {
            std::size_t m = std::size_t{1} << t[0];
            for (std::size_t i = 0; i < n; i++) {
                if (i & m) {
                    amps[i] *= Complex{0, 1};
                }
            }
            break;
        }
        case GateKind::CX: {
            std::size_t c = std::size_t{1} << t[0];
            std::size_t m = std::size_t{1} << t[1];
            for (std::size_t i = 0; i < n; i++) {
                if ((i & c) && !(i & m)) {
                    std::swap(amps[i], amps[i | m]);
                }
            }
            break;
        }
        case GateKind::CZ: {
            std::size_t m = (std::size_t{1} << t[0]) | (std::size_t{1} << t[1]);
            for (std::size_t i = 0; i < n; i++) {
                if ((i & m) == m) {
                    amps[i] = -amps[i];
                }
            }
            break;
        }
        case GateKind::SWAP: {
            std::size_t a = std::size_t{1} << t[0];
            std::size_t b = std::size_t{1} << t[1];
            for (std::size_t i = 0; i < n; i++) {
                if ((i & a) && !(i & b)) {
                    std::swap(amps[i], amps[(i ^ a) | b]);
                }
            }
            break;
        }
        case GateKind::CCZ: {
            std::size_t m = (std::size_t{1} << t[0]) | (std::size_t{1} << t[1]) | (std::size_t{1} << t[2]);
            for (std::size_t i = 0; i < n; i++) {
                if ((i & m) == m) {
                    amps[i] = -amps[i];
                }
            }
            break;
        }
    }
}

/// Mutable walk state shared by branch enumeration and forced runs.
struct Walk {
    std::vector<Complex> amps;
    PauliFrame frame;
    std::vector<std::uint8_t> records;
    std::vector<std::optional<std::uint8_t>> measured;
};

Walk start_walk(const Circuit &circuit, const StateVector &input) {
    if (input.num_qubits() != circuit.num_qubits()) {
        throw ArgumentError(fmt::format("input has {} qubits but the circuit has {}", input.num_qubits(),
                                        circuit.num_qubits()));
    }
    Walk w;
    w.amps.assign(input.amplitudes().begin(), input.amplitudes().end());
    w.frame = PauliFrame(circuit.num_qubits());
    w.measured.assign(circuit.num_qubits(), std::nullopt);
    return w;
}

/// Applies a non-measurement step. Returns false for measurements, leaving them to the caller.
bool advance(Walk &w, const Step &step) {
    if (const auto *g = std::get_if<GateOp>(&step.op)) {
        if (g->control && !g->control->evaluate(w.records)) {
            return true;
        }
        apply_raw(w.amps, g->gate.kind, g->gate.targets);
        w.frame.conjugate_by(g->gate);
        for (auto q : g->gate.targets) {
            if (g->gate.kind != GateKind::Z && g->gate.kind != GateKind::CZ && g->gate.kind != GateKind::CCZ &&
                g->gate.kind != GateKind::S) {
                w.measured[q] = std::nullopt;
            }
        }
        return true;
    }
    if (const auto *f = std::get_if<FrameOp>(&step.op)) {
        if (f->condition.evaluate(w.records)) {
            w.frame.toggle(f->pauli, f->qubit);
        }
        return true;
    }
    return false;
}

Basis effective_basis(const MeasureOp &m, const Walk &w) {
    bool swap = m.swap_basis && m.swap_basis->evaluate(w.records);
    if (!swap) {
        return m.basis;
    }
    return m.basis == Basis::Z ? Basis::X : Basis::Z;
}

/// Rotates the measured qubit into the Z basis and validates the frame. Returns P(outcome 1).
double prepare_measurement(Walk &w, const MeasureOp &m, Basis basis) {
    auto q = m.qubit;
    bool anticommuting = basis == Basis::Z ? w.frame.x_bits[q] : w.frame.z_bits[q];
    if (anticommuting) {
        throw ContractError(fmt::format("qubit {} is measured while carrying a frame component that flips its outcome",
                                        q));
    }
    w.frame.x_bits[q] = 0;
    w.frame.z_bits[q] = 0;
    if (basis == Basis::X) {
        std::size_t t[] = {q};
        apply_raw(w.amps, GateKind::H, t);
    }
    std::size_t mask = std::size_t{1} << q;
    double p1 = 0;
    for (std::size_t i = 0; i < w.amps.size(); i++) {
        if (i & mask) {
            p1 += std::norm(w.amps[i]);
        }
    }
    return p1;
}

void project(Walk &w, std::size_t qubit, std::uint8_t outcome, double scale) {
    std::size_t mask = std::size_t{1} << qubit;
    for (std::size_t i = 0; i < w.amps.size(); i++) {
        bool bit = (i & mask) != 0;
        if (bit != (outcome != 0)) {
            w.amps[i] = 0;
        } else {
            w.amps[i] *= scale;
        }
    }
    // Destructive readout: the qubit is left in |outcome> in the computational basis.
    w.records.push_back(outcome);
    w.measured[qubit] = outcome;
}

void emit_impossible(const Walk &w, std::vector<std::uint8_t> prefix, std::size_t remaining,
                     std::vector<BranchOutcome> &out) {
    for (std::size_t suffix = 0; suffix < (std::size_t{1} << remaining); suffix++) {
        BranchOutcome b;
        b.outcome_bits = prefix;
        for (std::size_t k = 0; k < remaining; k++) {
            b.outcome_bits.push_back((suffix >> (remaining - 1 - k)) & 1);
        }
        b.probability = 0;
        b.final_frame = w.frame;
        b.measured = w.measured;
        out.push_back(std::move(b));
    }
}

void dfs(const Circuit &circuit, std::size_t step_index, Walk w, double probability,
         std::vector<BranchOutcome> &out) {
    const auto &steps = circuit.steps();
    for (; step_index < steps.size(); step_index++) {
        const auto &step = steps[step_index];
        if (advance(w, step)) {
            continue;
        }
        const auto &m = std::get<MeasureOp>(step.op);
        double p1 = prepare_measurement(w, m, effective_basis(m, w));
        std::size_t remaining = circuit.measurement_count() - w.records.size() - 1;
        for (std::uint8_t outcome = 0; outcome < 2; outcome++) {
            double p = outcome ? p1 : 1 - p1;
            if (probability * p < kZeroProbability) {
                auto prefix = w.records;
                prefix.push_back(outcome);
                emit_impossible(w, std::move(prefix), remaining, out);
                continue;
            }
            Walk child;
            if (outcome) {
                child = std::move(w);
            } else {
                child = w;
            }
            project(child, m.qubit, outcome, 1 / std::sqrt(p));
            dfs(circuit, step_index + 1, std::move(child), probability * p, out);
        }
        return;
    }
    BranchOutcome b;
    b.outcome_bits = std::move(w.records);
    b.probability = probability;
    b.final_state = StateVector::from_amplitudes(std::move(w.amps));
    b.final_frame = std::move(w.frame);
    b.measured = std::move(w.measured);
    out.push_back(std::move(b));
}

void apply_frame(std::vector<Complex> &amps, const PauliFrame &frame, std::span<const std::size_t> data_qubits) {
    for (std::size_t j = 0; j < data_qubits.size(); j++) {
        std::size_t t[] = {j};
        if (frame.z_bits[data_qubits[j]]) {
            apply_raw(amps, GateKind::Z, t);
        }
        if (frame.x_bits[data_qubits[j]]) {
            apply_raw(amps, GateKind::X, t);
        }
    }
}

}  // namespace

StateVector apply_gate(const StateVector &state, GateKind kind, std::span<const std::size_t> targets) {
    StateVector result = state;
    check_gate_targets(state.num_qubits(), kind, targets);
    apply_raw(result.mutable_amplitudes(), kind, targets);
    return result;
}

StateVector apply_gate(const StateVector &state, const GateSpec &gate) {
    return apply_gate(state, gate.kind, gate.targets);
}

void apply_gate_in_place(StateVector &state, const GateSpec &gate) {
    check_gate_targets(state.num_qubits(), gate.kind, gate.targets);
    apply_raw(state.mutable_amplitudes(), gate.kind, gate.targets);
}

StateVector prepare_input(const Circuit &circuit, std::span<const std::size_t> data_qubits, const StateVector &data) {
    if (data.num_qubits() != data_qubits.size()) {
        throw ArgumentError(fmt::format("data state has {} qubits but {} data qubits were named", data.num_qubits(),
                                        data_qubits.size()));
    }
    std::size_t n = circuit.num_qubits();
    std::vector<bool> is_data(n, false);
    for (auto q : data_qubits) {
        if (q >= n || is_data[q]) {
            throw ArgumentError(fmt::format("bad data qubit {}", q));
        }
        is_data[q] = true;
    }
    std::vector<std::size_t> plus_qubits;
    for (std::size_t q = 0; q < n; q++) {
        if (!is_data[q] && circuit.initial_states()[q] == InitialState::Plus) {
            plus_qubits.push_back(q);
        }
    }
    double plus_amp = std::pow(kInvSqrt2, static_cast<double>(plus_qubits.size()));
    std::vector<Complex> amps(std::size_t{1} << n, Complex{0, 0});
    for (std::size_t j = 0; j < data.size(); j++) {
        std::size_t base = 0;
        for (std::size_t k = 0; k < data_qubits.size(); k++) {
            if ((j >> k) & 1) {
                base |= std::size_t{1} << data_qubits[k];
            }
        }
        for (std::size_t s = 0; s < (std::size_t{1} << plus_qubits.size()); s++) {
            std::size_t index = base;
            for (std::size_t k = 0; k < plus_qubits.size(); k++) {
                if ((s >> k) & 1) {
                    index |= std::size_t{1} << plus_qubits[k];
                }
            }
            amps[index] = data[j] * plus_amp;
        }
    }
    return StateVector::from_amplitudes(std::move(amps));
}

StateVector random_state(std::size_t num_qubits, std::mt19937_64 &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Complex> amps(std::size_t{1} << num_qubits);
    double total = 0;
    for (auto &a : amps) {
        a = Complex{normal(rng), normal(rng)};
        total += std::norm(a);
    }
    double scale = 1 / std::sqrt(total);
    for (auto &a : amps) {
        a *= scale;
    }
    return StateVector::from_amplitudes(std::move(amps));
}

std::vector<BranchOutcome> enumerate_branches(const Circuit &circuit, const StateVector &input) {
    if (circuit.num_qubits() > kMaxQubits) {
        throw CapacityError(fmt::format("{} qubits exceeds the limit of {}", circuit.num_qubits(), kMaxQubits));
    }
    if (circuit.measurement_count() > kMaxMeasurements) {
        throw CapacityError(fmt::format("{} measurements exceeds the limit of {}", circuit.measurement_count(),
                                        kMaxMeasurements));
    }
    std::vector<BranchOutcome> out;
    out.reserve(std::size_t{1} << circuit.measurement_count());
    dfs(circuit, 0, start_walk(circuit, input), 1.0, out);
    return out;
}

ForcedRun run_forced_branch(const Circuit &circuit, const StateVector &input, std::span<const std::uint8_t> outcomes) {
    if (outcomes.size() != circuit.measurement_count()) {
        throw ArgumentError(fmt::format("{} outcomes given for {} measurements", outcomes.size(),
                                        circuit.measurement_count()));
    }
    Walk w = start_walk(circuit, input);
    for (const auto &step : circuit.steps()) {
        if (advance(w, step)) {
            continue;
        }
        const auto &m = std::get<MeasureOp>(step.op);
        prepare_measurement(w, m, effective_basis(m, w));
        project(w, m.qubit, outcomes[w.records.size()], 1.0);
    }
    return ForcedRun{std::move(w.amps), std::move(w.frame), std::move(w.measured)};
}

std::vector<Complex> restrict_to_data(std::span<const Complex> amps,
                                      std::span<const std::optional<std::uint8_t>> measured,
                                      std::span<const std::size_t> data_qubits) {
    std::size_t n = measured.size();
    std::vector<bool> is_data(n, false);
    for (auto q : data_qubits) {
        if (q >= n || is_data[q]) {
            throw ArgumentError(fmt::format("bad data qubit {}", q));
        }
        is_data[q] = true;
    }
    std::size_t base = 0;
    for (std::size_t q = 0; q < n; q++) {
        if (is_data[q]) {
            continue;
        }
        if (!measured[q]) {
            throw ContractError(fmt::format("non-data qubit {} is not measured out at the end of the branch", q));
        }
        if (*measured[q]) {
            base |= std::size_t{1} << q;
        }
    }
    std::vector<Complex> result(std::size_t{1} << data_qubits.size());
    for (std::size_t j = 0; j < result.size(); j++) {
        std::size_t index = base;
        for (std::size_t k = 0; k < data_qubits.size(); k++) {
            if ((j >> k) & 1) {
                index |= std::size_t{1} << data_qubits[k];
            }
        }
        result[j] = amps[index];
    }
    return result;
}

bool equal_up_to_global_phase(std::span<const Complex> a, std::span<const Complex> b, double tolerance) {
    if (a.size() != b.size()) {
        return false;
    }
    std::size_t k = 0;
    for (std::size_t i = 1; i < b.size(); i++) {
        if (std::abs(b[i]) > std::abs(b[k])) {
            k = i;
        }
    }
    if (b.empty() || std::abs(b[k]) <= tolerance) {
        return std::all_of(a.begin(), a.end(), [&](const Complex &x) { return std::abs(x) <= tolerance; });
    }
    Complex phase = a[k] / b[k];
    if (std::abs(std::abs(phase) - 1) > tolerance) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); i++) {
        if (std::abs(a[i] - phase * b[i]) > tolerance) {
            return false;
        }
    }
    return true;
}

StateVector frame_corrected_restriction(const BranchOutcome &branch, std::span<const std::size_t> data_qubits) {
    if (!branch.final_state) {
        throw ArgumentError("zero-probability branch has no final state");
    }
    auto amps = restrict_to_data(branch.final_state->amplitudes(), branch.measured, data_qubits);
    apply_frame(amps, branch.final_frame, data_qubits);
    return StateVector::from_amplitudes(std::move(amps));
}

ChannelCheck check_channel_mod_frame(std::span<const BranchOutcome> branches, const StateVector &data_input,
                                     std::span<const GateSpec> target, std::span<const std::size_t> data_qubits) {
    if (data_input.num_qubits() != data_qubits.size()) {
        throw ArgumentError("data input does not match the data qubit list");
    }
    StateVector expected = data_input;
    for (const auto &g : target) {
        apply_gate_in_place(expected, g);
    }
    ChannelCheck report;
    report.branches = branches.size();
    for (const auto &b : branches) {
        if (!b.final_state) {
            report.zero_probability_branches++;
            continue;
        }
        auto actual = frame_corrected_restriction(b, data_qubits);
        if (!equal_up_to_global_phase(actual.amplitudes(), expected.amplitudes())) {
            std::string bits;
            for (auto x : b.outcome_bits) {
                bits.push_back(x ? '1' : '0');
            }
            report.ok = false;
            report.failure = fmt::format("branch with outcomes '{}' differs from the target", bits);
            return report;
        }
    }
    return report;
}

bool channel_equals_unitary_mod_frame(std::span<const BranchOutcome> branches, const StateVector &data_input,
                                      std::span<const GateSpec> target, std::span<const std::size_t> data_qubits) {
    return check_channel_mod_frame(branches, data_input, target, data_qubits).ok;
}

std::string run_reversible(const Circuit &circuit, std::string_view bits) {
    if (bits.size() != circuit.num_qubits()) {
        throw ArgumentError(fmt::format("input has {} bits but the circuit has {} qubits", bits.size(),
                                        circuit.num_qubits()));
    }
    std::vector<std::uint8_t> v(bits.size());
    for (std::size_t i = 0; i < bits.size(); i++) {
        if (bits[i] != '0' && bits[i] != '1') {
            throw ArgumentError(fmt::format("bit string contains '{}'", bits[i]));
        }
        v[i] = bits[i] == '1';
    }
    const auto &steps = circuit.steps();
    for (std::size_t i = 0; i < steps.size(); i++) {
        const auto *g = std::get_if<GateOp>(&steps[i].op);
        if (!g || g->control) {
            throw ContractError(fmt::format("step {} is not an unconditional gate", i));
        }
        const auto &t = g->gate.targets;
        switch (g->gate.kind) {
            case GateKind::X:
                v[t[0]] ^= 1;
                break;
            case GateKind::CX:
                v[t[1]] ^= v[t[0]];
                break;
            case GateKind::SWAP:
                std::swap(v[t[0]], v[t[1]]);
                break;
            case GateKind::Z:
            case GateKind::S:
            case GateKind::CZ:
            case GateKind::CCZ:
                // Diagonal: basis states only pick up a phase.
                break;
            case GateKind::H: {
                auto plain_gate = [&](std::size_t k) -> const GateOp * {
                    if (k >= steps.size()) {
                        return nullptr;
                    }
                    const auto *op = std::get_if<GateOp>(&steps[k].op);
                    return op && !op->control ? op : nullptr;
                };
                const auto *mid = plain_gate(i + 1);
                const auto *close = plain_gate(i + 2);
                std::size_t target = t[0];
                if (!mid || !close || mid->gate.kind != GateKind::CCZ || close->gate.kind != GateKind::H ||
                    close->gate.targets[0] != target ||
                    std::find(mid->gate.targets.begin(), mid->gate.targets.end(), target) == mid->gate.targets.end()) {
                    throw ContractError(fmt::format("step {}: H is only classical as part of H t; CCZ; H t", i));
                }
                std::uint8_t controls = 1;
                for (auto q : mid->gate.targets) {
                    if (q != target) {
                        controls &= v[q];
                    }
                }
                v[target] ^= controls;
                i += 2;
                break;
            }
        }
    }
    std::string result(v.size(), '0');
    for (std::size_t i = 0; i < v.size(); i++) {
        result[i] = v[i] ? '1' : '0';
    }
    return result;
}

}  // namespace latticeplan
