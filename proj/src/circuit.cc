#include "latticeplan/circuit.h"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "latticeplan/errors.h"

namespace latticeplan {

StateVector::StateVector(std::size_t num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits > kMaxQubits) {
        throw CapacityError(fmt::format("{} qubits exceeds the dense simulation limit of {}", num_qubits, kMaxQubits));
    }
    amplitudes_.assign(std::size_t{1} << num_qubits, Complex{0, 0});
    amplitudes_[0] = 1;
}

StateVector::StateVector(std::size_t num_qubits, std::vector<Complex> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {}

StateVector StateVector::basis(std::size_t num_qubits, std::uint64_t index) {
    StateVector result(num_qubits);
    if (index >= result.size()) {
        throw ArgumentError(fmt::format("basis index {} out of range for {} qubits", index, num_qubits));
    }
    result.amplitudes_[0] = 0;
    result.amplitudes_[index] = 1;
    return result;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
    std::size_t n = 0;
    while ((std::size_t{1} << n) < amplitudes.size()) {
        n++;
    }
    if (amplitudes.empty() || (std::size_t{1} << n) != amplitudes.size()) {
        throw ArgumentError("amplitude count must be a power of two");
    }
    if (n > kMaxQubits) {
        throw CapacityError(fmt::format("{} qubits exceeds the dense simulation limit of {}", n, kMaxQubits));
    }
    StateVector result(n, std::move(amplitudes));
    if (std::abs(result.norm_squared() - 1) > 1e-10) {
        throw ArgumentError("state is not normalized");
    }
    return result;
}

double StateVector::norm_squared() const {
    double total = 0;
    for (const auto &a : amplitudes_) {
        total += std::norm(a);
    }
    return total;
}

std::size_t gate_arity(GateKind kind) {
    switch (kind) {
        case GateKind::X:
        case GateKind::Z:
        case GateKind::H:
        case GateKind::S:
            return 1;
        case GateKind::CX:
        case GateKind::CZ:
        case GateKind::SWAP:
            return 2;
        case GateKind::CCZ:
            return 3;
    }
    return 0;
}

std::string_view gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::X:
            return "X";
        case GateKind::Z:
            return "Z";
        case GateKind::H:
            return "H";
        case GateKind::S:
            return "S";
        case GateKind::CX:
            return "CX";
        case GateKind::CZ:
            return "CZ";
        case GateKind::SWAP:
            return "SWAP";
        case GateKind::CCZ:
            return "CCZ";
    }
    return "?";
}

std::optional<GateKind> parse_gate_name(std::string_view name) {
    for (auto kind : {GateKind::X, GateKind::Z, GateKind::H, GateKind::S, GateKind::CX, GateKind::CZ, GateKind::SWAP,
                      GateKind::CCZ}) {
        if (gate_name(kind) == name) {
            return kind;
        }
    }
    return std::nullopt;
}

Condition::Condition(std::vector<Monomial> monomials) {
    // Canonicalize: sort each monomial, drop repeated factors (x & x = x), cancel pairs.
    std::set<Monomial> odd;
    for (auto &m : monomials) {
        std::sort(m.begin(), m.end());
        m.erase(std::unique(m.begin(), m.end()), m.end());
        if (!odd.insert(m).second) {
            odd.erase(m);
        }
    }
    monomials_.assign(odd.begin(), odd.end());
}

Condition Condition::constant(bool value) {
    return value ? Condition(std::vector<Monomial>{Monomial{}}) : Condition();
}

Condition Condition::record(std::size_t index) {
    return Condition(std::vector<Monomial>{Monomial{index}});
}

Condition Condition::select(const Condition &selector, const Condition &if_false, const Condition &if_true) {
    return if_false ^ (selector & (if_false ^ if_true));
}

Condition Condition::operator^(const Condition &other) const {
    std::vector<Monomial> all = monomials_;
    all.insert(all.end(), other.monomials_.begin(), other.monomials_.end());
    return Condition(std::move(all));
}

Condition Condition::operator&(const Condition &other) const {
    std::vector<Monomial> all;
    for (const auto &a : monomials_) {
        for (const auto &b : other.monomials_) {
            Monomial m = a;
            m.insert(m.end(), b.begin(), b.end());
            all.push_back(std::move(m));
        }
    }
    return Condition(std::move(all));
}

bool Condition::evaluate(std::span<const std::uint8_t> records) const {
    bool result = false;
    for (const auto &m : monomials_) {
        bool term = true;
        for (auto k : m) {
            if (k >= records.size()) {
                throw ContractError(fmt::format("condition reads record m{} before it exists", k));
            }
            term = term && records[k];
        }
        result ^= term;
    }
    return result;
}

std::optional<std::size_t> Condition::max_record() const {
    std::optional<std::size_t> result;
    for (const auto &m : monomials_) {
        for (auto k : m) {
            if (!result || k > *result) {
                result = k;
            }
        }
    }
    return result;
}

Condition Condition::shifted(std::size_t offset) const {
    std::vector<Monomial> all = monomials_;
    for (auto &m : all) {
        for (auto &k : m) {
            k += offset;
        }
    }
    return Condition(std::move(all));
}

std::string_view site_name(Site site) {
    switch (site) {
        case Site::Unspecified:
            return "unspecified";
        case Site::Creation:
            return "creation";
        case Site::Consumption:
            return "consumption";
        case Site::Fixup:
            return "fixup";
    }
    return "?";
}

std::optional<Site> parse_site_name(std::string_view name) {
    for (auto site : {Site::Unspecified, Site::Creation, Site::Consumption, Site::Fixup}) {
        if (site_name(site) == name) {
            return site;
        }
    }
    return std::nullopt;
}

Circuit::Circuit(std::size_t num_qubits) : Circuit(num_qubits, std::vector<InitialState>(num_qubits, InitialState::Zero)) {}

Circuit::Circuit(std::size_t num_qubits, std::vector<InitialState> initial_states)
    : num_qubits_(num_qubits), initial_states_(std::move(initial_states)) {
    if (num_qubits > kMaxQubits) {
        throw CapacityError(fmt::format("{} qubits exceeds the dense simulation limit of {}", num_qubits, kMaxQubits));
    }
    if (initial_states_.size() != num_qubits) {
        throw ArgumentError("one initial state per qubit is required");
    }
}

void Circuit::set_initial_state(std::size_t qubit, InitialState state) {
    if (qubit >= num_qubits_) {
        throw ArgumentError(fmt::format("qubit {} out of range", qubit));
    }
    initial_states_[qubit] = state;
}

void Circuit::check_targets(std::span<const std::size_t> targets) const {
    for (std::size_t i = 0; i < targets.size(); i++) {
        if (targets[i] >= num_qubits_) {
            throw ArgumentError(fmt::format("qubit {} out of range for a {}-qubit circuit", targets[i], num_qubits_));
        }
        for (std::size_t j = 0; j < i; j++) {
            if (targets[i] == targets[j]) {
                throw ArgumentError(fmt::format("duplicate target qubit {}", targets[i]));
            }
        }
    }
}

void Circuit::check_condition(const Condition &condition) const {
    auto last = condition.max_record();
    if (last && *last >= measurement_count_) {
        throw ContractError(fmt::format("condition reads record m{} but only {} measurements precede it", *last,
                                        measurement_count_));
    }
}

void Circuit::append(const Step &step) {
    std::visit(
        [&](const auto &op) {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, GateOp>) {
                if (op.gate.targets.size() != gate_arity(op.gate.kind)) {
                    throw ArgumentError(fmt::format("{} takes {} targets", gate_name(op.gate.kind),
                                                    gate_arity(op.gate.kind)));
                }
                check_targets(op.gate.targets);
                if (op.control) {
                    check_condition(*op.control);
                }
            } else if constexpr (std::is_same_v<T, MeasureOp>) {
                std::size_t q[] = {op.qubit};
                check_targets(q);
                if (op.swap_basis) {
                    check_condition(*op.swap_basis);
                }
                if (measurement_count_ >= kMaxMeasurements) {
                    throw CapacityError(fmt::format("more than {} measurements", kMaxMeasurements));
                }
            } else {
                std::size_t q[] = {op.qubit};
                check_targets(q);
                check_condition(op.condition);
            }
        },
        step.op);
    if (std::holds_alternative<MeasureOp>(step.op)) {
        measurement_count_++;
    }
    steps_.push_back(step);
}

void Circuit::gate(GateKind kind, std::vector<std::size_t> targets, Site site) {
    append(Step{GateOp{GateSpec{kind, std::move(targets)}, std::nullopt}, site});
}

void Circuit::controlled_gate(GateKind kind, std::vector<std::size_t> targets, Condition control, Site site) {
    append(Step{GateOp{GateSpec{kind, std::move(targets)}, std::move(control)}, site});
}

std::size_t Circuit::measure(std::size_t qubit, Basis basis, Site site) {
    append(Step{MeasureOp{qubit, basis, std::nullopt}, site});
    return measurement_count_ - 1;
}

std::size_t Circuit::measure_adaptive(std::size_t qubit, Basis basis_if_false, Condition swap_basis, Site site) {
    append(Step{MeasureOp{qubit, basis_if_false, std::move(swap_basis)}, site});
    return measurement_count_ - 1;
}

void Circuit::frame(Pauli pauli, std::size_t qubit, Condition condition, Site site) {
    append(Step{FrameOp{pauli, qubit, std::move(condition)}, site});
}

void Circuit::append_circuit(const Circuit &other, std::span<const std::size_t> qubit_map) {
    if (qubit_map.size() != other.num_qubits()) {
        throw ArgumentError("qubit map must cover every qubit of the appended circuit");
    }
    auto offset = measurement_count_;
    for (const auto &step : other.steps()) {
        Step mapped = step;
        std::visit(
            [&](auto &op) {
                using T = std::decay_t<decltype(op)>;
                if constexpr (std::is_same_v<T, GateOp>) {
                    for (auto &t : op.gate.targets) {
                        t = qubit_map[t];
                    }
                    if (op.control) {
                        op.control = op.control->shifted(offset);
                    }
                } else if constexpr (std::is_same_v<T, MeasureOp>) {
                    op.qubit = qubit_map[op.qubit];
                    if (op.swap_basis) {
                        op.swap_basis = op.swap_basis->shifted(offset);
                    }
                } else {
                    op.qubit = qubit_map[op.qubit];
                    op.condition = op.condition.shifted(offset);
                }
            },
            mapped.op);
        append(mapped);
    }
}

void PauliFrame::toggle(Pauli pauli, std::size_t qubit) {
    if (qubit >= x_bits.size()) {
        throw ArgumentError(fmt::format("frame qubit {} out of range", qubit));
    }
    (pauli == Pauli::X ? x_bits : z_bits)[qubit] ^= 1;
}

PauliFrame &PauliFrame::operator^=(const PauliFrame &other) {
    if (other.x_bits.size() != x_bits.size()) {
        throw ArgumentError("frame size mismatch");
    }
    for (std::size_t q = 0; q < x_bits.size(); q++) {
        x_bits[q] ^= other.x_bits[q];
        z_bits[q] ^= other.z_bits[q];
    }
    return *this;
}

void PauliFrame::conjugate_by(const GateSpec &gate) {
    const auto &t = gate.targets;
    switch (gate.kind) {
        case GateKind::X:
        case GateKind::Z:
            break;
        case GateKind::H:
            std::swap(x_bits[t[0]], z_bits[t[0]]);
            break;
        case GateKind::S:
            z_bits[t[0]] ^= x_bits[t[0]];
            break;
        case GateKind::CX:
            x_bits[t[1]] ^= x_bits[t[0]];
            z_bits[t[0]] ^= z_bits[t[1]];
            break;
        case GateKind::CZ:
            z_bits[t[0]] ^= x_bits[t[1]];
            z_bits[t[1]] ^= x_bits[t[0]];
            break;
        case GateKind::SWAP:
            std::swap(x_bits[t[0]], x_bits[t[1]]);
            std::swap(z_bits[t[0]], z_bits[t[1]]);
            break;
        case GateKind::CCZ:
            for (auto q : t) {
                if (x_bits[q]) {
                    throw ContractError(fmt::format("CCZ conjugates the pending X on qubit {} out of the Pauli group", q));
                }
            }
            break;
    }
}

bool PauliFrame::is_identity() const {
    return std::none_of(x_bits.begin(), x_bits.end(), [](auto b) { return b != 0; }) &&
           std::none_of(z_bits.begin(), z_bits.end(), [](auto b) { return b != 0; });
}

}  // namespace latticeplan
