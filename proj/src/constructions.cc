#include "latticeplan/constructions.h"

#include <algorithm>
#include <random>

#include <fmt/format.h>

#include "latticeplan/errors.h"
#include "latticeplan/simulator.h"

namespace latticeplan {

namespace {

Condition rec(std::size_t k) {
    return Condition::record(k);
}

void check_distinct(std::span<const std::size_t> qubits) {
    for (std::size_t i = 0; i < qubits.size(); i++) {
        for (std::size_t j = 0; j < i; j++) {
            if (qubits[i] == qubits[j]) {
                throw ArgumentError(fmt::format("qubit {} given twice", qubits[i]));
            }
        }
    }
}

std::size_t data_register_size(std::span<const std::size_t> qubits) {
    return std::max<std::size_t>(3, *std::max_element(qubits.begin(), qubits.end()) + 1);
}

std::vector<std::size_t> range(std::size_t begin, std::size_t end) {
    std::vector<std::size_t> r;
    for (std::size_t k = begin; k < end; k++) {
        r.push_back(k);
    }
    return r;
}

AutoCczResource autoccz_resource(std::size_t base) {
    AutoCczResource res{
        {base, base + 3, base + 6},
        {base + 1, base + 2, base + 4, base + 5, base + 7, base + 8},
        Circuit(base + 9),
    };
    for (std::size_t q = base; q < base + 9; q++) {
        res.circuit_fragment.set_initial_state(q, InitialState::Plus);
    }
    auto &c = res.circuit_fragment;
    c.gate(GateKind::CCZ, {base, base + 3, base + 6}, Site::Creation);
    // Ring through the CCZ qubits and the routing pairs.
    for (std::size_t k = 0; k < 9; k += 3) {
        c.gate(GateKind::CZ, {base + k + 1, base + k + 2}, Site::Creation);
    }
    for (std::size_t k = 0; k < 9; k += 3) {
        c.gate(GateKind::CZ, {base + k, base + k + 1}, Site::Creation);
        c.gate(GateKind::CZ, {base + k + 2, base + (k + 3) % 9}, Site::Creation);
    }
    return res;
}

/// Appends creation plus consumption of one AutoCCZ onto `targets`, using qubits base..base+8.
void append_autoccz(Circuit &c, std::array<std::size_t, 3> targets, std::size_t base) {
    auto res = autoccz_resource(base);
    for (std::size_t q = base; q < base + 9; q++) {
        c.set_initial_state(q, InitialState::Plus);
    }
    std::vector<std::size_t> identity = range(0, res.circuit_fragment.num_qubits());
    c.append_circuit(res.circuit_fragment, identity);

    std::size_t r0 = c.measurement_count();
    for (std::size_t k = 0; k < 3; k++) {
        c.gate(GateKind::CX, {targets[k], res.ccz_qubits[k]}, Site::Consumption);
    }
    for (std::size_t k = 0; k < 3; k++) {
        c.measure(res.ccz_qubits[k], Basis::Z, Site::Consumption);
    }
    // Each routing pair sits between two CCZ qubits; the opposite CCZ parity picks its basis.
    const std::size_t selector[3] = {2, 0, 1};
    for (std::size_t k = 0; k < 3; k++) {
        for (std::size_t j = 0; j < 2; j++) {
            c.measure_adaptive(res.routing_qubits[2 * k + j], Basis::Z, rec(r0 + selector[k]), Site::Fixup);
        }
    }
    auto pair = [&](std::size_t k, std::size_t j) { return rec(r0 + 3 + 2 * k + j); };
    for (std::size_t k = 0; k < 3; k++) {
        // Pair k holds the potential CZ between targets k and k+1.
        auto s = rec(r0 + selector[k]);
        c.frame(Pauli::Z, targets[k], Condition::select(s, pair(k, 0), pair(k, 1)), Site::Fixup);
        c.frame(Pauli::Z, targets[(k + 1) % 3], Condition::select(s, pair(k, 1), pair(k, 0)), Site::Fixup);
    }
    for (std::size_t k = 0; k < 3; k++) {
        auto a = rec(r0 + (k + 1) % 3);
        auto b = rec(r0 + (k + 2) % 3);
        c.frame(Pauli::Z, targets[k], a & b, Site::Fixup);
    }
}

void append_toffoli(Circuit &c, std::size_t a, std::size_t b, std::size_t t, ToffoliStyle style, std::size_t base) {
    c.gate(GateKind::H, {t});
    if (style == ToffoliStyle::AutoCcz) {
        append_autoccz(c, {a, b, t}, base);
    } else {
        c.gate(GateKind::CCZ, {a, b, t});
    }
    c.gate(GateKind::H, {t});
}

std::vector<GateSpec> toffoli_target(std::size_t a, std::size_t b, std::size_t t) {
    return {{GateKind::H, {t}}, {GateKind::CCZ, {a, b, t}}, {GateKind::H, {t}}};
}

Circuit make_circuit(std::size_t data, ToffoliStyle style) {
    return Circuit(data + (style == ToffoliStyle::AutoCcz ? 9 : 0));
}

}  // namespace

Construction build_delayed_choice_cz(CzChoice choice) {
    Circuit c(4, {InitialState::Zero, InitialState::Zero, InitialState::Plus, InitialState::Plus});
    c.gate(GateKind::CZ, {2, 3}, Site::Creation);
    c.gate(GateKind::CX, {0, 2}, Site::Consumption);
    c.gate(GateKind::CX, {1, 3}, Site::Consumption);
    Basis basis = choice == CzChoice::Apply ? Basis::Z : Basis::X;
    auto r0 = c.measure(2, basis, Site::Fixup);
    auto r1 = c.measure(3, basis, Site::Fixup);
    if (choice == CzChoice::Apply) {
        c.frame(Pauli::Z, 0, rec(r1), Site::Fixup);
        c.frame(Pauli::Z, 1, rec(r0), Site::Fixup);
    } else {
        c.frame(Pauli::Z, 0, rec(r0), Site::Fixup);
        c.frame(Pauli::Z, 1, rec(r1), Site::Fixup);
    }
    std::vector<GateSpec> target;
    if (choice == CzChoice::Apply) {
        target.push_back({GateKind::CZ, {0, 1}});
    }
    return Construction{choice == CzChoice::Apply ? "delayed-choice-cz-apply" : "delayed-choice-cz-skip",
                        std::move(c),
                        {0, 1},
                        {2, 3},
                        std::move(target)};
}

Construction build_fowler_multiplexer_cz(CzChoice choice) {
    // 0, 1: u and v on route A. 2, 3: u and v on route B. 4..11: routing qubits.
    std::vector<InitialState> init(12, InitialState::Plus);
    for (std::size_t q = 0; q < 4; q++) {
        init[q] = InitialState::Zero;
    }
    Circuit c(12, init);
    c.gate(GateKind::CX, {0, 2});
    c.gate(GateKind::CX, {1, 3});
    c.gate(GateKind::CX, {4, 0});
    c.gate(GateKind::CX, {5, 2});
    c.gate(GateKind::CX, {6, 1});
    c.gate(GateKind::CX, {7, 3});
    c.gate(GateKind::CZ, {0, 1});
    c.gate(GateKind::CX, {8, 0});
    c.gate(GateKind::CX, {9, 2});
    c.gate(GateKind::CX, {10, 1});
    c.gate(GateKind::CX, {11, 3});
    c.gate(GateKind::CX, {0, 2});
    auto m0 = c.measure(2);
    c.gate(GateKind::CX, {1, 3});
    auto m1 = c.measure(3);
    // Route A routers are 4, 6, 8, 10; route B routers are 5, 7, 9, 11.
    Basis a_basis = choice == CzChoice::Apply ? Basis::Z : Basis::X;
    Basis b_basis = choice == CzChoice::Apply ? Basis::X : Basis::Z;
    std::array<std::size_t, 8> m{};
    for (std::size_t k = 0; k < 8; k++) {
        m[k] = c.measure(4 + k, k % 2 == 0 ? a_basis : b_basis, Site::Fixup);
    }
    // m[0..7] are the records of qubits 4..11.
    if (choice == CzChoice::Apply) {
        c.frame(Pauli::X, 0, rec(m[0]) ^ rec(m[4]), Site::Fixup);
        c.frame(Pauli::X, 1, rec(m[2]) ^ rec(m[6]), Site::Fixup);
        c.frame(Pauli::Z, 0, rec(m[2]), Site::Fixup);
        c.frame(Pauli::Z, 1, rec(m[0]), Site::Fixup);
    } else {
        c.frame(Pauli::X, 0, rec(m0) ^ rec(m[1]) ^ rec(m[5]), Site::Fixup);
        c.frame(Pauli::X, 1, rec(m1) ^ rec(m[3]) ^ rec(m[7]), Site::Fixup);
        c.frame(Pauli::Z, 0, rec(m[0]) ^ rec(m[4]), Site::Fixup);
        c.frame(Pauli::Z, 1, rec(m[2]) ^ rec(m[6]), Site::Fixup);
    }
    std::vector<GateSpec> target;
    if (choice == CzChoice::Apply) {
        target.push_back({GateKind::CZ, {0, 1}});
    }
    return Construction{choice == CzChoice::Apply ? "fowler-mux-cz-apply" : "fowler-mux-cz-skip", std::move(c),
                        {0, 1}, range(4, 12), std::move(target)};
}

std::pair<AutoCczResource, Construction> build_autoccz(std::array<std::size_t, 3> targets) {
    check_distinct(targets);
    std::size_t base = data_register_size(targets);
    Circuit c(base + 9);
    append_autoccz(c, targets, base);
    auto res = autoccz_resource(base);
    std::vector<std::size_t> routing(res.routing_qubits.begin(), res.routing_qubits.end());
    Construction con{"autoccz", std::move(c), range(0, base), std::move(routing),
                     {{GateKind::CCZ, {targets[0], targets[1], targets[2]}}}};
    return {std::move(res), std::move(con)};
}

Construction build_toffoli_from_ccz(std::size_t control_a, std::size_t control_b, std::size_t target) {
    std::array<std::size_t, 3> q = {control_a, control_b, target};
    check_distinct(q);
    std::size_t base = data_register_size(q);
    Circuit c(base + 9);
    append_toffoli(c, control_a, control_b, target, ToffoliStyle::AutoCcz, base);
    auto res = autoccz_resource(base);
    return Construction{"toffoli", std::move(c), range(0, base),
                        std::vector<std::size_t>(res.routing_qubits.begin(), res.routing_qubits.end()),
                        toffoli_target(control_a, control_b, target)};
}

Construction build_maj(ToffoliStyle style) {
    Circuit c = make_circuit(3, style);
    c.gate(GateKind::CX, {2, 1});
    c.gate(GateKind::CX, {2, 0});
    append_toffoli(c, 0, 1, 2, style, 3);
    std::vector<GateSpec> target = {{GateKind::CX, {2, 1}}, {GateKind::CX, {2, 0}}};
    for (auto &g : toffoli_target(0, 1, 2)) {
        target.push_back(g);
    }
    std::vector<std::size_t> routing;
    if (style == ToffoliStyle::AutoCcz) {
        routing = {4, 5, 7, 8, 10, 11};
    }
    return Construction{"maj", std::move(c), {0, 1, 2}, std::move(routing), std::move(target)};
}

Construction build_uma(ToffoliStyle style) {
    Circuit c = make_circuit(3, style);
    append_toffoli(c, 0, 1, 2, style, 3);
    c.gate(GateKind::CX, {2, 0});
    c.gate(GateKind::CX, {0, 1});
    std::vector<GateSpec> target = toffoli_target(0, 1, 2);
    target.push_back({GateKind::CX, {2, 0}});
    target.push_back({GateKind::CX, {0, 1}});
    std::vector<std::size_t> routing;
    if (style == ToffoliStyle::AutoCcz) {
        routing = {4, 5, 7, 8, 10, 11};
    }
    return Construction{"uma", std::move(c), {0, 1, 2}, std::move(routing), std::move(target)};
}

AdderWires cuccaro_wires(std::size_t m) {
    if (m < 2) {
        throw ArgumentError(fmt::format("adder width must be at least 2, got {}", m));
    }
    AdderWires w{0, {}, {}};
    for (std::size_t k = 0; k < m; k++) {
        w.target.push_back(1 + 2 * k);
        if (k + 1 < m) {
            w.input.push_back(2 + 2 * k);
        }
    }
    return w;
}

std::pair<Circuit, AdderSpec> build_cuccaro_adder(std::size_t m) {
    auto w = cuccaro_wires(m);
    Circuit c(2 * m);
    auto carry = [&](std::size_t k) { return k == 0 ? w.carry_in : w.input[k - 1]; };
    auto toffoli = [&](std::size_t a, std::size_t b, std::size_t t) {
        append_toffoli(c, a, b, t, ToffoliStyle::Unitary, 0);
    };
    // MAJ wave up.
    for (std::size_t k = 0; k + 2 < m; k++) {
        c.gate(GateKind::CX, {w.input[k], w.target[k]});
        c.gate(GateKind::CX, {w.input[k], carry(k)});
        toffoli(carry(k), w.target[k], w.input[k]);
    }
    // Top: fold the final carry into the high target bit.
    std::size_t k = m - 2;
    c.gate(GateKind::CX, {w.input[k], w.target[k]});
    c.gate(GateKind::CX, {w.input[k], carry(k)});
    toffoli(carry(k), w.target[k], w.target[m - 1]);
    c.gate(GateKind::CX, {w.input[k], w.target[m - 1]});
    c.gate(GateKind::CX, {w.input[k], carry(k)});
    c.gate(GateKind::CX, {carry(k), w.target[k]});
    // UMA wave down.
    for (std::size_t j = m - 2; j-- > 0;) {
        toffoli(carry(j), w.target[j], w.input[j]);
        c.gate(GateKind::CX, {w.input[j], carry(j)});
        c.gate(GateKind::CX, {carry(j), w.target[j]});
    }
    AdderSpec spec{m, count_toffolis(c), count_toffolis(c)};
    return {std::move(c), spec};
}

std::size_t count_toffolis(const Circuit &circuit) {
    std::size_t n = 0;
    for (const auto &step : circuit.steps()) {
        if (const auto *g = std::get_if<GateOp>(&step.op); g && g->gate.kind == GateKind::CCZ) {
            n++;
        }
    }
    return n;
}

std::size_t count_classically_controlled_unitaries(const Circuit &circuit, Site site) {
    std::size_t n = 0;
    for (const auto &step : circuit.steps()) {
        if (const auto *g = std::get_if<GateOp>(&step.op); g && g->control && step.site == site) {
            n++;
        }
    }
    return n;
}

VerificationReport verify_construction(const Construction &c, std::uint64_t seed, std::size_t random_inputs) {
    VerificationReport report;
    report.name = c.name;
    std::size_t d = c.data_qubits.size();
    std::mt19937_64 rng(seed);
    auto check = [&](const StateVector &data) {
        auto branches = enumerate_branches(c.circuit, prepare_input(c.circuit, c.data_qubits, data));
        double total = 0;
        for (const auto &b : branches) {
            total += b.probability;
        }
        if (std::abs(total - 1) > 1e-9) {
            report.ok = false;
            report.failure = fmt::format("branch probabilities sum to {}", total);
            return false;
        }
        auto result = check_channel_mod_frame(branches, data, c.target, c.data_qubits);
        report.branches_checked += result.branches;
        report.zero_probability_branches += result.zero_probability_branches;
        if (!result.ok) {
            report.ok = false;
            report.failure = result.failure;
            return false;
        }
        return true;
    };
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << d); x++) {
        if (!check(StateVector::basis(d, x))) {
            report.failure = fmt::format("basis input {}: {}", x, report.failure);
            return report;
        }
        report.basis_inputs++;
    }
    for (std::size_t k = 0; k < random_inputs; k++) {
        if (!check(random_state(d, rng))) {
            report.failure = fmt::format("random input {}: {}", k, report.failure);
            return report;
        }
        report.random_inputs++;
    }
    return report;
}

VerificationReport verify_adder(std::size_t m) {
    VerificationReport report;
    report.name = fmt::format("adder-{}", m);
    auto [circuit, spec] = build_cuccaro_adder(m);
    auto w = cuccaro_wires(m);
    if (spec.toffoli_count != 2 * m - 3) {
        report.ok = false;
        report.failure = fmt::format("toffoli count {} != {}", spec.toffoli_count, 2 * m - 3);
        return report;
    }
    std::uint64_t t_limit = std::uint64_t{1} << m;
    std::uint64_t i_limit = std::uint64_t{1} << (m - 1);
    for (std::uint64_t t = 0; t < t_limit; t++) {
        for (std::uint64_t i = 0; i < i_limit; i++) {
            for (std::uint64_t cin = 0; cin < 2; cin++) {
                std::string bits(circuit.num_qubits(), '0');
                bits[w.carry_in] = cin ? '1' : '0';
                for (std::size_t k = 0; k < m; k++) {
                    bits[w.target[k]] = ((t >> k) & 1) ? '1' : '0';
                }
                for (std::size_t k = 0; k + 1 < m; k++) {
                    bits[w.input[k]] = ((i >> k) & 1) ? '1' : '0';
                }
                auto expected = bits;
                std::uint64_t sum = (t + i + cin) % t_limit;
                for (std::size_t k = 0; k < m; k++) {
                    expected[w.target[k]] = ((sum >> k) & 1) ? '1' : '0';
                }
                auto out = run_reversible(circuit, bits);
                report.basis_inputs++;
                if (out != expected) {
                    report.ok = false;
                    report.failure = fmt::format("t={} i={} c_in={} gave {} expected {}", t, i, cin, out, expected);
                    return report;
                }
            }
        }
    }
    return report;
}

std::vector<std::string> construction_names() {
    std::vector<std::string> names = {"delayed-choice-cz-apply", "delayed-choice-cz-skip", "fowler-mux-cz-apply",
                                      "fowler-mux-cz-skip",      "autoccz",                "toffoli",
                                      "maj",                     "uma"};
    for (std::size_t m = 2; m <= 8; m++) {
        names.push_back(fmt::format("adder-{}", m));
    }
    return names;
}

std::vector<std::string> expand_construction_name(const std::string &name) {
    auto all = construction_names();
    if (name == "all") {
        return all;
    }
    std::vector<std::string> out;
    for (const auto &n : all) {
        if (n == name || n.rfind(name + "-", 0) == 0) {
            out.push_back(n);
        }
    }
    if (out.empty()) {
        throw UsageError(fmt::format("unknown construction '{}'; known: all, delayed-choice-cz, fowler-mux-cz, "
                                     "adder, {}",
                                     name, fmt::join(all, ", ")));
    }
    return out;
}

Construction build_named(const std::string &name) {
    if (name == "delayed-choice-cz-apply") return build_delayed_choice_cz(CzChoice::Apply);
    if (name == "delayed-choice-cz-skip") return build_delayed_choice_cz(CzChoice::Skip);
    if (name == "fowler-mux-cz-apply") return build_fowler_multiplexer_cz(CzChoice::Apply);
    if (name == "fowler-mux-cz-skip") return build_fowler_multiplexer_cz(CzChoice::Skip);
    if (name == "autoccz") return build_autoccz({0, 1, 2}).second;
    if (name == "toffoli") return build_toffoli_from_ccz(0, 1, 2);
    if (name == "maj") return build_maj();
    if (name == "uma") return build_uma();
    if (name.rfind("adder-", 0) == 0) {
        std::size_t m = std::stoul(name.substr(6));
        auto circuit = build_cuccaro_adder(m).first;
        return Construction{name, std::move(circuit), range(0, 2 * m), {}, {}};
    }
    throw UsageError(fmt::format("unknown construction '{}'", name));
}

VerificationReport verify_named(const std::string &name, std::uint64_t seed) {
    if (name.rfind("adder-", 0) == 0) {
        return verify_adder(std::stoul(name.substr(6)));
    }
    return verify_construction(build_named(name), seed);
}

}  // namespace latticeplan
