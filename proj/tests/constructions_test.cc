#include "latticeplan/constructions.h"

#include <gtest/gtest.h>

#include "latticeplan/errors.h"
#include "latticeplan/simulator.h"

using namespace latticeplan;

namespace {

std::string bits_of(std::uint64_t x, std::size_t n) {
    std::string s(n, '0');
    for (std::size_t k = 0; k < n; k++) {
        s[k] = ((x >> k) & 1) ? '1' : '0';
    }
    return s;
}

/// Every nonzero branch, frame-corrected and restricted to the data qubits.
std::vector<StateVector> corrected_outputs(const Construction &c, const StateVector &data) {
    std::vector<StateVector> out;
    for (const auto &b : enumerate_branches(c.circuit, prepare_input(c.circuit, c.data_qubits, data))) {
        if (b.final_state) {
            out.push_back(frame_corrected_restriction(b, c.data_qubits));
        }
    }
    return out;
}

void expect_verified(const Construction &c) {
    auto r = verify_construction(c);
    EXPECT_TRUE(r.ok) << c.name << ": " << r.failure;
    EXPECT_EQ(r.basis_inputs, std::size_t{1} << c.data_qubits.size());
    EXPECT_EQ(r.random_inputs, 20u);
}

}  // namespace

TEST(delayed_choice_cz, apply_and_skip) {
    expect_verified(build_delayed_choice_cz(CzChoice::Apply));
    expect_verified(build_delayed_choice_cz(CzChoice::Skip));
}

TEST(delayed_choice_cz, wrong_target_is_detected) {
    auto c = build_delayed_choice_cz(CzChoice::Skip);
    c.target = {{GateKind::CZ, {0, 1}}};
    ASSERT_FALSE(verify_construction(c).ok);
}

TEST(delayed_choice_cz, branches_per_basis_input) {
    for (auto choice : {CzChoice::Apply, CzChoice::Skip}) {
        auto c = build_delayed_choice_cz(choice);
        for (std::uint64_t x = 0; x < 4; x++) {
            auto branches = enumerate_branches(c.circuit, prepare_input(c.circuit, c.data_qubits, StateVector::basis(2, x)));
            ASSERT_EQ(branches.size(), 4u);
            double total = 0;
            for (const auto &b : branches) {
                total += b.probability;
            }
            ASSERT_NEAR(total, 1, 1e-9);
        }
    }
}

TEST(delayed_choice_cz, routing_qubit_counts) {
    auto opt = build_delayed_choice_cz(CzChoice::Apply);
    auto mux = build_fowler_multiplexer_cz(CzChoice::Apply);
    ASSERT_EQ(opt.routing_qubits.size(), 2u);
    ASSERT_EQ(mux.routing_qubits.size(), 8u);
    ASSERT_EQ(mux.routing_qubits.size() / opt.routing_qubits.size(), 4u);
    ASSERT_EQ(mux.routing_qubits.size() % opt.routing_qubits.size(), 0u);
}

TEST(fowler_mux_cz, apply_and_skip) {
    expect_verified(build_fowler_multiplexer_cz(CzChoice::Apply));
    expect_verified(build_fowler_multiplexer_cz(CzChoice::Skip));
}

TEST(autoccz, channel_is_ccz) {
    expect_verified(build_autoccz({0, 1, 2}).second);
}

TEST(autoccz, other_target_placements) {
    expect_verified(build_autoccz({2, 0, 1}).second);
    auto wide = build_autoccz({4, 1, 3}).second;
    ASSERT_EQ(wide.circuit.num_qubits(), 14u);
    auto r = verify_construction(wide, 7, 3);
    ASSERT_TRUE(r.ok) << r.failure;
}

TEST(autoccz, resource_shape) {
    auto [res, c] = build_autoccz({0, 1, 2});
    ASSERT_EQ(c.circuit.num_qubits(), 12u);
    ASSERT_EQ(res.routing_qubits.size(), 6u);
    ASSERT_EQ(c.routing_qubits.size(), 6u);
    ASSERT_EQ(res.ccz_qubits, (std::array<std::size_t, 3>{3, 6, 9}));
    ASSERT_EQ(res.routing_qubits, (std::array<std::size_t, 6>{4, 5, 7, 8, 10, 11}));
    ASSERT_EQ(count_toffolis(res.circuit_fragment), 1u);
    ASSERT_EQ(c.circuit.measurement_count(), 9u);
}

TEST(autoccz, consumption_site_has_no_controlled_unitaries) {
    auto c = build_autoccz({0, 1, 2}).second;
    std::size_t consumption_steps = 0;
    for (const auto &step : c.circuit.steps()) {
        if (step.site == Site::Consumption) {
            consumption_steps++;
            bool ok = std::holds_alternative<MeasureOp>(step.op) || std::holds_alternative<FrameOp>(step.op) ||
                      !std::get<GateOp>(step.op).control;
            ASSERT_TRUE(ok);
        }
    }
    ASSERT_EQ(consumption_steps, 6u);
    for (auto site : {Site::Consumption, Site::Creation, Site::Fixup, Site::Unspecified}) {
        ASSERT_EQ(count_classically_controlled_unitaries(c.circuit, site), 0u);
    }
}

TEST(autoccz, fixes_000) {
    auto c = build_autoccz({0, 1, 2}).second;
    auto zero = StateVector::basis(3, 0);
    auto outs = corrected_outputs(c, zero);
    ASSERT_EQ(outs.size(), 512u);
    for (const auto &o : outs) {
        ASSERT_TRUE(equal_up_to_global_phase(o.amplitudes(), zero.amplitudes()));
    }
}

TEST(autoccz, phases_the_111_component) {
    auto c = build_autoccz({0, 1, 2}).second;
    double r = 1 / std::sqrt(2.0);
    // Index 3 is |110> (q0 = q1 = 1), index 7 is |111>.
    std::vector<Complex> in(8, 0.0), expected(8, 0.0);
    in[3] = r;
    in[7] = r;
    expected[3] = r;
    expected[7] = -r;
    auto data = StateVector::from_amplitudes(in);
    for (const auto &o : corrected_outputs(c, data)) {
        ASSERT_TRUE(equal_up_to_global_phase(o.amplitudes(), expected));
    }
}

TEST(autoccz, duplicate_targets_rejected) {
    ASSERT_THROW(build_autoccz({0, 1, 1}), ArgumentError);
    ASSERT_THROW(build_toffoli_from_ccz(2, 0, 2), ArgumentError);
}

TEST(toffoli_from_ccz, truth_table) {
    auto c = build_toffoli_from_ccz(0, 1, 2);
    expect_verified(c);
    for (std::uint64_t x = 0; x < 8; x++) {
        std::uint64_t y = x ^ ((x & 1) && (x & 2) ? 4 : 0);
        for (const auto &o : corrected_outputs(c, StateVector::basis(3, x))) {
            ASSERT_NEAR(std::abs(o[y]), 1, 1e-9) << bits_of(x, 3);
        }
    }
    // "110" -> "111" and "100" -> "100" in qubit order.
    for (const auto &o : corrected_outputs(c, StateVector::basis(3, 0b011))) {
        ASSERT_NEAR(std::abs(o[0b111]), 1, 1e-9);
    }
    for (const auto &o : corrected_outputs(c, StateVector::basis(3, 0b001))) {
        ASSERT_NEAR(std::abs(o[0b001]), 1, 1e-9);
    }
}

TEST(toffoli_from_ccz, target_in_any_position) {
    expect_verified(build_toffoli_from_ccz(2, 0, 1));
}

TEST(maj_uma, autoccz_style_channels) {
    expect_verified(build_maj());
    expect_verified(build_uma());
}

TEST(maj_uma, classical_behaviour) {
    auto maj = build_maj(ToffoliStyle::Unitary).circuit;
    auto uma = build_uma(ToffoliStyle::Unitary).circuit;
    // Wires are (c, b, a).
    ASSERT_EQ(run_reversible(maj, "000"), "000");
    ASSERT_EQ(run_reversible(maj, "011")[2], '1');
    for (std::uint64_t x = 0; x < 8; x++) {
        auto in = bits_of(x, 3);
        int c = in[0] - '0', b = in[1] - '0', a = in[2] - '0';
        auto mid = run_reversible(maj, in);
        ASSERT_EQ(mid[2] - '0', (a + b + c) >= 2) << in;
        auto out = run_reversible(uma, mid);
        // UMA restores c and a and leaves the sum bit on b.
        ASSERT_EQ(out[0], in[0]) << in;
        ASSERT_EQ(out[2], in[2]) << in;
        ASSERT_EQ(out[1] - '0', a ^ b ^ c) << in;
    }
}

TEST(cuccaro_adder, toffoli_count) {
    for (std::size_t m = 2; m <= 8; m++) {
        auto [c, spec] = build_cuccaro_adder(m);
        ASSERT_EQ(spec.toffoli_count, 2 * m - 3);
        ASSERT_EQ(spec.measurement_depth, 2 * m - 3);
        ASSERT_EQ(count_toffolis(c), 2 * m - 3);
        ASSERT_EQ(c.num_qubits(), 2 * m);
    }
    ASSERT_EQ(build_cuccaro_adder(5).second.toffoli_count, 7u);
    ASSERT_THROW(build_cuccaro_adder(1), ArgumentError);
}

TEST(cuccaro_adder, examples) {
    auto w3 = cuccaro_wires(3);
    auto c3 = build_cuccaro_adder(3).first;
    std::string in(6, '0');
    // t = 5, i = 2.
    in[w3.target[0]] = '1';
    in[w3.target[2]] = '1';
    in[w3.input[1]] = '1';
    auto out = run_reversible(c3, in);
    int t = 0;
    for (std::size_t k = 0; k < 3; k++) {
        t |= (out[w3.target[k]] - '0') << k;
    }
    ASSERT_EQ(t, 7);
    ASSERT_EQ(run_reversible(build_cuccaro_adder(2).first, "0000"), "0000");
}

TEST(cuccaro_adder, exhaustive_against_integer_addition) {
    for (std::size_t m = 2; m <= 8; m++) {
        auto c = build_cuccaro_adder(m).first;
        auto w = cuccaro_wires(m);
        for (std::uint64_t t = 0; t < (1u << m); t++) {
            for (std::uint64_t i = 0; i < (1u << (m - 1)); i++) {
                for (std::uint64_t cin = 0; cin < 2; cin++) {
                    std::string in(2 * m, '0');
                    in[w.carry_in] = char('0' + cin);
                    for (std::size_t k = 0; k < m; k++) in[w.target[k]] = char('0' + ((t >> k) & 1));
                    for (std::size_t k = 0; k + 1 < m; k++) in[w.input[k]] = char('0' + ((i >> k) & 1));
                    auto out = run_reversible(c, in);
                    std::uint64_t got = 0;
                    for (std::size_t k = 0; k < m; k++) got |= std::uint64_t(out[w.target[k]] - '0') << k;
                    ASSERT_EQ(got, (t + i + cin) & ((1u << m) - 1));
                    ASSERT_EQ(out[w.carry_in], in[w.carry_in]);
                    for (std::size_t k = 0; k + 1 < m; k++) ASSERT_EQ(out[w.input[k]], in[w.input[k]]);
                }
            }
        }
        ASSERT_TRUE(verify_adder(m).ok);
    }
}

TEST(registry, names_and_groups) {
    ASSERT_EQ(expand_construction_name("delayed-choice-cz").size(), 2u);
    ASSERT_EQ(expand_construction_name("fowler-mux-cz").size(), 2u);
    ASSERT_EQ(expand_construction_name("adder").size(), 7u);
    ASSERT_EQ(expand_construction_name("all"), construction_names());
    ASSERT_THROW(expand_construction_name("no-such"), UsageError);
    ASSERT_THROW(build_named("no-such"), UsageError);
    ASSERT_TRUE(verify_named("adder-4").ok);
}

TEST(registry, verification_is_seed_deterministic) {
    auto a = verify_named("autoccz", 99);
    auto b = verify_named("autoccz", 99);
    ASSERT_EQ(a.branches_checked, b.branches_checked);
    ASSERT_EQ(a.zero_probability_branches, b.zero_probability_branches);
    ASSERT_TRUE(a.ok);
}
