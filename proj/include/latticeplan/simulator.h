#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "latticeplan/circuit.h"

namespace latticeplan {

/// Amplitude comparison tolerance used by every equivalence check.
inline constexpr double kAmplitudeTolerance = 1e-9;
/// Below this a measurement outcome is treated as impossible.
inline constexpr double kZeroProbability = 1e-12;

StateVector apply_gate(const StateVector &state, GateKind kind, std::span<const std::size_t> targets);
StateVector apply_gate(const StateVector &state, const GateSpec &gate);
void apply_gate_in_place(StateVector &state, const GateSpec &gate);

/// Full-register input built from `data` on `data_qubits` and the circuit's declared
/// initial states everywhere else.
StateVector prepare_input(const Circuit &circuit, std::span<const std::size_t> data_qubits,
                          const StateVector &data);

/// Haar-style random state from normalized complex Gaussians.
StateVector random_state(std::size_t num_qubits, std::mt19937_64 &rng);

struct BranchOutcome {
    std::vector<std::uint8_t> outcome_bits;
    double probability = 0;
    /// Empty for zero-probability branches.
    std::optional<StateVector> final_state;
    PauliFrame final_frame;
    /// Computational-basis value each qubit was left in by its last measurement, or
    /// nullopt if it was never measured or was acted on afterwards.
    std::vector<std::optional<std::uint8_t>> measured;
};

/// Depth-first enumeration of every measurement outcome in lexicographic order
/// (first measurement is the most significant). Zero-probability branches are kept.
std::vector<BranchOutcome> enumerate_branches(const Circuit &circuit, const StateVector &input);

/// One branch with forced outcomes and no renormalization, so the data restriction is the
/// branch's Kraus operator applied to the input.
struct ForcedRun {
    std::vector<Complex> amplitudes;
    PauliFrame frame;
    std::vector<std::optional<std::uint8_t>> measured;
};
ForcedRun run_forced_branch(const Circuit &circuit, const StateVector &input,
                            std::span<const std::uint8_t> outcomes);

struct ChannelCheck {
    bool ok = true;
    std::size_t branches = 0;
    std::size_t zero_probability_branches = 0;
    std::string failure;
};

/// Compares every nonzero-probability branch, after frame correction and restriction to
/// `data_qubits`, with `target` applied to `data_input`, up to global phase.
ChannelCheck check_channel_mod_frame(std::span<const BranchOutcome> branches, const StateVector &data_input,
                                     std::span<const GateSpec> target, std::span<const std::size_t> data_qubits);
bool channel_equals_unitary_mod_frame(std::span<const BranchOutcome> branches, const StateVector &data_input,
                                      std::span<const GateSpec> target, std::span<const std::size_t> data_qubits);

/// Amplitudes of `data_qubits` with every other qubit fixed to its measured value.
/// Throws ContractError if a non-data qubit was not measured out.
std::vector<Complex> restrict_to_data(std::span<const Complex> amps,
                                      std::span<const std::optional<std::uint8_t>> measured,
                                      std::span<const std::size_t> data_qubits);

/// Data-qubit restriction of a branch's final state with its frame applied.
StateVector frame_corrected_restriction(const BranchOutcome &branch, std::span<const std::size_t> data_qubits);

/// True iff a and b agree up to a global phase (phase taken from b's largest amplitude).
bool equal_up_to_global_phase(std::span<const Complex> a, std::span<const Complex> b,
                              double tolerance = kAmplitudeTolerance);

/// Classical evaluation of X / CX / SWAP / (H t; CCZ a b t; H t) circuits.
/// `bits[k]` is qubit k, as '0'/'1' characters.
std::string run_reversible(const Circuit &circuit, std::string_view bits);

}  // namespace latticeplan
