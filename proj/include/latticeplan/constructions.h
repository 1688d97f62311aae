#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "latticeplan/circuit.h"

namespace latticeplan {

enum class CzChoice { Apply, Skip };

/// A verified-by-simulation circuit and the unitary it must implement on its data qubits.
/// `target` indexes data qubits by position in `data_qubits`, not by circuit qubit.
struct Construction {
    std::string name;
    Circuit circuit;
    std::vector<std::size_t> data_qubits;
    std::vector<std::size_t> routing_qubits;
    std::vector<GateSpec> target;
};

struct AutoCczResource {
    std::array<std::size_t, 3> ccz_qubits;
    /// Three pairs, one per potential CZ fixup.
    std::array<std::size_t, 6> routing_qubits;
    /// Creation part only: CCZ preparation plus the routing ring.
    Circuit circuit_fragment;
};

struct AdderSpec {
    std::size_t m;
    std::size_t toffoli_count;
    std::size_t measurement_depth;
};

/// Register layout of the adder circuit.
struct AdderWires {
    std::size_t carry_in;
    std::vector<std::size_t> target;  // m wires, least significant first
    std::vector<std::size_t> input;   // m - 1 wires, least significant first
};

enum class ToffoliStyle { Unitary, AutoCcz };

/// Data qubits 0, 1; routing qubits 2, 3. The choice fixes the routing measurement bases.
Construction build_delayed_choice_cz(CzChoice choice);

/// Fork each data qubit onto two routes, multiplex the CZ onto route A, demultiplex, merge.
/// Eight routing qubits; the choice fixes their measurement bases.
Construction build_fowler_multiplexer_cz(CzChoice choice);

/// Create and consume one AutoCCZ state on `targets`. Data qubits are 0..D-1 with D the
/// smallest register holding the targets (at least 3); the nine resource qubits follow.
std::pair<AutoCczResource, Construction> build_autoccz(std::array<std::size_t, 3> targets);

/// Toffoli on (control_a, control_b, target) as H; AutoCCZ consumption; H.
Construction build_toffoli_from_ccz(std::size_t control_a, std::size_t control_b, std::size_t target);

/// Wires (0, 1, 2) = (c, b, a). MAJ: CX a->b, CX a->c, Toffoli(c, b -> a).
Construction build_maj(ToffoliStyle style = ToffoliStyle::AutoCcz);
/// Wires (0, 1, 2) = (c, b, a). UMA: Toffoli(c, b -> a), CX a->c, CX c->b.
Construction build_uma(ToffoliStyle style = ToffoliStyle::AutoCcz);

/// Unitary-style ripple-carry adder computing t <- t + i + c_in mod 2^m over 2m qubits.
std::pair<Circuit, AdderSpec> build_cuccaro_adder(std::size_t m);
AdderWires cuccaro_wires(std::size_t m);

std::size_t count_toffolis(const Circuit &circuit);
std::size_t count_classically_controlled_unitaries(const Circuit &circuit, Site site);

struct VerificationReport {
    std::string name;
    bool ok = true;
    std::size_t basis_inputs = 0;
    std::size_t random_inputs = 0;
    std::size_t branches_checked = 0;
    std::size_t zero_probability_branches = 0;
    std::string failure;
};

inline constexpr std::uint64_t kDefaultSeed = 12345;
inline constexpr std::size_t kDefaultRandomInputs = 20;

/// Enumerates every branch for every data basis state and `random_inputs` seeded random states.
VerificationReport verify_construction(const Construction &c, std::uint64_t seed = kDefaultSeed,
                                       std::size_t random_inputs = kDefaultRandomInputs);

/// Exhaustive classical check of the adder over every (t, i, c_in).
VerificationReport verify_adder(std::size_t m);

/// Names accepted by build_named / verify_named.
std::vector<std::string> construction_names();
/// Expands a group name ("delayed-choice-cz", "fowler-mux-cz", "adder", "all") to leaf names.
std::vector<std::string> expand_construction_name(const std::string &name);
Construction build_named(const std::string &name);
/// Verifies a leaf name; "adder-<m>" leaves run verify_adder.
VerificationReport verify_named(const std::string &name, std::uint64_t seed = kDefaultSeed);

}  // namespace latticeplan
