#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "latticeplan/circuit.h"

namespace latticeplan {

/// Hadamard is a two-legged marker node rather than an edge attribute.
enum class ZxKind { Z, X, Hadamard, DelayedChoice };
enum class PortDirection { Input, Output };

struct ZxNode {
    ZxKind kind;
    /// Multiple of pi/4, kept in [0, 8). Ignored for Hadamard and delayed-choice nodes.
    int phase = 0;

    bool operator==(const ZxNode &other) const = default;
};

/// An open leg of `node`.
struct ZxPort {
    std::size_t node;
    PortDirection direction;

    bool operator==(const ZxPort &other) const = default;
};

inline constexpr std::size_t kMaxZxNodes = 256;
/// Largest intermediate tensor rank the contraction may create.
inline constexpr std::size_t kMaxZxRank = 24;

class ZxGraph {
   public:
    std::size_t add_node(ZxKind kind, int phase = 0);
    void add_edge(std::size_t a, std::size_t b);
    void add_port(std::size_t node, PortDirection direction);

    const std::vector<ZxNode> &nodes() const { return nodes_; }
    const std::vector<std::pair<std::size_t, std::size_t>> &edges() const { return edges_; }
    const std::vector<ZxPort> &ports() const { return ports_; }
    std::size_t num_inputs() const;
    std::size_t num_outputs() const;
    /// Edges plus ports touching `node`.
    std::size_t degree(std::size_t node) const;

    /// Throws ArgumentError when a Hadamard marker does not have exactly two legs or a
    /// delayed-choice node does not have exactly one edge.
    void validate() const;

    /// Replaces a node in place (used by resolve_choice and swap_colors).
    void set_node(std::size_t index, ZxNode node);

    bool operator==(const ZxGraph &other) const = default;

   private:
    std::vector<ZxNode> nodes_;
    std::vector<std::pair<std::size_t, std::size_t>> edges_;
    std::vector<ZxPort> ports_;
};

/// Linear map of shape 2^outputs x 2^inputs. Port k of each direction is bit k of the
/// row or column index, in port order.
struct EvaluatedMap {
    Eigen::MatrixXcd matrix;
    std::size_t num_inputs = 0;
    std::size_t num_outputs = 0;
};

/// Contracts the spider tensors. Throws ContractError on unresolved delayed-choice nodes.
EvaluatedMap evaluate(const ZxGraph &graph);

/// Replaces a delayed-choice node with a phase-0 spider of color `basis`: an X spider
/// (a <0| cap, the routing qubit measured in Z) activates the optional operation, a Z
/// spider (a <+| cap, measured in X) deactivates it.
ZxGraph resolve_choice(const ZxGraph &graph, std::size_t node, Basis basis);

/// True iff a = c P b Q for Pauli products P on outputs, Q on inputs, and nonzero c.
bool equiv_mod_pauli_scalar(const EvaluatedMap &a, const EvaluatedMap &b, double tolerance = 1e-9);

/// Every Z spider becomes X and vice versa, phases kept.
ZxGraph swap_colors(const ZxGraph &graph);

/// Matrix of a gate list on `num_qubits` qubits, as an EvaluatedMap.
EvaluatedMap unitary_map(std::size_t num_qubits, std::span<const GateSpec> gates);

/// Gate-by-gate translation of one measurement branch. Inputs and outputs are the data
/// qubits in order; every other qubit starts from its initial state and is capped by its
/// measurement outcome. Classical controls are evaluated against `outcomes`; frame updates
/// are dropped since equivalence is modulo Pauli.
ZxGraph circuit_branch_to_zx(const Circuit &circuit, std::span<const std::uint8_t> outcomes,
                             std::span<const std::size_t> data_qubits);

/// The unnormalized operator a branch applies to the data qubits (no frame correction).
EvaluatedMap branch_kraus(const Circuit &circuit, std::span<const std::uint8_t> outcomes,
                          std::span<const std::size_t> data_qubits);

/// Hand-built graph of the optimized delayed-choice CZ. Node 0 and 1 carry the two data
/// wires; the choice nodes are `kDelayedCzChoices`.
ZxGraph delayed_choice_cz_graph();
inline constexpr std::size_t kDelayedCzChoices[2] = {7, 8};

/// Hand-built route fork: one data wire, two routes, one choice per route. Read with its
/// ports reversed it is the matching merge.
ZxGraph route_fork_graph();
inline constexpr std::size_t kRouteForkChoices[2] = {3, 4};

}  // namespace latticeplan
