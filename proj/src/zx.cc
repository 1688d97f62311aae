#include "latticeplan/zx.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>

#include <fmt/format.h>

#include "latticeplan/errors.h"
#include "latticeplan/simulator.h"

namespace latticeplan {

namespace {

constexpr double kPi = 3.14159265358979323846;

Complex phase_factor(int k) {
    return std::polar(1.0, kPi * k / 4);
}

int normalize_phase(int k) {
    return ((k % 8) + 8) % 8;
}

/// Dense tensor; bit j of the data index is the value of labels[j].
struct Tensor {
    std::vector<std::size_t> labels;
    std::vector<Complex> data;
};

Tensor node_tensor(const ZxNode &node, std::vector<std::size_t> labels) {
    std::size_t n = labels.size();
    Tensor t{std::move(labels), std::vector<Complex>(std::size_t{1} << n, 0.0)};
    Complex e = phase_factor(node.phase);
    switch (node.kind) {
        case ZxKind::Z:
            if (n == 0) {
                t.data[0] = 1.0 + e;
            } else {
                t.data[0] = 1;
                t.data.back() += e;
            }
            break;
        case ZxKind::X: {
            double scale = std::pow(0.5, n / 2.0);
            for (std::size_t x = 0; x < t.data.size(); x++) {
                double sign = (std::popcount(x) % 2) ? -1 : 1;
                t.data[x] = scale * (1.0 + e * sign);
            }
            break;
        }
        case ZxKind::Hadamard: {
            double r = 1 / std::sqrt(2.0);
            t.data = {r, r, r, -r};
            break;
        }
        case ZxKind::DelayedChoice:
            throw ContractError("delayed-choice node must be resolved before evaluation");
    }
    return t;
}

Tensor contract(const Tensor &a, const Tensor &b) {
    std::vector<std::size_t> shared, a_only, b_only;
    std::vector<std::size_t> a_pos_shared, b_pos_shared, a_pos_free, b_pos_free;
    for (std::size_t i = 0; i < a.labels.size(); i++) {
        auto it = std::find(b.labels.begin(), b.labels.end(), a.labels[i]);
        if (it != b.labels.end()) {
            shared.push_back(a.labels[i]);
            a_pos_shared.push_back(i);
            b_pos_shared.push_back(static_cast<std::size_t>(it - b.labels.begin()));
        } else {
            a_only.push_back(a.labels[i]);
            a_pos_free.push_back(i);
        }
    }
    for (std::size_t i = 0; i < b.labels.size(); i++) {
        if (std::find(shared.begin(), shared.end(), b.labels[i]) == shared.end()) {
            b_only.push_back(b.labels[i]);
            b_pos_free.push_back(i);
        }
    }
    Tensor out;
    out.labels = a_only;
    out.labels.insert(out.labels.end(), b_only.begin(), b_only.end());
    if (out.labels.size() > kMaxZxRank) {
        throw CapacityError(fmt::format("contraction needs a rank-{} intermediate tensor (limit {})",
                                        out.labels.size(), kMaxZxRank));
    }
    out.data.assign(std::size_t{1} << out.labels.size(), 0.0);

    auto scatter = [](std::size_t bits, const std::vector<std::size_t> &positions) {
        std::size_t index = 0;
        for (std::size_t k = 0; k < positions.size(); k++) {
            if ((bits >> k) & 1) {
                index |= std::size_t{1} << positions[k];
            }
        }
        return index;
    };
    std::vector<std::size_t> a_shared_index(std::size_t{1} << shared.size());
    std::vector<std::size_t> b_shared_index(a_shared_index.size());
    for (std::size_t s = 0; s < a_shared_index.size(); s++) {
        a_shared_index[s] = scatter(s, a_pos_shared);
        b_shared_index[s] = scatter(s, b_pos_shared);
    }
    std::size_t a_free_count = a_only.size();
    for (std::size_t r = 0; r < out.data.size(); r++) {
        std::size_t a_base = scatter(r & ((std::size_t{1} << a_free_count) - 1), a_pos_free);
        std::size_t b_base = scatter(r >> a_free_count, b_pos_free);
        Complex total = 0;
        for (std::size_t s = 0; s < a_shared_index.size(); s++) {
            total += a.data[a_base | a_shared_index[s]] * b.data[b_base | b_shared_index[s]];
        }
        out.data[r] = total;
    }
    return out;
}

std::size_t shared_count(const Tensor &a, const Tensor &b) {
    std::size_t n = 0;
    for (auto l : a.labels) {
        n += std::count(b.labels.begin(), b.labels.end(), l);
    }
    return n;
}

}  // namespace

std::size_t ZxGraph::add_node(ZxKind kind, int phase) {
    if (nodes_.size() >= kMaxZxNodes) {
        throw CapacityError(fmt::format("ZX graphs are limited to {} nodes", kMaxZxNodes));
    }
    nodes_.push_back(ZxNode{kind, normalize_phase(phase)});
    return nodes_.size() - 1;
}

void ZxGraph::add_edge(std::size_t a, std::size_t b) {
    if (a >= nodes_.size() || b >= nodes_.size()) {
        throw ArgumentError(fmt::format("edge ({}, {}) references a missing node", a, b));
    }
    if (a == b) {
        throw ArgumentError(fmt::format("self-loop on node {}", a));
    }
    edges_.emplace_back(a, b);
}

void ZxGraph::add_port(std::size_t node, PortDirection direction) {
    if (node >= nodes_.size()) {
        throw ArgumentError(fmt::format("port references missing node {}", node));
    }
    ports_.push_back(ZxPort{node, direction});
}

void ZxGraph::set_node(std::size_t index, ZxNode node) {
    if (index >= nodes_.size()) {
        throw ArgumentError(fmt::format("node {} out of range", index));
    }
    node.phase = normalize_phase(node.phase);
    nodes_[index] = node;
}

std::size_t ZxGraph::num_inputs() const {
    return std::count_if(ports_.begin(), ports_.end(), [](const ZxPort &p) { return p.direction == PortDirection::Input; });
}

std::size_t ZxGraph::num_outputs() const {
    return ports_.size() - num_inputs();
}

std::size_t ZxGraph::degree(std::size_t node) const {
    std::size_t n = 0;
    for (const auto &[a, b] : edges_) {
        n += (a == node) + (b == node);
    }
    for (const auto &p : ports_) {
        n += p.node == node;
    }
    return n;
}

void ZxGraph::validate() const {
    for (std::size_t i = 0; i < nodes_.size(); i++) {
        if (nodes_[i].kind == ZxKind::Hadamard && degree(i) != 2) {
            throw ArgumentError(fmt::format("hadamard marker {} has {} legs, expected 2", i, degree(i)));
        }
        if (nodes_[i].kind == ZxKind::DelayedChoice) {
            std::size_t edge_count = 0;
            for (const auto &[a, b] : edges_) {
                edge_count += (a == i) + (b == i);
            }
            if (edge_count != 1 || degree(i) != 1) {
                throw ArgumentError(fmt::format("delayed-choice node {} must have exactly one edge", i));
            }
        }
    }
}

EvaluatedMap evaluate(const ZxGraph &graph) {
    graph.validate();
    const auto &edges = graph.edges();
    const auto &ports = graph.ports();
    std::vector<std::vector<std::size_t>> legs(graph.nodes().size());
    for (std::size_t e = 0; e < edges.size(); e++) {
        legs[edges[e].first].push_back(e);
        legs[edges[e].second].push_back(e);
    }
    for (std::size_t p = 0; p < ports.size(); p++) {
        legs[ports[p].node].push_back(edges.size() + p);
    }
    std::vector<Tensor> tensors;
    for (std::size_t i = 0; i < graph.nodes().size(); i++) {
        if (legs[i].size() > kMaxZxRank) {
            throw CapacityError(fmt::format("node {} has {} legs", i, legs[i].size()));
        }
        tensors.push_back(node_tensor(graph.nodes()[i], legs[i]));
    }
    if (tensors.empty()) {
        tensors.push_back(Tensor{{}, {1.0}});
    }
    // Greedy contraction: always merge the connected pair giving the smallest result.
    while (tensors.size() > 1) {
        std::optional<std::pair<std::size_t, std::size_t>> best;
        std::size_t best_rank = 0;
        bool best_connected = false;
        for (std::size_t i = 0; i < tensors.size(); i++) {
            for (std::size_t j = i + 1; j < tensors.size(); j++) {
                std::size_t s = shared_count(tensors[i], tensors[j]);
                std::size_t rank = tensors[i].labels.size() + tensors[j].labels.size() - 2 * s;
                bool connected = s > 0;
                if (!best || (connected && !best_connected) || (connected == best_connected && rank < best_rank)) {
                    best = std::make_pair(i, j);
                    best_rank = rank;
                    best_connected = connected;
                }
            }
        }
        auto [i, j] = *best;
        Tensor merged = contract(tensors[i], tensors[j]);
        tensors[i] = std::move(merged);
        tensors.erase(tensors.begin() + static_cast<std::ptrdiff_t>(j));
    }
    const Tensor &t = tensors[0];

    EvaluatedMap out;
    out.num_inputs = graph.num_inputs();
    out.num_outputs = graph.num_outputs();
    // Bit position of each port within the row (outputs) or column (inputs) index.
    std::vector<std::size_t> port_bit(ports.size());
    std::size_t in_count = 0, out_count = 0;
    for (std::size_t p = 0; p < ports.size(); p++) {
        port_bit[p] = ports[p].direction == PortDirection::Input ? in_count++ : out_count++;
    }
    out.matrix = Eigen::MatrixXcd::Zero(std::size_t{1} << out.num_outputs, std::size_t{1} << out.num_inputs);
    for (std::size_t x = 0; x < t.data.size(); x++) {
        std::size_t row = 0, col = 0;
        for (std::size_t k = 0; k < t.labels.size(); k++) {
            if (!((x >> k) & 1)) {
                continue;
            }
            std::size_t p = t.labels[k] - edges.size();
            if (ports[p].direction == PortDirection::Input) {
                col |= std::size_t{1} << port_bit[p];
            } else {
                row |= std::size_t{1} << port_bit[p];
            }
        }
        out.matrix(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = t.data[x];
    }
    return out;
}

ZxGraph resolve_choice(const ZxGraph &graph, std::size_t node, Basis basis) {
    if (node >= graph.nodes().size() || graph.nodes()[node].kind != ZxKind::DelayedChoice) {
        throw ArgumentError(fmt::format("node {} is not a delayed-choice node", node));
    }
    ZxGraph out = graph;
    out.set_node(node, ZxNode{basis == Basis::X ? ZxKind::X : ZxKind::Z, 0});
    return out;
}

bool equiv_mod_pauli_scalar(const EvaluatedMap &a, const EvaluatedMap &b, double tolerance) {
    if (a.matrix.rows() != b.matrix.rows() || a.matrix.cols() != b.matrix.cols()) {
        throw ArgumentError(fmt::format("shape mismatch: {}x{} vs {}x{}", a.matrix.rows(), a.matrix.cols(),
                                        b.matrix.rows(), b.matrix.cols()));
    }
    const std::size_t rows = static_cast<std::size_t>(a.matrix.rows());
    const std::size_t cols = static_cast<std::size_t>(a.matrix.cols());
    double a_max = a.matrix.cwiseAbs().maxCoeff();
    double b_max = b.matrix.cwiseAbs().maxCoeff();
    if (a_max <= tolerance || b_max <= tolerance) {
        return a_max <= tolerance && b_max <= tolerance;
    }
    Eigen::MatrixXcd an = a.matrix / a_max;
    Eigen::MatrixXcd bn = b.matrix / b_max;
    Eigen::Index br = 0, bc = 0;
    bn.cwiseAbs().maxCoeff(&br, &bc);
    auto sign = [](std::size_t mask, std::size_t x) { return (std::popcount(mask & x) % 2) ? -1.0 : 1.0; };
    // (P b Q)[r][c] = s * b[r ^ px][c ^ qx] for P = X^px Z^pz, Q = X^qx Z^qz.
    for (std::size_t px = 0; px < rows; px++) {
        for (std::size_t pz = 0; pz < rows; pz++) {
            for (std::size_t qx = 0; qx < cols; qx++) {
                for (std::size_t qz = 0; qz < cols; qz++) {
                    auto entry = [&](std::size_t r, std::size_t c) {
                        return sign(pz, r ^ px) * sign(qz, c) *
                               bn(static_cast<Eigen::Index>(r ^ px), static_cast<Eigen::Index>(c ^ qx));
                    };
                    std::size_t r0 = static_cast<std::size_t>(br) ^ px;
                    std::size_t c0 = static_cast<std::size_t>(bc) ^ qx;
                    Complex scale = an(static_cast<Eigen::Index>(r0), static_cast<Eigen::Index>(c0)) / entry(r0, c0);
                    if (std::abs(scale) <= tolerance) {
                        continue;
                    }
                    bool match = true;
                    for (std::size_t r = 0; r < rows && match; r++) {
                        for (std::size_t c = 0; c < cols; c++) {
                            if (std::abs(an(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) -
                                         scale * entry(r, c)) > tolerance) {
                                match = false;
                                break;
                            }
                        }
                    }
                    if (match) {
                        return true;
                    }
                }
            }
        }
    }
    return false;
}

ZxGraph swap_colors(const ZxGraph &graph) {
    ZxGraph out = graph;
    for (std::size_t i = 0; i < graph.nodes().size(); i++) {
        auto n = graph.nodes()[i];
        if (n.kind == ZxKind::Z) {
            n.kind = ZxKind::X;
        } else if (n.kind == ZxKind::X) {
            n.kind = ZxKind::Z;
        }
        out.set_node(i, n);
    }
    return out;
}

EvaluatedMap unitary_map(std::size_t num_qubits, std::span<const GateSpec> gates) {
    EvaluatedMap out;
    out.num_inputs = num_qubits;
    out.num_outputs = num_qubits;
    auto dim = static_cast<Eigen::Index>(std::size_t{1} << num_qubits);
    out.matrix = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index c = 0; c < dim; c++) {
        auto s = StateVector::basis(num_qubits, static_cast<std::uint64_t>(c));
        for (const auto &g : gates) {
            apply_gate_in_place(s, g);
        }
        for (Eigen::Index r = 0; r < dim; r++) {
            out.matrix(r, c) = s[static_cast<std::size_t>(r)];
        }
    }
    return out;
}

ZxGraph circuit_branch_to_zx(const Circuit &circuit, std::span<const std::uint8_t> outcomes,
                             std::span<const std::size_t> data_qubits) {
    if (outcomes.size() != circuit.measurement_count()) {
        throw ArgumentError(fmt::format("{} outcomes given for {} measurements", outcomes.size(),
                                        circuit.measurement_count()));
    }
    const std::size_t n = circuit.num_qubits();
    std::vector<bool> is_data(n, false);
    for (auto q : data_qubits) {
        if (q >= n || is_data[q]) {
            throw ArgumentError(fmt::format("bad data qubit {}", q));
        }
        is_data[q] = true;
    }
    ZxGraph g;
    // Node whose free leg continues each wire, or the value a closed (measured) wire holds.
    std::vector<std::size_t> end(n, 0);
    std::vector<std::optional<std::uint8_t>> closed(n);
    for (auto q : data_qubits) {
        end[q] = g.add_node(ZxKind::Z);
        g.add_port(end[q], PortDirection::Input);
    }
    for (std::size_t q = 0; q < n; q++) {
        if (!is_data[q]) {
            end[q] = g.add_node(circuit.initial_states()[q] == InitialState::Plus ? ZxKind::Z : ZxKind::X);
        }
    }
    auto open = [&](std::size_t q) {
        if (closed[q]) {
            end[q] = g.add_node(ZxKind::X, 4 * *closed[q]);
            closed[q].reset();
        }
    };
    auto extend = [&](std::size_t q, ZxKind kind, int phase) {
        open(q);
        auto node = g.add_node(kind, phase);
        g.add_edge(end[q], node);
        end[q] = node;
        return node;
    };

    std::vector<std::uint8_t> records;
    for (const auto &step : circuit.steps()) {
        if (const auto *f = std::get_if<FrameOp>(&step.op)) {
            (void)f;
            continue;
        }
        if (const auto *m = std::get_if<MeasureOp>(&step.op)) {
            Basis basis = m->basis;
            if (m->swap_basis && m->swap_basis->evaluate(records)) {
                basis = basis == Basis::Z ? Basis::X : Basis::Z;
            }
            std::uint8_t outcome = outcomes[records.size()];
            extend(m->qubit, basis == Basis::Z ? ZxKind::X : ZxKind::Z, 4 * outcome);
            closed[m->qubit] = outcome;
            records.push_back(outcome);
            continue;
        }
        const auto &op = std::get<GateOp>(step.op);
        if (op.control && !op.control->evaluate(records)) {
            continue;
        }
        const auto &t = op.gate.targets;
        switch (op.gate.kind) {
            case GateKind::X:
                extend(t[0], ZxKind::X, 4);
                break;
            case GateKind::Z:
                extend(t[0], ZxKind::Z, 4);
                break;
            case GateKind::S:
                extend(t[0], ZxKind::Z, 2);
                break;
            case GateKind::H:
                extend(t[0], ZxKind::Hadamard, 0);
                break;
            case GateKind::CX: {
                auto c = extend(t[0], ZxKind::Z, 0);
                auto x = extend(t[1], ZxKind::X, 0);
                g.add_edge(c, x);
                break;
            }
            case GateKind::CZ: {
                auto a = extend(t[0], ZxKind::Z, 0);
                auto b = extend(t[1], ZxKind::Z, 0);
                auto h = g.add_node(ZxKind::Hadamard);
                g.add_edge(a, h);
                g.add_edge(h, b);
                break;
            }
            case GateKind::SWAP:
                open(t[0]);
                open(t[1]);
                std::swap(end[t[0]], end[t[1]]);
                break;
            case GateKind::CCZ: {
                // Phase polynomial: pi/4 (a + b + c - a^b - a^c - b^c + a^b^c).
                std::size_t z[3];
                for (std::size_t k = 0; k < 3; k++) {
                    z[k] = extend(t[k], ZxKind::Z, 1);
                }
                auto gadget = [&](std::initializer_list<std::size_t> members, int phase) {
                    auto hub = g.add_node(ZxKind::X);
                    for (auto k : members) {
                        g.add_edge(hub, z[k]);
                    }
                    auto leaf = g.add_node(ZxKind::Z, phase);
                    g.add_edge(hub, leaf);
                };
                gadget({0, 1}, -1);
                gadget({0, 2}, -1);
                gadget({1, 2}, -1);
                gadget({0, 1, 2}, 1);
                break;
            }
        }
    }
    for (std::size_t q = 0; q < n; q++) {
        if (is_data[q]) {
            auto out = extend(q, ZxKind::Z, 0);
            g.add_port(out, PortDirection::Output);
        } else if (!closed[q]) {
            throw ContractError(fmt::format("non-data qubit {} is not measured out at the end of the branch", q));
        }
    }
    return g;
}

EvaluatedMap branch_kraus(const Circuit &circuit, std::span<const std::uint8_t> outcomes,
                          std::span<const std::size_t> data_qubits) {
    const std::size_t d = data_qubits.size();
    EvaluatedMap out;
    out.num_inputs = d;
    out.num_outputs = d;
    auto dim = static_cast<Eigen::Index>(std::size_t{1} << d);
    out.matrix = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index c = 0; c < dim; c++) {
        auto input = prepare_input(circuit, data_qubits, StateVector::basis(d, static_cast<std::uint64_t>(c)));
        auto run = run_forced_branch(circuit, input, outcomes);
        auto column = restrict_to_data(run.amplitudes, run.measured, data_qubits);
        for (Eigen::Index r = 0; r < dim; r++) {
            out.matrix(r, c) = column[static_cast<std::size_t>(r)];
        }
    }
    return out;
}

ZxGraph delayed_choice_cz_graph() {
    ZxGraph g;
    auto u = g.add_node(ZxKind::Z);
    auto v = g.add_node(ZxKind::Z);
    auto a = g.add_node(ZxKind::X);
    auto b = g.add_node(ZxKind::X);
    auto p = g.add_node(ZxKind::Z);
    auto q = g.add_node(ZxKind::Z);
    auto h = g.add_node(ZxKind::Hadamard);
    auto ca = g.add_node(ZxKind::DelayedChoice);
    auto cb = g.add_node(ZxKind::DelayedChoice);
    g.add_port(u, PortDirection::Input);
    g.add_port(v, PortDirection::Input);
    g.add_port(u, PortDirection::Output);
    g.add_port(v, PortDirection::Output);
    g.add_edge(u, a);
    g.add_edge(v, b);
    g.add_edge(a, p);
    g.add_edge(b, q);
    g.add_edge(p, h);
    g.add_edge(h, q);
    g.add_edge(a, ca);
    g.add_edge(b, cb);
    return g;
}

ZxGraph route_fork_graph() {
    ZxGraph g;
    auto u = g.add_node(ZxKind::Z);
    auto ra = g.add_node(ZxKind::X);
    auto rb = g.add_node(ZxKind::X);
    auto ca = g.add_node(ZxKind::DelayedChoice);
    auto cb = g.add_node(ZxKind::DelayedChoice);
    g.add_port(u, PortDirection::Input);
    g.add_port(ra, PortDirection::Output);
    g.add_port(rb, PortDirection::Output);
    g.add_edge(u, ra);
    g.add_edge(u, rb);
    g.add_edge(ra, ca);
    g.add_edge(rb, cb);
    return g;
}

}  // namespace latticeplan
