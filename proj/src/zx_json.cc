#include "latticeplan/zx_json.h"

#include <fmt/format.h>
#include <json.hpp>

#include "latticeplan/circuit_text.h"
#include "latticeplan/errors.h"

namespace latticeplan {

namespace {

using nlohmann::json;

ZxKind parse_kind(const std::string &s) {
    if (s == "Z") return ZxKind::Z;
    if (s == "X") return ZxKind::X;
    if (s == "H") return ZxKind::Hadamard;
    if (s == "choice") return ZxKind::DelayedChoice;
    throw ArgumentError(fmt::format("unknown node kind '{}'", s));
}

std::string kind_name(ZxKind k) {
    switch (k) {
        case ZxKind::Z:
            return "Z";
        case ZxKind::X:
            return "X";
        case ZxKind::Hadamard:
            return "H";
        case ZxKind::DelayedChoice:
            return "choice";
    }
    return "?";
}

Basis parse_basis(const std::string &s) {
    if (s == "X") return Basis::X;
    if (s == "Z") return Basis::Z;
    throw ArgumentError(fmt::format("choice basis must be X or Z, got '{}'", s));
}

GateSpec parse_gate_line(const std::string &line) {
    auto c = parse_circuit("QUBITS " + std::to_string(kMaxQubits) + "\n" + line);
    if (c.steps().size() != 1 || !std::holds_alternative<GateOp>(c.steps()[0].op)) {
        throw ArgumentError(fmt::format("expected one gate, got '{}'", line));
    }
    const auto &op = std::get<GateOp>(c.steps()[0].op);
    if (op.control) {
        throw ArgumentError("expected gates cannot be classically controlled");
    }
    return op.gate;
}

}  // namespace

ZxFixture parse_zx_fixture(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error &e) {
        throw ArgumentError(fmt::format("invalid JSON: {}", e.what()));
    }
    ZxFixture f;
    try {
        for (const auto &n : j.at("nodes")) {
            f.graph.add_node(parse_kind(n.at("kind").get<std::string>()), n.value("phase", 0));
        }
        for (const auto &e : j.at("edges")) {
            f.graph.add_edge(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
        }
        for (const auto &p : j.at("ports")) {
            auto dir = p.at("direction").get<std::string>();
            if (dir != "input" && dir != "output") {
                throw ArgumentError(fmt::format("port direction must be input or output, got '{}'", dir));
            }
            f.graph.add_port(p.at("node").get<std::size_t>(),
                             dir == "input" ? PortDirection::Input : PortDirection::Output);
        }
        if (j.contains("choices")) {
            for (const auto &[key, value] : j.at("choices").items()) {
                f.choices.emplace_back(std::stoul(key), parse_basis(value.get<std::string>()));
            }
        }
        if (j.contains("expect")) {
            const auto &e = j.at("expect");
            if (e.contains("gates")) {
                std::vector<GateSpec> gates;
                for (const auto &line : e.at("gates")) {
                    gates.push_back(parse_gate_line(line.get<std::string>()));
                }
                f.expect = unitary_map(e.at("qubits").get<std::size_t>(), gates);
            } else if (e.contains("matrix")) {
                const auto &rows = e.at("matrix");
                EvaluatedMap m;
                auto r = static_cast<Eigen::Index>(rows.size());
                auto c = static_cast<Eigen::Index>(r ? rows.at(0).size() : 0);
                m.matrix = Eigen::MatrixXcd::Zero(r, c);
                for (Eigen::Index i = 0; i < r; i++) {
                    if (static_cast<Eigen::Index>(rows.at(i).size()) != c) {
                        throw ArgumentError("ragged expect matrix");
                    }
                    for (Eigen::Index k = 0; k < c; k++) {
                        const auto &entry = rows.at(i).at(k);
                        m.matrix(i, k) = Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
                    }
                }
                m.num_outputs = static_cast<std::size_t>(std::log2(static_cast<double>(r)));
                m.num_inputs = static_cast<std::size_t>(std::log2(static_cast<double>(c)));
                f.expect = std::move(m);
            } else {
                throw ArgumentError("expect needs 'gates' or 'matrix'");
            }
        }
    } catch (const json::exception &e) {
        throw ArgumentError(fmt::format("malformed ZX fixture: {}", e.what()));
    }
    f.graph.validate();
    return f;
}

std::string format_zx_graph(const ZxGraph &graph) {
    json j;
    j["nodes"] = json::array();
    for (const auto &n : graph.nodes()) {
        json node = {{"kind", kind_name(n.kind)}};
        if (n.kind == ZxKind::Z || n.kind == ZxKind::X) {
            node["phase"] = n.phase;
        }
        j["nodes"].push_back(node);
    }
    j["edges"] = json::array();
    for (const auto &[a, b] : graph.edges()) {
        j["edges"].push_back({a, b});
    }
    j["ports"] = json::array();
    for (const auto &p : graph.ports()) {
        j["ports"].push_back({{"node", p.node}, {"direction", p.direction == PortDirection::Input ? "input" : "output"}});
    }
    return j.dump(2) + "\n";
}

ZxCheck check_zx_fixture(const ZxFixture &fixture) {
    ZxGraph g = fixture.graph;
    for (const auto &[node, basis] : fixture.choices) {
        g = resolve_choice(g, node, basis);
    }
    auto map = evaluate(g);
    ZxCheck check;
    check.inputs = map.num_inputs;
    check.outputs = map.num_outputs;
    if (fixture.expect) {
        check.compared = true;
        check.ok = map.matrix.rows() == fixture.expect->matrix.rows() &&
                   map.matrix.cols() == fixture.expect->matrix.cols() && equiv_mod_pauli_scalar(map, *fixture.expect);
    }
    return check;
}

}  // namespace latticeplan
