#include "latticeplan/circuit_text.h"

#include <charconv>
#include <optional>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "latticeplan/errors.h"

namespace latticeplan {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); i++) {
        if (i == s.size() || s[i] == sep) {
            parts.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    return parts;
}

std::vector<std::string_view> words(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) {
            i++;
        }
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) {
            j++;
        }
        if (j > i) {
            out.push_back(s.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

std::size_t parse_index(std::string_view token) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
        throw ArgumentError(fmt::format("expected a non-negative integer, got '{}'", token));
    }
    return value;
}

std::size_t parse_qubit(const std::vector<std::string_view> &args, std::size_t expected, std::string_view opcode,
                        std::size_t k) {
    if (args.size() != expected) {
        throw ArgumentError(fmt::format("{} takes {} qubit argument(s), got {}", opcode, expected, args.size()));
    }
    return parse_index(args[k]);
}

void parse_line(Circuit *&circuit, std::optional<Circuit> &storage, std::string_view line) {
    std::optional<Site> site;
    if (auto at = line.find('@'); at != std::string_view::npos) {
        auto name = trim(line.substr(at + 1));
        site = parse_site_name(name);
        if (!site) {
            throw ArgumentError(fmt::format("unknown site '{}'", name));
        }
        line = trim(line.substr(0, at));
    }
    auto tokens = words(line);
    std::optional<Condition> condition;
    for (std::size_t i = 0; i < tokens.size(); i++) {
        if (tokens[i] == "if") {
            auto rest = line.substr(static_cast<std::size_t>(tokens[i].data() - line.data()) + 2);
            condition = parse_condition(rest);
            tokens.resize(i);
            break;
        }
    }
    if (tokens.empty()) {
        throw ArgumentError("missing opcode");
    }
    auto opcode = tokens[0];
    std::vector<std::string_view> args(tokens.begin() + 1, tokens.end());

    if (opcode == "QUBITS") {
        if (circuit) {
            throw ArgumentError("QUBITS given twice or after an operation");
        }
        storage.emplace(parse_qubit(args, 1, opcode, 0));
        circuit = &*storage;
        return;
    }
    if (!circuit) {
        throw ArgumentError("the first operation must be QUBITS");
    }
    Site where = site.value_or(Site::Unspecified);
    if (opcode == "INIT") {
        if (args.empty() || (args[0] != "+" && args[0] != "0")) {
            throw ArgumentError("INIT takes '0' or '+' followed by qubit indices");
        }
        auto state = args[0] == "+" ? InitialState::Plus : InitialState::Zero;
        for (std::size_t i = 1; i < args.size(); i++) {
            circuit->set_initial_state(parse_index(args[i]), state);
        }
        return;
    }
    if (opcode == "M" || opcode == "MZ" || opcode == "MX" || opcode == "MZX" || opcode == "MXZ") {
        auto q = parse_qubit(args, 1, opcode, 0);
        Basis basis = (opcode == "MX" || opcode == "MXZ") ? Basis::X : Basis::Z;
        bool adaptive = opcode == "MZX" || opcode == "MXZ";
        if (adaptive != condition.has_value()) {
            throw ArgumentError(adaptive ? fmt::format("{} requires an 'if' basis-swap condition", opcode)
                                         : fmt::format("{} does not take a condition", opcode));
        }
        if (adaptive) {
            circuit->measure_adaptive(q, basis, *condition, where);
        } else {
            circuit->measure(q, basis, where);
        }
        return;
    }
    if (opcode == "FRAME_X" || opcode == "FRAME_Z") {
        auto q = parse_qubit(args, 1, opcode, 0);
        circuit->frame(opcode == "FRAME_X" ? Pauli::X : Pauli::Z, q, condition.value_or(Condition::constant(true)),
                       where);
        return;
    }
    auto kind = parse_gate_name(opcode);
    if (!kind) {
        throw ArgumentError(fmt::format("unknown opcode '{}'", opcode));
    }
    std::vector<std::size_t> targets;
    for (auto a : args) {
        targets.push_back(parse_index(a));
    }
    if (condition) {
        circuit->controlled_gate(*kind, std::move(targets), *condition, where);
    } else {
        circuit->gate(*kind, std::move(targets), where);
    }
}

}  // namespace

Condition parse_condition(std::string_view text) {
    text = trim(text);
    if (text.empty()) {
        throw ArgumentError("empty condition");
    }
    Condition result;
    for (auto term : split(text, '^')) {
        Condition product = Condition::constant(true);
        for (auto factor : split(term, '&')) {
            if (factor == "0") {
                product = Condition();
            } else if (factor == "1") {
            } else if (factor.size() >= 2 && factor[0] == 'm') {
                product = product & Condition::record(parse_index(factor.substr(1)));
            } else {
                throw ArgumentError(fmt::format("bad condition factor '{}'", factor));
            }
        }
        result = result ^ product;
    }
    return result;
}

std::string format_condition(const Condition &condition) {
    if (condition.is_zero()) {
        return "0";
    }
    std::vector<std::string> terms;
    for (const auto &m : condition.monomials()) {
        if (m.empty()) {
            terms.emplace_back("1");
            continue;
        }
        std::vector<std::string> factors;
        for (auto k : m) {
            factors.push_back(fmt::format("m{}", k));
        }
        terms.push_back(fmt::format("{}", fmt::join(factors, "&")));
    }
    return fmt::format("{}", fmt::join(terms, " ^ "));
}

Circuit parse_circuit(std::string_view text) {
    std::optional<Circuit> storage;
    Circuit *circuit = nullptr;
    std::size_t line_number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        auto line = text.substr(start, end - start);
        start = end + 1;
        line_number++;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        try {
            parse_line(circuit, storage, line);
        } catch (const ContractError &e) {
            throw ContractError(fmt::format("line {}: {}", line_number, e.what()));
        } catch (const CapacityError &e) {
            throw CapacityError(fmt::format("line {}: {}", line_number, e.what()));
        } catch (const ArgumentError &e) {
            throw ArgumentError(fmt::format("line {}: {}", line_number, e.what()));
        }
    }
    if (!circuit) {
        throw ArgumentError("circuit text has no QUBITS line");
    }
    return std::move(*storage);
}

std::string format_circuit(const Circuit &circuit) {
    std::ostringstream out;
    out << "QUBITS " << circuit.num_qubits() << "\n";
    std::vector<std::size_t> plus;
    for (std::size_t q = 0; q < circuit.num_qubits(); q++) {
        if (circuit.initial_states()[q] == InitialState::Plus) {
            plus.push_back(q);
        }
    }
    if (!plus.empty()) {
        out << "INIT + " << fmt::format("{}", fmt::join(plus, " ")) << "\n";
    }
    for (const auto &step : circuit.steps()) {
        std::visit(
            [&](const auto &op) {
                using T = std::decay_t<decltype(op)>;
                if constexpr (std::is_same_v<T, GateOp>) {
                    out << gate_name(op.gate.kind) << " " << fmt::format("{}", fmt::join(op.gate.targets, " "));
                    if (op.control) {
                        out << " if " << format_condition(*op.control);
                    }
                } else if constexpr (std::is_same_v<T, MeasureOp>) {
                    if (op.swap_basis) {
                        out << (op.basis == Basis::Z ? "MZX " : "MXZ ") << op.qubit << " if "
                            << format_condition(*op.swap_basis);
                    } else {
                        out << (op.basis == Basis::Z ? "M " : "MX ") << op.qubit;
                    }
                } else {
                    out << (op.pauli == Pauli::X ? "FRAME_X " : "FRAME_Z ") << op.qubit << " if "
                        << format_condition(op.condition);
                }
            },
            step.op);
        if (step.site != Site::Unspecified) {
            out << " @" << site_name(step.site);
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace latticeplan
