#include "latticeplan/cli.h"

#include <optional>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "latticeplan/circuit_text.h"
#include "latticeplan/config.h"
#include "latticeplan/constructions.h"
#include "latticeplan/errors.h"
#include "latticeplan/factory_model.h"
#include "latticeplan/layout.h"
#include "latticeplan/scheduler.h"
#include "latticeplan/zx_json.h"

namespace latticeplan {

namespace {

using nlohmann::ordered_json;

struct Globals {
    std::string config_path;
    bool json = false;
};

std::uint64_t seed_from_env() {
    const char *text = std::getenv("LATTICEPLAN_SEED");
    if (!text || !*text) return kDefaultSeed;
    try {
        std::size_t used = 0;
        auto value = std::stoull(text, &used);
        if (used == std::string(text).size()) return value;
    } catch (const std::exception &) {
    }
    throw UsageError(fmt::format("LATTICEPLAN_SEED must be an unsigned integer, got '{}'", text));
}

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot read '{}'", path));
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string &path, const std::string &contents) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError(fmt::format("cannot write '{}'", path));
    file << contents;
    if (!file) throw IoError(fmt::format("failed writing '{}'", path));
}

void add_physical_flags(CLI::App *sub, RunConfig &flags) {
    sub->add_option("--cycle-time", flags.cycle_time_us, "Surface code cycle time in microseconds");
    sub->add_option("--reaction-time", flags.reaction_time_us, "Control system reaction time in microseconds");
    sub->add_option("--gate-error", flags.gate_error, "Physical gate error rate");
    sub->add_option("--target-volume", flags.target_volume, "Toffoli count the distances must support");
    sub->add_option("--d1", flags.d1, "Level-1 code distance");
    sub->add_option("--d2", flags.d2, "Level-2 code distance");
    sub->add_option("--injection", flags.injection, "overlapped or legacy");
}

RunConfig resolve(const Globals &globals, const RunConfig &flags) {
    RunConfig config;
    if (!globals.config_path.empty()) config = load_config(globals.config_path);
    config.merge(flags);
    config.validate();
    return config;
}

std::int64_t factories_or_default(const RunConfig &config, const FactorySpec &spec) {
    return config.factories ? *config.factories : factories_for_reaction_limit(spec, config.assumptions());
}

std::string rational_text(const Rational &r) {
    return r.denominator() == 1 ? fmt::format("{}", r.numerator())
                                : fmt::format("{}/{}", r.numerator(), r.denominator());
}

int cmd_verify(const Globals &globals, const std::vector<std::string> &names, const std::string &zx_path, bool emit,
               std::ostream &out) {
    resolve(globals, RunConfig{});
    bool all_ok = true;
    ordered_json reports = ordered_json::array();

    if (!zx_path.empty()) {
        auto check = check_zx_fixture(parse_zx_fixture(read_file(zx_path)));
        all_ok = check.ok;
        if (globals.json) {
            reports.push_back({{"name", zx_path}, {"ok", check.ok}, {"inputs", check.inputs},
                               {"outputs", check.outputs}, {"compared", check.compared}});
        } else {
            out << fmt::format("{} {}: {} inputs, {} outputs, {}\n", check.ok ? "PASS" : "FAIL", zx_path,
                               check.inputs, check.outputs, check.compared ? "compared with expected map" : "evaluated");
        }
    }

    std::vector<std::string> leaves;
    for (const auto &n : names) {
        for (auto &leaf : expand_construction_name(n)) leaves.push_back(std::move(leaf));
    }
    auto seed = seed_from_env();
    for (const auto &name : leaves) {
        if (emit) {
            out << "# " << name << "\n" << format_circuit(build_named(name).circuit);
            continue;
        }
        auto report = verify_named(name, seed);
        all_ok = all_ok && report.ok;
        if (globals.json) {
            reports.push_back({{"name", report.name},
                               {"ok", report.ok},
                               {"basis_inputs", report.basis_inputs},
                               {"random_inputs", report.random_inputs},
                               {"branches_checked", report.branches_checked},
                               {"zero_probability_branches", report.zero_probability_branches},
                               {"failure", report.failure}});
        } else {
            out << fmt::format("{} {}: {} basis + {} random inputs, {} branches ({} zero-probability){}\n",
                               report.ok ? "PASS" : "FAIL", report.name, report.basis_inputs, report.random_inputs,
                               report.branches_checked, report.zero_probability_branches,
                               report.ok ? "" : " " + report.failure);
        }
    }
    if (globals.json && !emit) out << reports.dump(2) << "\n";
    return all_ok ? kExitOk : kExitCheckFailed;
}

int cmd_estimate(const Globals &globals, const RunConfig &flags, std::ostream &out) {
    auto config = resolve(globals, flags);
    auto a = config.assumptions();
    auto volume = config.target_volume.value_or(kDefaultTargetVolume);
    auto selected = select_code_distances(a, volume);
    auto spec = config.factory_spec();
    auto report = ccz_rate(spec, a);
    bool given = config.d1 && config.d2;

    if (globals.json) {
        ordered_json j;
        j["cycle_time_us"] = a.cycle_time_us;
        j["reaction_time_us"] = a.reaction_time_us;
        j["gate_error"] = a.gate_error;
        j["d1"] = spec.d1;
        j["d2"] = spec.d2;
        j["distances_given"] = given;
        j["level2_rate_khz"] = to_double(report.level2_rate_khz);
        j["level2_rate_exact"] = rational_text(report.level2_rate_khz);
        j["level1_bound_khz"] = to_double(report.level1_bound_khz);
        j["level1_bound_exact"] = rational_text(report.level1_bound_khz);
        j["effective_rate_khz"] = to_double(report.effective_rate_khz);
        j["limiting_factor"] = limiting_factor_name(report.limiting_factor);
        j["factories_needed"] = report.factories_needed;
        j["physical_qubits"] = report.physical_qubits_total;
        j["t_factory_fallback"] = selected.t_factory_fallback;
        out << j.dump(2) << "\n";
        return kExitOk;
    }
    out << fmt::format("distances: d1 = {}, d2 = {} ({})\n", spec.d1, spec.d2,
                       given ? "given" : fmt::format("selected for {:g} Toffolis", volume));
    out << fmt::format("level-2 CCZ rate: {} kHz ({})\n", format_sig2(to_double(report.level2_rate_khz)),
                       rational_text(report.level2_rate_khz));
    out << fmt::format("level-1 bound: {} kHz ({})\n", format_sig2(to_double(report.level1_bound_khz)),
                       rational_text(report.level1_bound_khz));
    out << fmt::format("limiting factor: {}\n", limiting_factor_name(report.limiting_factor));
    out << fmt::format("{} factories, {} kHz, {:.2f}M qubits\n", report.factories_needed,
                       format_sig2(to_double(report.effective_rate_khz)),
                       static_cast<double>(report.physical_qubits_total) / 1e6);
    out << fmt::format("physical qubits in factories: {}\n", report.physical_qubits_total);
    if (selected.t_factory_fallback) {
        out << "advisory: target volume above 1e13 Toffolis; prefer T-factory output\n";
    }
    return kExitOk;
}

int cmd_schedule(const Globals &globals, const RunConfig &flags, std::ostream &out) {
    auto config = resolve(globals, flags);
    auto a = config.assumptions();
    auto spec = config.factory_spec();
    auto n = factories_or_default(config, spec);
    auto mode = config.mode.value_or("adder");
    int m = config.m.value_or(1000);

    ScheduleTrace trace;
    if (mode == "adder") {
        trace = simulate_reaction_limited(build_adder_dag(m), spec, a, n);
    } else if (mode == "lookup") {
        trace = simulate_lookup(config.lookup_spec(), spec, a, n);
    } else {
        trace = phase_timeline(config.lookup_spec(), m, spec, a, n);
    }
    if (config.out) write_file(*config.out, trace_to_json_lines(trace));
    std::optional<double> access_khz;
    if (mode != "adder") {
        access_khz = to_double(cnot_access_rate(spec.d2, a, config.lookup_spec().access_sides));
    }

    if (globals.json) {
        ordered_json j;
        j["mode"] = mode;
        j["factories"] = n;
        j["makespan_ns"] = trace.makespan_ns;
        j["makespan_ms"] = trace.makespan_ms();
        j["steps"] = trace.steps;
        j["limiting_factor"] = trace.limiting_factor;
        if (access_khz) j["access_rate_khz"] = *access_khz;
        j["events"] = trace.events.size();
        ordered_json phases = ordered_json::array();
        for (const auto &p : trace.phases) {
            phases.push_back({{"name", p.name}, {"start_ns", p.start_ns}, {"duration_ns", p.duration_ns},
                              {"toffolis", p.toffolis}});
        }
        j["phases"] = phases;
        out << j.dump(2) << "\n";
        return kExitOk;
    }
    out << fmt::format("{} schedule with {} factories at d1 = {}, d2 = {}\n", mode, n, spec.d1, spec.d2);
    out << fmt::format("makespan ≈ {:.1f} ms\n", trace.makespan_ms());
    if (access_khz) {
        out << fmt::format("CNOT access rate: {:.1f} kHz, sides: {}\n", *access_khz,
                           config.lookup_spec().access_sides);
    }
    out << trace_summary(trace);
    return kExitOk;
}

int cmd_layout(const Globals &globals, const RunConfig &flags, std::ostream &out) {
    auto config = resolve(globals, flags);
    auto spec = config.factory_spec();
    auto pattern = config.pattern.value_or("adder");
    Floorplan plan = pattern == "adder"
                         ? plan_adder_layout(config.m.value_or(1000), spec,
                                             static_cast<int>(factories_or_default(config, spec)),
                                             config.layout_options())
                         : plan_lookup_layout(config.rows.value_or(4), spec, config.layout_options());
    auto errors = validate_floorplan(plan);
    if (config.out) {
        write_file(*config.out + ".svg", export_floorplan(plan, "svg"));
        write_file(*config.out + ".json", export_floorplan(plan, "json"));
    }
    auto maj = maj_block();
    auto routing = delayed_choice_routing_comparison();
    int fixups = 0;
    for (const auto &r : plan.regions) fixups += r.role == TileRole::FixupBox;

    if (globals.json) {
        ordered_json j;
        j["pattern"] = pattern;
        j["width"] = plan.width;
        j["height"] = plan.height;
        j["patch_distance"] = plan.patch_distance;
        j["factories"] = plan.n_factories;
        j["fixup_boxes"] = fixups;
        j["valid"] = errors.empty();
        j["errors"] = errors;
        j["maj_block_volume"] = maj.volume();
        j["routing_volume_ratio"] = to_double(routing.ratio);
        out << j.dump(2) << "\n";
    } else {
        out << fmt::format("{} layout: {} x {} patches at d = {}\n", pattern, plan.width, plan.height,
                           plan.patch_distance);
        if (plan.kind == PlanKind::Adder) {
            out << fmt::format("factories: {}, fixup boxes: {}\n", plan.n_factories, fixups);
        } else {
            out << fmt::format("register rows: {}\n", plan.rows);
        }
        out << fmt::format("MAJ block volume: {} ({} x {} x {})\n", maj.volume(), maj.w, maj.h, maj.t);
        out << fmt::format("routing volume ratio, multiplexer / delayed choice: {}\n", rational_text(routing.ratio));
        out << fmt::format("validator: {}\n", errors.empty() ? "pass" : "FAIL");
        for (const auto &e : errors) out << "  " << e << "\n";
    }
    return errors.empty() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Reaction-limited surface code resource planner"};
    app.name("latticeplan");
    app.require_subcommand(1);
    app.fallthrough();
    Globals globals;
    RunConfig flags;
    app.add_option("--config", globals.config_path, "key = value settings file");
    app.add_flag("--json", globals.json, "Emit JSON reports");
    app.add_option("--out", flags.out, "Trace file (schedule) or output prefix (layout)");

    auto *verify = app.add_subcommand("verify", "Check constructions against their target maps");
    std::vector<std::string> names;
    std::string zx_path;
    bool emit = false;
    verify->add_option("names", names, "Construction names or groups (default: all)");
    verify->add_option("--zx", zx_path, "ZX graph fixture to evaluate");
    verify->add_flag("--emit", emit, "Print circuits instead of verifying");

    auto *estimate = app.add_subcommand("estimate", "Factory throughput and footprint");
    add_physical_flags(estimate, flags);

    auto *schedule = app.add_subcommand("schedule", "Reaction-limited schedule simulation");
    add_physical_flags(schedule, flags);
    schedule->add_option("--mode", flags.mode, "adder, lookup or timeline");
    schedule->add_option("--m", flags.m, "Adder width");
    schedule->add_option("--entries", flags.entries, "Lookup entries");
    schedule->add_option("--sides", flags.sides, "Lookup access sides (1 or 2)");
    schedule->add_option("--lookup-toffolis", flags.lookup_toffolis, "Lookup Toffoli count (default entries - 1)");
    schedule->add_option("--factories", flags.factories, "CCZ factories (default: reaction limit)");

    auto *layout = app.add_subcommand("layout", "Floorplan generation and validation");
    add_physical_flags(layout, flags);
    layout->add_option("--pattern", flags.pattern, "adder or R_L_L_R");
    layout->add_option("--m", flags.m, "Adder width");
    layout->add_option("--factories", flags.factories, "CCZ factories (default: reaction limit)");
    layout->add_option("--rows", flags.rows, "Register rows for R_L_L_R");
    layout->add_option("--width", flags.width, "Grid width in patches");
    layout->add_option("--stride", flags.stride, "Intra-row interleaving stride");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (verify->parsed()) {
            if (names.empty() && zx_path.empty()) names.push_back("all");
            return cmd_verify(globals, names, zx_path, emit, out);
        }
        if (estimate->parsed()) return cmd_estimate(globals, flags, out);
        if (schedule->parsed()) return cmd_schedule(globals, flags, out);
        return cmd_layout(globals, flags, out);
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ThresholdError &e) {
        err << "threshold error: " << e.what() << "\n";
        return kExitError;
    } catch (const ArgumentError &e) {
        err << "argument error: " << e.what() << "\n";
        return kExitError;
    } catch (const CapacityError &e) {
        err << "capacity error: " << e.what() << "\n";
        return kExitError;
    } catch (const IoError &e) {
        err << "I/O error: " << e.what() << "\n";
        return kExitError;
    } catch (const ContractError &e) {
        err << "contract error: " << e.what() << "\n";
        return kExitError;
    }
}

}  // namespace latticeplan
