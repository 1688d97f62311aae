#include "latticeplan/config.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "latticeplan/errors.h"

namespace latticeplan {

namespace {

std::string trim(std::string_view s) {
    auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) return "";
    auto end = s.find_last_not_of(" \t\r");
    return std::string(s.substr(begin, end - begin + 1));
}

template <typename T>
T parse_number(const std::string &text) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw UsageError(fmt::format("'{}' is not a valid number", text));
    }
    return value;
}

template <>
double parse_number<double>(const std::string &text) {
    std::size_t used = 0;
    double value = 0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception &) {
        throw UsageError(fmt::format("'{}' is not a valid number", text));
    }
    if (used != text.size()) throw UsageError(fmt::format("'{}' is not a valid number", text));
    return value;
}

using Setter = std::function<void(RunConfig &, const std::string &)>;

template <typename T>
Setter set(std::optional<T> RunConfig::*field) {
    return [field](RunConfig &c, const std::string &v) {
        if constexpr (std::is_same_v<T, std::string>) {
            c.*field = v;
        } else {
            c.*field = parse_number<T>(v);
        }
    };
}

const std::map<std::string, Setter> &setters() {
    static const std::map<std::string, Setter> table = {
        {"cycle_time_us", set(&RunConfig::cycle_time_us)},
        {"reaction_time_us", set(&RunConfig::reaction_time_us)},
        {"gate_error", set(&RunConfig::gate_error)},
        {"target_volume", set(&RunConfig::target_volume)},
        {"d1", set(&RunConfig::d1)},
        {"d2", set(&RunConfig::d2)},
        {"injection", set(&RunConfig::injection)},
        {"m", set(&RunConfig::m)},
        {"entries", set(&RunConfig::entries)},
        {"output_bits", set(&RunConfig::output_bits)},
        {"lookup_toffolis", set(&RunConfig::lookup_toffolis)},
        {"sides", set(&RunConfig::sides)},
        {"factories", set(&RunConfig::factories)},
        {"mode", set(&RunConfig::mode)},
        {"pattern", set(&RunConfig::pattern)},
        {"rows", set(&RunConfig::rows)},
        {"width", set(&RunConfig::width)},
        {"stride", set(&RunConfig::stride)},
        {"out", set(&RunConfig::out)},
    };
    return table;
}

template <typename T>
void take(std::optional<T> &into, const std::optional<T> &from) {
    if (from) into = from;
}

void check_choice(const std::optional<std::string> &value, const char *key,
                  std::initializer_list<const char *> allowed) {
    if (!value) return;
    for (const auto *a : allowed) {
        if (*value == a) return;
    }
    throw UsageError(fmt::format("{} must be one of {}, got '{}'", key, fmt::join(allowed, ", "), *value));
}

}  // namespace

void RunConfig::merge(const RunConfig &o) {
    take(cycle_time_us, o.cycle_time_us);
    take(reaction_time_us, o.reaction_time_us);
    take(gate_error, o.gate_error);
    take(target_volume, o.target_volume);
    take(d1, o.d1);
    take(d2, o.d2);
    take(injection, o.injection);
    take(m, o.m);
    take(entries, o.entries);
    take(output_bits, o.output_bits);
    take(lookup_toffolis, o.lookup_toffolis);
    take(sides, o.sides);
    take(factories, o.factories);
    take(mode, o.mode);
    take(pattern, o.pattern);
    take(rows, o.rows);
    take(width, o.width);
    take(stride, o.stride);
    take(out, o.out);
}

void RunConfig::validate() const {
    check_choice(injection, "injection", {"overlapped", "legacy"});
    check_choice(mode, "mode", {"adder", "lookup", "timeline"});
    check_choice(pattern, "pattern", {"adder", "R_L_L_R"});
    assumptions().validate();
    if (d1 || d2) factory_spec().validate();
    if (target_volume && !(*target_volume >= 1)) {
        throw ArgumentError(fmt::format("target volume must be at least 1, got {}", *target_volume));
    }
    if (m && *m < 2) throw ArgumentError(fmt::format("m must be at least 2, got {}", *m));
    if (factories && *factories < 1) throw ArgumentError(fmt::format("factories must be at least 1, got {}", *factories));
    if (entries || sides || output_bits || lookup_toffolis) lookup_spec().validate();
    if (rows && *rows < 1) throw ArgumentError(fmt::format("rows must be at least 1, got {}", *rows));
    if (width && *width < 1) throw ArgumentError(fmt::format("width must be at least 1, got {}", *width));
    if (stride && *stride < 1) throw ArgumentError(fmt::format("stride must be at least 1, got {}", *stride));
}

PhysicalAssumptions RunConfig::assumptions() const {
    PhysicalAssumptions a;
    if (cycle_time_us) a.cycle_time_us = *cycle_time_us;
    if (reaction_time_us) a.reaction_time_us = *reaction_time_us;
    if (gate_error) a.gate_error = *gate_error;
    return a;
}

FactorySpec RunConfig::factory_spec() const {
    FactorySpec spec;
    if (!d1 || !d2) {
        auto selected = select_code_distances(assumptions(), target_volume.value_or(kDefaultTargetVolume));
        spec.d1 = selected.d1;
        spec.d2 = selected.d2;
    }
    if (d1) spec.d1 = *d1;
    if (d2) spec.d2 = *d2;
    if (injection == std::optional<std::string>("legacy")) spec.injection = InjectionStyle::Legacy;
    return spec;
}

LookupSpec RunConfig::lookup_spec() const {
    LookupSpec spec;
    if (entries) spec.entries = *entries;
    if (output_bits) spec.output_bits = *output_bits;
    if (sides) spec.access_sides = *sides;
    if (lookup_toffolis) spec.toffoli_count = *lookup_toffolis;
    return spec;
}

LayoutOptions RunConfig::layout_options() const {
    LayoutOptions options;
    if (width) options.width = *width;
    if (stride) options.stride = *stride;
    return options;
}

RunConfig parse_config(std::string_view text) {
    RunConfig config;
    std::istringstream in{std::string(text)};
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        number++;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto content = trim(line);
        if (content.empty()) continue;
        auto eq = content.find('=');
        try {
            if (eq == std::string::npos) throw UsageError("expected 'key = value'");
            auto key = trim(content.substr(0, eq));
            auto value = trim(content.substr(eq + 1));
            auto it = setters().find(key);
            if (it == setters().end()) throw UsageError(fmt::format("unknown key '{}'", key));
            if (value.empty()) throw UsageError(fmt::format("missing value for '{}'", key));
            it->second(config, value);
        } catch (const UsageError &e) {
            throw UsageError(fmt::format("line {}: {}", number, e.what()));
        }
    }
    return config;
}

RunConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot read config file '{}'", path));
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace latticeplan
