#include "latticeplan/layout.h"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "latticeplan/constructions.h"
#include "latticeplan/errors.h"

namespace latticeplan {

namespace {

using nlohmann::json;

constexpr int kFactoryWidth = FactorySpec::kFootprintWidth;
constexpr int kFactoryHeight = FactorySpec::kFootprintHeight;
constexpr int kMajHeight = 3;
constexpr int kDefaultLookupWidth = 16;
constexpr int kTilePx = 10;

struct RoleInfo {
    TileRole role;
    const char *name;
    char symbol;
    const char *fill;
};

constexpr std::array<RoleInfo, 11> kRoles = {{
    {TileRole::Unused, "unused", '.', "#ffffff"},
    {TileRole::CczFactory, "ccz_factory", 'F', "#e4a11b"},
    {TileRole::FixupBox, "fixup_box", 'x', "#c0392b"},
    {TileRole::DataRowTarget, "data_row_target", 'T', "#f1d302"},
    {TileRole::DataRowOffset, "data_row_offset", 'O', "#2e86c1"},
    {TileRole::DataRowIdle, "data_row_idle", 'i', "#58a55c"},
    {TileRole::AccessRow, "access_row", 'a', "#eeeeee"},
    {TileRole::AccessCorridor, "access_corridor", 'c', "#cccccc"},
    {TileRole::MajArea, "maj_area", 'M', "#8e44ad"},
    {TileRole::Gap, "gap", 'g', "#f7f7f7"},
    {TileRole::IterationArea, "iteration_area", 'I', "#555555"},
}};

const RoleInfo &info(TileRole role) {
    return kRoles[static_cast<std::size_t>(role)];
}

std::optional<TileRole> role_from_symbol(char c) {
    for (const auto &r : kRoles) {
        if (r.symbol == c) return r.role;
    }
    return std::nullopt;
}

void fill(Floorplan &plan, const Region &r) {
    for (int y = r.y; y < r.y + r.h; y++) {
        for (int x = r.x; x < r.x + r.w; x++) {
            plan.at(x, y).role = r.role;
        }
    }
}

void add_region(Floorplan &plan, Region r) {
    fill(plan, r);
    plan.regions.push_back(r);
}

void fill_row(Floorplan &plan, int y, int x0, int x1, TileRole role) {
    for (int x = x0; x < x1; x++) plan.at(x, y).role = role;
}

/// Columns of a row of `width` tiles in placement order: 0, s, 2s, ..., 1, 1 + s, ...
std::vector<int> interleaved_columns(int width, int stride) {
    std::vector<int> order;
    for (int offset = 0; offset < stride; offset++) {
        for (int x = offset; x < width; x += stride) order.push_back(x);
    }
    return order;
}

/// Places register positions [first, first + count) along row y starting at column x0.
void place_register_row(Floorplan &plan, int y, int x0, int width, std::int64_t first, std::int64_t count,
                        TileRole role) {
    auto order = interleaved_columns(width, plan.stride);
    for (int x = x0; x < x0 + width; x++) plan.at(x, y) = Tile{TileRole::DataRowIdle, -1};
    for (std::int64_t j = 0; j < count; j++) {
        plan.at(x0 + order[j], y) = Tile{role, first + j};
    }
}

Floorplan blank(PlanKind kind, int width, int height, const FactorySpec &spec, int stride) {
    Floorplan plan;
    plan.kind = kind;
    plan.width = width;
    plan.height = height;
    plan.patch_distance = spec.d2;
    plan.stride = stride;
    plan.tiles.assign(static_cast<std::size_t>(width) * height, Tile{});
    return plan;
}

void check_options(const LayoutOptions &options) {
    if (options.stride < 1) throw ArgumentError(fmt::format("stride must be at least 1, got {}", options.stride));
    if (options.gap_width < 1) throw ArgumentError("gap width must be at least 1");
    if (options.fixup_width < 1 || options.fixup_height < 1 || 2 * options.fixup_width + 2 > kFactoryWidth) {
        throw ArgumentError(fmt::format("two {}x{} fixup boxes do not fit beside a factory", options.fixup_width,
                                        options.fixup_height));
    }
    if (options.width < 0 || options.max_row_pairs < 0 || options.iteration_height < 1) {
        throw ArgumentError("layout sizes must be non-negative");
    }
}

constexpr std::array<std::pair<int, int>, 4> kSteps = {{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

/// Flood fill from `seeds` through tiles whose role is in `passable`.
std::vector<std::uint8_t> flood(const Floorplan &plan, const std::set<TileRole> &seeds,
                                const std::set<TileRole> &passable) {
    std::vector<std::uint8_t> seen(plan.tiles.size(), 0);
    std::deque<std::pair<int, int>> queue;
    for (int y = 0; y < plan.height; y++) {
        for (int x = 0; x < plan.width; x++) {
            if (seeds.count(plan.at(x, y).role)) {
                seen[y * plan.width + x] = 1;
                queue.emplace_back(x, y);
            }
        }
    }
    while (!queue.empty()) {
        auto [x, y] = queue.front();
        queue.pop_front();
        for (auto [dx, dy] : kSteps) {
            int nx = x + dx, ny = y + dy;
            if (!plan.in_bounds(nx, ny) || seen[ny * plan.width + nx]) continue;
            if (!passable.count(plan.at(nx, ny).role)) continue;
            seen[ny * plan.width + nx] = 1;
            queue.emplace_back(nx, ny);
        }
    }
    return seen;
}

bool touches(const Floorplan &plan, int x, int y, const std::vector<std::uint8_t> &reached) {
    for (auto [dx, dy] : kSteps) {
        int nx = x + dx, ny = y + dy;
        if (plan.in_bounds(nx, ny) && reached[ny * plan.width + nx]) return true;
    }
    return false;
}

bool regions_adjacent(const Region &a, const Region &b) {
    bool x_overlap = a.x < b.x + b.w && b.x < a.x + a.w;
    bool y_overlap = a.y < b.y + b.h && b.y < a.y + a.h;
    bool x_touch = a.x + a.w == b.x || b.x + b.w == a.x;
    bool y_touch = a.y + a.h == b.y || b.y + b.h == a.y;
    return (x_overlap && y_touch) || (y_overlap && x_touch);
}

void check_regions(const Floorplan &plan, std::vector<std::string> &errors) {
    std::vector<int> cover(plan.tiles.size(), 0);
    for (std::size_t i = 0; i < plan.regions.size(); i++) {
        const auto &r = plan.regions[i];
        if (r.w < 1 || r.h < 1 || r.x < 0 || r.y < 0 || r.x + r.w > plan.width || r.y + r.h > plan.height) {
            errors.push_back(fmt::format("region {} ({}) is out of bounds", i, info(r.role).name));
            continue;
        }
        for (int y = r.y; y < r.y + r.h; y++) {
            for (int x = r.x; x < r.x + r.w; x++) {
                if (++cover[y * plan.width + x] == 2) {
                    errors.push_back(fmt::format("tile ({}, {}) lies in two regions", x, y));
                }
                if (plan.at(x, y).role != r.role) {
                    errors.push_back(fmt::format("tile ({}, {}) in {} region has role {}", x, y, info(r.role).name,
                                                 info(plan.at(x, y).role).name));
                }
            }
        }
    }
}

void check_register(const Floorplan &plan, TileRole role, std::int64_t expected, std::vector<std::string> &errors) {
    std::set<std::int64_t> seen;
    for (const auto &t : plan.tiles) {
        if (t.role != role) continue;
        if (t.index < 0 || t.index >= expected || !seen.insert(t.index).second) {
            errors.push_back(fmt::format("{} tile carries bad or repeated index {}", info(role).name, t.index));
        }
    }
    if (static_cast<std::int64_t>(seen.size()) != expected) {
        errors.push_back(fmt::format("{} holds {} positions, expected {}", info(role).name, seen.size(), expected));
    }
}

void validate_adder(const Floorplan &plan, std::vector<std::string> &errors) {
    std::vector<const Region *> factories, fixups;
    for (const auto &r : plan.regions) {
        if (r.role == TileRole::CczFactory) factories.push_back(&r);
        if (r.role == TileRole::FixupBox) fixups.push_back(&r);
    }
    if (static_cast<int>(factories.size()) != plan.n_factories) {
        errors.push_back(fmt::format("{} factory regions for {} factories", factories.size(), plan.n_factories));
    }
    std::int64_t factory_tiles = std::count_if(plan.tiles.begin(), plan.tiles.end(),
                                               [](const Tile &t) { return t.role == TileRole::CczFactory; });
    if (factory_tiles != static_cast<std::int64_t>(plan.n_factories) * FactorySpec::kFootprintPatches) {
        errors.push_back(fmt::format("factory area {} is not {} x {}", factory_tiles, plan.n_factories,
                                     FactorySpec::kFootprintPatches));
    }
    for (const auto *f : factories) {
        if (f->w != kFactoryWidth || f->h != kFactoryHeight) {
            errors.push_back(fmt::format("factory {} is {}x{}", f->owner, f->w, f->h));
        }
        bool routed = false;
        for (int y = f->y - 1; y <= f->y + f->h && !routed; y++) {
            for (int x = f->x - 1; x <= f->x + f->w && !routed; x++) {
                bool outside = x < f->x || x >= f->x + f->w || y < f->y || y >= f->y + f->h;
                bool corner = (x < f->x || x >= f->x + f->w) && (y < f->y || y >= f->y + f->h);
                if (!outside || corner || !plan.in_bounds(x, y)) continue;
                auto role = plan.at(x, y).role;
                routed = role == TileRole::Gap || role == TileRole::AccessRow || role == TileRole::AccessCorridor;
            }
        }
        if (!routed) errors.push_back(fmt::format("factory {} has no adjacent gap or routing tile", f->owner));
    }
    std::map<int, int> per_factory;
    for (const auto *b : fixups) {
        per_factory[b->owner]++;
        auto owner = std::find_if(factories.begin(), factories.end(), [&](auto *f) { return f->owner == b->owner; });
        if (owner == factories.end() || !regions_adjacent(**owner, *b)) {
            errors.push_back(fmt::format("fixup box at ({}, {}) does not touch factory {}", b->x, b->y, b->owner));
        }
    }
    for (const auto *f : factories) {
        if (per_factory[f->owner] != 2) {
            errors.push_back(fmt::format("factory {} has {} fixup boxes", f->owner, per_factory[f->owner]));
        }
    }

    auto reached = flood(plan, {TileRole::MajArea}, {TileRole::Gap, TileRole::AccessRow, TileRole::AccessCorridor});
    std::set<int> data_rows;
    for (int y = 0; y < plan.height; y++) {
        for (int x = 0; x < plan.width; x++) {
            auto role = plan.at(x, y).role;
            if (role == TileRole::DataRowTarget || role == TileRole::DataRowOffset) {
                data_rows.insert(y);
                if (!touches(plan, x, y, reached)) {
                    errors.push_back(fmt::format("data tile ({}, {}) cannot reach the MAJ strip", x, y));
                }
            }
        }
    }
    for (const auto *b : fixups) {
        bool ok = false;
        for (int y = b->y; y < b->y + b->h; y++) {
            for (int x = b->x; x < b->x + b->w; x++) ok = ok || touches(plan, x, y, reached);
        }
        if (!ok) errors.push_back(fmt::format("fixup box at ({}, {}) is walled off", b->x, b->y));
    }
    if (data_rows.size() < 2) errors.push_back("fewer than two data rows");
    check_register(plan, TileRole::DataRowTarget, plan.m, errors);
    check_register(plan, TileRole::DataRowOffset, plan.m, errors);
}

void validate_lookup(const Floorplan &plan, std::vector<std::string> &errors) {
    int corridors = 0;
    int iteration_top = plan.height;
    for (const auto &r : plan.regions) {
        if (r.role == TileRole::AccessCorridor) {
            corridors++;
            if (r.h != plan.height || r.w != 1 || (r.x != 0 && r.x != plan.width - 1)) {
                errors.push_back(fmt::format("corridor at x={} does not span an edge", r.x));
            }
        }
        if (r.role == TileRole::IterationArea) {
            iteration_top = std::min(iteration_top, r.y);
            if (r.x != 1 || r.x + r.w != plan.width - 1) {
                errors.push_back("iteration area does not reach both corridors");
            }
        }
    }
    if (corridors != 2) errors.push_back(fmt::format("{} access corridors, expected 2", corridors));
    if (iteration_top == plan.height) errors.push_back("no iteration area");

    // Row sequence above the iteration area, one symbol per row: R, L or _.
    std::string sequence;
    for (int y = 0; y < iteration_top; y++) {
        std::set<TileRole> roles;
        for (int x = 1; x < plan.width - 1; x++) roles.insert(plan.at(x, y).role);
        if (roles == std::set<TileRole>{TileRole::AccessRow}) {
            sequence += '_';
        } else if (roles.count(TileRole::DataRowTarget) && !roles.count(TileRole::AccessRow)) {
            sequence += 'L';
        } else if (roles == std::set<TileRole>{TileRole::DataRowIdle}) {
            sequence += 'R';
        } else {
            errors.push_back(fmt::format("row {} mixes roles", y));
            sequence += '?';
        }
    }
    auto count = [&](char c) { return std::count(sequence.begin(), sequence.end(), c); };
    if (count('L') != plan.rows || count('R') != plan.rows) {
        errors.push_back(fmt::format("row pattern {} does not hold {} R and L rows", sequence, plan.rows));
    }
    for (std::size_t y = 0; y < sequence.size(); y++) {
        bool above_access = y > 0 && sequence[y - 1] == '_';
        bool below_access = y + 1 < sequence.size() && sequence[y + 1] == '_';
        if (sequence[y] == 'L' && !above_access && !below_access) {
            errors.push_back(fmt::format("lookup row {} has no access row", y));
        }
        if (sequence[y] == 'L' && y + 1 < sequence.size() && sequence[y + 1] == 'L') {
            errors.push_back(fmt::format("lookup rows {} and {} share no access row", y, y + 1));
        }
        if (sequence[y] == '_') {
            bool l_above = y > 0 && sequence[y - 1] == 'L';
            bool l_below = y + 1 < sequence.size() && sequence[y + 1] == 'L';
            if (!l_above && !l_below) errors.push_back(fmt::format("access row {} serves no lookup row", y));
            auto end_ok = [&](int x) { return plan.at(x, static_cast<int>(y)).role == TileRole::AccessCorridor; };
            if (!end_ok(0) || !end_ok(plan.width - 1)) {
                errors.push_back(fmt::format("access row {} misses a corridor", y));
            }
        }
    }
    // Consecutive lookup rows share exactly one inner access row.
    std::size_t previous_l = std::string::npos;
    for (std::size_t y = 0; y < sequence.size(); y++) {
        if (sequence[y] == 'R') previous_l = std::string::npos;
        if (sequence[y] != 'L') continue;
        if (previous_l != std::string::npos && sequence.substr(previous_l, y - previous_l + 1) != "L_L") {
            errors.push_back(fmt::format("lookup rows {} and {} do not share one access row", previous_l, y));
        }
        previous_l = y;
    }

    auto reached = flood(plan, {TileRole::AccessCorridor}, {TileRole::AccessRow, TileRole::AccessCorridor});
    for (int y = 0; y < plan.height; y++) {
        for (int x = 0; x < plan.width; x++) {
            if (plan.at(x, y).role == TileRole::DataRowTarget && !touches(plan, x, y, reached)) {
                errors.push_back(fmt::format("lookup tile ({}, {}) cannot reach a corridor", x, y));
            }
        }
    }
    check_register(plan, TileRole::DataRowTarget, static_cast<std::int64_t>(plan.rows) * (plan.width - 2), errors);
}

}  // namespace

std::string tile_role_name(TileRole role) {
    return info(role).name;
}

std::optional<TileRole> parse_tile_role(std::string_view name) {
    for (const auto &r : kRoles) {
        if (name == r.name) return r.role;
    }
    return std::nullopt;
}

Floorplan plan_adder_layout(int m, const FactorySpec &spec, int n_factories, const LayoutOptions &options) {
    spec.validate();
    check_options(options);
    if (m < 2) throw ArgumentError(fmt::format("adder width must be at least 2, got {}", m));
    if (n_factories < 2) throw ArgumentError(fmt::format("adder layout needs at least 2 factories, got {}", n_factories));

    const int g = options.gap_width;
    const int top = (n_factories + 1) / 2;
    const int bottom = n_factories / 2;
    const int band_width = top * kFactoryWidth + (top + 1) * g;
    const int width = options.width > 0 ? options.width : band_width;
    if (width < band_width) {
        throw CapacityError(fmt::format("{} factories need width {}, configured {}", n_factories, band_width, width));
    }
    // Column 0 of the data area is a corridor joining the access rows to the gap column.
    const int row_capacity = width - 1;
    const int pairs = (m + row_capacity - 1) / row_capacity;
    if (options.max_row_pairs > 0 && pairs > options.max_row_pairs) {
        int required = std::max(band_width, (m + options.max_row_pairs - 1) / options.max_row_pairs + 1);
        throw CapacityError(fmt::format("m={} needs width {} with at most {} row pairs, configured {}", m, required,
                                        options.max_row_pairs, width));
    }
    const int top_pairs = (pairs + 1) / 2;
    const int bottom_pairs = pairs / 2;
    const int fh = options.fixup_height;
    const int top_data = 3 * top_pairs + 1;
    const int bottom_data = bottom_pairs > 0 ? 3 * bottom_pairs + 1 : 0;
    const int height = top_data + 2 * (kFactoryHeight + fh) + kMajHeight + bottom_data;

    auto plan = blank(PlanKind::Adder, width, height, spec, options.stride);
    plan.m = m;
    plan.n_factories = n_factories;

    std::int64_t next = 0;
    auto data_pair = [&](int y_target, int y_offset) {
        auto count = std::min<std::int64_t>(row_capacity, m - next);
        place_register_row(plan, y_target, 1, row_capacity, next, count, TileRole::DataRowTarget);
        place_register_row(plan, y_offset, 1, row_capacity, next, count, TileRole::DataRowOffset);
        next += count;
    };

    // Outer data: access, target, offset per pair, then a final access row toward the factories.
    for (int p = 0; p < top_pairs; p++) {
        fill_row(plan, 3 * p, 0, width, TileRole::AccessRow);
        data_pair(3 * p + 1, 3 * p + 2);
    }
    fill_row(plan, top_data - 1, 0, width, TileRole::AccessRow);
    add_region(plan, Region{TileRole::AccessCorridor, 0, 0, 1, top_data, 0});

    const int top_band = top_data;
    const int top_fixups = top_band + kFactoryHeight;
    const int maj = top_fixups + fh;
    const int bottom_fixups = maj + kMajHeight;
    const int bottom_band = bottom_fixups + fh;
    const int bottom_start = bottom_band + kFactoryHeight;

    for (int y = top_band; y < bottom_start; y++) fill_row(plan, y, 0, width, TileRole::Gap);
    add_region(plan, Region{TileRole::MajArea, 0, maj, width, kMajHeight, -1});

    auto place_factory = [&](int index, int x, int band_y, int fixup_y, int chimney_y, int port_y) {
        add_region(plan, Region{TileRole::CczFactory, x, band_y, kFactoryWidth, kFactoryHeight, index});
        plan.annotations.push_back(Annotation{"factory_port", x + kFactoryWidth / 2, port_y, index});
        for (int bx : {x + 1, x + kFactoryWidth - 1 - options.fixup_width}) {
            add_region(plan, Region{TileRole::FixupBox, bx, fixup_y, options.fixup_width, fh, index});
            plan.annotations.push_back(Annotation{"fixup_chimney", bx + options.fixup_width / 2, chimney_y, index});
        }
    };
    for (int i = 0; i < top; i++) {
        place_factory(i, g + i * (kFactoryWidth + g), top_band, top_fixups, maj - 1, top_fixups - 1);
    }
    for (int i = 0; i < bottom; i++) {
        place_factory(top + i, g + i * (kFactoryWidth + g), bottom_band, bottom_fixups, bottom_fixups, bottom_band);
    }
    // Unfilled factory slot when the count is odd.
    if (bottom < top) {
        int x = g + bottom * (kFactoryWidth + g);
        for (int y = bottom_fixups; y < bottom_start; y++) fill_row(plan, y, x, x + kFactoryWidth, TileRole::Unused);
    }

    for (int p = 0; p < bottom_pairs; p++) {
        int y = bottom_start + 3 * p;
        fill_row(plan, y, 0, width, TileRole::AccessRow);
        data_pair(y + 2, y + 1);
    }
    if (bottom_pairs > 0) {
        fill_row(plan, height - 1, 0, width, TileRole::AccessRow);
        add_region(plan, Region{TileRole::AccessCorridor, 0, bottom_start, 1, bottom_data, 1});
    }
    return plan;
}

Floorplan plan_lookup_layout(int rows, const FactorySpec &spec, const LayoutOptions &options) {
    spec.validate();
    check_options(options);
    if (rows < 1) throw ArgumentError(fmt::format("lookup layout needs at least 1 row, got {}", rows));
    const int width = options.width > 0 ? options.width : kDefaultLookupWidth;
    if (width < 3) throw CapacityError(fmt::format("lookup layout needs width 3, configured {}", width));

    // R L L R repeated; access rows between neighbours unless both are R, and after a final L.
    std::string data;
    for (int i = 0; i < 2 * rows; i++) data += "RLLR"[i % 4];
    std::string sequence;
    for (std::size_t i = 0; i < data.size(); i++) {
        sequence += data[i];
        bool last = i + 1 == data.size();
        if ((!last && !(data[i] == 'R' && data[i + 1] == 'R')) || (last && data[i] == 'L')) sequence += '_';
    }

    const int interior = width - 2;
    const int height = static_cast<int>(sequence.size()) + options.iteration_height;
    auto plan = blank(PlanKind::Lookup, width, height, spec, options.stride);
    plan.rows = rows;
    std::int64_t next_l = 0, next_r = 0;
    for (int y = 0; y < static_cast<int>(sequence.size()); y++) {
        switch (sequence[y]) {
            case '_':
                fill_row(plan, y, 1, width - 1, TileRole::AccessRow);
                break;
            case 'L':
                place_register_row(plan, y, 1, interior, next_l, interior, TileRole::DataRowTarget);
                next_l += interior;
                break;
            default:
                for (int x = 1; x < width - 1; x++) plan.at(x, y) = Tile{TileRole::DataRowIdle, next_r++};
        }
    }
    add_region(plan, Region{TileRole::AccessCorridor, 0, 0, 1, height, 0});
    add_region(plan, Region{TileRole::AccessCorridor, width - 1, 0, 1, height, 1});
    add_region(plan, Region{TileRole::IterationArea, 1, static_cast<int>(sequence.size()), interior,
                            options.iteration_height, -1});
    return plan;
}

std::vector<std::string> validate_floorplan(const Floorplan &plan) {
    std::vector<std::string> errors;
    if (plan.width < 1 || plan.height < 1 ||
        plan.tiles.size() != static_cast<std::size_t>(plan.width) * static_cast<std::size_t>(plan.height)) {
        errors.push_back("tile count does not match the grid size");
        return errors;
    }
    check_regions(plan, errors);
    if (plan.kind == PlanKind::Adder) {
        validate_adder(plan, errors);
    } else {
        validate_lookup(plan, errors);
    }
    return errors;
}

VolumeReport volume_report(std::vector<VolumeComponent> components) {
    VolumeReport report;
    for (const auto &c : components) {
        if (c.w < 0 || c.h < 0 || c.t < 0) {
            throw ArgumentError(fmt::format("component {} has a negative extent", c.name));
        }
        report.total += c.volume();
    }
    report.components = std::move(components);
    return report;
}

VolumeComponent maj_block() {
    return VolumeComponent{"maj", 3, 3, 5};
}

RoutingComparison delayed_choice_routing_comparison(std::int64_t column_height) {
    if (column_height < 1) throw ArgumentError("routing column height must be positive");
    auto columns = [&](const Construction &c) {
        std::vector<VolumeComponent> out;
        for (std::size_t i = 0; i < c.routing_qubits.size(); i++) {
            out.push_back(VolumeComponent{fmt::format("{} routing {}", c.name, i), 1, 1, column_height});
        }
        return volume_report(std::move(out));
    };
    RoutingComparison result;
    result.optimized = columns(build_delayed_choice_cz(CzChoice::Apply));
    result.multiplexer = columns(build_fowler_multiplexer_cz(CzChoice::Apply));
    result.ratio = Rational(result.multiplexer.total, result.optimized.total);
    return result;
}

std::string export_floorplan(const Floorplan &plan, const std::string &format) {
    if (format == "json") {
        json j;
        j["kind"] = plan.kind == PlanKind::Adder ? "adder" : "lookup";
        j["width"] = plan.width;
        j["height"] = plan.height;
        j["patch_distance"] = plan.patch_distance;
        j["m"] = plan.m;
        j["rows"] = plan.rows;
        j["n_factories"] = plan.n_factories;
        j["stride"] = plan.stride;
        json legend = json::object();
        for (const auto &r : kRoles) legend[std::string(1, r.symbol)] = r.name;
        j["legend"] = legend;
        json grid = json::array(), indices = json::array();
        for (int y = 0; y < plan.height; y++) {
            std::string row;
            for (int x = 0; x < plan.width; x++) {
                const auto &t = plan.at(x, y);
                row += info(t.role).symbol;
                if (t.index >= 0) indices.push_back({x, y, t.index});
            }
            grid.push_back(row);
        }
        j["grid"] = grid;
        j["indices"] = indices;
        json regions = json::array();
        for (const auto &r : plan.regions) {
            regions.push_back({{"role", info(r.role).name}, {"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h},
                               {"owner", r.owner}});
        }
        j["regions"] = regions;
        json annotations = json::array();
        for (const auto &a : plan.annotations) {
            annotations.push_back({{"kind", a.kind}, {"x", a.x}, {"y", a.y}, {"owner", a.owner}});
        }
        j["annotations"] = annotations;
        return j.dump(1) + "\n";
    }
    if (format == "svg") {
        std::string out = fmt::format(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" "
            "viewBox=\"0 0 {0} {1}\">\n",
            plan.width * kTilePx, plan.height * kTilePx);
        for (int y = 0; y < plan.height; y++) {
            for (int x = 0; x < plan.width; x++) {
                const auto &r = info(plan.at(x, y).role);
                out += fmt::format("<rect class=\"tile {}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n",
                                   r.name, x * kTilePx, y * kTilePx, kTilePx, kTilePx, r.fill);
            }
        }
        for (const auto &r : plan.regions) {
            out += fmt::format(
                "<rect class=\"region {}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" "
                "stroke=\"#000000\"/>\n",
                info(r.role).name, r.x * kTilePx, r.y * kTilePx, r.w * kTilePx, r.h * kTilePx);
        }
        out += "</svg>\n";
        return out;
    }
    throw ArgumentError(fmt::format("unknown export format '{}'", format));
}

Floorplan parse_floorplan_json(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ArgumentError(fmt::format("floorplan JSON: {}", e.what()));
    }
    try {
        Floorplan plan;
        auto kind = j.at("kind").get<std::string>();
        if (kind != "adder" && kind != "lookup") throw ArgumentError(fmt::format("unknown plan kind '{}'", kind));
        plan.kind = kind == "adder" ? PlanKind::Adder : PlanKind::Lookup;
        plan.width = j.at("width").get<int>();
        plan.height = j.at("height").get<int>();
        plan.patch_distance = j.at("patch_distance").get<int>();
        plan.m = j.at("m").get<int>();
        plan.rows = j.at("rows").get<int>();
        plan.n_factories = j.at("n_factories").get<int>();
        plan.stride = j.at("stride").get<int>();
        if (plan.width < 1 || plan.height < 1) throw ArgumentError("floorplan grid must be non-empty");
        const auto &grid = j.at("grid");
        if (static_cast<int>(grid.size()) != plan.height) throw ArgumentError("grid row count differs from height");
        for (const auto &row : grid) {
            auto s = row.get<std::string>();
            if (static_cast<int>(s.size()) != plan.width) throw ArgumentError("grid row length differs from width");
            for (char c : s) {
                auto role = role_from_symbol(c);
                if (!role) throw ArgumentError(fmt::format("unknown tile symbol '{}'", c));
                plan.tiles.push_back(Tile{*role, -1});
            }
        }
        for (const auto &e : j.at("indices")) {
            int x = e.at(0).get<int>(), y = e.at(1).get<int>();
            if (!plan.in_bounds(x, y)) throw ArgumentError(fmt::format("index entry ({}, {}) out of bounds", x, y));
            plan.at(x, y).index = e.at(2).get<std::int64_t>();
        }
        auto role = [](const json &v) {
            auto r = parse_tile_role(v.get<std::string>());
            if (!r) throw ArgumentError(fmt::format("unknown role '{}'", v.get<std::string>()));
            return *r;
        };
        for (const auto &r : j.at("regions")) {
            plan.regions.push_back(Region{role(r.at("role")), r.at("x").get<int>(), r.at("y").get<int>(),
                                          r.at("w").get<int>(), r.at("h").get<int>(), r.at("owner").get<int>()});
        }
        for (const auto &a : j.at("annotations")) {
            plan.annotations.push_back(Annotation{a.at("kind").get<std::string>(), a.at("x").get<int>(),
                                                  a.at("y").get<int>(), a.at("owner").get<int>()});
        }
        return plan;
    } catch (const json::exception &e) {
        throw ArgumentError(fmt::format("floorplan JSON: {}", e.what()));
    }
}

}  // namespace latticeplan
