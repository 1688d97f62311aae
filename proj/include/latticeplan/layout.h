#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "latticeplan/factory_model.h"

namespace latticeplan {

enum class TileRole {
    Unused,
    CczFactory,
    FixupBox,
    DataRowTarget,
    DataRowOffset,
    DataRowIdle,
    AccessRow,
    AccessCorridor,
    MajArea,
    Gap,
    IterationArea,
};
std::string tile_role_name(TileRole role);
std::optional<TileRole> parse_tile_role(std::string_view name);

struct Tile {
    TileRole role = TileRole::Unused;
    /// Register position for data tiles, otherwise -1.
    std::int64_t index = -1;

    bool operator==(const Tile &other) const = default;
};

/// Axis-aligned block of tiles sharing one role. `owner` links fixup boxes to their factory.
struct Region {
    TileRole role;
    int x, y, w, h;
    int owner = -1;

    bool operator==(const Region &other) const = default;
};

struct Annotation {
    std::string kind;  // factory_port or fixup_chimney
    int x, y;
    int owner = -1;

    bool operator==(const Annotation &other) const = default;
};

enum class PlanKind { Adder, Lookup };

/// Grid of logical patches at distance `patch_distance`; tile (x, y) is tiles[y * width + x].
struct Floorplan {
    PlanKind kind = PlanKind::Adder;
    int width = 0;
    int height = 0;
    int patch_distance = 0;
    /// Register width (adder) and register rows (lookup).
    int m = 0;
    int rows = 0;
    int n_factories = 0;
    int stride = 1;
    std::vector<Tile> tiles;
    std::vector<Region> regions;
    std::vector<Annotation> annotations;

    const Tile &at(int x, int y) const { return tiles[static_cast<std::size_t>(y) * width + x]; }
    Tile &at(int x, int y) { return tiles[static_cast<std::size_t>(y) * width + x]; }
    bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }

    bool operator==(const Floorplan &other) const = default;
};

struct LayoutOptions {
    /// Grid width; 0 fits the factory band (adder) or uses 16 (lookup).
    int width = 0;
    /// Upper bound on target/offset row pairs; 0 means unbounded.
    int max_row_pairs = 0;
    /// Intra-row interleaving stride.
    int stride = 2;
    int fixup_width = 4;
    int fixup_height = 3;
    int gap_width = 1;
    int iteration_height = 4;
};

/// Factory bands above and below a central MAJ strip, two fixup boxes per factory on the
/// strip side, gap columns between factories, and target/offset rows behind access rows
/// on the outside joined by an edge corridor. Throws CapacityError naming the required
/// width when m does not fit.
Floorplan plan_adder_layout(int m, const FactorySpec &spec, int n_factories, const LayoutOptions &options = {});

/// Vertical tiling of R_L_L_R over `rows` register rows with access corridors on both
/// sides and an iteration area along the bottom.
Floorplan plan_lookup_layout(int rows, const FactorySpec &spec, const LayoutOptions &options = {});

/// Empty when valid; otherwise one message per violated invariant.
std::vector<std::string> validate_floorplan(const Floorplan &plan);

struct VolumeComponent {
    std::string name;
    /// Footprint in patches and duration in d-cycle units.
    std::int64_t w, h, t;
    std::int64_t volume() const { return w * h * t; }
};

struct VolumeReport {
    std::vector<VolumeComponent> components;
    std::int64_t total = 0;
};

VolumeReport volume_report(std::vector<VolumeComponent> components);
VolumeComponent maj_block();

struct RoutingComparison {
    VolumeReport optimized;
    VolumeReport multiplexer;
    Rational ratio;
};
/// Routing columns of equal height for the delayed-choice CZ and the multiplexer CZ.
RoutingComparison delayed_choice_routing_comparison(std::int64_t column_height = 1);

/// "svg" or "json"; ArgumentError otherwise.
std::string export_floorplan(const Floorplan &plan, const std::string &format);
Floorplan parse_floorplan_json(const std::string &text);

}  // namespace latticeplan
