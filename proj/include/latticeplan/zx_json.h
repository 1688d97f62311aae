#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "latticeplan/zx.h"

namespace latticeplan {

/// A graph file plus the optional resolutions and expected map stored alongside it.
struct ZxFixture {
    ZxGraph graph;
    std::vector<std::pair<std::size_t, Basis>> choices;
    /// Expected map, from either "gates" (square maps) or "matrix".
    std::optional<EvaluatedMap> expect;
};

ZxFixture parse_zx_fixture(std::string_view json_text);
std::string format_zx_graph(const ZxGraph &graph);

/// Applies the fixture's choices, evaluates, and compares with `expect` when present.
struct ZxCheck {
    bool ok = true;
    std::size_t inputs = 0;
    std::size_t outputs = 0;
    bool compared = false;
};
ZxCheck check_zx_fixture(const ZxFixture &fixture);

}  // namespace latticeplan
