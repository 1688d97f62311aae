#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "latticeplan/factory_model.h"

namespace latticeplan {

/// Toffoli dependency graph. Edge (a, b) means b waits on a's measurement decision.
class ToffoliDag {
   public:
    /// Throws ArgumentError for out-of-range or self edges, ContractError for cycles.
    ToffoliDag(std::size_t num_nodes, std::vector<std::pair<std::size_t, std::size_t>> edges);

    std::size_t num_nodes() const { return num_nodes_; }
    const std::vector<std::pair<std::size_t, std::size_t>> &edges() const { return edges_; }
    const std::vector<std::vector<std::size_t>> &successors() const { return successors_; }
    const std::vector<std::vector<std::size_t>> &predecessors() const { return predecessors_; }
    /// Nodes on the longest path.
    std::size_t measurement_depth() const { return measurement_depth_; }

   private:
    std::size_t num_nodes_;
    std::vector<std::pair<std::size_t, std::size_t>> edges_;
    std::vector<std::vector<std::size_t>> successors_;
    std::vector<std::vector<std::size_t>> predecessors_;
    std::size_t measurement_depth_ = 0;
};

/// The 2m-3 Toffoli chain of an m-bit ripple-carry add: MAJ wave, then UMA wave.
ToffoliDag build_adder_dag(int m);

enum class EventKind { StateReady, Consume, ReactionDecision, CnotWindow, PhaseBoundary };
std::string event_kind_name(EventKind kind);

struct TraceEvent {
    std::int64_t time_ns = 0;
    EventKind kind = EventKind::StateReady;
    std::int64_t node = -1;
    std::int64_t factory = -1;
    std::int64_t state = -1;
    std::int64_t corridor = -1;
    std::int64_t duration_ns = 0;
    std::string phase;

    bool operator==(const TraceEvent &other) const = default;
};

struct PhaseSummary {
    std::string name;
    std::int64_t start_ns = 0;
    std::int64_t duration_ns = 0;
    std::int64_t toffolis = 0;
};

struct ScheduleTrace {
    /// Sorted by time; ties keep creation order.
    std::vector<TraceEvent> events;
    std::int64_t makespan_ns = 0;
    std::int64_t steps = 0;
    /// "reaction", "supply" or "access".
    std::string limiting_factor;
    std::vector<std::int64_t> produced_per_factory;
    std::vector<std::int64_t> consumed_per_factory;
    std::vector<PhaseSummary> phases;

    double makespan_ms() const { return static_cast<double>(makespan_ns) / 1e6; }
};

/// Nanosecond period between CCZ states from one factory (inverse effective rate).
std::int64_t factory_period_ns(const FactorySpec &spec, const PhysicalAssumptions &assumptions);

/// Every factory emits one state per period, the first after one full period. A node
/// starts when all predecessors have decided and a state is available, and decides one
/// reaction time later. Ready nodes take states in order of readiness.
ScheduleTrace simulate_reaction_limited(const ToffoliDag &dag, const FactorySpec &spec,
                                        const PhysicalAssumptions &assumptions, std::int64_t n_factories);

/// sides / (d cycle_time), in kHz.
Rational cnot_access_rate(int d, const PhysicalAssumptions &assumptions, int sides);

struct LookupSpec {
    std::int64_t entries = 1024;
    std::int64_t output_bits = 1;
    int access_sides = 2;
    /// Defaults to entries - 1 (unary iteration) when zero.
    std::int64_t toffoli_count = 0;

    /// ArgumentError unless entries >= 2, access_sides in {1, 2} and toffoli_count >= 1.
    void validate() const;
    std::int64_t toffolis() const { return toffoli_count > 0 ? toffoli_count : entries - 1; }
};

/// Chain of lookup Toffolis, each followed by a d2-cycle multi-target CNOT window on
/// corridor (step mod sides). A corridor carries one window at a time.
ScheduleTrace simulate_lookup(const LookupSpec &spec, const FactorySpec &factory,
                              const PhysicalAssumptions &assumptions, std::int64_t n_factories);

/// Spread, lookup, squeeze, add_up, add_down, uncompute. Spread and squeeze take d2 cycles,
/// uncompute one reaction time and no Toffolis.
ScheduleTrace phase_timeline(const LookupSpec &lookup, int adder_m, const FactorySpec &factory,
                             const PhysicalAssumptions &assumptions, std::int64_t n_factories);

/// One JSON object per line.
std::string trace_to_json_lines(const ScheduleTrace &trace);
/// Makespan, steps, limiting factor, per-factory utilization and phases.
std::string trace_summary(const ScheduleTrace &trace);

}  // namespace latticeplan
