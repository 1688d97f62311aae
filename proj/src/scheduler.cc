#include "latticeplan/scheduler.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

#include <fmt/format.h>
#include <json.hpp>

#include "latticeplan/errors.h"

namespace latticeplan {

namespace {

std::int64_t rational_to_ns(const Rational &us) {
    // Round half up; inputs are positive.
    Rational ns = us * Rational(1000);
    return (2 * ns.numerator() + ns.denominator()) / (2 * ns.denominator());
}

std::int64_t reaction_ns(const PhysicalAssumptions &assumptions) {
    auto ns = rational_to_ns(assumptions.reaction_time());
    if (ns <= 0) {
        throw ArgumentError("reaction time must be at least one nanosecond");
    }
    return ns;
}

std::int64_t window_ns(int d, const PhysicalAssumptions &assumptions) {
    return rational_to_ns(assumptions.cycle_time() * Rational(d));
}

TraceEvent make_event(std::int64_t time_ns, EventKind kind, std::int64_t node = -1) {
    TraceEvent e;
    e.time_ns = time_ns;
    e.kind = kind;
    e.node = node;
    return e;
}

void check_factories(std::int64_t n_factories) {
    if (n_factories < 1) {
        throw ArgumentError(fmt::format("at least one factory is required, got {}", n_factories));
    }
}

/// Factories emit in lockstep; state k comes from factory k mod n in batch k / n.
class Supply {
   public:
    Supply(std::int64_t n_factories, std::int64_t period_ns, std::vector<TraceEvent> &events)
        : n_(n_factories), period_(period_ns), events_(events), produced_(n_factories, 0), consumed_(n_factories, 0) {}

    std::int64_t ready_time(std::int64_t k) const { return (k / n_ + 1) * period_; }

    /// Emits state_ready for every state produced by `time`.
    void produce_until(std::int64_t time) {
        while (ready_time(next_ready_) <= time) {
            auto f = next_ready_ % n_;
            auto e = make_event(ready_time(next_ready_), EventKind::StateReady);
            e.factory = f;
            e.state = next_ready_;
            events_.push_back(e);
            produced_[f]++;
            next_ready_++;
        }
    }

    /// Takes the next state at or after `earliest`; returns the consume time.
    std::int64_t consume(std::int64_t earliest, std::int64_t node) {
        auto k = next_consume_++;
        auto t = std::max(earliest, ready_time(k));
        produce_until(t);
        auto f = k % n_;
        consumed_[f]++;
        auto e = make_event(t, EventKind::Consume, node);
        e.factory = f;
        e.state = k;
        events_.push_back(e);
        return t;
    }

    const std::vector<std::int64_t> &produced() const { return produced_; }
    const std::vector<std::int64_t> &consumed() const { return consumed_; }

   private:
    std::int64_t n_;
    std::int64_t period_;
    std::vector<TraceEvent> &events_;
    std::int64_t next_ready_ = 0;
    std::int64_t next_consume_ = 0;
    std::vector<std::int64_t> produced_;
    std::vector<std::int64_t> consumed_;
};

void sort_events(std::vector<TraceEvent> &events) {
    std::stable_sort(events.begin(), events.end(),
                     [](const TraceEvent &a, const TraceEvent &b) { return a.time_ns < b.time_ns; });
}

Rational reaction_rate_khz(const PhysicalAssumptions &assumptions) {
    return Rational(1000) / assumptions.reaction_time();
}

}  // namespace

ToffoliDag::ToffoliDag(std::size_t num_nodes, std::vector<std::pair<std::size_t, std::size_t>> edges)
    : num_nodes_(num_nodes), edges_(std::move(edges)), successors_(num_nodes), predecessors_(num_nodes) {
    for (auto [a, b] : edges_) {
        if (a >= num_nodes_ || b >= num_nodes_) {
            throw ArgumentError(fmt::format("edge ({}, {}) out of range for {} nodes", a, b, num_nodes_));
        }
        if (a == b) {
            throw ArgumentError(fmt::format("self dependency on node {}", a));
        }
        successors_[a].push_back(b);
        predecessors_[b].push_back(a);
    }
    // Kahn's algorithm with longest-path relaxation.
    std::vector<std::size_t> indegree(num_nodes_), depth(num_nodes_, 1);
    std::vector<std::size_t> queue;
    for (std::size_t v = 0; v < num_nodes_; v++) {
        indegree[v] = predecessors_[v].size();
        if (indegree[v] == 0) {
            queue.push_back(v);
        }
    }
    std::size_t visited = 0;
    while (visited < queue.size()) {
        auto v = queue[visited++];
        measurement_depth_ = std::max(measurement_depth_, depth[v]);
        for (auto w : successors_[v]) {
            depth[w] = std::max(depth[w], depth[v] + 1);
            if (--indegree[w] == 0) {
                queue.push_back(w);
            }
        }
    }
    if (visited != num_nodes_) {
        throw ContractError("Toffoli dependency graph has a cycle");
    }
}

ToffoliDag build_adder_dag(int m) {
    if (m < 2) {
        throw ArgumentError(fmt::format("adder width must be at least 2, got {}", m));
    }
    std::size_t n = 2 * static_cast<std::size_t>(m) - 3;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i + 1 < n; i++) {
        edges.emplace_back(i, i + 1);
    }
    return ToffoliDag(n, std::move(edges));
}

std::string event_kind_name(EventKind kind) {
    switch (kind) {
        case EventKind::StateReady:
            return "state_ready";
        case EventKind::Consume:
            return "consume";
        case EventKind::ReactionDecision:
            return "reaction_decision";
        case EventKind::CnotWindow:
            return "cnot_window";
        case EventKind::PhaseBoundary:
            return "phase_boundary";
    }
    return "?";
}

std::int64_t factory_period_ns(const FactorySpec &spec, const PhysicalAssumptions &assumptions) {
    auto report = ccz_rate(spec, assumptions);
    return rational_to_ns(Rational(1000) / report.effective_rate_khz);
}

ScheduleTrace simulate_reaction_limited(const ToffoliDag &dag, const FactorySpec &spec,
                                        const PhysicalAssumptions &assumptions, std::int64_t n_factories) {
    check_factories(n_factories);
    auto period = factory_period_ns(spec, assumptions);
    auto reaction = reaction_ns(assumptions);

    ScheduleTrace trace;
    Supply supply(n_factories, period, trace.events);

    // (ready time, creation order, node); earlier-created wins ties.
    using Ready = std::tuple<std::int64_t, std::int64_t, std::size_t>;
    std::priority_queue<Ready, std::vector<Ready>, std::greater<>> ready;
    std::int64_t created = 0;
    std::vector<std::size_t> waiting(dag.num_nodes());
    std::vector<std::int64_t> ready_at(dag.num_nodes(), 0);
    for (std::size_t v = 0; v < dag.num_nodes(); v++) {
        waiting[v] = dag.predecessors()[v].size();
        if (waiting[v] == 0) {
            ready.emplace(0, created++, v);
        }
    }
    while (!ready.empty()) {
        auto [t, order, v] = ready.top();
        ready.pop();
        auto start = supply.consume(t, static_cast<std::int64_t>(v));
        auto decision = start + reaction;
        trace.events.push_back(make_event(decision, EventKind::ReactionDecision, static_cast<std::int64_t>(v)));
        trace.makespan_ns = std::max(trace.makespan_ns, decision);
        trace.steps++;
        for (auto w : dag.successors()[v]) {
            ready_at[w] = std::max(ready_at[w], decision);
            if (--waiting[w] == 0) {
                ready.emplace(ready_at[w], created++, w);
            }
        }
    }
    supply.produce_until(trace.makespan_ns);
    sort_events(trace.events);

    auto supply_rate = ccz_rate(spec, assumptions).effective_rate_khz * n_factories;
    trace.limiting_factor = supply_rate < reaction_rate_khz(assumptions) ? "supply" : "reaction";
    trace.produced_per_factory = supply.produced();
    trace.consumed_per_factory = supply.consumed();
    return trace;
}

Rational cnot_access_rate(int d, const PhysicalAssumptions &assumptions, int sides) {
    if (d < 3) {
        throw ArgumentError(fmt::format("code distance must be at least 3, got {}", d));
    }
    if (sides != 1 && sides != 2) {
        throw ArgumentError(fmt::format("access sides must be 1 or 2, got {}", sides));
    }
    return Rational(1000 * sides) / (assumptions.cycle_time() * Rational(d));
}

void LookupSpec::validate() const {
    if (entries < 2) {
        throw ArgumentError(fmt::format("lookup needs at least 2 entries, got {}", entries));
    }
    if (output_bits < 1) {
        throw ArgumentError(fmt::format("lookup needs at least 1 output bit, got {}", output_bits));
    }
    if (access_sides != 1 && access_sides != 2) {
        throw ArgumentError(fmt::format("access sides must be 1 or 2, got {}", access_sides));
    }
    if (toffoli_count < 0) {
        throw ArgumentError(fmt::format("toffoli count must be at least 1, got {}", toffoli_count));
    }
}

ScheduleTrace simulate_lookup(const LookupSpec &spec, const FactorySpec &factory,
                              const PhysicalAssumptions &assumptions, std::int64_t n_factories) {
    spec.validate();
    check_factories(n_factories);
    auto period = factory_period_ns(factory, assumptions);
    auto reaction = reaction_ns(assumptions);
    auto window = window_ns(factory.d2, assumptions);

    ScheduleTrace trace;
    Supply supply(n_factories, period, trace.events);
    std::vector<std::int64_t> corridor_free(spec.access_sides, 0);
    std::int64_t previous_decision = 0;
    for (std::int64_t i = 0; i < spec.toffolis(); i++) {
        auto corridor = i % spec.access_sides;
        auto start = supply.consume(std::max(previous_decision, corridor_free[corridor]), i);
        auto e = make_event(start, EventKind::CnotWindow, i);
        e.corridor = corridor;
        e.duration_ns = window;
        trace.events.push_back(e);
        corridor_free[corridor] = start + window;
        previous_decision = start + reaction;
        trace.events.push_back(make_event(previous_decision, EventKind::ReactionDecision, i));
        trace.makespan_ns = std::max({trace.makespan_ns, previous_decision, start + window});
        trace.steps++;
    }
    supply.produce_until(trace.makespan_ns);
    sort_events(trace.events);

    std::pair<Rational, std::string> rates[] = {
        {reaction_rate_khz(assumptions), "reaction"},
        {cnot_access_rate(factory.d2, assumptions, spec.access_sides), "access"},
        {ccz_rate(factory, assumptions).effective_rate_khz * n_factories, "supply"},
    };
    trace.limiting_factor = std::min_element(std::begin(rates), std::end(rates), [](const auto &a, const auto &b) {
                                return a.first < b.first;
                            })->second;
    trace.produced_per_factory = supply.produced();
    trace.consumed_per_factory = supply.consumed();
    return trace;
}

ScheduleTrace phase_timeline(const LookupSpec &lookup, int adder_m, const FactorySpec &factory,
                             const PhysicalAssumptions &assumptions, std::int64_t n_factories) {
    auto lookup_trace = simulate_lookup(lookup, factory, assumptions, n_factories);
    auto adder_trace = simulate_reaction_limited(build_adder_dag(adder_m), factory, assumptions, n_factories);
    auto move = window_ns(factory.d2, assumptions);

    // The MAJ wave ends at the decision of node m - 2.
    std::int64_t maj_end = 0;
    for (const auto &e : adder_trace.events) {
        if (e.kind == EventKind::ReactionDecision && e.node == adder_m - 2) {
            maj_end = e.time_ns;
        }
    }

    ScheduleTrace trace;
    trace.produced_per_factory.assign(n_factories, 0);
    trace.consumed_per_factory.assign(n_factories, 0);
    std::int64_t clock = 0;
    auto begin_phase = [&](const std::string &name, std::int64_t duration, std::int64_t toffolis) {
        auto e = make_event(clock, EventKind::PhaseBoundary);
        e.phase = name;
        trace.events.push_back(e);
        trace.phases.push_back(PhaseSummary{name, clock, duration, toffolis});
    };
    // Copies sub-trace events in [from, to) shifted so sub-trace time 0 lands at `origin`.
    // Node and state ids are offset to stay unique across sub-traces.
    auto splice = [&](const ScheduleTrace &sub, std::int64_t from, std::int64_t to, std::int64_t origin,
                      std::int64_t id_offset, const std::string &name) {
        for (const auto &e : sub.events) {
            if (e.time_ns >= from && e.time_ns < to) {
                TraceEvent shifted = e;
                shifted.time_ns += origin;
                if (shifted.node >= 0) shifted.node += id_offset;
                if (shifted.state >= 0) shifted.state += id_offset;
                shifted.phase = name;
                trace.events.push_back(shifted);
            }
        }
    };

    begin_phase("spread", move, 0);
    clock += move;

    begin_phase("lookup", lookup_trace.makespan_ns, lookup_trace.steps);
    splice(lookup_trace, 0, lookup_trace.makespan_ns + 1, clock, 0, "lookup");
    clock += lookup_trace.makespan_ns;

    begin_phase("squeeze", move, 0);
    clock += move;

    std::int64_t lookup_states = 0;
    for (auto n : lookup_trace.produced_per_factory) lookup_states += n;
    auto adder_ids = std::max(lookup_trace.steps, lookup_states);
    auto adder_origin = clock;
    begin_phase("add_up", maj_end, adder_m - 1);
    splice(adder_trace, 0, maj_end + 1, adder_origin, adder_ids, "add_up");
    clock += maj_end;

    begin_phase("add_down", adder_trace.makespan_ns - maj_end, adder_m - 2);
    splice(adder_trace, maj_end + 1, adder_trace.makespan_ns + 1, adder_origin, adder_ids, "add_down");
    clock += adder_trace.makespan_ns - maj_end;

    auto uncompute = reaction_ns(assumptions);
    begin_phase("uncompute", uncompute, 0);
    clock += uncompute;

    auto end = make_event(clock, EventKind::PhaseBoundary);
    end.phase = "end";
    trace.events.push_back(end);
    sort_events(trace.events);
    trace.makespan_ns = clock;
    trace.steps = lookup_trace.steps + adder_trace.steps;
    trace.limiting_factor =
        lookup_trace.makespan_ns >= adder_trace.makespan_ns ? lookup_trace.limiting_factor : adder_trace.limiting_factor;
    for (std::int64_t f = 0; f < n_factories; f++) {
        trace.produced_per_factory[f] = lookup_trace.produced_per_factory[f] + adder_trace.produced_per_factory[f];
        trace.consumed_per_factory[f] = lookup_trace.consumed_per_factory[f] + adder_trace.consumed_per_factory[f];
    }
    return trace;
}

std::string trace_to_json_lines(const ScheduleTrace &trace) {
    std::string out;
    for (const auto &e : trace.events) {
        nlohmann::ordered_json j;
        j["t_ns"] = e.time_ns;
        j["kind"] = event_kind_name(e.kind);
        if (e.node >= 0) j["node"] = e.node;
        if (e.factory >= 0) j["factory"] = e.factory;
        if (e.state >= 0) j["state"] = e.state;
        if (e.corridor >= 0) j["corridor"] = e.corridor;
        if (e.duration_ns > 0) j["duration_ns"] = e.duration_ns;
        if (!e.phase.empty()) j["phase"] = e.phase;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string trace_summary(const ScheduleTrace &trace) {
    std::string out = fmt::format("makespan: {:.3f} ms\nsteps: {}\nlimiting factor: {}\n", trace.makespan_ms(),
                                  trace.steps, trace.limiting_factor);
    for (std::size_t f = 0; f < trace.produced_per_factory.size(); f++) {
        auto produced = trace.produced_per_factory[f];
        double utilization = produced > 0 ? static_cast<double>(trace.consumed_per_factory[f]) / produced : 0.0;
        out += fmt::format("factory {}: produced {} consumed {} utilization {:.3f}\n", f, produced,
                           trace.consumed_per_factory[f], utilization);
    }
    for (const auto &p : trace.phases) {
        out += fmt::format("phase {}: start {:.3f} ms duration {:.3f} ms toffolis {}\n", p.name,
                           static_cast<double>(p.start_ns) / 1e6, static_cast<double>(p.duration_ns) / 1e6,
                           p.toffolis);
    }
    return out;
}

}  // namespace latticeplan
