#include "latticeplan/scheduler.h"

#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "latticeplan/errors.h"

using namespace latticeplan;

namespace {

PhysicalAssumptions with(double cycle, double reaction) {
    PhysicalAssumptions a;
    a.cycle_time_us = cycle;
    a.reaction_time_us = reaction;
    return a;
}

std::size_t longest_path_oracle(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>> &edges) {
    std::map<std::size_t, std::vector<std::size_t>> succ;
    for (auto [a, b] : edges) succ[a].push_back(b);
    std::vector<std::size_t> memo(n, 0);
    std::function<std::size_t(std::size_t)> go = [&](std::size_t v) -> std::size_t {
        if (memo[v]) return memo[v];
        std::size_t best = 0;
        for (auto w : succ[v]) best = std::max(best, go(w));
        return memo[v] = best + 1;
    };
    std::size_t best = 0;
    for (std::size_t v = 0; v < n; v++) best = std::max(best, go(v));
    return best;
}

ToffoliDag random_dag(std::mt19937_64 &rng, std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::bernoulli_distribution keep(0.15);
    for (std::size_t a = 0; a < n; a++) {
        for (std::size_t b = a + 1; b < n; b++) {
            if (keep(rng)) edges.emplace_back(a, b);
        }
    }
    return ToffoliDag(n, edges);
}

/// Chain-only recurrence: start_i = max(decision_{i-1}, time of state i).
std::int64_t chain_makespan_oracle(std::int64_t depth, std::int64_t n, std::int64_t period, std::int64_t reaction) {
    std::int64_t decision = 0;
    for (std::int64_t i = 0; i < depth; i++) {
        std::int64_t state_time = (i / n + 1) * period;
        decision = std::max(decision, state_time) + reaction;
    }
    return decision;
}

void check_trace_invariants(const ScheduleTrace &trace, std::int64_t reaction_ns, const ToffoliDag *dag) {
    std::set<std::int64_t> produced;
    std::int64_t produced_count = 0, consumed_count = 0;
    std::int64_t last = 0;
    std::map<std::int64_t, std::int64_t> consume_at, decision_at;
    for (const auto &e : trace.events) {
        ASSERT_GE(e.time_ns, last);
        last = e.time_ns;
        if (e.kind == EventKind::StateReady) {
            produced.insert(e.state);
            produced_count++;
        } else if (e.kind == EventKind::Consume) {
            ASSERT_TRUE(produced.count(e.state)) << "state " << e.state << " consumed before ready";
            consumed_count++;
            consume_at[e.node] = e.time_ns;
        } else if (e.kind == EventKind::ReactionDecision) {
            decision_at[e.node] = e.time_ns;
        }
        ASSERT_LE(consumed_count, produced_count);
    }
    for (auto [node, t] : decision_at) {
        ASSERT_EQ(t, consume_at.at(node) + reaction_ns);
    }
    if (dag) {
        for (auto [a, b] : dag->edges()) {
            ASSERT_GE(decision_at.at(b), decision_at.at(a) + reaction_ns);
        }
    }
    ASSERT_LE(last, trace.makespan_ns);
}

}  // namespace

TEST(toffoli_dag, adder_chain) {
    auto dag = build_adder_dag(1000);
    ASSERT_EQ(dag.num_nodes(), 1997u);
    ASSERT_EQ(dag.measurement_depth(), 1997u);
    ASSERT_EQ(build_adder_dag(2).measurement_depth(), 1u);
    auto five = build_adder_dag(5);
    ASSERT_EQ(five.measurement_depth(), 7u);
    ASSERT_EQ(longest_path_oracle(five.num_nodes(), five.edges()), 7u);
    for (const auto &s : five.successors()) ASSERT_LE(s.size(), 1u);
    ASSERT_THROW(build_adder_dag(1), ArgumentError);
}

TEST(toffoli_dag, depth_matches_oracle_on_random_dags) {
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 50; trial++) {
        auto dag = random_dag(rng, 1 + trial % 25);
        ASSERT_EQ(dag.measurement_depth(), longest_path_oracle(dag.num_nodes(), dag.edges()));
    }
}

TEST(toffoli_dag, rejects_bad_graphs) {
    ASSERT_THROW(ToffoliDag(3, {{0, 1}, {1, 2}, {2, 0}}), ContractError);
    ASSERT_THROW(ToffoliDag(2, {{0, 0}}), ArgumentError);
    ASSERT_THROW(ToffoliDag(2, {{0, 2}}), ArgumentError);
}

TEST(simulate_reaction_limited, thousand_bit_add) {
    PhysicalAssumptions a;
    auto dag = build_adder_dag(1000);
    auto trace = simulate_reaction_limited(dag, FactorySpec{}, a, 14);
    ASSERT_EQ(factory_period_ns(FactorySpec{}, a), 135'000);
    ASSERT_EQ(trace.makespan_ns, chain_makespan_oracle(1997, 14, 135'000, 10'000));
    ASSERT_GE(trace.makespan_ns, 19'970'000);
    ASSERT_LE(trace.makespan_ns, 19'970'000 + 135'000 + 10'000);
    ASSERT_EQ(trace.limiting_factor, "reaction");
    ASSERT_EQ(trace.steps, 1997);
    check_trace_invariants(trace, 10'000, &dag);
}

TEST(simulate_reaction_limited, single_factory_is_supply_limited) {
    auto dag = build_adder_dag(1000);
    auto trace = simulate_reaction_limited(dag, FactorySpec{}, PhysicalAssumptions{}, 1);
    ASSERT_EQ(trace.limiting_factor, "supply");
    // depth / effective rate = 1997 / (200/27 kHz) = 269.595 ms.
    double oracle_ms = 1997 * 27.0 / 200.0;
    ASSERT_NEAR(trace.makespan_ms(), oracle_ms, 0.135 + 0.010);
    ASSERT_EQ(trace.makespan_ns, chain_makespan_oracle(1997, 1, 135'000, 10'000));
}

TEST(simulate_reaction_limited, depth_one) {
    auto trace = simulate_reaction_limited(build_adder_dag(2), FactorySpec{}, PhysicalAssumptions{}, 3);
    ASSERT_EQ(trace.makespan_ns, 10'000 + 135'000);
    ASSERT_THROW(simulate_reaction_limited(build_adder_dag(2), FactorySpec{}, PhysicalAssumptions{}, 0),
                 ArgumentError);
}

TEST(simulate_reaction_limited, invariants_on_random_dags) {
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<int> factories(1, 20);
    for (int trial = 0; trial < 30; trial++) {
        auto dag = random_dag(rng, 5 + trial);
        auto trace = simulate_reaction_limited(dag, FactorySpec{}, PhysicalAssumptions{}, factories(rng));
        ASSERT_EQ(trace.steps, static_cast<std::int64_t>(dag.num_nodes()));
        check_trace_invariants(trace, 10'000, &dag);
    }
}

TEST(simulate_reaction_limited, saturation) {
    auto dag = build_adder_dag(1001);
    const std::int64_t period = 135'000, reaction = 10'000;
    for (std::int64_t n : {1, 3, 7, 13, 14, 20, 40}) {
        auto trace = simulate_reaction_limited(dag, FactorySpec{}, PhysicalAssumptions{}, n);
        std::vector<std::int64_t> decisions;
        for (const auto &e : trace.events) {
            if (e.kind == EventKind::ReactionDecision) decisions.push_back(e.time_ns);
        }
        // Steady state: the second half of the chain.
        std::int64_t from = static_cast<std::int64_t>(decisions.size()) / 2;
        std::int64_t steps = static_cast<std::int64_t>(decisions.size()) - 1 - from;
        std::int64_t elapsed = decisions.back() - decisions[from];
        if (n >= factories_for_reaction_limit(FactorySpec{}, PhysicalAssumptions{})) {
            ASSERT_EQ(elapsed, steps * reaction) << n;
        } else {
            // n * effective rate, up to one emission quantum at each end.
            ASSERT_NEAR(static_cast<double>(elapsed), static_cast<double>(steps) * period / n, period) << n;
        }
    }
}

TEST(cnot_access_rate, corridor_rates) {
    PhysicalAssumptions a;
    ASSERT_EQ(cnot_access_rate(27, a, 1), Rational(1000, 27));
    ASSERT_EQ(cnot_access_rate(27, a, 2), Rational(2000, 27));
    ASSERT_NEAR(to_double(cnot_access_rate(27, a, 1)), 37.0, 0.05);
    ASSERT_NEAR(to_double(cnot_access_rate(27, a, 2)), 74.1, 0.05);
    ASSERT_NEAR(to_double(cnot_access_rate(27, with(10, 10), 1)), 3.7, 0.005);
    ASSERT_THROW(cnot_access_rate(2, a, 1), ArgumentError);
    ASSERT_THROW(cnot_access_rate(27, a, 3), ArgumentError);
}

TEST(simulate_lookup, two_sided_access_limit) {
    LookupSpec spec;
    auto trace = simulate_lookup(spec, FactorySpec{}, PhysicalAssumptions{}, 14);
    ASSERT_EQ(trace.limiting_factor, "access");
    ASSERT_EQ(trace.steps, 1023);
    double oracle_ms = 1023 / 74.074074 / 1000 * 1000;  // steps / rate, rate in kHz
    ASSERT_NEAR(trace.makespan_ms(), oracle_ms, 0.135 + 0.027);
    check_trace_invariants(trace, 10'000, nullptr);

    std::int64_t last_corridor = -1;
    for (const auto &e : trace.events) {
        if (e.kind != EventKind::CnotWindow) continue;
        ASSERT_NE(e.corridor, last_corridor);
        ASSERT_EQ(e.duration_ns, 27'000);
        last_corridor = e.corridor;
    }
}

TEST(simulate_lookup, one_side_and_slow_reaction) {
    LookupSpec one;
    one.access_sides = 1;
    auto trace = simulate_lookup(one, FactorySpec{}, PhysicalAssumptions{}, 14);
    ASSERT_EQ(trace.limiting_factor, "access");
    ASSERT_NEAR(trace.makespan_ms(), 1023 / 37.037037, 0.135 + 0.027);

    auto slow = simulate_lookup(LookupSpec{}, FactorySpec{}, with(1, 100), 14);
    ASSERT_EQ(slow.limiting_factor, "reaction");
    ASSERT_NEAR(slow.makespan_ms(), 1023 * 0.1, 0.135 + 0.1);

    auto starved = simulate_lookup(LookupSpec{}, FactorySpec{}, PhysicalAssumptions{}, 1);
    ASSERT_EQ(starved.limiting_factor, "supply");

    LookupSpec bad;
    bad.access_sides = 3;
    ASSERT_THROW(simulate_lookup(bad, FactorySpec{}, PhysicalAssumptions{}, 14), ArgumentError);
    bad = LookupSpec{};
    bad.entries = 1;
    ASSERT_THROW(bad.validate(), ArgumentError);
}

TEST(phase_timeline, lookup_then_add) {
    auto trace = phase_timeline(LookupSpec{}, 1000, FactorySpec{}, PhysicalAssumptions{}, 14);
    std::vector<std::string> names;
    std::int64_t total = 0;
    for (const auto &p : trace.phases) {
        names.push_back(p.name);
        ASSERT_EQ(p.start_ns, total);
        total += p.duration_ns;
    }
    ASSERT_EQ(names, (std::vector<std::string>{"spread", "lookup", "squeeze", "add_up", "add_down", "uncompute"}));
    ASSERT_EQ(trace.makespan_ns, total);
    ASSERT_EQ(trace.phases.back().toffolis, 0);
    ASSERT_EQ(trace.phases[3].toffolis + trace.phases[4].toffolis, 1997);

    auto adder = simulate_reaction_limited(build_adder_dag(1000), FactorySpec{}, PhysicalAssumptions{}, 14);
    ASSERT_EQ(trace.phases[3].duration_ns + trace.phases[4].duration_ns, adder.makespan_ns);

    std::map<std::string, std::int64_t> boundary;
    for (const auto &e : trace.events) {
        if (e.kind == EventKind::PhaseBoundary) boundary[e.phase] = e.time_ns;
    }
    ASSERT_LT(boundary.at("lookup"), boundary.at("add_up"));
    ASSERT_LT(boundary.at("add_up"), boundary.at("add_down"));
    ASSERT_EQ(boundary.at("end"), trace.makespan_ns);
    check_trace_invariants(trace, 10'000, nullptr);
}

TEST(trace_export, json_lines_round_trip) {
    auto trace = simulate_lookup(LookupSpec{.entries = 16}, FactorySpec{}, PhysicalAssumptions{}, 2);
    std::istringstream in(trace_to_json_lines(trace));
    std::string line;
    std::size_t count = 0;
    while (std::getline(in, line)) {
        auto j = nlohmann::json::parse(line);
        const auto &e = trace.events[count++];
        ASSERT_EQ(j.at("t_ns").get<std::int64_t>(), e.time_ns);
        ASSERT_EQ(j.at("kind").get<std::string>(), event_kind_name(e.kind));
    }
    ASSERT_EQ(count, trace.events.size());
    auto summary = trace_summary(trace);
    ASSERT_NE(summary.find("limiting factor: supply"), std::string::npos);
    ASSERT_NE(summary.find("factory 1:"), std::string::npos);
}
