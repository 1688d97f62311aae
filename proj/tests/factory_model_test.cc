#include "latticeplan/factory_model.h"

#include <gtest/gtest.h>

#include "latticeplan/errors.h"

using namespace latticeplan;

namespace {

PhysicalAssumptions baseline() {
    return PhysicalAssumptions{};
}

PhysicalAssumptions with(double cycle, double reaction, double error = 1e-3) {
    PhysicalAssumptions a;
    a.cycle_time_us = cycle;
    a.reaction_time_us = reaction;
    a.gate_error = error;
    return a;
}

}  // namespace

TEST(ccz_rate, baseline_rates) {
    auto r = ccz_rate(FactorySpec{}, baseline());
    // 1000 / (5 * 27) and 1000 / (5.75 * 17 * 8 / 6) in kHz.
    ASSERT_EQ(r.level2_rate_khz, Rational(200, 27));
    ASSERT_EQ(r.level1_bound_khz, Rational(3000, 391));
    ASSERT_NEAR(to_double(r.level2_rate_khz), 7.407, 5e-4);
    ASSERT_EQ(format_sig2(to_double(r.level2_rate_khz)), "7.4");
    ASSERT_EQ(format_sig2(to_double(r.level1_bound_khz)), "7.7");
    ASSERT_EQ(r.limiting_factor, LimitingFactor::Level2);
    ASSERT_EQ(r.effective_rate_khz, r.level2_rate_khz);
}

TEST(ccz_rate, faster_cycle_scales_rates) {
    auto r = ccz_rate(FactorySpec{}, with(0.1, 10));
    ASSERT_EQ(r.effective_rate_khz, Rational(2000, 27));
    ASSERT_EQ(format_sig2(to_double(r.effective_rate_khz)), "74");
}

TEST(ccz_rate, deep_factory_rate_vanishes) {
    FactorySpec spec;
    spec.d1 = 3;
    double previous = 1e9;
    for (int d2 = 5; d2 < 4000; d2 += 200) {
        spec.d2 = d2;
        auto r = ccz_rate(spec, baseline());
        ASSERT_EQ(r.limiting_factor, LimitingFactor::Level2);
        ASSERT_LT(to_double(r.effective_rate_khz), previous);
        previous = to_double(r.effective_rate_khz);
    }
    ASSERT_LT(previous, 0.06);
}

TEST(factories_for_reaction_limit, table_rows) {
    FactorySpec spec;
    ASSERT_EQ(factories_for_reaction_limit(spec, baseline()), 14);
    ASSERT_EQ(factories_for_reaction_limit(spec, with(0.1, 10)), 2);
    ASSERT_EQ(factories_for_reaction_limit(spec, with(10, 10)), 135);
    ASSERT_EQ(factories_for_reaction_limit(spec, with(1, 1)), 135);
    ASSERT_EQ(factories_for_reaction_limit(spec, with(1, 100)), 2);
}

TEST(factories_for_reaction_limit, ceiling_semantics) {
    for (int d2 = 3; d2 <= 41; d2 += 2) {
        for (double cycle : {0.1, 0.5, 1.0, 2.0}) {
            for (double reaction : {1.0, 10.0, 37.0}) {
                FactorySpec spec;
                spec.d1 = 3;
                spec.d2 = d2;
                auto a = with(cycle, reaction);
                auto r = ccz_rate(spec, a);
                Rational demand = Rational(1000) / a.reaction_time();
                ASSERT_GE(r.effective_rate_khz * r.factories_needed, demand);
                if (r.factories_needed > 1) {
                    ASSERT_LT(r.effective_rate_khz * (r.factories_needed - 1), demand);
                }
            }
        }
    }
}

TEST(factory_spec, depth_accounting) {
    FactorySpec spec;
    ASSERT_EQ(spec.ccz_depth_cycles(), Rational(135));
    FactorySpec legacy = spec;
    legacy.injection = InjectionStyle::Legacy;
    ASSERT_EQ(legacy.ccz_depth_cycles(), Rational(1485, 10));
    ASSERT_EQ(legacy.ccz_depth_cycles() - spec.ccz_depth_cycles(), Rational(spec.d2, 2));
    ASSERT_EQ(spec.t1_depth_cycles(), Rational(575 * 17, 100));
    ASSERT_EQ(spec.t1_depth_cycles(true), Rational(625 * 17, 100));
    FactorySpec bad;
    bad.d2 = 2;
    ASSERT_THROW(bad.validate(), ArgumentError);
    bad.d2 = 1;
    ASSERT_THROW(ccz_rate(bad, baseline()), ArgumentError);
}

TEST(ccz_rate, limiting_factor_crossover) {
    // Level 1 binds iff 5.75 d1 (8/6) > 5 d2, i.e. 23 d1 > 15 d2 in integers.
    for (int d1 = 3; d1 <= 61; d1 += 2) {
        for (int d2 = 3; d2 <= 61; d2 += 2) {
            FactorySpec spec{d1, d2};
            auto r = ccz_rate(spec, baseline());
            bool level1 = 23 * d1 > 15 * d2;
            ASSERT_EQ(r.limiting_factor == LimitingFactor::Level1, level1) << d1 << " " << d2;
        }
    }
    // Exact tie: both rates equal and the report names level 2.
    auto tie = ccz_rate(FactorySpec{15, 23}, baseline());
    ASSERT_EQ(tie.level1_bound_khz, tie.level2_rate_khz);
    ASSERT_EQ(tie.limiting_factor, LimitingFactor::Level2);
    ASSERT_EQ(ccz_rate(FactorySpec{17, 23}, baseline()).limiting_factor, LimitingFactor::Level1);
}

TEST(ccz_rate, monotonicity) {
    for (int d1 = 3; d1 <= 31; d1 += 2) {
        for (int d2 = 3; d2 <= 31; d2 += 2) {
            auto base = ccz_rate(FactorySpec{d1, d2}, baseline());
            auto bigger_d2 = ccz_rate(FactorySpec{d1, d2 + 2}, baseline());
            auto bigger_d1 = ccz_rate(FactorySpec{d1 + 2, d2}, baseline());
            auto slower = ccz_rate(FactorySpec{d1, d2}, with(1.5, 10));
            ASSERT_LT(slower.effective_rate_khz, base.effective_rate_khz);
            ASSERT_LE(bigger_d2.effective_rate_khz, base.effective_rate_khz);
            ASSERT_LE(bigger_d1.effective_rate_khz, base.effective_rate_khz);
            // Strict when the varied distance controls the binding term.
            if (base.limiting_factor == LimitingFactor::Level2) {
                ASSERT_LT(bigger_d2.effective_rate_khz, base.effective_rate_khz);
            } else {
                ASSERT_LT(bigger_d1.effective_rate_khz, base.effective_rate_khz);
            }
        }
    }
}

TEST(physical_qubits, totals) {
    FactorySpec spec;
    ASSERT_EQ(qubits_per_patch(27), 1568);
    ASSERT_EQ(physical_qubits(spec, 14), 2'634'240);
    ASSERT_EQ(physical_qubits(spec, 1), 188'160);
    ASSERT_LT(std::abs(physical_qubits(spec, 14) - 2.6e6) / 2.6e6, 0.05);
    ASSERT_THROW(physical_qubits(spec, 0), ArgumentError);
    FactorySpec degenerate;
    degenerate.d2 = 0;
    ASSERT_THROW(physical_qubits(degenerate, 14), ArgumentError);
    ASSERT_EQ(ccz_rate(spec, baseline()).physical_qubits_total, 2'634'240);
}

TEST(select_code_distances, paper_anchor) {
    auto s = select_code_distances(with(1, 10, 1e-3), 1e8);
    ASSERT_EQ(s.d1, 17);
    ASSERT_EQ(s.d2, 27);
    ASSERT_FALSE(s.t_factory_fallback);
    for (double v : {1e8, 2e8, 5e8, 8e8}) {
        auto t = select_code_distances(with(1, 10, 1e-3), v);
        ASSERT_EQ(t.d1, 17) << v;
        ASSERT_EQ(t.d2, 27) << v;
    }
}

TEST(select_code_distances, seven_factory_row) {
    // Sweep first: which odd d2 gives 7 level-2-limited factories at 10 us reaction?
    std::vector<int> hits;
    for (int d2 = 3; d2 <= 51; d2 += 2) {
        // ceil(100 kHz / (1000 / (5 d2) kHz)) = ceil(d2 / 2).
        int n = (5 * d2 * 100 + 999) / 1000;
        if (n == 7) hits.push_back(d2);
    }
    ASSERT_EQ(hits, std::vector<int>{13});

    auto a = with(1, 10, 1e-4);
    auto s = select_code_distances(a, 1e8);
    ASSERT_EQ(s.d2, 13);
    ASSERT_EQ(factories_for_reaction_limit(FactorySpec{s.d1, s.d2}, a), 7);
}

TEST(select_code_distances, selection_is_minimal) {
    ErrorModel model;
    for (double p : {1e-4, 3e-4, 1e-3, 3e-3}) {
        for (double v : {1e3, 1e6, 1e9, 1e12}) {
            auto s = select_code_distances(with(1, 10, p), v, model);
            ASSERT_LT(v * model.ccz_volume * model.logical_error(p, s.d2), model.budget);
            if (s.d2 > 3) {
                ASSERT_GE(v * model.ccz_volume * model.logical_error(p, s.d2 - 2), model.budget);
            }
            ASSERT_EQ(s.d1 % 2, 1);
            ASSERT_LE(s.d1, s.d2);
        }
    }
}

TEST(select_code_distances, fallback_and_threshold) {
    ASSERT_TRUE(select_code_distances(baseline(), 2e13).t_factory_fallback);
    ASSERT_FALSE(select_code_distances(baseline(), 1e13).t_factory_fallback);
    ASSERT_THROW(select_code_distances(with(1, 10, 0.011), 1e8), ThresholdError);
    ASSERT_THROW(select_code_distances(with(1, 10, 0.01), 1e8), ThresholdError);
    ASSERT_THROW(select_code_distances(baseline(), 0.5), ArgumentError);
    ASSERT_THROW(with(0, 10).validate(), ArgumentError);
    ASSERT_THROW(with(1, -1).validate(), ArgumentError);
}

TEST(format_sig2, rounding) {
    ASSERT_EQ(format_sig2(7.407), "7.4");
    ASSERT_EQ(format_sig2(7.6726), "7.7");
    ASSERT_EQ(format_sig2(74.07), "74");
    ASSERT_EQ(format_sig2(37.037), "37");
    ASSERT_EQ(format_sig2(0.7407), "0.74");
    ASSERT_EQ(format_sig2(135.2), "140");
}
