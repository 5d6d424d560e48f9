#include <doctest.h>

#include "inoc/dynamics.hpp"
#include "inoc/equilibria.hpp"
#include "inoc/errors.hpp"
#include "test_util.hpp"

using namespace inoc;

TEST_SUITE("dynamics") {

TEST_CASE("schedule parsing") {
    CHECK(Schedule::parse("round-robin").kind == Schedule::Kind::RoundRobin);
    CHECK(Schedule::parse("random").kind == Schedule::Kind::RandomPerPass);
    Schedule fixed = Schedule::parse("fixed:3,1,2");
    CHECK(fixed.sequence == std::vector<NodeId>{3, 1, 2});
    CHECK(fixed.to_string() == "fixed:3,1,2");
    CHECK_THROWS_AS(Schedule::parse("alphabetical"), InputError);
    CHECK_THROWS_AS(Schedule::parse("fixed:"), InputError);
    CHECK_THROWS_AS(Schedule::parse("fixed:1,x"), InputError);
}

TEST_CASE("star converges after the center inoculates") {
    GameInstance inst(make_star(4), Rational(1), Rational(2), Rational(0), CostModel::Selfish);
    DynamicsTrace trace = run_dynamics(inst, StrategyProfile::all_insecure(4),
                                       Schedule::round_robin());
    CHECK(trace.converged);
    CHECK(trace.changes == 1);
    CHECK(trace.passes == 2);  // one changing pass, one clean pass
    CHECK(trace.final_profile == StrategyProfile::from_string("1000"));
    CHECK(is_equilibrium(inst, trace.final_profile).first);

    ConvergenceStats stats = convergence_stats(trace);
    CHECK(stats.passes == 2);
    CHECK(stats.changes == 1);
    CHECK(stats.converged);
}

TEST_CASE("an equilibrium start converges with zero changes") {
    GameInstance inst(make_star(4), Rational(1), Rational(2), Rational(0), CostModel::Selfish);
    DynamicsTrace trace =
        run_dynamics(inst, StrategyProfile::from_string("1000"), Schedule::round_robin());
    CHECK(trace.converged);
    CHECK(trace.changes == 0);
    CHECK(trace.passes == 1);
}

TEST_CASE("cycle run respects the selfish component bound") {
    GameInstance inst(make_cycle(8), Rational(1), Rational(4), Rational(0), CostModel::Selfish);
    DynamicsTrace trace = run_dynamics(inst, StrategyProfile::all_insecure(8),
                                       Schedule::round_robin());
    CHECK(trace.converged);
    ComponentView view(inst.graph(), trace.final_profile);
    for (int c = 0; c < view.component_count(); ++c) CHECK(view.component_size(c) <= 2);
}

TEST_CASE("fixed schedules replay a specific order") {
    GameInstance inst(make_star(4), Rational(1), Rational(2), Rational(0), CostModel::Selfish);
    // Sweeping the leaves first reaches a different equilibrium than the
    // round-robin order does.
    DynamicsTrace trace = run_dynamics(inst, StrategyProfile::all_insecure(4),
                                       Schedule::fixed({3, 2, 1, 0}));
    CHECK(trace.converged);
    CHECK(trace.changes == 2);
    CHECK(trace.final_profile == StrategyProfile::from_string("0011"));
    CHECK(is_equilibrium(inst, trace.final_profile).first);

    CHECK_THROWS_AS(run_dynamics(inst, StrategyProfile::all_insecure(4), Schedule::fixed({7})),
                    InputError);
    // Partial sequences cannot certify convergence.
    CHECK_THROWS_AS(run_dynamics(inst, StrategyProfile::all_insecure(4), Schedule::fixed({1, 2})),
                    InputError);
}

TEST_CASE("truncation is reported, never silently looped") {
    GameInstance inst(make_complete(6), Rational(1), Rational(1), Rational(0), CostModel::Selfish);
    DynamicsTrace trace =
        run_dynamics(inst, StrategyProfile::all_secure(6), Schedule::round_robin(), 1);
    CHECK(!trace.converged);
    CHECK(trace.passes == 1);
}

TEST_CASE("identical inputs give identical traces") {
    GameInstance inst(make_cycle(12), Rational(1), Rational(4), Rational(1, 2),
                      CostModel::Absolute);
    std::mt19937_64 rng(7);
    StrategyProfile initial = testutil::random_profile(rng, 12);
    Schedule random_schedule = Schedule::random(99);
    DynamicsTrace a = run_dynamics(inst, initial, random_schedule);
    DynamicsTrace b = run_dynamics(inst, initial, random_schedule);
    CHECK(a.final_profile == b.final_profile);
    CHECK(a.passes == b.passes);
    CHECK(a.changes == b.changes);
    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        CHECK(a.events[i].node == b.events[i].node);
        CHECK(a.events[i].pass == b.events[i].pass);
        CHECK(a.events[i].perceived_before == b.events[i].perceived_before);
    }
}

TEST_CASE("random-schedule runs converge to verified equilibria") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const NodeId n = 3 + static_cast<NodeId>(uniform_below(rng, 8));
        Graph g = testutil::random_graph(rng, n, 0.5, true);
        const CostModel model = trial % 2 ? CostModel::Absolute : CostModel::Relative;
        GameInstance inst(g, testutil::random_admissible_cost(rng, n), Rational(1),
                          testutil::random_friendship(rng), model);
        DynamicsTrace trace =
            run_dynamics(inst, testutil::random_profile(rng, n), Schedule::random(rng()));
        REQUIRE(trace.converged);
        CHECK(is_equilibrium(inst, trace.final_profile).first);
    }
}

TEST_CASE("potential thresholds per variant") {
    GameInstance inst(make_cycle(8), Rational(1), Rational(4), Rational(1, 2),
                      CostModel::Absolute);
    CHECK(potential_threshold(inst, ThresholdVariant::Rederived) == Rational(1));
    CHECK(potential_threshold(inst, ThresholdVariant::PaperAbsolute) == Rational(-3));
    CHECK(potential_threshold(inst, ThresholdVariant::PaperRelative) == Rational(-7));

    GameInstance relative = inst.with_model(CostModel::Relative, Rational(1, 2));
    // (2 * Cn/L - F) / (2 + F)
    CHECK(potential_threshold(relative, ThresholdVariant::Rederived) == Rational(7, 5));

    GameInstance selfish = inst.with_model(CostModel::Selfish, Rational(1, 2));
    CHECK_THROWS_AS(potential_threshold(selfish, ThresholdVariant::Rederived), InputError);
    GameInstance zero = inst.with_model(CostModel::Absolute, Rational(0));
    CHECK_THROWS_AS(PotentialConfig::make(zero), InputError);
}

TEST_CASE("cycle potential values") {
    GameInstance inst(make_cycle(8), Rational(1), Rational(4), Rational(1, 2),
                      CostModel::Absolute);
    PotentialConfig config = PotentialConfig::make(inst);  // t = 1

    CHECK(cycle_potential(inst, StrategyProfile::all_secure(8), config) == 0);
    CHECK(cycle_potential(inst, StrategyProfile::all_insecure(8), config) == 8);
    // insecure {0,1,4}: component of 2 is big, singleton is small
    CHECK(cycle_potential(inst, StrategyProfile::from_string("00110111"), config) == 1);

    GameInstance star(make_star(4), Rational(1), Rational(2), Rational(1, 2), CostModel::Absolute);
    CHECK_THROWS_AS(cycle_potential(star, StrategyProfile::all_insecure(4),
                                    PotentialConfig{ThresholdVariant::Rederived, Rational(1)}),
                    InputError);
}

TEST_CASE("potential stays within [-n, n]") {
    std::mt19937_64 rng(57);
    GameInstance inst(make_cycle(20), Rational(1), Rational(4), Rational(3, 4),
                      CostModel::Absolute);
    PotentialConfig config = PotentialConfig::make(inst);
    for (int trial = 0; trial < 100; ++trial) {
        StrategyProfile a = testutil::random_profile(rng, 20);
        const long phi = cycle_potential(inst, a, config);
        CHECK(phi >= -20);
        CHECK(phi <= 20);
    }
}

TEST_CASE("potential audit over random cycle runs") {
    std::mt19937_64 rng(71);
    long audited_events = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const NodeId n = 4 + static_cast<NodeId>(uniform_below(rng, 60));
        const CostModel model = trial % 2 ? CostModel::Absolute : CostModel::Relative;
        GameInstance inst(make_cycle(n), testutil::random_admissible_cost(rng, n), Rational(1),
                          testutil::random_friendship(rng, /*strictly_positive=*/true), model);
        PotentialConfig config = PotentialConfig::make(inst);
        DynamicsTrace trace = run_dynamics(inst, testutil::random_profile(rng, n),
                                           Schedule::round_robin(), -1, &config);
        REQUIRE(trace.converged);
        PotentialAuditResult audit = audit_potential(trace);
        for (const auto& note : audit.notes) INFO(note);
        CHECK(audit.ok);
        audited_events += audit.case_a + audit.case_b + audit.case_c;
    }
    // The sweep has to exercise the audited region, not just stop early.
    CHECK(audited_events > 0);
}

}  // TEST_SUITE
