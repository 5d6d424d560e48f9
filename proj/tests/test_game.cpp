#include <doctest.h>

#include "inoc/equilibria.hpp"
#include "inoc/errors.hpp"
#include "inoc/game.hpp"
#include "test_util.hpp"

using namespace inoc;

namespace {

GameInstance star4(Rational f, CostModel model) {
    return GameInstance(make_star(4), Rational(1), Rational(2), f, model);
}

}  // namespace

TEST_SUITE("game") {

TEST_CASE("instance validation") {
    CHECK_THROWS_AS(GameInstance(make_complete(4), Rational(2), Rational(1), Rational(0),
                                 CostModel::Selfish),
                    InputError);  // C > L
    CHECK_THROWS_AS(GameInstance(make_complete(4), Rational(1, 4), Rational(1), Rational(0),
                                 CostModel::Selfish),
                    InputError);  // C = L/n
    CHECK_THROWS_AS(GameInstance(make_complete(4), Rational(1), Rational(1), Rational(2),
                                 CostModel::Absolute),
                    InputError);  // F > 1
    Graph with_isolated = Graph::from_edges(3, {{0, 1}});
    CHECK_THROWS_AS(GameInstance(with_isolated, Rational(1), Rational(2), Rational(1, 2),
                                 CostModel::Relative),
                    InputError);
    CHECK_NOTHROW(GameInstance(with_isolated, Rational(1), Rational(2), Rational(1, 2),
                               CostModel::Absolute));
}

TEST_CASE("selfish model forces F = 0 semantics") {
    GameInstance inst(make_star(4), Rational(1), Rational(2), Rational(3, 4), CostModel::Selfish);
    CHECK(inst.friendship_factor() == Rational(3, 4));
    CHECK(inst.effective_friendship() == 0);
}

TEST_CASE("actual cost") {
    GameInstance inst = star4(Rational(0), CostModel::Selfish);
    StrategyProfile center_secure = StrategyProfile::from_string("1000");
    CHECK(actual_cost(inst, center_secure, 1) == Rational(1, 2));  // L * 1/4
    CHECK(actual_cost(inst, center_secure, 0) == Rational(1));     // C

    StrategyProfile all_secure = StrategyProfile::all_secure(4);
    for (NodeId i = 0; i < 4; ++i) CHECK(actual_cost(inst, all_secure, i) == Rational(1));

    GameInstance k4(make_complete(4), Rational(1), Rational(1), Rational(0), CostModel::Selfish);
    StrategyProfile none = StrategyProfile::all_insecure(4);
    for (NodeId i = 0; i < 4; ++i) CHECK(actual_cost(k4, none, i) == Rational(1));
}

TEST_CASE("perceived cost, both friendship weightings") {
    StrategyProfile center_secure = StrategyProfile::from_string("1000");

    GameInstance absolute = star4(Rational(1, 2), CostModel::Absolute);
    CHECK(perceived_cost(absolute, center_secure, 0) == Rational(7, 4));

    GameInstance relative = star4(Rational(1, 2), CostModel::Relative);
    CHECK(perceived_cost(relative, center_secure, 0) == Rational(5, 4));

    GameInstance zero = star4(Rational(0), CostModel::Absolute);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        StrategyProfile a = testutil::random_profile(rng, 4);
        for (NodeId i = 0; i < 4; ++i)
            CHECK(perceived_cost(zero, a, i) == actual_cost(zero, a, i));
    }
}

TEST_CASE("model degeneracy: selfish == absolute(F=0) == relative(F=0)") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const NodeId n = 2 + static_cast<NodeId>(uniform_below(rng, 6));
        Graph g = testutil::random_graph(rng, n, 0.5, /*no_isolated=*/true);
        const Rational c = testutil::random_admissible_cost(rng, n);
        GameInstance selfish(g, c, Rational(1), Rational(1, 2), CostModel::Selfish);
        GameInstance absolute = selfish.with_model(CostModel::Absolute, Rational(0));
        GameInstance relative = selfish.with_model(CostModel::Relative, Rational(0));
        StrategyProfile a = testutil::random_profile(rng, n);
        for (NodeId i = 0; i < n; ++i) {
            const Rational base = perceived_cost(selfish, a, i);
            CHECK(perceived_cost(absolute, a, i) == base);
            CHECK(perceived_cost(relative, a, i) == base);
        }
    }
}

TEST_CASE("degree-1 nodes perceive identically under both weightings") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const NodeId n = 3 + static_cast<NodeId>(uniform_below(rng, 5));
        Graph g = testutil::random_graph(rng, n, 0.4, /*no_isolated=*/true);
        const Rational c = testutil::random_admissible_cost(rng, n);
        const Rational f = testutil::random_friendship(rng);
        GameInstance absolute(g, c, Rational(1), f, CostModel::Absolute);
        GameInstance relative = absolute.with_model(CostModel::Relative, f);
        StrategyProfile a = testutil::random_profile(rng, n);
        for (NodeId i = 0; i < n; ++i) {
            if (g.degree(i) != 1) continue;
            CHECK(perceived_cost(absolute, a, i) == perceived_cost(relative, a, i));
        }
    }
}

TEST_CASE("social cost") {
    GameInstance inst = star4(Rational(0), CostModel::Selfish);
    CHECK(social_cost(inst, StrategyProfile::from_string("1000")) == Rational(5, 2));
    CHECK(social_cost(inst, StrategyProfile::all_secure(4)) == Rational(4));

    GameInstance k4(make_complete(4), Rational(1), Rational(1), Rational(0), CostModel::Selfish);
    CHECK(social_cost(k4, StrategyProfile::all_insecure(4)) == Rational(4));  // nL

    CostReport report = cost_report(inst, StrategyProfile::from_string("1000"));
    CHECK(report.social == Rational(5, 2));
    CHECK(report.actual[1] == Rational(1, 2));
    CHECK(report.perceived.size() == 4);
}

TEST_CASE("scale invariance of costs and decisions") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const NodeId n = 2 + static_cast<NodeId>(uniform_below(rng, 6));
        Graph g = testutil::random_graph(rng, n, 0.5, true);
        const Rational c = testutil::random_admissible_cost(rng, n);
        const Rational f = testutil::random_friendship(rng);
        const Rational lambda = make_rational(1 + static_cast<long>(uniform_below(rng, 9)),
                                               1 + static_cast<long>(uniform_below(rng, 5)));
        GameInstance base(g, c, Rational(1), f, CostModel::Absolute);
        GameInstance scaled(g, c * lambda, lambda, f, CostModel::Absolute);
        StrategyProfile a = testutil::random_profile(rng, n);
        CHECK(social_cost(scaled, a) == lambda * social_cost(base, a));
        for (NodeId i = 0; i < n; ++i) {
            CHECK(perceived_cost(scaled, a, i) == lambda * perceived_cost(base, a, i));
            const auto br_base = best_response(base, a, i);
            const auto br_scaled = best_response(scaled, a, i);
            CHECK(br_base.prefer_secure == br_scaled.prefer_secure);
            CHECK(br_base.strictly_improves == br_scaled.strictly_improves);
        }
    }
}

TEST_CASE("inoculation threshold formulas") {
    // F = 0 collapses to Cn/L for every model.
    GameInstance selfish(make_cycle(8), Rational(1), Rational(4), Rational(0), CostModel::Selfish);
    StrategyProfile a = StrategyProfile::all_insecure(8);
    CHECK(inoculation_threshold(selfish, a, 3) == Rational(2));

    // Node 0 with two insecure neighbors, each alone once node 0 is secure.
    Graph g = Graph::from_edges(8, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {5, 6}, {6, 7}});
    StrategyProfile profile = StrategyProfile::from_string("10011111");  // 1, 2 insecure
    GameInstance absolute(g, Rational(1), Rational(4), Rational(1, 2), CostModel::Absolute);
    CHECK(inoculation_threshold(absolute, profile, 0) == Rational(3, 2));

    GameInstance relative(g, Rational(1), Rational(4), Rational(1, 2), CostModel::Relative);
    CHECK(inoculation_threshold(relative, profile, 0) == Rational(9, 5));
}

TEST_CASE("best response examples") {
    // From all-secure, dropping protection always pays (C > L/n).
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const NodeId n = 2 + static_cast<NodeId>(uniform_below(rng, 6));
        Graph g = testutil::random_graph(rng, n, 0.5, true);
        GameInstance inst(g, testutil::random_admissible_cost(rng, n), Rational(1),
                          testutil::random_friendship(rng), CostModel::Absolute);
        StrategyProfile all = StrategyProfile::all_secure(n);
        for (NodeId i = 0; i < n; ++i) {
            const auto br = best_response(inst, all, i);
            CHECK(br.strictly_improves);
            CHECK(!br.prefer_secure);
        }
    }

    GameInstance k4(make_complete(4), Rational(1), Rational(1), Rational(1), CostModel::Absolute);
    StrategyProfile two = StrategyProfile::from_string("0011");
    const auto keep = best_response(k4, two, 0);
    CHECK(!keep.strictly_improves);
    CHECK(!keep.prefer_secure);

    GameInstance s8(make_star(8), Rational(13, 32), Rational(1), Rational(1, 8),
                    CostModel::Absolute);
    StrategyProfile center_and_two = StrategyProfile::from_string("00011111");
    const auto flip = best_response(s8, center_and_two, 0);
    CHECK(flip.strictly_improves);
    CHECK(flip.prefer_secure);
}

TEST_CASE("threshold consistency with best response, exhaustive sweep") {
    // Every 4-node graph, every profile, a small parameter grid: an insecure
    // player flips exactly when its component exceeds the threshold, and a
    // secure player flips exactly when its hypothetical component stays under.
    const Rational L(1);
    const std::vector<Rational> costs = {Rational(3, 8), Rational(1, 2), Rational(1)};
    const std::vector<Rational> friendships = {Rational(0), Rational(1, 2), Rational(1)};
    for (unsigned mask = 0; mask < 64; ++mask) {
        std::vector<std::pair<NodeId, NodeId>> edges;
        int bit = 0;
        for (NodeId u = 0; u < 4; ++u)
            for (NodeId v = u + 1; v < 4; ++v, ++bit)
                if (mask & (1u << bit)) edges.emplace_back(u, v);
        Graph g = Graph::from_edges(4, edges);
        const bool has_isolated = g.min_degree() == 0;
        for (const Rational& c : costs) {
            for (const Rational& f : friendships) {
                for (CostModel model :
                     {CostModel::Selfish, CostModel::Absolute, CostModel::Relative}) {
                    if (model == CostModel::Relative && has_isolated) continue;
                    GameInstance inst(g, c, L, f, model);
                    for (unsigned bits = 0; bits < 16; ++bits) {
                        StrategyProfile a = StrategyProfile::all_insecure(4);
                        for (NodeId i = 0; i < 4; ++i) a.bits[i] = (bits >> i) & 1u;
                        ComponentView view(g, a);
                        for (NodeId i = 0; i < 4; ++i) {
                            const auto br = best_response(inst, a, i);
                            CHECK(br.strictly_improves ==
                                  testutil::flip_improves_reference(inst, a, i));
                            const Rational threshold = inoculation_threshold(inst, a, i);
                            if (!a.secure(i)) {
                                CHECK(br.strictly_improves ==
                                      (Rational(view.size_for(i)) > threshold));
                            } else {
                                const long hyp = hypothetical_component_size(g, a, view, i);
                                CHECK(br.strictly_improves == (Rational(hyp) < threshold));
                            }
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("relative model rejects isolated nodes at evaluation too") {
    Graph g = Graph::from_edges(2, {{0, 1}});
    GameInstance inst(g, Rational(3, 4), Rational(1), Rational(1, 2), CostModel::Relative);
    CHECK_NOTHROW(perceived_cost(inst, StrategyProfile::all_insecure(2), 0));
}

}  // TEST_SUITE
