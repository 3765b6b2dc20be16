// Seeded property checks over randomly generated graphs and models.

#include <gtest/gtest.h>

#include "feedsep/audit.hpp"
#include "feedsep/dynamics.hpp"
#include "feedsep/model_io.hpp"
#include "test_support.hpp"

namespace feedsep {
namespace {

using namespace feedsep::testing;

constexpr int kGraphCases = 300;

TEST(GraphProperties, DSeparationIsSymmetric) {
    std::mt19937_64 rng(101);
    for (int i = 0; i < kGraphCases; ++i) {
        const std::size_t n = 2 + rng() % 7;
        const DiGraph g = random_digraph(rng, n, 0.3);
        const SepQuery q = random_query(rng, n);
        EXPECT_EQ(d_separated(g, q), d_separated(g, {q.b, q.a, q.c}));
    }
}

TEST(GraphProperties, AncestralRestrictionIsIdempotent) {
    std::mt19937_64 rng(102);
    for (int i = 0; i < kGraphCases; ++i) {
        const std::size_t n = 1 + rng() % 8;
        const DiGraph g = random_digraph(rng, n, 0.25);
        VarSet seeds;
        for (std::size_t v = 0; v < n; ++v) {
            if (rng() % 3 == 0) seeds.insert(VarId{v});
        }
        const DiGraph once = ancestral_restriction(g, seeds);
        EXPECT_EQ(ancestral_restriction(once, seeds), once);
        for (VarId s : seeds) EXPECT_TRUE(once.contains(s));
    }
}

TEST(GraphProperties, MoralizationKeepsEveryEdge) {
    std::mt19937_64 rng(103);
    for (int i = 0; i < kGraphCases; ++i) {
        const DiGraph g = random_digraph(rng, 2 + rng() % 7, 0.35);
        const UGraph m = moralize(g);
        for (auto [p, c] : g.edges()) EXPECT_TRUE(m.has_edge(p, c));
    }
}

TEST(GraphProperties, NonAncestorsDoNotAffectTheAnswer) {
    std::mt19937_64 rng(104);
    for (int i = 0; i < kGraphCases; ++i) {
        const std::size_t n = 2 + rng() % 6;
        const DiGraph g = random_digraph(rng, n, 0.3);
        const SepQuery q = random_query(rng, n);
        // Append two nodes that are children only: never ancestors of the query.
        DiGraph bigger(n + 2);
        for (auto [p, c] : g.edges()) bigger.add_edge(p, c);
        for (std::size_t v = 0; v < n; ++v) {
            if (rng() % 2) bigger.add_edge(VarId{v}, VarId{n});
            if (rng() % 2) bigger.add_edge(VarId{v}, VarId{n + 1});
        }
        bigger.add_edge(VarId{n}, VarId{n + 1});
        EXPECT_EQ(d_separated(g, q), d_separated(bigger, q));

        // Removing a node outside the ancestral set changes nothing either.
        VarSet seeds = q.a;
        seeds.insert(q.b.begin(), q.b.end());
        seeds.insert(q.c.begin(), q.c.end());
        const VarSet anc = ancestors(g, seeds);
        VarSet keep = g.nodes();
        for (VarId v : g.nodes()) {
            if (!anc.count(v)) {
                keep.erase(v);
                break;
            }
        }
        EXPECT_EQ(d_separated(g, q), d_separated(g.induced(keep), q));
    }
}

TEST(ScmProperties, AcyclicModelsSolveUniquelyByForwardSubstitution) {
    std::mt19937_64 rng(201);
    for (int i = 0; i < 60; ++i) {
        const Scm m = random_model(rng, {2 + rng() % 4, 2 + static_cast<int>(rng() % 2), 0.5, GraphShape::Acyclic}, "a");
        for_each_effective_draw(m, [&](const UDraw& u) {
            const auto sols = consistent_solutions(m, u);
            ASSERT_EQ(sols.size(), 1u);
            EXPECT_EQ(forward_solve(m, u), sols[0]);
        });
    }
}

TEST(ScmProperties, SolutionsRecheckAndAreFixedPoints) {
    std::mt19937_64 rng(202);
    for (int i = 0; i < 60; ++i) {
        const Scm m = i % 2 ? random_model(rng, {2 + rng() % 3, 2, 0.5, GraphShape::Any}, "m")
                            : random_expr_model(rng, 2 + rng() % 3, 2 + static_cast<int>(rng() % 2));
        std::vector<Schedule> schedules = {Schedule::simultaneous()};
        std::vector<VarId> order;
        for (std::size_t v = 0; v < m.size(); ++v) order.push_back(VarId{v});
        do schedules.push_back(Schedule::sequential(order, m.size()));
        while (std::next_permutation(order.begin(), order.end()));

        for_each_effective_draw(m, [&](const UDraw& u) {
            for (const auto& x : consistent_solutions(m, u)) {
                EXPECT_TRUE(satisfies_all(m, u, x));
                for (const auto& s : schedules) EXPECT_EQ(sweep(m, x, u, s), x);
            }
        });
    }
}

TEST(ScmProperties, UniquenessReportsAreDeterministicAndRecheck) {
    std::mt19937_64 rng(203);
    for (int i = 0; i < 80; ++i) {
        const Scm m = random_model(rng, {3, 2, 0.5, GraphShape::Cyclic}, "c");
        const auto first = check_uniqueness(m);
        const auto second = check_uniqueness(m);
        EXPECT_EQ(first.unique(), second.unique());
        if (!first.unique()) {
            EXPECT_EQ(first.witness->u, second.witness->u);
            EXPECT_NE(first.witness->solution_count, 1u);
            for (const auto& x : first.witness->solutions) EXPECT_TRUE(satisfies_all(m, first.witness->u, x));
            EXPECT_EQ(consistent_solutions(m, first.witness->u).size(), first.witness->solution_count);
        }
    }
}

TEST(DistProperties, CiSymmetryFactorizationAndMarginalCommute) {
    std::mt19937_64 rng(301);
    int checked = 0;
    while (checked < 40) {
        const Scm m = random_model(rng, {4, 2, 0.4, GraphShape::Any}, "m");
        if (!check_uniqueness(m).unique()) continue;
        ++checked;
        const JointDist jd = induced_joint(m);
        Rational total = 0;
        for (const auto& [cell, p] : jd.mass()) total += p;
        EXPECT_EQ(total, 1);

        for (int k = 0; k < 5; ++k) {
            const SepQuery q = random_query(rng, 4);
            EXPECT_EQ(ci_holds(jd, q), ci_holds(jd, {q.b, q.a, q.c}));

            VarSet ab = q.a;
            ab.insert(q.b.begin(), q.b.end());
            const JointDist pab = marginal(jd, ab);
            const JointDist pa = marginal(jd, q.a);
            const JointDist pb = marginal(jd, q.b);
            bool factorizes = true;
            for (const auto& [ca, ma] : pa.mass()) {
                for (const auto& [cb, mb] : pb.mass()) {
                    PartialAssignment cell;
                    std::size_t i = 0;
                    for (VarId v : q.a) cell[v] = ca[i++];
                    i = 0;
                    for (VarId v : q.b) cell[v] = cb[i++];
                    if (prob(jd, cell) != ma * mb) factorizes = false;
                }
            }
            EXPECT_EQ(ci_holds(jd, {q.a, q.b, {}}), factorizes);

            const JointDist outer = marginal(jd, ab);
            EXPECT_EQ(marginal(outer, q.a), marginal(jd, q.a));
        }
    }
}

TEST(DynamicsProperties, ConvergingSchedulesReachTheSolution) {
    std::mt19937_64 rng(401);
    int checked = 0;
    while (checked < 40) {
        const Scm m = random_model(rng, {3 + rng() % 2, 2, 0.4, GraphShape::Cyclic}, "c");
        if (!check_uniqueness(m).unique()) continue;
        ++checked;
        const auto result = find_valid_schedule(m);
        if (!result.found()) continue;
        const StateCodec codec(m.size(), m.modulus());
        for_each_effective_draw(m, [&](const UDraw& u) {
            const XState sol = consistent_solutions(m, u).front();
            for (std::uint64_t code = 0; code < codec.state_count(); ++code) {
                const Trajectory t = trace(m, *result.schedule, u, codec.decode<ObservableTag>(code));
                ASSERT_EQ(t.cycle.size(), 1u);
                EXPECT_EQ(t.cycle.front(), sol);
            }
        });
    }
}

TEST(DynamicsProperties, FailureWitnessesReplay) {
    std::mt19937_64 rng(402);
    int checked = 0;
    while (checked < 40) {
        const Scm m = random_model(rng, {4, 2, 0.5, GraphShape::Cyclic}, "c");
        if (!check_uniqueness(m).unique()) continue;
        const auto report = schedule_converges(m, Schedule::simultaneous());
        if (report.converges()) continue;
        ++checked;
        const auto& w = *report.witness;
        const Trajectory t = trace(m, Schedule::simultaneous(), w.u, w.initial);
        EXPECT_EQ(t.cycle, w.cycle);
        const XState sol = consistent_solutions(m, w.u).front();
        EXPECT_TRUE(w.cycle.size() >= 2 || w.cycle.front() != sol);
    }
}

TEST(AuditProperties, AcyclicModelsHaveNoViolations) {
    std::mt19937_64 rng(501);
    for (int i = 0; i < 60; ++i) {
        const Scm m = random_model(rng, {3 + rng() % 3, 2, 0.5, GraphShape::Acyclic}, "a");
        EXPECT_TRUE(violations_only(audit_soundness(m, 2)).empty());
    }
}

TEST(AuditProperties, ModelsWithValidScheduleHaveNoViolations) {
    std::mt19937_64 rng(502);
    int checked = 0;
    while (checked < 30) {
        const Scm m = random_model(rng, {4, 2, 0.45, GraphShape::Cyclic}, "c");
        if (!check_uniqueness(m).unique() || !find_valid_schedule(m).found()) continue;
        ++checked;
        EXPECT_TRUE(violations_only(audit_soundness(m, 2, true)).empty());
    }
}

TEST(AuditProperties, MinedModelsAreUniqueAndViolationsReproduce) {
    MinerConfig cfg{4, 2, 0.45, 300, 23, 2};
    for (const auto& mined : mine(cfg)) {
        EXPECT_TRUE(check_uniqueness(mined.model).unique());
        EXPECT_FALSE(find_valid_schedule(mined.model).found());
        const JointDist jd = induced_joint(mined.model);
        for (const auto& r : mined.violations) {
            EXPECT_TRUE(d_separated(mined.model.graph(), r.query));
            EXPECT_FALSE(ci_holds(jd, r.query));
        }
    }
}

TEST(IoProperties, SerializeParseRoundTrip) {
    std::mt19937_64 rng(601);
    for (int i = 0; i < 100; ++i) {
        const Scm m = i % 2 ? random_model(rng, {1 + rng() % 5, 2 + static_cast<int>(rng() % 3), 0.4, GraphShape::Any}, "r")
                            : random_expr_model(rng, 1 + rng() % 5, 2 + static_cast<int>(rng() % 3));
        const std::string text = serialize_model(m);
        const Scm back = parse_model(text);
        EXPECT_EQ(back, m) << text;
        EXPECT_EQ(serialize_model(back), text);
    }
}

}  // namespace
}  // namespace feedsep
