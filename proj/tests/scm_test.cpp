#include "feedsep/scm.hpp"

#include <gtest/gtest.h>

#include "feedsep/errors.hpp"
#include "feedsep/fixtures.hpp"
#include "test_support.hpp"

namespace feedsep {
namespace {

using namespace feedsep::testing;

// X1 = X2 + 1, X2 = X1: substitution gives X1 = X1 + 1.
Scm contradiction_model() { return expr_model(2, {v(2) + c(1), v(1)}); }

// X1 = X2, X2 = X1: both constant states solve it.
Scm mirror_model() { return expr_model(2, {v(2), v(1)}); }

TEST(EvalEquationTest, Fig1X6) {
    const Scm fig1 = fixture("neal-fig1");
    const XState x({0, 1, 0, 0, 0, 0, 0});
    EXPECT_EQ(eval_equation(fig1, X(6), 0, x), 1);
    EXPECT_EQ(eval_equation(fig1, X(6), 1, x), 1);
}

TEST(EvalEquationTest, ConstantAndOwnDisturbance) {
    const Scm m = expr_model(3, {c(0), u()});
    for (Value uv = 0; uv < 3; ++uv) {
        for (Value xv = 0; xv < 3; ++xv) {
            EXPECT_EQ(eval_equation(m, X(1), uv, XState({xv, xv})), 0);
        }
    }
    const Scm fig1 = fixture("neal-fig1");
    EXPECT_EQ(eval_equation(fig1, X(1), 1, XState::zeros(7)), 1);
}

TEST(EvalEquationTest, TableTupleOrder) {
    // X2's table over (U2, X1): disturbance slowest, so entry u*2 + x1.
    std::vector<Variable> vars;
    vars.push_back({"X1", uniform("U1", 2), Equation{X(1), u()}});
    vars.push_back({"X2", uniform("U2", 2), Equation{X(2), Table{{X(1)}, {0, 1, 1, 1}}}});
    const Scm m("t", 2, std::move(vars));
    EXPECT_EQ(eval_equation(m, X(2), 0, XState({0, 0})), 0);
    EXPECT_EQ(eval_equation(m, X(2), 0, XState({1, 0})), 1);
    EXPECT_EQ(eval_equation(m, X(2), 1, XState({0, 0})), 1);
    EXPECT_EQ(eval_equation(m, X(2), 1, XState({1, 0})), 1);
}

TEST(ConsistentSolutionsTest, Fig1Draw) {
    const Scm fig1 = fixture("neal-fig1");
    UDraw draw = UDraw::zeros(7);
    draw[X(4)] = 1;
    const auto sols = consistent_solutions(fig1, draw);
    ASSERT_EQ(sols.size(), 1u);
    EXPECT_EQ(sols[0], XState({0, 1, 1, 1, 0, 0, 0}));
}

TEST(ConsistentSolutionsTest, ContradictionAndMirror) {
    for (int code = 0; code < 4; ++code) {
        const UDraw draw({code / 2, code % 2});
        EXPECT_TRUE(consistent_solutions(contradiction_model(), draw).empty());
        const auto sols = consistent_solutions(mirror_model(), draw);
        ASSERT_EQ(sols.size(), 2u);
        EXPECT_EQ(sols[0], XState({0, 0}));
        EXPECT_EQ(sols[1], XState({1, 1}));
    }
}

TEST(ConsistentSolutionsTest, SizeCap) {
    const Scm fig1 = fixture("neal-fig1");
    EXPECT_THROW(consistent_solutions(fig1, UDraw::zeros(7), SolveLimits{64}), ResourceError);
    EXPECT_NO_THROW(consistent_solutions(fig1, UDraw::zeros(7), SolveLimits{128}));
}

TEST(CheckUniquenessTest, Fig1IsUnique) {
    const auto report = check_uniqueness(fixture("neal-fig1"));
    EXPECT_TRUE(report.unique());
    EXPECT_FALSE(report.witness.has_value());
}

TEST(CheckUniquenessTest, WitnessCounts) {
    const auto none = check_uniqueness(contradiction_model());
    ASSERT_FALSE(none.unique());
    EXPECT_EQ(none.witness->solution_count, 0u);
    EXPECT_TRUE(none.witness->solutions.empty());

    const Scm mirror = mirror_model();
    const auto two = check_uniqueness(mirror);
    ASSERT_FALSE(two.unique());
    EXPECT_EQ(two.witness->solution_count, 2u);
    EXPECT_EQ(two.witness->u, UDraw::zeros(2));
    for (const auto& x : two.witness->solutions) EXPECT_TRUE(satisfies_all(mirror, two.witness->u, x));
}

TEST(CheckUniquenessTest, WitnessIsLexicographicallyFirst) {
    // X1 = U1, X2 = X1 * X3, X3 = X2: X1 = 0 forces zeros, X1 = 1 leaves X2 = X3 free.
    const Scm m = expr_model(2, {u(), v(1) * v(3), v(2)});
    const auto report = check_uniqueness(m);
    ASSERT_FALSE(report.unique());
    EXPECT_EQ(report.witness->u, UDraw({1, 0, 0}));
    EXPECT_EQ(report.witness->solution_count, 2u);
}

TEST(InducedJointTest, Fig1Marginals) {
    const JointDist jd = induced_joint(fixture("neal-fig1"));
    EXPECT_EQ(prob(jd, {{X(6), 0}, {X(7), 0}}), Rational(1));
    EXPECT_EQ(prob(jd, {{X(2), 0}}), Rational(1, 2));
    Rational total = 0;
    for (const auto& [cell, p] : jd.mass()) total += p;
    EXPECT_EQ(total, 1);
}

TEST(InducedJointTest, Fig1MatchesClosedFormOverFullDisturbanceSpace) {
    // Oracle: all 128 draws of U1..U7 pushed through the closed form.
    std::map<JointDist::Cell, Rational> expected;
    for (int code = 0; code < 128; ++code) {
        std::vector<Value> bits(7);
        for (int i = 0; i < 7; ++i) bits[static_cast<std::size_t>(i)] = (code >> (6 - i)) & 1;
        expected[fig1_closed_form(UDraw(bits)).values()] += Rational(1, 128);
    }
    const JointDist jd = induced_joint(fixture("neal-fig1"));
    EXPECT_EQ(jd.mass(), expected);
}

TEST(InducedJointTest, NonUniqueCarriesReport) {
    try {
        induced_joint(mirror_model());
        FAIL() << "expected NonUniqueModel";
    } catch (const NonUniqueModel& e) {
        EXPECT_EQ(e.report().witness->solution_count, 2u);
    }
}

TEST(InducedJointTest, UnusedDisturbancesDoNotMatter) {
    // Same equations, different distributions on the unreferenced U2.
    std::vector<Variable> a, b;
    for (auto* vars : {&a, &b}) {
        vars->push_back({"X1", Disturbance{"U1", {Rational(1, 3), Rational(2, 3)}}, Equation{X(1), u()}});
    }
    a.push_back({"X2", Disturbance{"U2", {Rational(1, 2), Rational(1, 2)}}, Equation{X(2), v(1) + c(1)}});
    b.push_back({"X2", Disturbance{"U2", {Rational(9, 10), Rational(1, 10)}}, Equation{X(2), v(1) + c(1)}});
    EXPECT_EQ(induced_joint(Scm("a", 2, a)), induced_joint(Scm("b", 2, b)));
}

TEST(FixtureConstraintTest, GateSumIsZeroAndOddSumsHaveNoSolution) {
    const Scm fig1 = fixture("neal-fig1");
    for (int code = 0; code < 128; ++code) {
        std::vector<Value> bits(7);
        for (int i = 0; i < 7; ++i) bits[static_cast<std::size_t>(i)] = (code >> (6 - i)) & 1;
        const UDraw draw(bits);
        for (const auto& x : consistent_solutions(fig1, draw)) {
            EXPECT_EQ((x[X(2)] + x[X(4)] + x[X(5)]) % 2, 0);
        }
    }
    // With X2 + X4 + X5 = 1 the last two equations read X6 = X7 + 1, X7 = X6.
    for (Value x6 = 0; x6 < 2; ++x6) {
        for (Value x7 = 0; x7 < 2; ++x7) {
            const XState x({0, 1, 1, 0, 0, x6, x7});
            const bool six = eval_equation(fig1, X(6), 0, x) == x6;
            const bool seven = eval_equation(fig1, X(7), 0, x) == x7;
            EXPECT_FALSE(six && seven);
        }
    }
}

TEST(ForwardSolveTest, AgreesWithBruteForceOnChain) {
    const Scm chain = fixture("chain3");
    for (int code = 0; code < 8; ++code) {
        const UDraw draw({code >> 2 & 1, code >> 1 & 1, code & 1});
        const auto sols = consistent_solutions(chain, draw);
        ASSERT_EQ(sols.size(), 1u);
        EXPECT_EQ(forward_solve(chain, draw), sols[0]);
    }
    EXPECT_THROW(forward_solve(fixture("neal-fig1"), UDraw::zeros(7)), InputError);
}

TEST(ScmTest, EffectiveDisturbances) {
    const Scm fig1 = fixture("neal-fig1");
    const std::vector<VarId> expected = {X(1), X(4), X(5)};
    EXPECT_EQ(fig1.effective_disturbances(), expected);
}

TEST(ScmTest, ConstructionValidates) {
    auto one = [](Equation eq, Disturbance d = uniform("U1", 2)) {
        return std::vector<Variable>{{"X1", std::move(d), std::move(eq)}};
    };
    EXPECT_THROW(Scm("m", 1, one(Equation{X(1), u()})), InputError);
    EXPECT_THROW(Scm("m", 2, one(Equation{X(1), v(1)})), InputError);
    EXPECT_THROW(Scm("m", 2, one(Equation{X(1), c(2)})), InputError);
    EXPECT_THROW(Scm("m", 2, one(Equation{X(1), u()}, Disturbance{"U1", {Rational(1, 2), Rational(1, 3)}})),
                 InputError);
    EXPECT_THROW(Scm("m", 2, one(Equation{X(1), Table{{}, {0, 1, 1}}})), InputError);
    EXPECT_THROW(Scm("m", 2, one(Equation{X(2), u()})), InputError);
    EXPECT_THROW(Scm("two words", 2, one(Equation{X(1), u()})), InputError);
    EXPECT_NO_THROW(Scm("m", 2, one(Equation{X(1), Table{{}, {0, 1}}})));
}

}  // namespace
}  // namespace feedsep
