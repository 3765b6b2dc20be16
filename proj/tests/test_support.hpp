#ifndef FEEDSEP_TESTS_TEST_SUPPORT_HPP
#define FEEDSEP_TESTS_TEST_SUPPORT_HPP

#include <random>
#include <string>
#include <vector>

#include "feedsep/graph.hpp"
#include "feedsep/scm.hpp"

namespace feedsep::testing {

/// 1-based shorthand: X(4) is the fourth variable.
inline VarId X(std::size_t one_based) { return VarId{one_based - 1}; }

inline VarSet Xs(std::initializer_list<std::size_t> ids) {
    VarSet out;
    for (auto i : ids) out.insert(X(i));
    return out;
}

/// Parent structure of the counterexample, written out by hand.
inline DiGraph fig1_graph() {
    DiGraph g(7);
    const std::vector<std::pair<std::size_t, std::size_t>> edges = {
        {1, 2}, {3, 2}, {1, 3}, {2, 3},                  //
        {2, 6}, {4, 6}, {5, 6}, {7, 6}, {2, 7}, {4, 7},  //
        {5, 7}, {6, 7}};
    for (auto [p, c] : edges) g.add_edge(X(p), X(c));
    return g;
}

/// Closed-form solution of the counterexample for a full disturbance draw.
inline XState fig1_closed_form(const UDraw& u) {
    const Value u1 = u[X(1)], u4 = u[X(4)], u5 = u[X(5)];
    return XState({u1, (u4 + u5) % 2, (u4 + u5 + u1) % 2, u4, u5, 0, 0});
}

inline Disturbance uniform(const std::string& name, int k) {
    Disturbance d{name, {}};
    for (int i = 0; i < k; ++i) d.probs.emplace_back(1, k);
    return d;
}

/// Model with expression equations; `exprs[i]` belongs to X(i+1).
inline Scm expr_model(int k, std::vector<Expr> exprs) {
    std::vector<Variable> vars;
    for (std::size_t i = 0; i < exprs.size(); ++i) {
        vars.push_back(Variable{"X" + std::to_string(i + 1), uniform("U" + std::to_string(i + 1), k),
                                Equation{VarId{i}, std::move(exprs[i])}});
    }
    return Scm("test", k, std::move(vars));
}

inline Expr v(std::size_t one_based) { return Expr::var(X(one_based)); }
inline Expr c(Value value) { return Expr::constant(value); }
inline Expr u() { return Expr::own_u(); }
inline Expr operator+(Expr a, Expr b) { return Expr::add(std::move(a), std::move(b)); }
inline Expr operator*(Expr a, Expr b) { return Expr::mul(std::move(a), std::move(b)); }

/// Random digraph, cycles allowed, no self-loops.
inline DiGraph random_digraph(std::mt19937_64& rng, std::size_t n, double density) {
    DiGraph g(n);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t ch = 0; ch < n; ++ch) {
            if (p != ch && coin(rng) < density) g.add_edge(VarId{p}, VarId{ch});
        }
    }
    return g;
}

/// Random disjoint query over n >= 2 nodes.
inline SepQuery random_query(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::size_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = i;
    std::shuffle(ids.begin(), ids.end(), rng);
    SepQuery q;
    q.a.insert(VarId{ids[0]});
    q.b.insert(VarId{ids[1]});
    for (std::size_t i = 2; i < n; ++i) {
        switch (rng() % 4) {
            case 0: q.a.insert(VarId{ids[i]}); break;
            case 1: q.b.insert(VarId{ids[i]}); break;
            case 2: q.c.insert(VarId{ids[i]}); break;
            default: break;
        }
    }
    return q;
}

/// Random modular expression over variables other than `owner`.
inline Expr random_expr(std::mt19937_64& rng, std::size_t n, std::size_t owner, int k, int depth) {
    const auto pick = rng() % (depth <= 0 ? 3 : 5);
    switch (pick) {
        case 0: return Expr::constant(static_cast<Value>(rng() % static_cast<unsigned>(k)));
        case 1: return Expr::own_u();
        case 2: {
            if (n < 2) return Expr::own_u();
            std::size_t id = rng() % (n - 1);
            if (id >= owner) ++id;
            return Expr::var(VarId{id});
        }
        case 3: return Expr::add(random_expr(rng, n, owner, k, depth - 1), random_expr(rng, n, owner, k, depth - 1));
        default: return Expr::mul(random_expr(rng, n, owner, k, depth - 1), random_expr(rng, n, owner, k, depth - 1));
    }
}

inline Scm random_expr_model(std::mt19937_64& rng, std::size_t n, int k) {
    std::vector<Expr> exprs;
    for (std::size_t i = 0; i < n; ++i) exprs.push_back(random_expr(rng, n, i, k, 3));
    return expr_model(k, std::move(exprs));
}

}  // namespace feedsep::testing

#endif  // FEEDSEP_TESTS_TEST_SUPPORT_HPP
