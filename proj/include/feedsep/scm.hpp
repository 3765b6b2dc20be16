#ifndef FEEDSEP_SCM_HPP
#define FEEDSEP_SCM_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "feedsep/assignment.hpp"
#include "feedsep/graph.hpp"
#include "feedsep/joint_dist.hpp"
#include "feedsep/rational.hpp"

namespace feedsep {

/// Modular polynomial over the owner's disturbance and other variables.
class Expr {
public:
    enum class Kind { Const, OwnU, Var, Add, Mul };

    static Expr constant(Value v);
    static Expr own_u();
    static Expr var(VarId id);
    static Expr add(Expr lhs, Expr rhs);
    static Expr mul(Expr lhs, Expr rhs);

    Kind kind() const { return kind_; }
    Value value() const { return value_; }
    VarId var_id() const { return var_; }
    const Expr& lhs() const { return operands_.at(0); }
    const Expr& rhs() const { return operands_.at(1); }

    Value evaluate(Value u, const XState& x, int modulus) const;
    void collect_vars(VarSet& out) const;
    bool uses_own_u() const;
    /// Largest constant in the tree, or -1 when there are none.
    Value max_constant() const;

    bool operator==(const Expr& other) const;

private:
    Kind kind_ = Kind::Const;
    Value value_ = 0;
    VarId var_;
    std::vector<Expr> operands_;
};

/// Output for every (own disturbance, parents...) tuple. The disturbance
/// varies slowest, then parents in ascending VarId order, so entry
/// u*k^m + p_1*k^(m-1) + ... + p_m holds f(u, p_1, ..., p_m).
struct Table {
    std::vector<VarId> parents;  // ascending
    std::vector<Value> outputs;

    bool operator==(const Table&) const = default;
};

struct Equation {
    VarId owner;
    std::variant<Expr, Table> form;

    bool operator==(const Equation&) const = default;
};

struct Disturbance {
    std::string name;
    std::vector<Rational> probs;  // one per domain value

    bool operator==(const Disturbance&) const = default;
};

struct Variable {
    std::string name;
    Disturbance disturbance;
    Equation equation;

    bool operator==(const Variable&) const = default;
};

/// Discrete structural causal model, possibly with feedback cycles. Every
/// variable takes values in 0..k-1 for a common modulus k. Immutable once
/// built; construction validates all invariants and throws InputError.
class Scm {
public:
    Scm(std::string name, int modulus, std::vector<Variable> variables);

    const std::string& name() const { return name_; }
    int modulus() const { return modulus_; }
    std::size_t size() const { return variables_.size(); }
    const std::vector<Variable>& variables() const { return variables_; }
    const Variable& variable(VarId v) const { return variables_.at(v.index); }
    std::optional<VarId> find(const std::string& name) const;
    std::optional<VarId> find_disturbance(const std::string& name) const;

    /// Parent -> child graph implied by the equations.
    const DiGraph& graph() const { return graph_; }
    const std::vector<VarId>& parents(VarId v) const { return graph_.parents(v); }

    /// Variables whose equation output can depend on their own disturbance.
    /// The rest of the disturbances cannot influence any solution.
    const std::vector<VarId>& effective_disturbances() const { return effective_; }

    bool operator==(const Scm&) const = default;

private:
    std::string name_;
    int modulus_;
    std::vector<Variable> variables_;
    DiGraph graph_;
    std::vector<VarId> effective_;
};

/// Bound on the number of candidate states a brute-force enumeration may
/// visit (k^n per u, and separately the number of effective u draws).
struct SolveLimits {
    std::uint64_t max_states = std::uint64_t{1} << 20;
};

struct UniquenessReport {
    enum class Verdict { Unique, NonUnique };

    struct Witness {
        UDraw u;
        std::size_t solution_count = 0;
        std::vector<XState> solutions;  // at most two
    };

    Verdict verdict = Verdict::Unique;
    std::optional<Witness> witness;

    bool unique() const { return verdict == Verdict::Unique; }
};

/// Thrown by operations that require the uniqueness condition.
class NonUniqueModel : public std::runtime_error {
public:
    explicit NonUniqueModel(UniquenessReport report);
    const UniquenessReport& report() const { return report_; }

private:
    UniquenessReport report_;
};

Value eval_equation(const Scm& scm, VarId var, Value u_val, const XState& x);

/// True iff x_i = f_i(u_i, x) for every i.
bool satisfies_all(const Scm& scm, const UDraw& u, const XState& x);

/// Every x satisfying all equations under u, in lexicographic order.
std::vector<XState> consistent_solutions(const Scm& scm, const UDraw& u, SolveLimits limits = {});

/// Substitution in topological order; only defined for acyclic models.
XState forward_solve(const Scm& scm, const UDraw& u);

/// Calls fn(u) for every draw over the effective disturbances in
/// lexicographic order; other disturbances stay 0.
template <class Fn>
void for_each_effective_draw(const Scm& scm, Fn&& fn);

std::uint64_t effective_draw_count(const Scm& scm, SolveLimits limits = {});

/// Product of the effective disturbances' probabilities.
Rational draw_probability(const Scm& scm, const UDraw& u);

UniquenessReport check_uniqueness(const Scm& scm, SolveLimits limits = {});

/// Exact distribution of the unique solution. Throws NonUniqueModel.
JointDist induced_joint(const Scm& scm, SolveLimits limits = {});

// ---------------------------------------------------------------- inline

template <class Fn>
void for_each_effective_draw(const Scm& scm, Fn&& fn) {
    const auto& eff = scm.effective_disturbances();
    const StateCodec codec(eff.size(), scm.modulus());
    const std::uint64_t count = codec.state_count();
    UDraw u = UDraw::zeros(scm.size());
    for (std::uint64_t code = 0; code < count; ++code) {
        const XState digits = codec.decode<ObservableTag>(code);
        for (std::size_t i = 0; i < eff.size(); ++i) u[eff[i]] = digits.values()[i];
        fn(static_cast<const UDraw&>(u));
    }
}

}  // namespace feedsep

#endif  // FEEDSEP_SCM_HPP
