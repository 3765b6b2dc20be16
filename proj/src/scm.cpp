#include "feedsep/scm.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <string>
#include <string_view>

#include "feedsep/errors.hpp"

namespace feedsep {

// ------------------------------------------------------------------- Expr

Expr Expr::constant(Value v) {
    Expr e;
    e.kind_ = Kind::Const;
    e.value_ = v;
    return e;
}

Expr Expr::own_u() {
    Expr e;
    e.kind_ = Kind::OwnU;
    return e;
}

Expr Expr::var(VarId id) {
    Expr e;
    e.kind_ = Kind::Var;
    e.var_ = id;
    return e;
}

Expr Expr::add(Expr lhs, Expr rhs) {
    Expr e;
    e.kind_ = Kind::Add;
    e.operands_.push_back(std::move(lhs));
    e.operands_.push_back(std::move(rhs));
    return e;
}

Expr Expr::mul(Expr lhs, Expr rhs) {
    Expr e;
    e.kind_ = Kind::Mul;
    e.operands_.push_back(std::move(lhs));
    e.operands_.push_back(std::move(rhs));
    return e;
}

Value Expr::evaluate(Value u, const XState& x, int modulus) const {
    switch (kind_) {
        case Kind::Const: return value_;
        case Kind::OwnU: return u;
        case Kind::Var: return x[var_];
        case Kind::Add: return (lhs().evaluate(u, x, modulus) + rhs().evaluate(u, x, modulus)) % modulus;
        case Kind::Mul: return (lhs().evaluate(u, x, modulus) * rhs().evaluate(u, x, modulus)) % modulus;
    }
    return 0;
}

void Expr::collect_vars(VarSet& out) const {
    if (kind_ == Kind::Var) out.insert(var_);
    for (const auto& op : operands_) op.collect_vars(out);
}

bool Expr::uses_own_u() const {
    if (kind_ == Kind::OwnU) return true;
    return std::any_of(operands_.begin(), operands_.end(), [](const Expr& e) { return e.uses_own_u(); });
}

Value Expr::max_constant() const {
    Value best = kind_ == Kind::Const ? value_ : -1;
    for (const auto& op : operands_) best = std::max(best, op.max_constant());
    return best;
}

bool Expr::operator==(const Expr& other) const {
    if (kind_ != other.kind_) return false;
    switch (kind_) {
        case Kind::Const: return value_ == other.value_;
        case Kind::OwnU: return true;
        case Kind::Var: return var_ == other.var_;
        case Kind::Add:
        case Kind::Mul: return operands_ == other.operands_;
    }
    return false;
}

// -------------------------------------------------------------------- Scm

namespace {

std::uint64_t checked_power(std::uint64_t base, std::size_t exp) {
    std::uint64_t out = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (out > UINT64_MAX / base) return 0;
        out *= base;
    }
    return out;
}

bool table_uses_u(const Table& t, int k) {
    const std::size_t slice = t.outputs.size() / static_cast<std::size_t>(k);
    for (std::size_t u = 1; u < static_cast<std::size_t>(k); ++u) {
        if (!std::equal(t.outputs.begin(), t.outputs.begin() + static_cast<std::ptrdiff_t>(slice),
                        t.outputs.begin() + static_cast<std::ptrdiff_t>(u * slice))) {
            return true;
        }
    }
    return false;
}

bool is_identifier(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(), [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; });
}

bool is_model_name(const std::string& s) {
    return std::none_of(s.begin(), s.end(), [](char ch) {
        return std::isspace(static_cast<unsigned char>(ch)) || std::string_view("+*()=,#").find(ch) != std::string_view::npos;
    });
}

}  // namespace

std::uint64_t StateCodec::state_count() const {
    return checked_power(static_cast<std::uint64_t>(k_), n_);
}

Scm::Scm(std::string name, int modulus, std::vector<Variable> variables)
    : name_(std::move(name)), modulus_(modulus), variables_(std::move(variables)) {
    if (modulus_ < 2) {
        throw InputError("modulus must be at least 2, got " + std::to_string(modulus_));
    }
    const std::size_t n = variables_.size();
    graph_ = DiGraph(n);

    if (!is_model_name(name_)) throw InputError("model name '" + name_ + "' must be a single word");
    std::set<std::string> names;
    for (const auto& v : variables_) {
        if (!is_identifier(v.name) || !is_identifier(v.disturbance.name)) {
            throw InputError("'" + v.name + "' / '" + v.disturbance.name + "' are not valid identifiers");
        }
        if (!names.insert(v.name).second) throw InputError("duplicate name '" + v.name + "'");
        if (!names.insert(v.disturbance.name).second) {
            throw InputError("duplicate name '" + v.disturbance.name + "'");
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        const VarId self{i};
        const Variable& var = variables_[i];
        if (var.equation.owner != self) {
            throw InputError("equation for '" + var.name + "' names the wrong owner");
        }

        const auto& probs = var.disturbance.probs;
        if (probs.size() != static_cast<std::size_t>(modulus_)) {
            throw InputError("disturbance '" + var.disturbance.name + "' needs " + std::to_string(modulus_) +
                             " probabilities, got " + std::to_string(probs.size()));
        }
        Rational sum = 0;
        for (const auto& p : probs) {
            if (p < 0) throw InputError("disturbance '" + var.disturbance.name + "' has a negative probability");
            sum += p;
        }
        if (sum != 1) {
            throw InputError("probabilities of disturbance '" + var.disturbance.name + "' sum to " + to_string(sum) +
                             ", not 1");
        }

        VarSet refs;
        bool uses_u = false;
        if (const auto* expr = std::get_if<Expr>(&var.equation.form)) {
            expr->collect_vars(refs);
            if (expr->max_constant() >= modulus_) {
                throw InputError("equation for '" + var.name + "' has a constant outside 0.." +
                                 std::to_string(modulus_ - 1));
            }
            uses_u = expr->uses_own_u();
        } else {
            const auto& table = std::get<Table>(var.equation.form);
            if (!std::is_sorted(table.parents.begin(), table.parents.end()) ||
                std::adjacent_find(table.parents.begin(), table.parents.end()) != table.parents.end()) {
                throw InputError("table parents of '" + var.name + "' must be distinct and in declaration order");
            }
            refs.insert(table.parents.begin(), table.parents.end());
            const std::uint64_t expected = checked_power(static_cast<std::uint64_t>(modulus_), table.parents.size() + 1);
            if (expected == 0 || table.outputs.size() != expected) {
                throw InputError("table for '" + var.name + "' needs " + std::to_string(expected) + " entries, got " +
                                 std::to_string(table.outputs.size()));
            }
            for (Value out : table.outputs) {
                if (out < 0 || out >= modulus_) {
                    throw InputError("table for '" + var.name + "' has an entry outside 0.." +
                                     std::to_string(modulus_ - 1));
                }
            }
            uses_u = table_uses_u(table, modulus_);
        }
        for (VarId p : refs) {
            if (p.index >= n) throw InputError("equation for '" + var.name + "' references an unknown variable");
            if (p == self) throw InputError("equation for '" + var.name + "' references its own variable");
            graph_.add_edge(p, self);
        }
        if (uses_u) effective_.push_back(self);
    }
}

std::optional<VarId> Scm::find(const std::string& name) const {
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        if (variables_[i].name == name) return VarId{i};
    }
    return std::nullopt;
}

std::optional<VarId> Scm::find_disturbance(const std::string& name) const {
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        if (variables_[i].disturbance.name == name) return VarId{i};
    }
    return std::nullopt;
}

// ------------------------------------------------------------- operations

NonUniqueModel::NonUniqueModel(UniquenessReport report)
    : std::runtime_error("model violates the uniqueness condition"), report_(std::move(report)) {}

Value eval_equation(const Scm& scm, VarId var, Value u_val, const XState& x) {
    const Equation& eq = scm.variable(var).equation;
    if (const auto* expr = std::get_if<Expr>(&eq.form)) {
        return expr->evaluate(u_val, x, scm.modulus());
    }
    const auto& table = std::get<Table>(eq.form);
    const auto k = static_cast<std::size_t>(scm.modulus());
    std::size_t index = static_cast<std::size_t>(u_val);
    for (VarId p : table.parents) index = index * k + static_cast<std::size_t>(x[p]);
    return table.outputs.at(index);
}

bool satisfies_all(const Scm& scm, const UDraw& u, const XState& x) {
    for (std::size_t i = 0; i < scm.size(); ++i) {
        const VarId v{i};
        if (eval_equation(scm, v, u[v], x) != x[v]) return false;
    }
    return true;
}

namespace {

std::uint64_t capped_state_count(const Scm& scm, SolveLimits limits) {
    const StateCodec codec(scm.size(), scm.modulus());
    const std::uint64_t count = codec.state_count();
    if (count == 0 || count > limits.max_states) {
        throw ResourceError("model '" + scm.name() + "' has more than " + std::to_string(limits.max_states) +
                            " candidate states");
    }
    return count;
}

}  // namespace

std::vector<XState> consistent_solutions(const Scm& scm, const UDraw& u, SolveLimits limits) {
    if (u.size() != scm.size()) throw InputError("disturbance draw has the wrong number of entries");
    const std::uint64_t count = capped_state_count(scm, limits);
    const StateCodec codec(scm.size(), scm.modulus());
    std::vector<XState> out;
    for (std::uint64_t code = 0; code < count; ++code) {
        XState x = codec.decode<ObservableTag>(code);
        if (satisfies_all(scm, u, x)) out.push_back(std::move(x));
    }
    return out;
}

XState forward_solve(const Scm& scm, const UDraw& u) {
    const DiGraph& g = scm.graph();
    if (!g.is_acyclic()) throw InputError("forward substitution needs an acyclic model");
    std::vector<std::size_t> pending(scm.size());
    std::vector<VarId> ready;
    for (std::size_t i = 0; i < scm.size(); ++i) {
        pending[i] = g.parents(VarId{i}).size();
        if (pending[i] == 0) ready.push_back(VarId{i});
    }
    XState x = XState::zeros(scm.size());
    while (!ready.empty()) {
        VarId v = ready.back();
        ready.pop_back();
        x[v] = eval_equation(scm, v, u[v], x);
        for (VarId c : g.children(v)) {
            if (--pending[c.index] == 0) ready.push_back(c);
        }
    }
    return x;
}

std::uint64_t effective_draw_count(const Scm& scm, SolveLimits limits) {
    const StateCodec codec(scm.effective_disturbances().size(), scm.modulus());
    const std::uint64_t count = codec.state_count();
    if (count == 0 || count > limits.max_states) {
        throw ResourceError("model '" + scm.name() + "' has more than " + std::to_string(limits.max_states) +
                            " effective disturbance draws");
    }
    return count;
}

Rational draw_probability(const Scm& scm, const UDraw& u) {
    Rational p = 1;
    for (VarId v : scm.effective_disturbances()) {
        p *= scm.variable(v).disturbance.probs.at(static_cast<std::size_t>(u[v]));
    }
    return p;
}

UniquenessReport check_uniqueness(const Scm& scm, SolveLimits limits) {
    capped_state_count(scm, limits);
    effective_draw_count(scm, limits);
    UniquenessReport report;
    for_each_effective_draw(scm, [&](const UDraw& u) {
        if (report.witness) return;
        auto sols = consistent_solutions(scm, u, limits);
        if (sols.size() == 1) return;
        UniquenessReport::Witness w;
        w.u = u;
        w.solution_count = sols.size();
        if (sols.size() > 2) sols.resize(2);
        w.solutions = std::move(sols);
        report.verdict = UniquenessReport::Verdict::NonUnique;
        report.witness = std::move(w);
    });
    return report;
}

JointDist induced_joint(const Scm& scm, SolveLimits limits) {
    capped_state_count(scm, limits);
    effective_draw_count(scm, limits);
    std::map<JointDist::Cell, Rational> mass;
    std::optional<UniquenessReport> failure;
    for_each_effective_draw(scm, [&](const UDraw& u) {
        if (failure) return;
        auto sols = consistent_solutions(scm, u, limits);
        if (sols.size() != 1) {
            failure = check_uniqueness(scm, limits);
            return;
        }
        const Rational p = draw_probability(scm, u);
        if (p == 0) return;
        mass[sols.front().values()] += p;
    });
    if (failure) throw NonUniqueModel(*failure);

    std::vector<VarId> vars;
    for (std::size_t i = 0; i < scm.size(); ++i) vars.push_back(VarId{i});
    return JointDist(std::move(vars), scm.modulus(), std::move(mass));
}

}  // namespace feedsep
