#include "feedsep/joint_dist.hpp"

#include <algorithm>
#include <string>

#include "feedsep/errors.hpp"

namespace feedsep {

JointDist::JointDist(std::vector<VarId> variables, int modulus, std::map<Cell, Rational> mass)
    : variables_(std::move(variables)), modulus_(modulus), mass_(std::move(mass)) {
    if (!std::is_sorted(variables_.begin(), variables_.end()) ||
        std::adjacent_find(variables_.begin(), variables_.end()) != variables_.end()) {
        throw InputError("distribution variables must be distinct and ascending");
    }
    Rational total = 0;
    for (const auto& [cell, p] : mass_) {
        if (cell.size() != variables_.size()) throw InputError("distribution cell has the wrong width");
        for (Value v : cell) {
            if (v < 0 || v >= modulus_) throw InputError("distribution cell value outside the domain");
        }
        if (p <= 0) throw InputError("distribution masses must be positive");
        total += p;
    }
    if (total != 1) throw InputError("distribution masses sum to " + to_string(total) + ", not 1");
}

Rational JointDist::probability(const Cell& cell) const {
    auto it = mass_.find(cell);
    return it == mass_.end() ? Rational(0) : it->second;
}

namespace {

// Positions of `vars` inside jd.variables().
std::vector<std::size_t> positions(const JointDist& jd, const VarSet& vars) {
    std::vector<std::size_t> out;
    const auto& all = jd.variables();
    for (VarId v : vars) {
        auto it = std::lower_bound(all.begin(), all.end(), v);
        if (it == all.end() || *it != v) {
            throw InputError("variable #" + std::to_string(v.index) + " is not in the distribution");
        }
        out.push_back(static_cast<std::size_t>(it - all.begin()));
    }
    return out;
}

JointDist::Cell project(const JointDist::Cell& cell, const std::vector<std::size_t>& pos) {
    JointDist::Cell out;
    out.reserve(pos.size());
    for (std::size_t p : pos) out.push_back(cell[p]);
    return out;
}

// Marginal masses keyed by projected cells; unlike marginal() accepts an
// empty variable set (one cell, mass 1).
std::map<JointDist::Cell, Rational> project_mass(const JointDist& jd, const VarSet& vars) {
    const auto pos = positions(jd, vars);
    std::map<JointDist::Cell, Rational> out;
    for (const auto& [cell, p] : jd.mass()) out[project(cell, pos)] += p;
    return out;
}

Rational lookup(const std::map<JointDist::Cell, Rational>& m, const JointDist::Cell& key) {
    auto it = m.find(key);
    return it == m.end() ? Rational(0) : it->second;
}

Rational event_mass(const JointDist& jd, const PartialAssignment& event) {
    VarSet vars;
    JointDist::Cell target;
    for (const auto& [v, value] : event) {
        vars.insert(v);
        target.push_back(value);
    }
    const auto pos = positions(jd, vars);
    Rational total = 0;
    for (const auto& [cell, p] : jd.mass()) {
        if (project(cell, pos) == target) total += p;
    }
    return total;
}

}  // namespace

JointDist marginal(const JointDist& jd, const VarSet& vars) {
    if (vars.empty()) throw InputError("marginal needs at least one variable");
    return JointDist(std::vector<VarId>(vars.begin(), vars.end()), jd.modulus(), project_mass(jd, vars));
}

Rational prob(const JointDist& jd, const PartialAssignment& event, const PartialAssignment& given) {
    for (const auto& [v, value] : event) {
        if (given.count(v)) {
            throw InputError("variable #" + std::to_string(v.index) + " appears in both event and condition");
        }
    }
    PartialAssignment both = event;
    both.insert(given.begin(), given.end());
    const Rational denom = event_mass(jd, given);
    if (denom == 0) throw UndefinedConditional("conditioning event has probability zero");
    return event_mass(jd, both) / denom;
}

bool ci_holds(const JointDist& jd, const CiQuery& q) {
    const auto& vars = jd.variables();
    q.validate(vars.empty() ? 0 : vars.back().index + 1);

    VarSet abc = q.a;
    abc.insert(q.b.begin(), q.b.end());
    abc.insert(q.c.begin(), q.c.end());
    VarSet ac = q.a;
    ac.insert(q.c.begin(), q.c.end());
    VarSet bc = q.b;
    bc.insert(q.c.begin(), q.c.end());

    const auto p_abc = project_mass(jd, abc);
    const auto p_ac = project_mass(jd, ac);
    const auto p_bc = project_mass(jd, bc);
    const auto p_c = project_mass(jd, q.c);

    // Cells are laid out in ascending VarId order, so a joint (a, b, c) key is
    // assembled by merging the three parts by id.
    auto merge = [](const VarSet& x, const JointDist::Cell& xv, const VarSet& y, const JointDist::Cell& yv) {
        std::map<VarId, Value> m;
        std::size_t i = 0;
        for (VarId v : x) m[v] = xv[i++];
        i = 0;
        for (VarId v : y) m[v] = yv[i++];
        JointDist::Cell out;
        for (const auto& [v, value] : m) out.push_back(value);
        return out;
    };

    VarSet ab = q.a;
    ab.insert(q.b.begin(), q.b.end());

    const StateCodec a_codec(q.a.size(), jd.modulus());
    const StateCodec b_codec(q.b.size(), jd.modulus());
    const std::uint64_t a_count = a_codec.state_count();
    const std::uint64_t b_count = b_codec.state_count();

    for (const auto& [c_cell, pc] : p_c) {
        for (std::uint64_t ai = 0; ai < a_count; ++ai) {
            const auto a_cell = a_codec.decode<ObservableTag>(ai).values();
            const Rational pac = lookup(p_ac, merge(q.a, a_cell, q.c, c_cell));
            for (std::uint64_t bi = 0; bi < b_count; ++bi) {
                const auto b_cell = b_codec.decode<ObservableTag>(bi).values();
                const Rational pbc = lookup(p_bc, merge(q.b, b_cell, q.c, c_cell));
                const Rational pabc = lookup(p_abc, merge(ab, merge(q.a, a_cell, q.b, b_cell), q.c, c_cell));
                if (pabc * pc != pac * pbc) return false;
            }
        }
    }
    return true;
}

}  // namespace feedsep
