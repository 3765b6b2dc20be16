#ifndef FEEDSEP_JOINT_DIST_HPP
#define FEEDSEP_JOINT_DIST_HPP

#include <map>
#include <vector>

#include "feedsep/assignment.hpp"
#include "feedsep/graph.hpp"
#include "feedsep/rational.hpp"

namespace feedsep {

/// Same shape and disjointness rules as a separation query.
using CiQuery = SepQuery;

/// Values fixed for some variables, e.g. {X4 = 0, X5 = 0}.
using PartialAssignment = std::map<VarId, Value>;

/// Exact probability mass over assignments to an ordered list of variables.
/// Only cells with positive mass are stored; masses sum to exactly one.
class JointDist {
public:
    using Cell = std::vector<Value>;

    /// Throws InputError when a mass is not positive, the masses do not sum
    /// to one, a cell has the wrong width or a value is outside 0..k-1.
    JointDist(std::vector<VarId> variables, int modulus, std::map<Cell, Rational> mass);

    const std::vector<VarId>& variables() const { return variables_; }
    int modulus() const { return modulus_; }
    const std::map<Cell, Rational>& mass() const { return mass_; }

    /// Mass of one cell; zero outside the support.
    Rational probability(const Cell& cell) const;

    bool operator==(const JointDist&) const = default;

private:
    std::vector<VarId> variables_;
    int modulus_;
    std::map<Cell, Rational> mass_;
};

JointDist marginal(const JointDist& jd, const VarSet& vars);

/// P(event, given) / P(given). Throws UndefinedConditional when P(given) is
/// zero, InputError on unknown or shared variables.
Rational prob(const JointDist& jd, const PartialAssignment& event, const PartialAssignment& given = {});

/// Exact conditional independence of A and B given C, tested as
/// P(a,b,c) P(c) == P(a,c) P(b,c) for every cell with P(c) > 0.
bool ci_holds(const JointDist& jd, const CiQuery& q);

}  // namespace feedsep

#endif  // FEEDSEP_JOINT_DIST_HPP
