#ifndef FEEDSEP_DYNAMICS_HPP
#define FEEDSEP_DYNAMICS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "feedsep/assignment.hpp"
#include "feedsep/scm.hpp"

namespace feedsep {

/// How one sweep updates the variables: all at once from the pre-sweep
/// state, or one at a time in a fixed order with each new value visible to
/// the updates after it. The same schedule is repeated every sweep.
class Schedule {
public:
    enum class Kind { Simultaneous, Sequential };

    static Schedule simultaneous();
    /// Throws InputError unless `order` is a permutation of 0..n-1.
    static Schedule sequential(std::vector<VarId> order, std::size_t n);

    Kind kind() const { return kind_; }
    const std::vector<VarId>& order() const { return order_; }

    bool operator==(const Schedule&) const = default;

private:
    Kind kind_ = Kind::Simultaneous;
    std::vector<VarId> order_;
};

struct ConvergenceReport {
    enum class Verdict { Converges, Fails };

    struct Witness {
        UDraw u;
        XState initial;
        /// States of the limit cycle, starting at the first repeated state.
        std::vector<XState> cycle;
    };

    Verdict verdict = Verdict::Converges;
    std::optional<Witness> witness;

    bool converges() const { return verdict == Verdict::Converges; }
};

/// Path of iterated sweeps until the first repeated state.
struct Trajectory {
    std::vector<XState> prefix;  // transient states before the cycle
    std::vector<XState> cycle;   // length 1 for a fixed point
};

XState sweep(const Scm& scm, const XState& x, const UDraw& u, const Schedule& s);

Trajectory trace(const Scm& scm, const Schedule& s, const UDraw& u, const XState& initial);

/// Converges iff for every effective u and every initial state the sweeps
/// reach the unique solution. Fails carries the lexicographically first
/// (u, initial) counterexample. Throws NonUniqueModel.
ConvergenceReport schedule_converges(const Scm& scm, const Schedule& s, SolveLimits limits = {});

struct ScheduleSearchOptions {
    /// Largest n for which all n! orders are tried.
    std::size_t exhaustive_cap = 8;
    /// Above the cap, try `samples` seeded random orders instead of failing.
    bool allow_sampling = false;
    std::size_t samples = 1000;
    std::uint64_t seed = 0;
    SolveLimits limits;
};

struct ScheduleSearchResult {
    std::optional<Schedule> schedule;
    /// False when the search sampled; a miss is then inconclusive.
    bool exhaustive = true;
    std::size_t schedules_examined = 0;

    bool found() const { return schedule.has_value(); }
};

/// Tries every sequential order in lexicographic order, then the
/// simultaneous schedule, and returns the first that converges. Throws
/// ResourceError above the exhaustive cap unless sampling is allowed, and
/// NonUniqueModel when the model has no unique solutions.
ScheduleSearchResult find_valid_schedule(const Scm& scm, const ScheduleSearchOptions& options = {});

}  // namespace feedsep

#endif  // FEEDSEP_DYNAMICS_HPP
