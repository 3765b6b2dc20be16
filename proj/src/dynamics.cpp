#include "feedsep/dynamics.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <string>

#include "feedsep/errors.hpp"

namespace feedsep {

Schedule Schedule::simultaneous() { return Schedule{}; }

Schedule Schedule::sequential(std::vector<VarId> order, std::size_t n) {
    std::vector<VarId> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    bool ok = sorted.size() == n;
    for (std::size_t i = 0; ok && i < n; ++i) ok = sorted[i] == VarId{i};
    if (!ok) {
        throw InputError("sequential order must list each of the " + std::to_string(n) + " variables exactly once");
    }
    Schedule s;
    s.kind_ = Kind::Sequential;
    s.order_ = std::move(order);
    return s;
}

XState sweep(const Scm& scm, const XState& x, const UDraw& u, const Schedule& s) {
    if (s.kind() == Schedule::Kind::Simultaneous) {
        XState next = x;
        for (std::size_t i = 0; i < scm.size(); ++i) {
            const VarId v{i};
            next[v] = eval_equation(scm, v, u[v], x);
        }
        return next;
    }
    XState next = x;
    for (VarId v : s.order()) next[v] = eval_equation(scm, v, u[v], next);
    return next;
}

Trajectory trace(const Scm& scm, const Schedule& s, const UDraw& u, const XState& initial) {
    std::map<XState, std::size_t> seen;
    std::vector<XState> path;
    XState x = initial;
    while (!seen.count(x)) {
        seen.emplace(x, path.size());
        path.push_back(x);
        x = sweep(scm, x, u, s);
    }
    const std::size_t start = seen.at(x);
    Trajectory t;
    t.prefix.assign(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(start));
    t.cycle.assign(path.begin() + static_cast<std::ptrdiff_t>(start), path.end());
    return t;
}

namespace {

struct SolvedDraw {
    UDraw u;
    XState solution;
};

std::vector<SolvedDraw> solve_all(const Scm& scm, SolveLimits limits) {
    UniquenessReport report = check_uniqueness(scm, limits);
    if (!report.unique()) throw NonUniqueModel(std::move(report));
    std::vector<SolvedDraw> out;
    for_each_effective_draw(scm, [&](const UDraw& u) {
        out.push_back({u, consistent_solutions(scm, u, limits).front()});
    });
    return out;
}

// Walks every (u, initial) pair. States already known to lead to the
// solution are remembered per u so each is visited once.
ConvergenceReport check_schedule(const Scm& scm, const Schedule& s, const std::vector<SolvedDraw>& draws) {
    const StateCodec codec(scm.size(), scm.modulus());
    const std::uint64_t count = codec.state_count();
    enum : std::uint8_t { Unknown = 0, OnPath = 1, Good = 2 };
    std::vector<std::uint8_t> status(count);
    std::vector<std::uint64_t> path;

    for (const auto& draw : draws) {
        std::fill(status.begin(), status.end(), Unknown);
        const std::uint64_t target = codec.encode(draw.solution);
        for (std::uint64_t start = 0; start < count; ++start) {
            path.clear();
            std::uint64_t code = start;
            XState x = codec.decode<ObservableTag>(code);
            while (status[code] == Unknown) {
                status[code] = OnPath;
                path.push_back(code);
                x = sweep(scm, x, draw.u, s);
                code = codec.encode(x);
            }
            const bool good = status[code] == Good || (status[code] == OnPath && code == target &&
                                                       sweep(scm, x, draw.u, s) == x);
            if (!good) {
                ConvergenceReport report;
                report.verdict = ConvergenceReport::Verdict::Fails;
                const XState initial = codec.decode<ObservableTag>(start);
                report.witness = ConvergenceReport::Witness{draw.u, initial, trace(scm, s, draw.u, initial).cycle};
                return report;
            }
            for (std::uint64_t c : path) status[c] = Good;
        }
    }
    return ConvergenceReport{};
}

}  // namespace

ConvergenceReport schedule_converges(const Scm& scm, const Schedule& s, SolveLimits limits) {
    if (s.kind() == Schedule::Kind::Sequential && s.order().size() != scm.size()) {
        throw InputError("schedule order does not match the model's variable count");
    }
    return check_schedule(scm, s, solve_all(scm, limits));
}

ScheduleSearchResult find_valid_schedule(const Scm& scm, const ScheduleSearchOptions& options) {
    const std::size_t n = scm.size();
    const bool exhaustive = n <= options.exhaustive_cap;
    if (!exhaustive && !options.allow_sampling) {
        throw ResourceError("exhaustive schedule search is capped at " + std::to_string(options.exhaustive_cap) +
                            " variables; model has " + std::to_string(n));
    }
    const auto draws = solve_all(scm, options.limits);

    ScheduleSearchResult result;
    result.exhaustive = exhaustive;
    auto attempt = [&](const Schedule& s) {
        ++result.schedules_examined;
        if (check_schedule(scm, s, draws).converges()) {
            result.schedule = s;
            return true;
        }
        return false;
    };

    std::vector<VarId> order;
    for (std::size_t i = 0; i < n; ++i) order.push_back(VarId{i});

    if (exhaustive) {
        do {
            if (attempt(Schedule::sequential(order, n))) return result;
        } while (std::next_permutation(order.begin(), order.end()));
    } else {
        std::mt19937_64 rng(options.seed);
        for (std::size_t k = 0; k < options.samples; ++k) {
            for (std::size_t i = n; i-- > 1;) std::swap(order[i], order[rng() % (i + 1)]);
            if (attempt(Schedule::sequential(order, n))) return result;
        }
    }
    attempt(Schedule::simultaneous());
    return result;
}

}  // namespace feedsep
