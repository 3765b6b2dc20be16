#include "feedsep/audit.hpp"

#include <algorithm>

#include "feedsep/errors.hpp"
#include "feedsep/graph.hpp"

namespace feedsep {

std::vector<CiQuery> enumerate_queries(std::size_t n, std::size_t max_cond, bool set_valued) {
    std::vector<CiQuery> out;
    if (n < 2) return out;
    if (!set_valued) {
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                std::vector<VarId> rest;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i != a && i != b) rest.push_back(VarId{i});
                }
                const std::uint64_t subsets = std::uint64_t{1} << rest.size();
                for (std::uint64_t mask = 0; mask < subsets; ++mask) {
                    if (static_cast<std::size_t>(__builtin_popcountll(mask)) > max_cond) continue;
                    CiQuery q{{VarId{a}}, {VarId{b}}, {}};
                    for (std::size_t i = 0; i < rest.size(); ++i) {
                        if (mask >> i & 1) q.c.insert(rest[i]);
                    }
                    out.push_back(std::move(q));
                }
            }
        }
    } else {
        // Each variable goes to A, B, C or nowhere.
        std::uint64_t total = 1;
        for (std::size_t i = 0; i < n; ++i) total *= 4;
        for (std::uint64_t code = 0; code < total; ++code) {
            CiQuery q;
            std::uint64_t rest = code;
            for (std::size_t i = 0; i < n; ++i, rest /= 4) {
                switch (rest % 4) {
                    case 1: q.a.insert(VarId{i}); break;
                    case 2: q.b.insert(VarId{i}); break;
                    case 3: q.c.insert(VarId{i}); break;
                    default: break;
                }
            }
            if (q.a.empty() || q.b.empty() || q.c.size() > max_cond) continue;
            if (!(*q.a.begin() < *q.b.begin())) continue;
            out.push_back(std::move(q));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<CiQuery> enumerate_queries(const Scm& scm, std::size_t max_cond, bool set_valued) {
    return enumerate_queries(scm.size(), max_cond, set_valued);
}

std::vector<AuditRecord> audit_soundness(const Scm& scm, std::size_t max_cond, bool set_valued, SolveLimits limits) {
    const JointDist joint = induced_joint(scm, limits);
    std::vector<AuditRecord> out;
    for (auto& q : enumerate_queries(scm, max_cond, set_valued)) {
        AuditRecord r;
        r.dsep = d_separated(scm.graph(), q);
        r.ci = ci_holds(joint, q);
        r.violation = r.dsep && !r.ci;
        r.query = std::move(q);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<AuditRecord> violations_only(const std::vector<AuditRecord>& records) {
    std::vector<AuditRecord> out;
    std::copy_if(records.begin(), records.end(), std::back_inserter(out),
                 [](const AuditRecord& r) { return r.violation; });
    return out;
}

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t below(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

std::vector<std::vector<VarId>> draw_parents(std::mt19937_64& rng, const RandomModelSpec& spec) {
    const std::size_t n = spec.vars;
    std::vector<std::size_t> rank(n);
    for (std::size_t i = 0; i < n; ++i) rank[i] = i;
    if (spec.shape == GraphShape::Acyclic) {
        for (std::size_t i = n; i-- > 1;) std::swap(rank[i], rank[below(rng, i + 1)]);
    }
    std::vector<std::vector<VarId>> parents(n);
    for (std::size_t child = 0; child < n; ++child) {
        for (std::size_t p = 0; p < n; ++p) {
            if (p == child) continue;
            const bool keep = unit(rng) < spec.density;
            if (keep && (spec.shape != GraphShape::Acyclic || rank[p] < rank[child])) {
                parents[child].push_back(VarId{p});
            }
        }
    }
    return parents;
}

bool has_cycle(const std::vector<std::vector<VarId>>& parents) {
    DiGraph g(parents.size());
    for (std::size_t c = 0; c < parents.size(); ++c) {
        for (VarId p : parents[c]) g.add_edge(p, VarId{c});
    }
    return !g.is_acyclic();
}

}  // namespace

Scm random_model(std::mt19937_64& rng, const RandomModelSpec& spec, std::string name) {
    if (spec.vars < 1) throw InputError("random model needs at least one variable");
    if (spec.modulus < 2) throw InputError("modulus must be at least 2");
    auto parents = draw_parents(rng, spec);
    if (spec.shape == GraphShape::Cyclic) {
        if (spec.vars < 2 || spec.density <= 0) throw InputError("a cyclic model needs two variables and density > 0");
        for (int attempt = 0; !has_cycle(parents); ++attempt) {
            if (attempt > 10000) throw InputError("could not draw a cyclic graph at this density");
            parents = draw_parents(rng, spec);
        }
    }

    const auto k = static_cast<std::uint64_t>(spec.modulus);
    std::vector<Variable> vars;
    for (std::size_t i = 0; i < spec.vars; ++i) {
        Variable v;
        v.name = "X" + std::to_string(i + 1);
        v.disturbance.name = "U" + std::to_string(i + 1);
        std::vector<std::uint64_t> weights(k);
        std::uint64_t total = 0;
        for (auto& w : weights) total += (w = 1 + below(rng, 4));
        for (auto w : weights) v.disturbance.probs.emplace_back(static_cast<long long>(w), static_cast<long long>(total));

        Table t;
        t.parents = parents[i];
        std::uint64_t entries = k;
        for (std::size_t j = 0; j < t.parents.size(); ++j) entries *= k;
        for (std::uint64_t e = 0; e < entries; ++e) t.outputs.push_back(static_cast<Value>(below(rng, k)));
        v.equation = Equation{VarId{i}, std::move(t)};
        vars.push_back(std::move(v));
    }
    return Scm(std::move(name), spec.modulus, std::move(vars));
}

std::vector<MinedModel> mine(const MinerConfig& cfg) {
    if (cfg.vars < 2) throw InputError("miner needs at least two variables");
    std::mt19937_64 rng(cfg.seed);
    const RandomModelSpec spec{cfg.vars, cfg.modulus, cfg.density, GraphShape::Any};
    std::vector<MinedModel> out;
    for (std::size_t i = 0; i < cfg.count; ++i) {
        Scm model = random_model(rng, spec, "mined-" + std::to_string(cfg.seed) + "-" + std::to_string(i));
        if (!check_uniqueness(model).unique()) continue;
        auto bad = violations_only(audit_soundness(model, cfg.max_cond));
        if (!bad.empty()) out.push_back(MinedModel{i, std::move(model), std::move(bad)});
    }
    return out;
}

}  // namespace feedsep
