#ifndef FEEDSEP_AUDIT_HPP
#define FEEDSEP_AUDIT_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "feedsep/joint_dist.hpp"
#include "feedsep/scm.hpp"

namespace feedsep {

/// One d-separation statement checked against the induced distribution.
/// A violation is a statement that is d-separated yet not independent.
struct AuditRecord {
    CiQuery query;
    bool dsep = false;
    bool ci = false;
    bool violation = false;

    bool operator==(const AuditRecord&) const = default;
};

/// Queries with A and B singletons {a} < {b} (or, with `set_valued`, any
/// disjoint nonempty sets with min A < min B) and |C| <= max_cond drawn from
/// the remaining variables. Sorted by (A, B, C).
std::vector<CiQuery> enumerate_queries(std::size_t n, std::size_t max_cond, bool set_valued = false);
std::vector<CiQuery> enumerate_queries(const Scm& scm, std::size_t max_cond, bool set_valued = false);

/// Throws NonUniqueModel.
std::vector<AuditRecord> audit_soundness(const Scm& scm, std::size_t max_cond, bool set_valued = false,
                                         SolveLimits limits = {});

std::vector<AuditRecord> violations_only(const std::vector<AuditRecord>& records);

enum class GraphShape { Any, Acyclic, Cyclic };

struct RandomModelSpec {
    std::size_t vars = 4;
    int modulus = 2;
    double density = 0.3;
    GraphShape shape = GraphShape::Any;
};

/// Random Table model. Each ordered pair becomes an edge with probability
/// `density` (Acyclic keeps only edges that agree with a random variable
/// order; Cyclic redraws until a directed cycle exists). Disturbance weights
/// are drawn from 1..4 and normalised.
Scm random_model(std::mt19937_64& rng, const RandomModelSpec& spec, std::string name);

struct MinerConfig {
    std::size_t vars = 4;
    int modulus = 2;
    double density = 0.4;
    std::size_t count = 100;
    std::uint64_t seed = 0;
    std::size_t max_cond = 2;
};

struct MinedModel {
    std::size_t index = 0;  // position in the generated sequence
    Scm model;
    std::vector<AuditRecord> violations;
};

/// Generates cfg.count models from cfg.seed, drops the ones without unique
/// solutions, audits the rest and keeps those with at least one violation.
std::vector<MinedModel> mine(const MinerConfig& cfg);

}  // namespace feedsep

#endif  // FEEDSEP_AUDIT_HPP
