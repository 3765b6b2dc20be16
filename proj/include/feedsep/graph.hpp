#ifndef FEEDSEP_GRAPH_HPP
#define FEEDSEP_GRAPH_HPP

#include <compare>
#include <cstddef>
#include <set>
#include <utility>
#include <vector>

namespace feedsep {

/// Index of an observable variable. Index order is the canonical order used
/// by every enumeration in the library.
struct VarId {
    std::size_t index = 0;

    constexpr VarId() = default;
    constexpr explicit VarId(std::size_t i) : index(i) {}

    auto operator<=>(const VarId&) const = default;
};

using VarSet = std::set<VarId>;

/// Directed parent -> child graph over the id space [0, node_count). Cycles
/// (including 2-cycles) are allowed, self-loops are not. A graph may cover
/// only part of its id space, which is how ancestral restriction keeps node
/// identities stable.
class DiGraph {
public:
    DiGraph() = default;
    explicit DiGraph(std::size_t node_count);

    std::size_t node_count() const { return present_.size(); }
    bool contains(VarId v) const { return v.index < present_.size() && present_[v.index]; }
    VarSet nodes() const;

    /// Parallel edges collapse. Throws InputError on a self-loop, an id
    /// out of range, or an endpoint that is not present.
    void add_edge(VarId parent, VarId child);
    bool has_edge(VarId parent, VarId child) const;

    const std::vector<VarId>& parents(VarId v) const { return parents_.at(v.index); }
    const std::vector<VarId>& children(VarId v) const { return children_.at(v.index); }
    std::vector<std::pair<VarId, VarId>> edges() const;
    std::size_t edge_count() const;

    bool is_acyclic() const;

    /// Copy containing only `keep` and the edges among them.
    DiGraph induced(const VarSet& keep) const;

    bool operator==(const DiGraph&) const = default;

private:
    void check_node(VarId v) const;

    std::vector<bool> present_;
    std::vector<std::vector<VarId>> parents_;   // sorted
    std::vector<std::vector<VarId>> children_;  // sorted
};

/// Undirected graph over the same kind of id space as DiGraph.
class UGraph {
public:
    UGraph() = default;
    explicit UGraph(std::size_t node_count);

    std::size_t node_count() const { return present_.size(); }
    bool contains(VarId v) const { return v.index < present_.size() && present_[v.index]; }
    VarSet nodes() const;
    void remove_node(VarId v);

    void add_edge(VarId a, VarId b);
    bool has_edge(VarId a, VarId b) const;
    const std::vector<VarId>& neighbors(VarId v) const { return adjacent_.at(v.index); }
    /// Each edge once, as (smaller, larger).
    std::vector<std::pair<VarId, VarId>> edges() const;

    bool operator==(const UGraph&) const = default;

private:
    void check_node(VarId v) const;

    std::vector<bool> present_;
    std::vector<std::vector<VarId>> adjacent_;  // sorted
};

/// Sets A, B and C of a separation statement "C separates A from B".
struct SepQuery {
    VarSet a;
    VarSet b;
    VarSet c;

    /// A and B nonempty, all three pairwise disjoint, ids below node_count.
    void validate(std::size_t node_count) const;

    auto operator<=>(const SepQuery&) const = default;
};

/// Reflexive transitive closure of the parent relation over `seeds`.
VarSet ancestors(const DiGraph& g, const VarSet& seeds);

/// Induced subgraph on ancestors(g, seeds).
DiGraph ancestral_restriction(const DiGraph& g, const VarSet& seeds);

/// Drops orientation and marries every pair of parents sharing a child.
UGraph moralize(const DiGraph& g);

/// True iff, once the nodes of q.c are removed, no connected component holds
/// both a node of q.a and a node of q.b.
bool separated(const UGraph& ug, const SepQuery& q);

/// Ancestral restriction to A u B u C, moralization, then undirected
/// separation.
bool d_separated(const DiGraph& g, const SepQuery& q);

}  // namespace feedsep

#endif  // FEEDSEP_GRAPH_HPP
