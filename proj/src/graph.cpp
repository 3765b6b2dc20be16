#include "feedsep/graph.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "feedsep/errors.hpp"

namespace feedsep {

namespace {

void insert_sorted(std::vector<VarId>& list, VarId v) {
    auto it = std::lower_bound(list.begin(), list.end(), v);
    if (it == list.end() || *it != v) {
        list.insert(it, v);
    }
}

std::string id_text(VarId v) { return "#" + std::to_string(v.index); }

}  // namespace

// ---------------------------------------------------------------- DiGraph

DiGraph::DiGraph(std::size_t node_count)
    : present_(node_count, true), parents_(node_count), children_(node_count) {}

void DiGraph::check_node(VarId v) const {
    if (v.index >= present_.size()) {
        throw InputError("variable id " + id_text(v) + " out of range (node count " +
                         std::to_string(present_.size()) + ")");
    }
    if (!present_[v.index]) {
        throw InputError("variable id " + id_text(v) + " is not in this graph");
    }
}

VarSet DiGraph::nodes() const {
    VarSet out;
    for (std::size_t i = 0; i < present_.size(); ++i) {
        if (present_[i]) out.insert(VarId{i});
    }
    return out;
}

void DiGraph::add_edge(VarId parent, VarId child) {
    check_node(parent);
    check_node(child);
    if (parent == child) {
        throw InputError("self-loop on " + id_text(parent) + " is not allowed");
    }
    insert_sorted(parents_[child.index], parent);
    insert_sorted(children_[parent.index], child);
}

bool DiGraph::has_edge(VarId parent, VarId child) const {
    if (!contains(parent) || !contains(child)) return false;
    const auto& ps = parents_[child.index];
    return std::binary_search(ps.begin(), ps.end(), parent);
}

std::vector<std::pair<VarId, VarId>> DiGraph::edges() const {
    std::vector<std::pair<VarId, VarId>> out;
    for (std::size_t p = 0; p < children_.size(); ++p) {
        for (VarId c : children_[p]) out.emplace_back(VarId{p}, c);
    }
    return out;
}

std::size_t DiGraph::edge_count() const {
    std::size_t n = 0;
    for (const auto& cs : children_) n += cs.size();
    return n;
}

bool DiGraph::is_acyclic() const {
    // Kahn's algorithm over present nodes.
    std::vector<std::size_t> indegree(present_.size(), 0);
    std::deque<VarId> ready;
    std::size_t remaining = 0;
    for (std::size_t i = 0; i < present_.size(); ++i) {
        if (!present_[i]) continue;
        ++remaining;
        indegree[i] = parents_[i].size();
        if (indegree[i] == 0) ready.push_back(VarId{i});
    }
    while (!ready.empty()) {
        VarId v = ready.front();
        ready.pop_front();
        --remaining;
        for (VarId c : children_[v.index]) {
            if (--indegree[c.index] == 0) ready.push_back(c);
        }
    }
    return remaining == 0;
}

DiGraph DiGraph::induced(const VarSet& keep) const {
    for (VarId v : keep) check_node(v);
    DiGraph out(present_.size());
    for (std::size_t i = 0; i < present_.size(); ++i) {
        out.present_[i] = keep.count(VarId{i}) > 0;
    }
    for (auto [p, c] : edges()) {
        if (out.present_[p.index] && out.present_[c.index]) out.add_edge(p, c);
    }
    return out;
}

// ----------------------------------------------------------------- UGraph

UGraph::UGraph(std::size_t node_count) : present_(node_count, true), adjacent_(node_count) {}

void UGraph::check_node(VarId v) const {
    if (v.index >= present_.size() || !present_[v.index]) {
        throw InputError("variable id " + id_text(v) + " is not in this graph");
    }
}

VarSet UGraph::nodes() const {
    VarSet out;
    for (std::size_t i = 0; i < present_.size(); ++i) {
        if (present_[i]) out.insert(VarId{i});
    }
    return out;
}

void UGraph::remove_node(VarId v) {
    check_node(v);
    for (VarId w : adjacent_[v.index]) {
        auto& back = adjacent_[w.index];
        back.erase(std::remove(back.begin(), back.end(), v), back.end());
    }
    adjacent_[v.index].clear();
    present_[v.index] = false;
}

void UGraph::add_edge(VarId a, VarId b) {
    check_node(a);
    check_node(b);
    if (a == b) {
        throw InputError("self-loop on " + id_text(a) + " is not allowed");
    }
    insert_sorted(adjacent_[a.index], b);
    insert_sorted(adjacent_[b.index], a);
}

bool UGraph::has_edge(VarId a, VarId b) const {
    if (!contains(a) || !contains(b)) return false;
    const auto& ns = adjacent_[a.index];
    return std::binary_search(ns.begin(), ns.end(), b);
}

std::vector<std::pair<VarId, VarId>> UGraph::edges() const {
    std::vector<std::pair<VarId, VarId>> out;
    for (std::size_t a = 0; a < adjacent_.size(); ++a) {
        for (VarId b : adjacent_[a]) {
            if (a < b.index) out.emplace_back(VarId{a}, b);
        }
    }
    return out;
}

// ---------------------------------------------------------------- queries

void SepQuery::validate(std::size_t node_count) const {
    if (a.empty() || b.empty()) {
        throw InputError("query sets A and B must be nonempty");
    }
    for (const VarSet* s : {&a, &b, &c}) {
        for (VarId v : *s) {
            if (v.index >= node_count) {
                throw InputError("variable id " + id_text(v) + " out of range (node count " +
                                 std::to_string(node_count) + ")");
            }
        }
    }
    auto overlaps = [](const VarSet& x, const VarSet& y) {
        return std::any_of(x.begin(), x.end(), [&](VarId v) { return y.count(v) > 0; });
    };
    if (overlaps(a, b) || overlaps(a, c) || overlaps(b, c)) {
        throw InputError("query sets A, B and C must be pairwise disjoint");
    }
}

VarSet ancestors(const DiGraph& g, const VarSet& seeds) {
    VarSet seen;
    std::deque<VarId> frontier;
    for (VarId v : seeds) {
        if (!g.contains(v)) {
            throw InputError("variable id " + id_text(v) + " is not in this graph");
        }
        if (seen.insert(v).second) frontier.push_back(v);
    }
    while (!frontier.empty()) {
        VarId v = frontier.front();
        frontier.pop_front();
        for (VarId p : g.parents(v)) {
            if (seen.insert(p).second) frontier.push_back(p);
        }
    }
    return seen;
}

DiGraph ancestral_restriction(const DiGraph& g, const VarSet& seeds) {
    return g.induced(ancestors(g, seeds));
}

UGraph moralize(const DiGraph& g) {
    UGraph out(g.node_count());
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        if (!g.contains(VarId{i})) out.remove_node(VarId{i});
    }
    for (auto [p, c] : g.edges()) out.add_edge(p, c);
    for (VarId child : g.nodes()) {
        const auto& ps = g.parents(child);
        for (std::size_t i = 0; i < ps.size(); ++i) {
            for (std::size_t j = i + 1; j < ps.size(); ++j) out.add_edge(ps[i], ps[j]);
        }
    }
    return out;
}

bool separated(const UGraph& ug, const SepQuery& q) {
    q.validate(ug.node_count());
    for (const VarSet* s : {&q.a, &q.b, &q.c}) {
        for (VarId v : *s) {
            if (!ug.contains(v)) {
                throw InputError("query variable " + id_text(v) + " is not in this graph");
            }
        }
    }
    // Breadth-first search from A that never enters C.
    std::vector<bool> seen(ug.node_count(), false);
    std::deque<VarId> frontier;
    for (VarId v : q.a) {
        seen[v.index] = true;
        frontier.push_back(v);
    }
    while (!frontier.empty()) {
        VarId v = frontier.front();
        frontier.pop_front();
        if (q.b.count(v)) return false;
        for (VarId w : ug.neighbors(v)) {
            if (seen[w.index] || q.c.count(w)) continue;
            seen[w.index] = true;
            frontier.push_back(w);
        }
    }
    return true;
}

bool d_separated(const DiGraph& g, const SepQuery& q) {
    q.validate(g.node_count());
    VarSet seeds = q.a;
    seeds.insert(q.b.begin(), q.b.end());
    seeds.insert(q.c.begin(), q.c.end());
    return separated(moralize(ancestral_restriction(g, seeds)), q);
}

}  // namespace feedsep
