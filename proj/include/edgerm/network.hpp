#pragma once

// Network coding instances: a DAG with sources, terminals, demands and
// per-edge alphabet sizes. Rates are carried as alphabet cardinalities.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "edgerm/error.hpp"

namespace edgerm {

struct Edge {
    std::string id;
    std::string tail;
    std::string head;
    std::uint64_t alphabet_size = 1;

    bool operator==(const Edge&) const = default;
};

struct Source {
    std::string node;
    std::uint64_t alphabet_size = 1;

    bool operator==(const Source&) const = default;
};

struct NetworkInstance {
    std::vector<std::string> nodes;
    std::vector<Edge> edges;
    std::vector<Source> sources;
    std::vector<std::string> terminals;
    /// demands[s][t] = 1 iff terminal t requests source s.
    std::vector<std::vector<int>> demands;

    bool operator==(const NetworkInstance&) const = default;

    std::size_t edge_index(const std::string& id) const {
        for (std::size_t k = 0; k < edges.size(); ++k)
            if (edges[k].id == id) return k;
        throw DomainError("unknown edge id '" + id + "'");
    }

    bool has_edge(const std::string& id) const {
        return std::any_of(edges.begin(), edges.end(), [&](const Edge& e) { return e.id == id; });
    }

    std::size_t terminal_index(const std::string& node) const {
        for (std::size_t k = 0; k < terminals.size(); ++k)
            if (terminals[k] == node) return k;
        throw DomainError("unknown terminal '" + node + "'");
    }

    /// Index of the source located at node, or -1.
    std::ptrdiff_t source_at(const std::string& node) const {
        for (std::size_t k = 0; k < sources.size(); ++k)
            if (sources[k].node == node) return static_cast<std::ptrdiff_t>(k);
        return -1;
    }

    /// Incoming edges of a node, as edge indices sorted by edge id. This is
    /// the coordinate order of encoder and decoder input tuples.
    std::vector<std::size_t> in_edges(const std::string& node) const {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < edges.size(); ++k)
            if (edges[k].head == node) out.push_back(k);
        std::sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) { return edges[a].id < edges[b].id; });
        return out;
    }

    std::vector<std::size_t> out_edges(const std::string& node) const {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < edges.size(); ++k)
            if (edges[k].tail == node) out.push_back(k);
        std::sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) { return edges[a].id < edges[b].id; });
        return out;
    }

    /// Sources demanded by terminal t, in source order.
    std::vector<std::size_t> demanded_sources(std::size_t t) const {
        std::vector<std::size_t> out;
        for (std::size_t s = 0; s < sources.size(); ++s)
            if (demands.at(s).at(t) == 1) out.push_back(s);
        return out;
    }
};

namespace detail {

/// Edge indices in dependency order; returns false on a cycle.
inline bool edge_order(const NetworkInstance& inst, std::vector<std::size_t>& order) {
    const auto n = inst.edges.size();
    std::map<std::string, std::vector<std::size_t>> into;
    for (std::size_t k = 0; k < n; ++k) into[inst.edges[k].head].push_back(k);
    // edge k waits for every edge entering its tail
    std::vector<std::size_t> pending(n, 0);
    std::vector<std::vector<std::size_t>> dependents(n);
    for (std::size_t k = 0; k < n; ++k) {
        auto it = into.find(inst.edges[k].tail);
        if (it == into.end()) continue;
        for (auto d : it->second) {
            dependents[d].push_back(k);
            ++pending[k];
        }
    }
    auto by_id = [&](std::size_t a, std::size_t b) { return inst.edges[a].id > inst.edges[b].id; };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_id)> ready(by_id);
    for (std::size_t k = 0; k < n; ++k)
        if (pending[k] == 0) ready.push(k);
    order.clear();
    while (!ready.empty()) {
        auto k = ready.top();
        ready.pop();
        order.push_back(k);
        for (auto d : dependents[k])
            if (--pending[d] == 0) ready.push(d);
    }
    return order.size() == n;
}

}  // namespace detail

/// Lists every violated instance invariant; empty iff the instance is valid.
inline std::vector<std::string> validate_instance(const NetworkInstance& inst) {
    std::vector<std::string> report;
    std::set<std::string> nodes;
    for (const auto& v : inst.nodes)
        if (!nodes.insert(v).second) report.push_back("duplicate node '" + v + "'");

    std::set<std::string> edge_ids;
    for (const auto& e : inst.edges) {
        if (!edge_ids.insert(e.id).second) report.push_back("duplicate edge id '" + e.id + "'");
        if (!nodes.count(e.tail)) report.push_back("edge '" + e.id + "' has unknown tail '" + e.tail + "'");
        if (!nodes.count(e.head)) report.push_back("edge '" + e.id + "' has unknown head '" + e.head + "'");
        if (e.alphabet_size < 1) report.push_back("edge '" + e.id + "' has alphabet size 0");
    }

    std::set<std::string> source_nodes;
    for (const auto& s : inst.sources) {
        if (!nodes.count(s.node)) report.push_back("source at unknown node '" + s.node + "'");
        if (!source_nodes.insert(s.node).second) report.push_back("duplicate source node '" + s.node + "'");
        if (s.alphabet_size < 1) report.push_back("source '" + s.node + "' has alphabet size 0");
        for (const auto& e : inst.edges)
            if (e.head == s.node) report.push_back("source has incoming edge: '" + e.id + "' into '" + s.node + "'");
    }

    std::set<std::string> terminal_nodes;
    for (const auto& t : inst.terminals) {
        if (!nodes.count(t)) report.push_back("terminal at unknown node '" + t + "'");
        if (!terminal_nodes.insert(t).second) report.push_back("duplicate terminal '" + t + "'");
        if (source_nodes.count(t)) report.push_back("node '" + t + "' is both a source and a terminal");
        for (const auto& e : inst.edges)
            if (e.tail == t) report.push_back("terminal has outgoing edge: '" + e.id + "' out of '" + t + "'");
    }

    if (inst.demands.size() != inst.sources.size()) {
        report.push_back("demand matrix has " + std::to_string(inst.demands.size()) + " rows for " +
                         std::to_string(inst.sources.size()) + " sources");
    } else {
        bool shape_ok = true;
        for (std::size_t s = 0; s < inst.demands.size(); ++s) {
            if (inst.demands[s].size() != inst.terminals.size()) {
                report.push_back("demand row " + std::to_string(s) + " has wrong length");
                shape_ok = false;
                continue;
            }
            for (auto m : inst.demands[s])
                if (m != 0 && m != 1) report.push_back("demand entry not in {0,1} in row " + std::to_string(s));
        }
        if (shape_ok) {
            for (std::size_t t = 0; t < inst.terminals.size(); ++t) {
                bool any = false;
                for (std::size_t s = 0; s < inst.sources.size(); ++s) any = any || inst.demands[s][t] == 1;
                if (!any) report.push_back("terminal '" + inst.terminals[t] + "' demands no source");
            }
        }
    }

    std::vector<std::size_t> order;
    if (!detail::edge_order(inst, order)) report.push_back("graph not acyclic");
    return report;
}

/// Edges in an order where each edge follows every edge into its tail.
/// Ties are broken by smallest edge id.
inline std::vector<std::size_t> topological_order(const NetworkInstance& inst) {
    std::vector<std::size_t> order;
    if (!detail::edge_order(inst, order)) throw PreconditionError("graph not acyclic");
    return order;
}

/// The same instance without edge `id`.
inline NetworkInstance remove_edge(const NetworkInstance& inst, const std::string& id) {
    auto k = inst.edge_index(id);
    NetworkInstance out = inst;
    out.edges.erase(out.edges.begin() + static_cast<std::ptrdiff_t>(k));
    return out;
}

/// Reporting-only conversion of a cardinality to a rate in bits per symbol.
inline double rate_bits(std::uint64_t cardinality, unsigned blocklength) {
    return std::log2(static_cast<double>(cardinality)) / blocklength;
}

}  // namespace edgerm
