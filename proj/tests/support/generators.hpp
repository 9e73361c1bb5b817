#pragma once

// Seeded random generators for instances, codes, partitions, group
// structures and CWL maps used by the property tests and the acceptance
// harness.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "edgerm/code.hpp"
#include "edgerm/cwl.hpp"
#include "edgerm/edge_removal.hpp"
#include "edgerm/group.hpp"
#include "edgerm/network.hpp"
#include "support/oracles.hpp"

namespace gen {

using edgerm::Element;
using edgerm::FiniteGroup;
using edgerm::NetworkCode;
using edgerm::NetworkInstance;
using edgerm::Symbol;
using Rng = std::mt19937_64;

inline std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

struct Bundle {
    NetworkInstance instance;
    NetworkCode code;
};

/// Fills every decoder with the most frequent demanded tuple per input
/// (smallest on ties), then flips each entry with probability noise.
inline void fit_decoders(Bundle& b, Rng& rng, double noise) {
    const auto& inst = b.instance;
    auto& code = b.code;
    std::uint64_t tuples = 1;
    for (auto a : code.source_alphabets) tuples *= a;
    std::vector<std::map<std::uint64_t, std::map<std::vector<Symbol>, std::uint64_t>>> votes(inst.terminals.size());
    oracle::Evaluator ev(inst, code);
    for (std::uint64_t idx = 0; idx < tuples; ++idx) {
        auto x = oracle::digits(idx, code.source_alphabets);
        auto msg = ev.messages(x);
        for (std::size_t t = 0; t < inst.terminals.size(); ++t) {
            std::vector<Symbol> want;
            for (std::size_t s = 0; s < inst.sources.size(); ++s)
                if (inst.demands[s][t] == 1) want.push_back(static_cast<Symbol>(x[s]));
            ++votes[t][ev.terminal_index(t, msg)][want];
        }
    }
    for (std::size_t t = 0; t < inst.terminals.size(); ++t) {
        auto& rows = code.decoders[inst.terminals[t]];
        std::vector<std::uint64_t> demanded;
        for (std::size_t s = 0; s < inst.sources.size(); ++s)
            if (inst.demands[s][t] == 1) demanded.push_back(code.source_alphabets[s]);
        for (std::uint64_t k = 0; k < rows.size(); ++k) {
            auto it = votes[t].find(k);
            if (it != votes[t].end()) {
                std::uint64_t best = 0;
                for (const auto& [want, c] : it->second)
                    if (c > best) {
                        best = c;
                        rows[k] = want;
                    }
            }
            if (coin(rng, noise))
                for (std::size_t j = 0; j < rows[k].size(); ++j)
                    rows[k][j] = static_cast<Symbol>(uniform(rng, 0, demanded[j] - 1));
        }
    }
}

/// Random DAG with at most 3 sources (alphabets <= 8), at most 10 edges
/// (alphabets <= 8) and 1 or 2 terminals, plus a random code whose
/// decoders are fitted to the encoders.
inline Bundle random_network(Rng& rng) {
    Bundle b;
    auto& inst = b.instance;
    auto& code = b.code;
    const auto k = uniform(rng, 1, 3);
    const auto j = uniform(rng, 0, 3);
    const auto r = uniform(rng, 1, 2);
    std::vector<std::string> order;
    for (std::uint64_t i = 0; i < k; ++i) {
        auto name = "s" + std::to_string(i);
        order.push_back(name);
        auto a = uniform(rng, 1, 8);
        inst.sources.push_back({name, a});
        code.source_alphabets.push_back(a);
    }
    for (std::uint64_t i = 0; i < j; ++i) order.push_back("v" + std::to_string(i));
    for (std::uint64_t i = 0; i < r; ++i) {
        order.push_back("t" + std::to_string(i));
        inst.terminals.push_back(order.back());
    }
    inst.nodes = order;
    const auto edges = uniform(rng, 1, 10);
    const auto first_head = k;
    const auto last_tail = k + j - 1;
    // Keeps every encoder and decoder table at most 4096 rows.
    constexpr std::uint64_t max_rows = 4096;
    std::map<std::string, std::uint64_t> rows_into;
    for (std::uint64_t e = 0; e < edges; ++e) {
        auto tail = uniform(rng, 0, last_tail);
        auto head = uniform(rng, std::max(tail + 1, first_head), order.size() - 1);
        auto& rows = rows_into.try_emplace(order[head], 1).first->second;
        auto size = std::min<std::uint64_t>(uniform(rng, 1, 8), max_rows / rows);
        rows *= size;
        char id[8];
        std::snprintf(id, sizeof id, "e%02u", static_cast<unsigned>(e));
        inst.edges.push_back({id, order[tail], order[head], size});
    }
    inst.demands.assign(k, std::vector<int>(r, 0));
    for (std::uint64_t t = 0; t < r; ++t) {
        bool any = false;
        for (std::uint64_t s = 0; s < k; ++s) {
            inst.demands[s][t] = coin(rng) ? 1 : 0;
            any = any || inst.demands[s][t];
        }
        if (!any) inst.demands[uniform(rng, 0, k - 1)][t] = 1;
    }
    code.blocklength = 1;
    for (const auto& e : inst.edges) code.edge_alphabets[e.id] = e.alphabet_size;
    for (const auto& e : inst.edges) {
        std::vector<std::uint64_t> radices;
        auto s = inst.source_at(e.tail);
        if (s >= 0) {
            radices.push_back(code.source_alphabets[static_cast<std::size_t>(s)]);
        } else {
            for (const auto& id : oracle::inputs_of(inst, e.tail)) radices.push_back(code.edge_alphabets.at(id));
        }
        std::uint64_t size = 1;
        for (auto q : radices) size *= q;
        std::vector<Symbol> table(size);
        const auto mode = uniform(rng, 0, 3);
        for (std::uint64_t idx = 0; idx < size; ++idx) {
            auto d = oracle::digits(idx, radices);
            std::uint64_t v = 0;
            if (mode == 0) v = uniform(rng, 0, e.alphabet_size - 1);
            if (mode == 1) v = std::accumulate(d.begin(), d.end(), std::uint64_t{0});
            if (mode == 2) v = d.empty() ? 0 : d.front();
            table[idx] = static_cast<Symbol>(v % e.alphabet_size);
        }
        code.encoders[e.id] = std::move(table);
    }
    for (std::size_t t = 0; t < inst.terminals.size(); ++t) {
        std::uint64_t rows = 1;
        for (const auto& id : oracle::inputs_of(inst, inst.terminals[t])) rows *= code.edge_alphabets.at(id);
        std::size_t width = 0;
        for (std::size_t s = 0; s < inst.sources.size(); ++s) width += inst.demands[s][t] == 1;
        code.decoders[inst.terminals[t]].assign(rows, std::vector<Symbol>(width, 0));
    }
    fit_decoders(b, rng, coin(rng, 0.6) ? 0.0 : 0.2);
    return b;
}

/// Candidate partitions of a table for edge e: singletons, edge values, a
/// single fiber, a random box refined by the edge value, random labels.
inline std::vector<edgerm::AuxiliaryPartition> random_partitions(Rng& rng, const edgerm::GlobalCodeTable& table,
                                                                 const std::string& edge) {
    const auto n = table.tuple_count();
    const auto& col = table.edge_values[table.edge_index(edge)];
    const auto A = table.edge_alphabets[table.edge_index(edge)];
    std::vector<edgerm::AuxiliaryPartition> out(5);
    for (auto& p : out) p.labels.resize(n);
    std::vector<std::vector<std::uint64_t>> block(table.source_count());
    std::vector<std::uint64_t> blocks;
    for (std::size_t i = 0; i < table.source_count(); ++i) {
        auto q = uniform(rng, 1, table.source_alphabet(i));
        blocks.push_back(q);
        for (std::uint64_t s = 0; s < table.source_alphabet(i); ++s) block[i].push_back(uniform(rng, 0, q - 1));
    }
    const auto L = uniform(rng, 1, 6);
    for (std::uint64_t x = 0; x < n; ++x) {
        out[0].labels[x] = x;
        out[1].labels[x] = col[x];
        out[2].labels[x] = 0;
        std::vector<std::uint64_t> d;
        for (std::size_t i = 0; i < table.source_count(); ++i) d.push_back(block[i][table.source_symbol(x, i)]);
        out[3].labels[x] = oracle::index_of(d, blocks) * A + col[x];
        out[4].labels[x] = uniform(rng, 0, L - 1);
    }
    return out;
}

/// Random finite abelian group as a product of 1 to 3 cyclic factors with
/// order at most max_order.
inline FiniteGroup random_abelian(Rng& rng, std::uint64_t max_order) {
    std::vector<FiniteGroup> f;
    std::uint64_t order = 1;
    const auto count = uniform(rng, 1, 3);
    for (std::uint64_t k = 0; k < count; ++k) {
        if (order * 2 > max_order) break;
        auto n = uniform(rng, 2, std::min<std::uint64_t>(8, max_order / order));
        order *= n;
        f.push_back(edgerm::make_cyclic(n));
    }
    if (f.empty()) return edgerm::make_cyclic(1);
    return f.size() == 1 ? f.front() : edgerm::direct_product(f);
}

/// Symmetric group on 3 points as a Cayley table.
inline FiniteGroup s3() {
    std::vector<std::vector<int>> perms;
    std::vector<int> p{0, 1, 2};
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    std::vector<std::vector<Element>> t(6, std::vector<Element>(6));
    for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = 0; b < 6; ++b) {
            std::vector<int> c(3);
            for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
            t[a][b] = static_cast<Element>(std::find(perms.begin(), perms.end(), c) - perms.begin());
        }
    return FiniteGroup::from_table(t);
}

struct RandomCwl {
    std::vector<FiniteGroup> groups;
    /// phi[x] for each source tuple x (= element of the product).
    std::vector<Symbol> phi;
    std::uint64_t edge_alphabet = 0;
    /// Subgroup used as the kernel.
    std::vector<Element> kernel;
};

/// A random CWL map: the quotient map by a random normal subgroup of a
/// product of random groups, with randomly permuted edge symbols.
inline RandomCwl random_cwl(Rng& rng, std::uint64_t max_domain) {
    RandomCwl out;
    std::uint64_t order = 1;
    const auto n = uniform(rng, 1, 3);
    for (std::uint64_t k = 0; k < n && order * 2 <= max_domain; ++k) {
        FiniteGroup g = (max_domain / order >= 6 && coin(rng, 0.15)) ? s3() : random_abelian(rng, max_domain / order);
        order *= g.order();
        out.groups.push_back(g);
    }
    if (out.groups.empty()) out.groups.push_back(edgerm::make_cyclic(2));
    auto domain = edgerm::direct_product(out.groups);
    // Normal closure of random elements.
    std::vector<Element> gens;
    const auto count = uniform(rng, 0, 2);
    for (std::uint64_t k = 0; k < count; ++k) gens.push_back(static_cast<Element>(uniform(rng, 0, domain.order() - 1)));
    std::vector<Element> closure = gens;
    for (auto g : gens)
        for (Element c = 0; c < domain.order(); ++c)
            closure.push_back(domain.op(domain.op(c, g), domain.inverse(c)));
    auto k = edgerm::generated_subgroup(domain, closure);
    out.kernel = k.members;
    auto label = edgerm::coset_labels(domain, k);
    const std::uint64_t q = domain.order() / k.size();
    std::vector<Symbol> perm(q);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    // Optionally spread symbols into a larger edge alphabet.
    out.edge_alphabet = q + (coin(rng, 0.3) ? uniform(rng, 0, 2) : 0);
    std::vector<Symbol> spread(out.edge_alphabet);
    std::iota(spread.begin(), spread.end(), 0);
    std::shuffle(spread.begin(), spread.end(), rng);
    out.phi.resize(domain.order());
    for (Element x = 0; x < domain.order(); ++x) out.phi[x] = spread[perm[label[x]]];
    return out;
}

/// Sources s_i feed a hub h and the terminal t directly; the edge "estar"
/// from h to t carries phi of the source tuple. The terminal demands every
/// source and decodes from its direct edges.
inline Bundle hub_network(const std::vector<std::uint64_t>& sizes, const std::vector<Symbol>& phi,
                          std::uint64_t edge_alphabet) {
    Bundle b;
    auto& inst = b.instance;
    auto& code = b.code;
    code.blocklength = 1;
    code.source_alphabets = sizes;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        auto s = "s" + std::to_string(i);
        inst.nodes.push_back(s);
        inst.sources.push_back({s, sizes[i]});
    }
    inst.nodes.push_back("h");
    inst.nodes.push_back("t");
    inst.terminals = {"t"};
    inst.demands.assign(sizes.size(), std::vector<int>{1});
    std::vector<std::uint64_t> radices;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        auto a = "a" + std::to_string(i);
        auto d = "b" + std::to_string(i);
        inst.edges.push_back({a, "s" + std::to_string(i), "h", sizes[i]});
        inst.edges.push_back({d, "s" + std::to_string(i), "t", sizes[i]});
        std::vector<Symbol> id(sizes[i]);
        std::iota(id.begin(), id.end(), 0);
        code.encoders[a] = id;
        code.encoders[d] = id;
        code.edge_alphabets[a] = sizes[i];
        code.edge_alphabets[d] = sizes[i];
        radices.push_back(sizes[i]);
    }
    inst.edges.push_back({"estar", "h", "t", edge_alphabet});
    code.edge_alphabets["estar"] = edge_alphabet;
    code.encoders["estar"] = phi;
    radices.push_back(edge_alphabet);
    std::uint64_t rows = 1;
    for (auto q : radices) rows *= q;
    auto& dec = code.decoders["t"];
    dec.resize(rows);
    for (std::uint64_t idx = 0; idx < rows; ++idx) {
        auto d = oracle::digits(idx, radices);
        dec[idx].assign(d.begin(), d.end() - 1);
    }
    return b;
}

/// Flips the decoder output for `count` distinct reachable source tuples of
/// a hub network, so exactly that many tuples decode wrongly.
inline void corrupt_hub(Bundle& b, Rng& rng, std::uint64_t count) {
    const auto& sizes = b.code.source_alphabets;
    std::uint64_t tuples = 1;
    for (auto s : sizes) tuples *= s;
    std::vector<std::uint64_t> order(tuples);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    auto radices = sizes;
    radices.push_back(b.code.edge_alphabets.at("estar"));
    for (std::uint64_t k = 0; k < count && k < tuples; ++k) {
        auto x = oracle::digits(order[k], sizes);
        auto d = x;
        d.push_back(b.code.encoders.at("estar")[order[k]]);
        auto& row = b.code.decoders["t"][oracle::index_of(d, radices)];
        for (std::size_t i = 0; i < row.size(); ++i)
            if (sizes[i] > 1) {
                row[i] = static_cast<Symbol>((row[i] + 1) % sizes[i]);
                break;
            }
    }
}

}  // namespace gen
