#pragma once

// Group network codes: variables are cosets gG_f of a uniform element g.
// Contains the abelian edge-removal construction and the zero-error
// dichotomy for terminal decoding.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "edgerm/characterization.hpp"
#include "edgerm/code.hpp"
#include "edgerm/edge_removal.hpp"
#include "edgerm/entropy.hpp"
#include "edgerm/error.hpp"
#include "edgerm/group.hpp"
#include "edgerm/rational.hpp"

namespace edgerm {

inline constexpr std::uint64_t default_group_enumeration_cap = std::uint64_t{1} << 20;

/// The coset variables of the sources and one edge, materialized as a
/// global code table with dense coset labels (smallest member first). Needs
/// sources that are independent under uniform g, i.e. |G| = prod [G : G_i].
struct GroupCodeBridge {
    GlobalCodeTable table;
    /// tuple_of[g] = source tuple index of group element g.
    std::vector<std::uint64_t> tuple_of;
    /// coset_label[f][g] for the sources (in order) followed by the edge.
    std::vector<std::vector<std::uint32_t>> coset_label;
};

inline GroupCodeBridge bridge_to_table(const GroupCharacterization& gc, std::size_t edge,
                                       std::uint64_t cap = default_group_enumeration_cap) {
    const auto& g = gc.group;
    if (g.order() > cap) throw ResourceError("group of order " + std::to_string(g.order()) + " exceeds the cap");
    GroupCodeBridge b;
    std::vector<std::uint64_t> sizes;
    std::uint64_t product = 1;
    for (auto s : gc.sources) {
        const auto& h = gc.subgroups.at(s);
        b.coset_label.push_back(coset_labels(g, h));
        sizes.push_back(g.order() / h.size());
        product *= sizes.back();
    }
    if (product != g.order())
        throw PreconditionError("source variables are not independent: prod [G:G_i] = " + std::to_string(product) +
                                " but |G| = " + std::to_string(g.order()));
    b.coset_label.push_back(coset_labels(g, gc.subgroups.at(edge)));

    auto& t = b.table;
    t.source_radix = MixedRadix(sizes);
    t.edge_ids = {gc.names.at(edge)};
    t.edge_alphabets = {g.order() / gc.subgroups.at(edge).size()};
    t.edge_values.assign(1, std::vector<Symbol>(g.order()));
    t.good.assign(g.order(), 1);
    b.tuple_of.resize(g.order());
    std::vector<char> hit(g.order(), 0);
    const auto n = gc.sources.size();
    for (Element x = 0; x < g.order(); ++x) {
        std::uint64_t idx = 0;
        for (std::size_t i = 0; i < n; ++i) idx += b.coset_label[i][x] * t.source_radix.stride(i);
        if (hit[idx]) throw PreconditionError("source cosets do not determine the group element");
        hit[idx] = 1;
        b.tuple_of[x] = idx;
        t.edge_values[0][idx] = b.coset_label[n][x];
    }
    return b;
}

struct AbelianRemoval {
    std::string edge;
    /// H_i = intersection of G_j over the other sources.
    std::vector<Subgroup> h;
    /// G' = product of (G_e* intersect H_i).
    Subgroup g_prime;
    GroupCodeBridge bridge;
    /// Y: coset of G' per source tuple.
    AuxiliaryPartition partition;
    bool condition_A = false;
    bool condition_B = false;
    bool condition_C = false;
    std::optional<std::uint64_t> witness;
    /// |G'| * |G_i| >= |G_e*| * |G_i intersect G'| per source.
    std::vector<bool> size_bound;
    /// H(X_S|Y) and sum_i H(X_i|Y) from the subgroup formula.
    double joint_conditional = 0.0;
    double sum_conditional = 0.0;

    bool all_conditions() const { return condition_A && condition_B && condition_C; }
};

/// Corollary 2 construction for abelian characterizations with normalized,
/// independent sources.
inline AbelianRemoval abelian_edge_removal(const GroupCharacterization& gc, const std::string& edge,
                                           std::uint64_t cap = default_group_enumeration_cap) {
    validate_characterization(gc);
    if (!gc.abelian()) throw PreconditionError("the construction needs an abelian group");
    const auto& g = gc.group;
    const auto e = gc.index(edge);
    if (std::find(gc.sources.begin(), gc.sources.end(), e) != gc.sources.end())
        throw DomainError("'" + edge + "' is a source variable");
    if (intersection_of(gc, gc.sources).size() != 1)
        throw PreconditionError("source subgroups must intersect in the identity");

    AbelianRemoval out;
    out.edge = edge;
    out.bridge = bridge_to_table(gc, e, cap);
    const auto& ge = gc.subgroups[e];
    Subgroup gp = trivial_subgroup(g);
    for (std::size_t i = 0; i < gc.sources.size(); ++i) {
        std::vector<std::size_t> others;
        for (std::size_t j = 0; j < gc.sources.size(); ++j)
            if (j != i) others.push_back(gc.sources[j]);
        out.h.push_back(intersection_of(gc, others));
        gp = subgroup_product(gp, intersect(ge, out.h.back()));
    }
    out.g_prime = gp;

    auto y = coset_labels(g, gp);
    out.partition.labels.assign(g.order(), 0);
    for (Element x = 0; x < g.order(); ++x) out.partition.labels[out.bridge.tuple_of[x]] = y[x];

    const auto& table = out.bridge.table;
    out.condition_A = check_condition_A(table, edge, out.partition).has_value();
    out.condition_B = out.condition_A && check_condition_B(table, out.partition);
    if (out.condition_B) {
        out.witness = find_witness_y(table, edge, out.partition, Rational(0));
        out.condition_C = out.witness.has_value();
    }
    for (auto s : gc.sources) {
        const auto& gi = gc.subgroups[s];
        out.size_bound.push_back(gp.size() * gi.size() >= ge.size() * intersect(gi, gp).size());
    }

    GroupCharacterization with_y = gc;
    with_y.names.push_back("#Y");
    with_y.subgroups.push_back(gp);
    const auto y_index = with_y.names.size() - 1;
    const double hy = induced_entropy(with_y, std::vector<std::size_t>{y_index});
    auto all = gc.sources;
    all.push_back(y_index);
    out.joint_conditional = induced_entropy(with_y, all) - hy;
    for (auto s : gc.sources) out.sum_conditional += induced_entropy(with_y, std::vector<std::size_t>{s, y_index}) - hy;
    return out;
}

struct TerminalDemand {
    std::string terminal;
    std::vector<std::string> inputs;
    std::string source;
};

struct TerminalDecision {
    std::string terminal;
    std::string source;
    bool zero_error = false;
    /// decoder[coset of G_In] = coset of G_i, present when zero_error.
    std::vector<std::uint32_t> decoder;
    /// q = |G_In| / |G_In intersect G_i|.
    std::uint64_t q = 1;
    Rational min_error{0};
    /// True when every decoder was enumerated; otherwise the minimum comes
    /// from the exact per-input optimum.
    bool brute_forced = false;
    std::uint64_t decoders_checked = 0;
};

inline constexpr std::uint64_t default_decoder_enumeration_cap = std::uint64_t{1} << 22;

/// Per terminal: a verified zero-error decoder when G_In is inside G_i,
/// otherwise the exact minimum decoding error over all decoders, which
/// equals 1 - 1/q.
inline std::vector<TerminalDecision> zero_error_upgrade(const GroupCharacterization& gc,
                                                        const std::vector<TerminalDemand>& demands,
                                                        std::uint64_t decoder_cap = default_decoder_enumeration_cap) {
    validate_characterization(gc);
    const auto& g = gc.group;
    if (g.order() > default_group_enumeration_cap) throw ResourceError("group too large to enumerate");
    std::vector<TerminalDecision> out;
    for (const auto& d : demands) {
        TerminalDecision r;
        r.terminal = d.terminal;
        r.source = d.source;
        std::vector<std::size_t> in;
        for (const auto& v : d.inputs) in.push_back(gc.index(v));
        auto g_in = intersection_of(gc, in);
        const auto& gi = gc.subgroup(d.source);
        auto in_label = coset_labels(g, g_in);
        auto src_label = coset_labels(g, gi);
        const std::uint64_t in_count = g.order() / g_in.size();
        const std::uint64_t src_count = g.order() / gi.size();
        r.q = g_in.size() / intersect(g_in, gi).size();

        // joint[in][src] = number of g with those cosets
        std::vector<std::vector<std::uint64_t>> joint(in_count, std::vector<std::uint64_t>(src_count, 0));
        for (Element x = 0; x < g.order(); ++x) ++joint[in_label[x]][src_label[x]];

        if (is_subset(g_in, gi)) {
            r.zero_error = true;
            r.decoder.assign(in_count, 0);
            for (Element x = 0; x < g.order(); ++x) r.decoder[in_label[x]] = src_label[x];
            for (Element x = 0; x < g.order(); ++x)
                if (r.decoder[in_label[x]] != src_label[x])
                    throw InternalError("coset decoder errs although G_In is inside G_i");
            r.min_error = Rational(0);
            out.push_back(std::move(r));
            continue;
        }

        std::uint64_t decoders = 1;
        bool enumerable = true;
        for (std::uint64_t k = 0; k < in_count && enumerable; ++k) {
            if (decoders > decoder_cap / src_count) enumerable = false;
            else decoders *= src_count;
        }
        std::uint64_t best_correct = 0;
        if (enumerable) {
            std::vector<std::uint64_t> choice(in_count, 0);
            for (std::uint64_t n = 0; n < decoders; ++n) {
                std::uint64_t correct = 0;
                for (std::uint64_t k = 0; k < in_count; ++k) correct += joint[k][choice[k]];
                best_correct = std::max(best_correct, correct);
                for (std::uint64_t k = 0; k < in_count; ++k) {
                    if (++choice[k] < src_count) break;
                    choice[k] = 0;
                }
            }
            r.brute_forced = true;
            r.decoders_checked = decoders;
        } else {
            for (const auto& row : joint) best_correct += *std::max_element(row.begin(), row.end());
        }
        r.min_error = Rational(1) - make_fraction(best_correct, g.order());
        if (r.min_error != Rational(1) - Rational(1, static_cast<std::int64_t>(r.q)))
            throw InternalError("minimum decoding error differs from 1 - 1/q");
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace edgerm
