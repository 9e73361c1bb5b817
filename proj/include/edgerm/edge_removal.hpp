#pragma once

// Local edge removal through an auxiliary partition of the source tuples.
//
// A partition assigns a label to every source tuple. When the removed edge
// is constant on each fiber (A), every fiber is a product set (B) and some
// fiber is large and mostly good (C), restricting the code to that fiber
// yields a code for the network without the edge.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "edgerm/code.hpp"
#include "edgerm/error.hpp"
#include "edgerm/mixed_radix.hpp"
#include "edgerm/network.hpp"
#include "edgerm/rational.hpp"

namespace edgerm {

/// f_Y as one label per source tuple index.
struct AuxiliaryPartition {
    std::vector<std::uint64_t> labels;
};

struct Fiber {
    std::uint64_t label = 0;
    std::vector<std::uint64_t> tuples;
    /// A_i(y): sorted distinct symbols of source i inside the fiber.
    std::vector<std::vector<Symbol>> projections;
    std::uint64_t bad = 0;

    std::uint64_t size() const { return tuples.size(); }
    std::uint64_t good() const { return size() - bad; }
    /// Product of projection sizes; equals size() iff the fiber is a product set.
    std::uint64_t box_size() const {
        std::uint64_t p = 1;
        for (const auto& a : projections) p *= a.size();
        return p;
    }
};

/// Fibers sorted by label.
inline std::vector<Fiber> partition_fibers(const GlobalCodeTable& table, const AuxiliaryPartition& part) {
    if (part.labels.size() != table.tuple_count())
        throw DomainError("partition has " + std::to_string(part.labels.size()) + " labels for " +
                          std::to_string(table.tuple_count()) + " source tuples");
    std::map<std::uint64_t, std::size_t> slot;
    std::vector<Fiber> fibers;
    for (std::uint64_t x = 0; x < table.tuple_count(); ++x) {
        auto [it, fresh] = slot.try_emplace(part.labels[x], fibers.size());
        if (fresh) {
            fibers.emplace_back();
            fibers.back().label = part.labels[x];
            fibers.back().projections.resize(table.source_count());
        }
        auto& f = fibers[it->second];
        f.tuples.push_back(x);
        if (!table.good[x]) ++f.bad;
        for (std::size_t i = 0; i < table.source_count(); ++i) f.projections[i].push_back(table.source_symbol(x, i));
    }
    for (auto& f : fibers)
        for (auto& a : f.projections) {
            std::sort(a.begin(), a.end());
            a.erase(std::unique(a.begin(), a.end()), a.end());
        }
    std::sort(fibers.begin(), fibers.end(), [](const Fiber& a, const Fiber& b) { return a.label < b.label; });
    return fibers;
}

/// g_Y: label -> constant value of the edge on that fiber.
using InducedEdgeMap = std::map<std::uint64_t, Symbol>;

/// Condition (A): the edge is a function of the label. Returns g_Y.
inline std::optional<InducedEdgeMap> check_condition_A(const GlobalCodeTable& table, const std::string& edge,
                                                       const AuxiliaryPartition& part) {
    const auto& values = table.edge_values[table.edge_index(edge)];
    if (part.labels.size() != table.tuple_count()) throw DomainError("partition size does not match the table");
    InducedEdgeMap g;
    for (std::uint64_t x = 0; x < table.tuple_count(); ++x) {
        auto [it, fresh] = g.try_emplace(part.labels[x], values[x]);
        if (!fresh && it->second != values[x]) return std::nullopt;
    }
    return g;
}

/// Condition (B): every fiber is the product of its projections.
inline bool check_condition_B(const std::vector<Fiber>& fibers) {
    return std::all_of(fibers.begin(), fibers.end(), [](const Fiber& f) { return f.box_size() == f.size(); });
}

inline bool check_condition_B(const GlobalCodeTable& table, const AuxiliaryPartition& part) {
    return check_condition_B(partition_fibers(table, part));
}

/// Error budget test for a fiber, with the same epsilon conventions as
/// check_feasibility (strict for 0 < eps < 1, exact zero for eps = 0).
inline bool fiber_meets_target(std::uint64_t bad, std::uint64_t size, const Rational& epsilon) {
    return error_meets_target(make_fraction(bad, size), epsilon);
}

/// Size half of condition (C): |A_i| * |X_e| >= |X_i| for every source.
inline bool fiber_large_enough(const GlobalCodeTable& table, const Fiber& f, std::uint64_t edge_alphabet) {
    for (std::size_t i = 0; i < table.source_count(); ++i)
        if (f.projections[i].size() * edge_alphabet < table.source_alphabet(i)) return false;
    return true;
}

/// Smallest label whose fiber satisfies condition (C) at the target epsilon.
inline std::optional<std::uint64_t> find_witness_y(const GlobalCodeTable& table, const std::string& edge,
                                                   const AuxiliaryPartition& part, const Rational& epsilon) {
    if (!check_condition_A(table, edge, part)) throw PreconditionError("condition (A) fails for this partition");
    auto fibers = partition_fibers(table, part);
    if (!check_condition_B(fibers)) throw PreconditionError("condition (B) fails for this partition");
    const auto alphabet = table.edge_alphabets[table.edge_index(edge)];
    for (const auto& f : fibers)
        if (fiber_large_enough(table, f, alphabet) && fiber_meets_target(f.bad, f.size(), epsilon)) return f.label;
    return std::nullopt;
}

struct RemovalCertificate {
    std::string edge;
    std::string method;
    std::optional<std::uint64_t> witness_label;
    Symbol edge_value = 0;
    std::uint64_t edge_alphabet = 0;
    /// Extra divisor of the promised rate (the piece count K); 1 otherwise.
    std::uint64_t piece_count = 1;
    /// |G_e*| when the certificate comes from a group witness.
    std::optional<std::uint64_t> edge_group_order;
    std::vector<std::uint64_t> original_sizes;
    std::vector<std::uint64_t> restricted_sizes;
    std::vector<std::uint64_t> promised_sizes;
    /// relabel[i][new symbol] = original symbol of source i.
    std::vector<std::vector<Symbol>> relabel;
    std::uint64_t fiber_size = 0;
    std::uint64_t fiber_bad = 0;
    Rational epsilon{0};
    Rational original_error{0};
    FeasibilityReport restricted;
    bool verified = false;
};

struct Restriction {
    NetworkInstance instance;
    NetworkCode code;
    RemovalCertificate certificate;
};

inline std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

/// Restricts a code to a product set of source symbols on which the edge is
/// constant, removes the edge with its constant hardwired at the head node,
/// and re-verifies the result against the promised rates. Conditions are the
/// caller's responsibility; the returned certificate records whether the
/// independent verification passed.
inline Restriction restrict_to_product(const NetworkInstance& inst, const NetworkCode& code,
                                       const GlobalCodeTable& table, const std::string& edge,
                                       const std::vector<std::vector<Symbol>>& sets, Symbol edge_value,
                                       const Rational& epsilon, std::uint64_t promise_divisor,
                                       const EnumerationOptions& opt = {}) {
    const auto removed = inst.edge_index(edge);
    const auto& removed_edge = inst.edges[removed];
    if (sets.size() != inst.sources.size()) throw DomainError("one symbol set per source is required");
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (sets[i].empty()) throw DomainError("empty restricted source alphabet");
        if (!std::is_sorted(sets[i].begin(), sets[i].end()) ||
            std::adjacent_find(sets[i].begin(), sets[i].end()) != sets[i].end())
            throw DomainError("restricted source alphabet must be sorted and distinct");
        if (sets[i].back() >= code.source_alphabets[i]) throw DomainError("restricted symbol outside source alphabet");
    }

    Restriction out;
    out.instance = remove_edge(inst, edge);
    auto& rc = out.code;
    rc.blocklength = code.blocklength;
    rc.edge_alphabets = code.edge_alphabets;
    rc.edge_alphabets.erase(edge);
    for (const auto& s : sets) rc.source_alphabets.push_back(s.size());

    // Re-indexes a table over the in-edges of `node` in the original code to
    // the in-edges of `node` after removal, hardwiring the removed edge.
    auto reindex = [&](const std::string& node, auto&& emit) {
        auto old_inputs = inst.in_edges(node);
        std::vector<std::uint64_t> old_radices;
        std::vector<std::uint64_t> new_radices;
        std::vector<std::ptrdiff_t> new_pos;  // position in new input list, -1 for the removed edge
        for (auto f : old_inputs) {
            old_radices.push_back(code.edge_alphabets.at(inst.edges[f].id));
            if (f == removed) {
                new_pos.push_back(-1);
            } else {
                new_pos.push_back(static_cast<std::ptrdiff_t>(new_radices.size()));
                new_radices.push_back(old_radices.back());
            }
        }
        MixedRadix old_radix(old_radices), new_radix(new_radices);
        std::vector<std::uint64_t> digits(new_radices.size());
        for (std::uint64_t idx = 0; idx < new_radix.size(); ++idx) {
            new_radix.decode(idx, digits);
            std::uint64_t old_idx = 0;
            for (std::size_t j = 0; j < old_inputs.size(); ++j) {
                auto d = new_pos[j] < 0 ? edge_value : digits[static_cast<std::size_t>(new_pos[j])];
                old_idx += d * old_radix.stride(j);
            }
            emit(old_idx);
        }
    };

    for (const auto& e : inst.edges) {
        if (e.id == edge) continue;
        const auto& old = code.encoders.at(e.id);
        auto src = inst.source_at(e.tail);
        std::vector<Symbol> table_out;
        if (src >= 0) {
            for (auto s : sets[static_cast<std::size_t>(src)]) table_out.push_back(old[s]);
        } else if (e.tail == removed_edge.head) {
            reindex(e.tail, [&](std::uint64_t old_idx) { table_out.push_back(old[old_idx]); });
        } else {
            table_out = old;
        }
        rc.encoders[e.id] = std::move(table_out);
    }

    // Decoder outputs are translated to the new labels; a symbol outside the
    // restricted alphabet can only come from a wrong decision and maps to 0.
    std::vector<std::map<Symbol, Symbol>> to_new(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i)
        for (std::size_t k = 0; k < sets[i].size(); ++k) to_new[i][sets[i][k]] = static_cast<Symbol>(k);
    for (std::size_t t = 0; t < inst.terminals.size(); ++t) {
        const auto& name = inst.terminals[t];
        const auto& old = code.decoders.at(name);
        auto demanded = inst.demanded_sources(t);
        auto translate = [&](const std::vector<Symbol>& row) {
            std::vector<Symbol> r(row.size());
            for (std::size_t j = 0; j < row.size(); ++j) {
                auto it = to_new[demanded[j]].find(row[j]);
                r[j] = it == to_new[demanded[j]].end() ? 0 : it->second;
            }
            return r;
        };
        std::vector<std::vector<Symbol>> rows;
        if (name == removed_edge.head) {
            reindex(name, [&](std::uint64_t old_idx) { rows.push_back(translate(old[old_idx])); });
        } else {
            for (const auto& row : old) rows.push_back(translate(row));
        }
        rc.decoders[name] = std::move(rows);
    }

    auto& cert = out.certificate;
    cert.edge = edge;
    cert.edge_value = edge_value;
    cert.edge_alphabet = code.edge_alphabets.at(edge);
    cert.epsilon = epsilon;
    cert.original_error = table.error();
    cert.relabel = sets;
    cert.fiber_size = 1;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        cert.original_sizes.push_back(code.source_alphabets[i]);
        cert.restricted_sizes.push_back(sets[i].size());
        cert.promised_sizes.push_back(ceil_div(code.source_alphabets[i], promise_divisor));
        cert.fiber_size *= sets[i].size();
    }
    for (std::size_t i = 0; i < out.instance.sources.size(); ++i)
        out.instance.sources[i].alphabet_size = cert.promised_sizes[i];

    // bad tuples inside the box, counted on the original table
    MixedRadix box([&] {
        std::vector<std::uint64_t> r;
        for (const auto& s : sets) r.push_back(s.size());
        return r;
    }());
    std::vector<std::uint64_t> digits(sets.size());
    std::vector<Symbol> original(sets.size());
    for (std::uint64_t b = 0; b < box.size(); ++b) {
        box.decode(b, digits);
        for (std::size_t i = 0; i < sets.size(); ++i) original[i] = sets[i][digits[i]];
        if (!table.good[table.source_radix.encode(original)]) ++cert.fiber_bad;
    }

    FeasibilityTarget target{epsilon, cert.promised_sizes};
    cert.restricted = check_feasibility(out.instance, rc, target, opt);
    cert.verified = cert.restricted.verdict;
    return out;
}

/// Theorem 1 restriction at label y. Throws PreconditionError when (A), (B)
/// or (C) fails for y.
inline Restriction restrict_code(const NetworkInstance& inst, const NetworkCode& code, const GlobalCodeTable& table,
                                 const std::string& edge, const AuxiliaryPartition& part, std::uint64_t y,
                                 const Rational& epsilon, const EnumerationOptions& opt = {}) {
    auto g = check_condition_A(table, edge, part);
    if (!g) throw PreconditionError("condition (A) fails for this partition");
    auto fibers = partition_fibers(table, part);
    if (!check_condition_B(fibers)) throw PreconditionError("condition (B) fails for this partition");
    auto it = std::find_if(fibers.begin(), fibers.end(), [&](const Fiber& f) { return f.label == y; });
    if (it == fibers.end()) throw PreconditionError("label " + std::to_string(y) + " has an empty fiber");
    const auto alphabet = code.edge_alphabets.at(edge);
    if (!fiber_large_enough(table, *it, alphabet))
        throw PreconditionError("fiber " + std::to_string(y) + " violates the size bound of condition (C)");
    if (!fiber_meets_target(it->bad, it->size(), epsilon))
        throw PreconditionError("fiber " + std::to_string(y) + " violates the error bound of condition (C)");
    auto r = restrict_to_product(inst, code, table, edge, it->projections, g->at(y), epsilon, alphabet, opt);
    r.certificate.method = "theorem1";
    r.certificate.witness_label = y;
    return r;
}

/// Checks (A), (B), finds a witness and restricts; none when any step fails.
inline std::optional<Restriction> theorem1_remove(const NetworkInstance& inst, const NetworkCode& code,
                                                  const GlobalCodeTable& table, const std::string& edge,
                                                  const AuxiliaryPartition& part, const Rational& epsilon,
                                                  const EnumerationOptions& opt = {}) {
    if (!check_condition_A(table, edge, part)) return std::nullopt;
    if (!check_condition_B(table, part)) return std::nullopt;
    auto y = find_witness_y(table, edge, part, epsilon);
    if (!y) return std::nullopt;
    return restrict_code(inst, code, table, edge, part, *y, epsilon, opt);
}

/// Corollary 1 test on an explicit product set prod_i sets[i].
inline bool corollary1_witness(const GlobalCodeTable& table, const std::string& edge,
                               const std::vector<std::vector<Symbol>>& sets, const Rational& epsilon) {
    if (sets.size() != table.source_count()) throw DomainError("one symbol set per source is required");
    std::vector<std::vector<Symbol>> s = sets;
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::sort(s[i].begin(), s[i].end());
        s[i].erase(std::unique(s[i].begin(), s[i].end()), s[i].end());
        if (s[i].empty()) return false;
        if (s[i].back() >= table.source_alphabet(i)) throw DomainError("candidate symbol outside source alphabet");
    }
    const auto k = table.edge_index(edge);
    const auto alphabet = table.edge_alphabets[k];
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i].size() * alphabet < table.source_alphabet(i)) return false;
    std::vector<std::uint64_t> radices;
    for (const auto& a : s) radices.push_back(a.size());
    MixedRadix box(radices);
    std::vector<std::uint64_t> digits(s.size());
    std::vector<Symbol> tuple(s.size());
    std::optional<Symbol> value;
    std::uint64_t bad = 0;
    for (std::uint64_t b = 0; b < box.size(); ++b) {
        box.decode(b, digits);
        for (std::size_t i = 0; i < s.size(); ++i) tuple[i] = s[i][digits[i]];
        auto x = table.source_radix.encode(tuple);
        auto v = table.edge_values[k][x];
        if (value && *value != v) return false;
        value = v;
        if (!table.good[x]) ++bad;
    }
    return fiber_meets_target(bad, box.size(), epsilon);
}

/// Corollary 1 restriction; none when the product set is not a witness.
inline std::optional<Restriction> corollary1_remove(const NetworkInstance& inst, const NetworkCode& code,
                                                    const GlobalCodeTable& table, const std::string& edge,
                                                    std::vector<std::vector<Symbol>> sets, const Rational& epsilon,
                                                    const EnumerationOptions& opt = {}) {
    if (!corollary1_witness(table, edge, sets, epsilon)) return std::nullopt;
    for (auto& a : sets) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    std::vector<Symbol> first;
    for (const auto& a : sets) first.push_back(a.front());
    auto value = table.edge_values[table.edge_index(edge)][table.source_radix.encode(first)];
    auto r = restrict_to_product(inst, code, table, edge, sets, value, epsilon, code.edge_alphabets.at(edge), opt);
    r.certificate.method = "corollary1";
    return r;
}

/// The partition of source tuples by the value carried on the edge.
inline AuxiliaryPartition edge_value_partition(const GlobalCodeTable& table, const std::string& edge) {
    const auto& values = table.edge_values[table.edge_index(edge)];
    return AuxiliaryPartition{std::vector<std::uint64_t>(values.begin(), values.end())};
}

/// Corollary 3 for zero-error codes: Y is the edge message itself. The fiber
/// of largest size (smallest value on ties) is used. None when some fiber is
/// not a product set.
inline std::optional<Restriction> corollary3_remove(const NetworkInstance& inst, const NetworkCode& code,
                                                    const GlobalCodeTable& table, const std::string& edge,
                                                    const EnumerationOptions& opt = {}) {
    if (table.bad_count != 0) throw PreconditionError("corollary 3 applies to zero-error codes only");
    auto part = edge_value_partition(table, edge);
    auto fibers = partition_fibers(table, part);
    if (!check_condition_B(fibers)) return std::nullopt;
    const Fiber* best = &fibers.front();
    for (const auto& f : fibers)
        if (f.size() > best->size()) best = &f;
    auto r = restrict_code(inst, code, table, edge, part, best->label, Rational(0), opt);
    r.certificate.method = "corollary3";
    return r;
}

}  // namespace edgerm
