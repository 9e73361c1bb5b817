#pragma once

// Coordinate-wise linear (CWL) encoding functions and the removal
// constructions built on them.
//
// Source i is given a group G_i of order |X_i| whose element ids are the
// source symbols, so the source tuple index is also the element id of the
// direct product. The edge group acts on the support of the edge function,
// with an explicit element -> symbol table.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "edgerm/characterization.hpp"
#include "edgerm/code.hpp"
#include "edgerm/edge_removal.hpp"
#include "edgerm/entropy.hpp"
#include "edgerm/error.hpp"
#include "edgerm/group.hpp"

namespace edgerm {

struct CwlWitness {
    std::vector<FiniteGroup> source_groups;
    FiniteGroup domain;
    FiniteGroup edge_group;
    /// edge_symbols[k] = edge symbol represented by element k of edge_group.
    std::vector<Symbol> edge_symbols;
    /// hom[x] = element of edge_group for domain element (= source tuple) x.
    std::vector<Element> hom;

    /// Edge symbol carried for source tuple x.
    Symbol value(std::uint64_t x) const { return edge_symbols[hom[x]]; }
};

/// Definition 1 check: phi is CWL for the given groups iff its image is
/// exactly edge_symbols and it is a homomorphism into edge_group.
inline std::optional<CwlWitness> check_cwl(std::span<const Symbol> phi, const std::vector<FiniteGroup>& groups,
                                           const FiniteGroup& edge_group, const std::vector<Symbol>& edge_symbols) {
    if (groups.empty()) throw DomainError("at least one source group is required");
    auto domain = direct_product(groups);
    if (domain.order() != phi.size())
        throw DomainError("source groups have total order " + std::to_string(domain.order()) + " but the map has " +
                          std::to_string(phi.size()) + " entries");
    if (edge_group.order() != edge_symbols.size())
        throw DomainError("edge group order " + std::to_string(edge_group.order()) + " does not match " +
                          std::to_string(edge_symbols.size()) + " edge symbols");
    // Dense symbol -> element lookup; `none` marks symbols outside the image.
    const Element none = edge_group.order();
    const Symbol top = *std::max_element(edge_symbols.begin(), edge_symbols.end());
    if (top >= (Symbol{1} << 26)) throw DomainError("edge symbols must be below 2^26");
    std::vector<Element> element_of(std::size_t{top} + 1, none);
    for (Element k = 0; k < edge_symbols.size(); ++k) {
        if (element_of[edge_symbols[k]] != none) throw DomainError("edge symbols must be distinct");
        element_of[edge_symbols[k]] = k;
    }

    std::vector<Element> hom(phi.size());
    std::vector<char> hit(edge_symbols.size(), 0);
    for (std::size_t x = 0; x < phi.size(); ++x) {
        if (phi[x] > top || element_of[phi[x]] == none) return std::nullopt;
        hom[x] = element_of[phi[x]];
        hit[hom[x]] = 1;
    }
    if (std::find(hit.begin(), hit.end(), 0) != hit.end()) return std::nullopt;
    if (!is_homomorphism(hom, domain, edge_group)) return std::nullopt;
    return CwlWitness{groups, domain, edge_group, edge_symbols, std::move(hom)};
}

/// check_cwl on the global function of an edge; group orders must equal the
/// source alphabet sizes.
inline std::optional<CwlWitness> check_cwl(const GlobalCodeTable& table, const std::string& edge,
                                           const std::vector<FiniteGroup>& groups, const FiniteGroup& edge_group,
                                           const std::vector<Symbol>& edge_symbols) {
    if (groups.size() != table.source_count())
        throw DomainError("need one group per source, got " + std::to_string(groups.size()));
    for (std::size_t i = 0; i < groups.size(); ++i)
        if (groups[i].order() != table.source_alphabet(i))
            throw DomainError("group for source " + std::to_string(i) + " has order " +
                              std::to_string(groups[i].order()) + " but the alphabet has " +
                              std::to_string(table.source_alphabet(i)) + " symbols");
    for (auto s : edge_symbols)
        if (s >= table.edge_alphabets[table.edge_index(edge)]) throw DomainError("edge symbol outside the edge alphabet");
    return check_cwl(table.edge_values[table.edge_index(edge)], groups, edge_group, edge_symbols);
}

/// The unique edge group (up to labeling) that makes phi a homomorphism
/// from the product of the given groups, if any: the fibers of phi must be
/// the cosets of a normal subgroup. Elements are ordered by smallest member.
inline std::optional<CwlWitness> induce_edge_group(std::span<const Symbol> phi,
                                                   const std::vector<FiniteGroup>& groups) {
    if (groups.empty()) throw DomainError("at least one source group is required");
    auto domain = direct_product(groups);
    if (domain.order() != phi.size()) throw DomainError("source groups do not match the map size");
    const auto id = domain.identity();
    std::vector<Element> ker;
    for (Element x = 0; x < domain.order(); ++x)
        if (phi[x] == phi[id]) ker.push_back(x);
    if (!is_subgroup(domain, ker)) return std::nullopt;
    Subgroup k{domain, ker};
    for (auto g : domain.generators())
        for (auto m : ker)
            if (!k.contains(domain.op(domain.op(g, m), domain.inverse(g)))) return std::nullopt;
    auto label = coset_labels(domain, k);
    std::uint32_t count = 0;
    std::vector<Element> rep;
    std::vector<Symbol> symbols;
    for (Element x = 0; x < domain.order(); ++x) {
        if (label[x] == count) {
            rep.push_back(x);
            symbols.push_back(phi[x]);
            ++count;
        }
        if (phi[x] != symbols[label[x]]) return std::nullopt;
    }
    // Distinct cosets must carry distinct symbols.
    auto sorted = symbols;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return std::nullopt;
    std::vector<std::vector<Element>> t(count, std::vector<Element>(count));
    for (std::uint32_t a = 0; a < count; ++a)
        for (std::uint32_t b = 0; b < count; ++b) t[a][b] = label[domain.op(rep[a], rep[b])];
    auto quotient = FiniteGroup::from_quotient_table(t);
    return check_cwl(phi, groups, quotient, symbols);
}

struct Theorem2Partition {
    AuxiliaryPartition partition;
    /// class_of[i][x_i] = class of symbol x_i of source i.
    std::vector<std::vector<std::uint32_t>> class_of;
    std::vector<std::uint64_t> class_counts;
};

/// Classes x_i ~ x_i' iff phi(x_i, id) = phi(x_i', id); the label of a tuple
/// is its class tuple in mixed-radix order.
inline Theorem2Partition build_theorem2_partition(const CwlWitness& w) {
    Theorem2Partition out;
    const auto n = w.source_groups.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& gi = w.source_groups[i];
        std::map<Element, std::uint32_t> class_by_value;
        std::vector<std::uint32_t> cls(gi.order());
        for (Element x = 0; x < gi.order(); ++x) {
            auto v = w.hom[w.domain.embed(i, x)];
            auto [it, fresh] = class_by_value.try_emplace(v, static_cast<std::uint32_t>(class_by_value.size()));
            cls[x] = it->second;
        }
        out.class_counts.push_back(class_by_value.size());
        out.class_of.push_back(std::move(cls));
    }
    MixedRadix labels(out.class_counts);
    MixedRadix tuples([&] {
        std::vector<std::uint64_t> r;
        for (const auto& g : w.source_groups) r.push_back(g.order());
        return r;
    }());
    out.partition.labels.resize(tuples.size());
    std::vector<std::uint64_t> digits(n);
    for (std::uint64_t x = 0; x < tuples.size(); ++x) {
        tuples.decode(x, digits);
        std::uint64_t y = 0;
        for (std::size_t i = 0; i < n; ++i) y += out.class_of[i][digits[i]] * labels.stride(i);
        out.partition.labels[x] = y;
    }
    return out;
}

/// Lemma 1: all classes of a source have the same size.
inline bool lemma1_verify(const Theorem2Partition& p) {
    for (std::size_t i = 0; i < p.class_of.size(); ++i) {
        std::vector<std::uint64_t> sizes(p.class_counts[i], 0);
        for (auto c : p.class_of[i]) ++sizes[c];
        if (std::adjacent_find(sizes.begin(), sizes.end(), std::not_equal_to<>()) != sizes.end()) return false;
    }
    return true;
}

namespace detail {

inline void require_witness_matches(const GlobalCodeTable& table, const std::string& edge, const CwlWitness& w) {
    const auto& col = table.edge_values[table.edge_index(edge)];
    if (w.hom.size() != col.size()) throw PreconditionError("witness domain does not match the code");
    for (std::uint64_t x = 0; x < col.size(); ++x)
        if (w.value(x) != col[x])
            throw PreconditionError("witness disagrees with the edge function at tuple " + std::to_string(x));
}

}  // namespace detail

/// Theorem 2 removal: Theorem 1 with the class partition, choosing the fiber
/// with the fewest bad tuples (smallest label on ties).
inline Restriction theorem2_remove(const NetworkInstance& inst, const NetworkCode& code, const GlobalCodeTable& table,
                                   const std::string& edge, const CwlWitness& w, const Rational& epsilon,
                                   const EnumerationOptions& opt = {}) {
    detail::require_witness_matches(table, edge, w);
    auto p = build_theorem2_partition(w);
    auto fibers = partition_fibers(table, p.partition);
    const Fiber* best = &fibers.front();
    for (const auto& f : fibers)
        if (f.bad * best->size() < best->bad * f.size()) best = &f;
    auto r = restrict_code(inst, code, table, edge, p.partition, best->label, epsilon, opt);
    r.certificate.method = "theorem2";
    r.certificate.edge_group_order = w.edge_group.order();
    return r;
}

struct PiecewisePiece {
    /// Source tuple indices of S^(k).
    std::vector<std::uint64_t> tuples;
    /// phi^(k) on the whole domain.
    std::vector<Symbol> function;
    /// Edge-group labeling for phi^(k); empty means the shared labeling.
    std::vector<Symbol> edge_symbols;
};

struct PiecewiseCwl {
    std::vector<FiniteGroup> source_groups;
    FiniteGroup edge_group;
    struct Piece {
        std::vector<std::vector<Symbol>> sets;  // S_i^(k), sorted
        std::vector<std::uint64_t> tuples;      // sorted
        CwlWitness witness;
    };
    std::vector<Piece> pieces;

    std::size_t piece_count() const { return pieces.size(); }
};

/// Definition 2 check with product-shaped pieces. Overlapping or missing
/// tuples throw PreconditionError naming them; a non-product piece, a piece
/// where phi disagrees with phi^(k), or a non-CWL phi^(k) gives none.
inline std::optional<PiecewiseCwl> check_piecewise(std::span<const Symbol> phi, const std::vector<FiniteGroup>& groups,
                                                   const FiniteGroup& edge_group,
                                                   const std::vector<Symbol>& edge_symbols,
                                                   const std::vector<PiecewisePiece>& pieces) {
    if (pieces.empty()) throw DomainError("at least one piece is required");
    auto domain = direct_product(groups);
    if (domain.order() != phi.size()) throw DomainError("source groups do not match the map size");
    std::vector<std::int64_t> owner(phi.size(), -1);
    std::vector<std::uint64_t> overlaps;
    for (std::size_t k = 0; k < pieces.size(); ++k)
        for (auto x : pieces[k].tuples) {
            if (x >= phi.size()) throw DomainError("piece tuple index out of range");
            if (owner[x] >= 0) overlaps.push_back(x);
            owner[x] = static_cast<std::int64_t>(k);
        }
    auto list = [](const std::vector<std::uint64_t>& v) {
        std::string s;
        for (std::size_t j = 0; j < v.size() && j < 16; ++j) s += (j ? "," : "") + std::to_string(v[j]);
        if (v.size() > 16) s += ",...";
        return s;
    };
    if (!overlaps.empty()) throw PreconditionError("pieces overlap at tuples " + list(overlaps));
    std::vector<std::uint64_t> missing;
    for (std::uint64_t x = 0; x < phi.size(); ++x)
        if (owner[x] < 0) missing.push_back(x);
    if (!missing.empty()) throw PreconditionError("pieces do not cover tuples " + list(missing));

    std::vector<std::uint64_t> orders;
    for (const auto& g : groups) orders.push_back(g.order());
    MixedRadix radix(orders);
    PiecewiseCwl out{groups, edge_group, {}};
    for (const auto& piece : pieces) {
        PiecewiseCwl::Piece p;
        p.tuples = piece.tuples;
        std::sort(p.tuples.begin(), p.tuples.end());
        p.sets.resize(groups.size());
        for (auto x : p.tuples)
            for (std::size_t i = 0; i < groups.size(); ++i) p.sets[i].push_back(static_cast<Symbol>(radix.digit(x, i)));
        std::uint64_t box = 1;
        for (auto& s : p.sets) {
            s.erase(std::unique((std::sort(s.begin(), s.end()), s.begin()), s.end()), s.end());
            box *= s.size();
        }
        if (box != p.tuples.size()) return std::nullopt;
        if (piece.function.size() != phi.size()) throw DomainError("piece function must cover the whole domain");
        for (auto x : p.tuples)
            if (piece.function[x] != phi[x]) return std::nullopt;
        auto w = check_cwl(piece.function, groups, edge_group,
                           piece.edge_symbols.empty() ? edge_symbols : piece.edge_symbols);
        if (!w) return std::nullopt;
        p.witness = std::move(*w);
        out.pieces.push_back(std::move(p));
    }
    return out;
}

/// Theorem 3 removal for zero-error codes: the first piece with
/// |S^(k)| * K >= |G_S|, then per source the Theorem 2 class meeting S_i^(k)
/// in the most symbols (smallest class on ties).
inline Restriction theorem3_remove(const NetworkInstance& inst, const NetworkCode& code, const GlobalCodeTable& table,
                                   const std::string& edge, const PiecewiseCwl& pw,
                                   const EnumerationOptions& opt = {}) {
    if (table.bad_count != 0) throw PreconditionError("theorem 3 applies to zero-error codes only");
    const auto& col = table.edge_values[table.edge_index(edge)];
    const std::uint64_t K = pw.piece_count();
    const PiecewiseCwl::Piece* chosen = nullptr;
    for (const auto& p : pw.pieces) {
        for (auto x : p.tuples)
            if (p.witness.value(x) != col[x]) throw PreconditionError("piecewise witness disagrees with the edge function");
        if (!chosen && p.tuples.size() * K >= table.tuple_count()) chosen = &p;
    }
    if (!chosen) throw InternalError("no piece reaches the average size");
    auto classes = build_theorem2_partition(chosen->witness);
    std::vector<std::vector<Symbol>> sets;
    for (std::size_t i = 0; i < table.source_count(); ++i) {
        std::vector<std::uint64_t> hits(classes.class_counts[i], 0);
        for (auto s : chosen->sets[i]) ++hits[classes.class_of[i][s]];
        auto c = static_cast<std::uint32_t>(std::max_element(hits.begin(), hits.end()) - hits.begin());
        std::vector<Symbol> set;
        for (auto s : chosen->sets[i])
            if (classes.class_of[i][s] == c) set.push_back(s);
        sets.push_back(std::move(set));
    }
    std::vector<Symbol> first;
    for (const auto& s : sets) first.push_back(s.front());
    auto value = col[table.source_radix.encode(first)];
    const auto alphabet = code.edge_alphabets.at(edge);
    auto r = restrict_to_product(inst, code, table, edge, sets, value, Rational(0), alphabet * K, opt);
    r.certificate.method = "theorem3";
    r.certificate.piece_count = K;
    r.certificate.edge_group_order = pw.edge_group.order();
    return r;
}

struct BalancedRelabel {
    std::uint64_t k = 0;
    std::uint64_t q = 0;
    /// a_label[a] = element (i, j) of Z_k x Z_q, id i*q + j.
    std::vector<Element> a_label;
    /// b_label[b] = element of Z_q.
    std::vector<Element> b_label;
    CwlWitness witness;
};

/// Relabels a balanced g: A -> B (|A| = a.size(), B = [0, b)) so that it
/// becomes the projection Z_k x Z_q -> Z_q: element i of fiber j gets (i, j).
inline BalancedRelabel balanced_to_cwl_relabel(std::span<const Symbol> g, std::uint64_t b) {
    if (b == 0) throw DomainError("empty codomain");
    if (g.size() % b != 0)
        throw PreconditionError("|A| = " + std::to_string(g.size()) + " is not a multiple of |B| = " + std::to_string(b));
    const std::uint64_t k = g.size() / b;
    std::vector<std::vector<std::uint64_t>> fibers(b);
    for (std::uint64_t a = 0; a < g.size(); ++a) {
        if (g[a] >= b) throw DomainError("map value outside the codomain");
        fibers[g[a]].push_back(a);
    }
    for (std::uint64_t j = 0; j < b; ++j)
        if (fibers[j].size() != k)
            throw PreconditionError("map is not balanced: fiber of " + std::to_string(j) + " has " +
                                    std::to_string(fibers[j].size()) + " elements, expected " + std::to_string(k));
    BalancedRelabel out;
    out.k = k;
    out.q = b;
    out.a_label.resize(g.size());
    out.b_label.resize(b);
    for (std::uint64_t j = 0; j < b; ++j) {
        out.b_label[j] = static_cast<Element>(j);
        for (std::uint64_t i = 0; i < k; ++i) out.a_label[fibers[j][i]] = static_cast<Element>(i * b + j);
    }
    auto zq = make_cyclic(b);
    std::vector<Symbol> relabeled(g.size());
    for (std::uint64_t a = 0; a < g.size(); ++a) relabeled[out.a_label[a]] = out.b_label[g[a]];
    std::vector<Symbol> symbols(b);
    std::iota(symbols.begin(), symbols.end(), 0);
    auto w = check_cwl(relabeled, {direct_product({make_cyclic(k), zq})}, zq, symbols);
    if (!w) throw InternalError("relabeled balanced map is not a homomorphism");
    out.witness = std::move(*w);
    return out;
}

struct CwlCharacterization {
    GroupCharacterization characterization;
    std::size_t identities_checked = 0;
    double max_deviation = 0.0;
};

/// Claim 4 construction: G' = prod G_i, G_i' = elements with identity in
/// slot i, G_e' = kernel. Every entropy identity over subsets of the
/// variables is checked against direct enumeration; a failure throws
/// InternalError.
inline CwlCharacterization cwl_to_group_characterization(const CwlWitness& w, std::uint64_t max_order = 1u << 16) {
    const auto& g = w.domain;
    if (g.order() > max_order) throw ResourceError("group too large for entropy enumeration");
    const auto n = w.source_groups.size();
    CwlCharacterization out;
    auto& gc = out.characterization;
    gc.group = g;
    for (std::size_t i = 0; i < n; ++i) {
        gc.names.push_back("s" + std::to_string(i));
        std::vector<Element> members;
        for (Element x = 0; x < g.order(); ++x)
            if (g.components(x)[i] == w.source_groups[i].identity()) members.push_back(x);
        gc.subgroups.push_back(Subgroup{g, std::move(members)});
        gc.sources.push_back(i);
    }
    gc.names.push_back("e");
    gc.subgroups.push_back(kernel(w.hom, g, w.edge_group));

    std::vector<std::vector<Symbol>> cols(n + 1, std::vector<Symbol>(g.order()));
    for (Element x = 0; x < g.order(); ++x) {
        auto comp = g.components(x);
        for (std::size_t i = 0; i < n; ++i) cols[i][x] = comp[i];
        cols[n][x] = w.value(x);
    }
    std::vector<std::uint64_t> alph;
    for (const auto& gi : w.source_groups) alph.push_back(gi.order());
    alph.push_back(*std::max_element(w.edge_symbols.begin(), w.edge_symbols.end()) + std::uint64_t{1});

    const std::uint64_t subsets = std::uint64_t{1} << (n + 1);
    for (std::uint64_t mask = 1; mask < subsets; ++mask) {
        std::vector<std::size_t> vars;
        std::vector<Column> columns;
        for (std::size_t v = 0; v <= n; ++v)
            if (mask >> v & 1) {
                vars.push_back(v);
                columns.push_back({cols[v], alph[v]});
            }
        double enumerated = joint_entropy_columns(columns, g.order());
        double formula = induced_entropy(gc, vars);
        double dev = std::abs(enumerated - formula);
        out.max_deviation = std::max(out.max_deviation, dev);
        ++out.identities_checked;
        if (dev > entropy_tolerance_bits)
            throw InternalError("entropy identity fails for variable mask " + std::to_string(mask));
    }
    return out;
}

/// Abelian groups of order n up to isomorphism, each as a product of cyclic
/// prime-power factors.
inline std::vector<FiniteGroup> abelian_group_types(std::uint64_t n) {
    if (n == 0) throw DomainError("group order must be positive");
    std::vector<std::pair<std::uint64_t, unsigned>> primes;
    auto m = n;
    for (std::uint64_t p = 2; p * p <= m; ++p) {
        unsigned e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (e) primes.emplace_back(p, e);
    }
    if (m > 1) primes.emplace_back(m, 1);

    auto partitions = [](unsigned e) {
        std::vector<std::vector<unsigned>> out;
        std::vector<unsigned> cur;
        auto rec = [&](auto&& self, unsigned left, unsigned max_part) -> void {
            if (left == 0) {
                out.push_back(cur);
                return;
            }
            for (unsigned p = std::min(left, max_part); p >= 1; --p) {
                cur.push_back(p);
                self(self, left - p, p);
                cur.pop_back();
            }
        };
        rec(rec, e, e);
        return out;
    };

    std::vector<std::vector<std::uint64_t>> shapes{{}};
    for (auto [p, e] : primes) {
        std::vector<std::vector<std::uint64_t>> next;
        for (const auto& shape : shapes)
            for (const auto& part : partitions(e)) {
                auto s = shape;
                for (auto k : part) {
                    std::uint64_t q = 1;
                    for (unsigned j = 0; j < k; ++j) q *= p;
                    s.push_back(q);
                }
                next.push_back(std::move(s));
            }
        shapes = std::move(next);
    }
    std::vector<FiniteGroup> out;
    for (const auto& s : shapes) {
        if (s.empty()) {
            out.push_back(make_cyclic(1));
        } else if (s.size() == 1) {
            out.push_back(make_cyclic(s[0]));
        } else {
            std::vector<FiniteGroup> f;
            for (auto q : s) f.push_back(make_cyclic(q));
            out.push_back(direct_product(f));
        }
    }
    return out;
}

struct CwlSearchResult {
    NetworkCode code;
    CwlWitness witness;
    std::uint64_t assignments_tried = 0;
};

namespace detail {

inline std::uint64_t saturating_factorial(std::uint64_t n, std::uint64_t cap) {
    std::uint64_t f = 1;
    for (std::uint64_t k = 2; k <= n; ++k) {
        if (f > cap / k) return cap;
        f *= k;
    }
    return f;
}

/// Permutation of [0, n) with lexicographic rank r.
inline std::vector<Element> unrank_permutation(std::uint64_t n, std::uint64_t r) {
    std::vector<Element> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<Element> out;
    for (std::uint64_t k = n; k >= 1; --k) {
        auto f = saturating_factorial(k - 1, ~std::uint64_t{0});
        auto idx = r / f;
        r %= f;
        out.push_back(pool[idx]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
    }
    return out;
}

}  // namespace detail

/// Bounded search for source group structures (abelian types and symbol
/// relabelings, identity labeling first) under which the edge function of
/// the code is CWL. Each assignment costs one unit of budget. The returned
/// code is the input code, which keeps its feasibility verdict; none means
/// inconclusive.
inline std::optional<CwlSearchResult> cwl_search(const NetworkInstance& inst, const NetworkCode& code,
                                                 const std::string& edge, std::uint64_t budget,
                                                 const EnumerationOptions& opt = {}) {
    if (budget == 0) return std::nullopt;
    auto table = build_global_table(inst, code, opt);
    const auto& phi = table.edge_values[table.edge_index(edge)];
    const auto n = table.source_count();

    std::vector<std::vector<FiniteGroup>> types(n);
    std::vector<std::uint64_t> perms(n);
    std::vector<std::uint64_t> counts(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto order = table.source_alphabet(i);
        if (order > default_table_verify_bound) return std::nullopt;
        types[i] = abelian_group_types(order);
        perms[i] = detail::saturating_factorial(order, budget);
        counts[i] = std::min<std::uint64_t>(budget, types[i].size() * perms[i]);
    }
    std::vector<std::uint64_t> digit(n, 0);
    std::uint64_t tried = 0;
    while (tried < budget) {
        std::vector<FiniteGroup> groups;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& base = types[i][digit[i] / perms[i]];
            auto rank = digit[i] % perms[i];
            if (rank == 0) {
                groups.push_back(base);
            } else {
                auto perm = detail::unrank_permutation(base.order(), rank);
                groups.push_back(relabeled(base, perm));
            }
        }
        ++tried;
        if (auto w = induce_edge_group(phi, groups)) return CwlSearchResult{code, std::move(*w), tried};
        std::size_t k = 0;
        for (; k < n; ++k) {
            if (++digit[k] < counts[k]) break;
            digit[k] = 0;
        }
        if (k == n) break;
    }
    return std::nullopt;
}

}  // namespace edgerm
