#pragma once

// Finite groups with dense element ids.
//
// Every group has elements 0..order-1. Cyclic groups are additive Z_n.
// Direct products number their elements in mixed-radix order with the first
// factor most significant, so (a, b) in A x B has id a * |B| + b. Arbitrary
// groups are given as Cayley tables and are verified against the group
// axioms when they are built.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "edgerm/error.hpp"
#include "edgerm/mixed_radix.hpp"

namespace edgerm {

using Element = std::uint32_t;

/// Largest Cayley table accepted by FiniteGroup::from_table.
inline constexpr std::size_t default_table_verify_bound = 512;

class FiniteGroup {
public:
    enum class Kind { cyclic, product, table };

    FiniteGroup() : FiniteGroup(cyclic(1)) {}

    static FiniteGroup cyclic(std::uint64_t n) {
        if (n == 0) throw DomainError("cyclic group of order 0");
        if (n > 0xffffffffULL) throw DomainError("cyclic group order exceeds 32-bit element ids");
        auto impl = std::make_shared<Impl>();
        impl->kind = Kind::cyclic;
        impl->order = static_cast<Element>(n);
        impl->abelian = true;
        impl->moduli = {impl->order};
        impl->leaf_radix = MixedRadix({n});
        if (n > 1) impl->generators = {1};
        return FiniteGroup(std::move(impl));
    }

    static FiniteGroup product(std::vector<FiniteGroup> factors) {
        if (factors.empty()) throw DomainError("direct product of an empty factor list");
        auto impl = std::make_shared<Impl>();
        impl->kind = Kind::product;
        std::vector<std::uint64_t> radices;
        for (const auto& f : factors) radices.push_back(f.order());
        impl->radix = MixedRadix(radices);
        if (impl->radix.size() > 0xffffffffULL) throw DomainError("direct product order exceeds 32-bit element ids");
        impl->order = static_cast<Element>(impl->radix.size());
        impl->abelian = std::all_of(factors.begin(), factors.end(), [](const FiniteGroup& g) { return g.is_abelian(); });

        // Nested products share the same id encoding as the flattened product,
        // so ops can run on the leaf factors directly.
        bool all_cyclic = true;
        for (const auto& f : factors) {
            if (f.impl_->moduli.empty()) all_cyclic = false;
            for (auto m : f.impl_->moduli) impl->moduli.push_back(m);
        }
        if (!all_cyclic) impl->moduli.clear();
        if (!impl->moduli.empty()) {
            std::vector<std::uint64_t> leaf(impl->moduli.begin(), impl->moduli.end());
            impl->leaf_radix = MixedRadix(leaf);
        }

        for (std::size_t k = 0; k < factors.size(); ++k) {
            for (auto g : factors[k].generators()) {
                impl->generators.push_back(static_cast<Element>(g * impl->radix.stride(k)));
            }
        }
        impl->factors = std::move(factors);
        return FiniteGroup(std::move(impl));
    }

    /// Builds a group from a Cayley table: table[a][b] = a*b. Rejects tables
    /// larger than verify_bound, and any table violating closure, identity,
    /// inverses or associativity.
    static FiniteGroup from_table(const std::vector<std::vector<Element>>& table,
                                  std::size_t verify_bound = default_table_verify_bound) {
        const std::size_t n = table.size();
        if (n == 0) throw DomainError("Cayley table of order 0");
        if (n > verify_bound)
            throw DomainError("Cayley table of order " + std::to_string(n) + " exceeds verification bound " +
                              std::to_string(verify_bound));
        return build_table(table, true);
    }

    /// Table of a quotient G/N computed from a verified group G and a
    /// verified normal subgroup N. Associativity is inherited from G, so only
    /// closure, identity and inverses are checked and no size bound applies.
    static FiniteGroup from_quotient_table(const std::vector<std::vector<Element>>& table) {
        return build_table(table, false);
    }

private:
    static FiniteGroup build_table(const std::vector<std::vector<Element>>& table, bool check_associativity) {
        const std::size_t n = table.size();
        if (n == 0) throw DomainError("Cayley table of order 0");
        auto impl = std::make_shared<Impl>();
        impl->kind = Kind::table;
        impl->order = static_cast<Element>(n);
        impl->table.resize(n * n);
        for (std::size_t a = 0; a < n; ++a) {
            if (table[a].size() != n) throw DomainError("Cayley table is not square");
            for (std::size_t b = 0; b < n; ++b) {
                if (table[a][b] >= n) throw DomainError("Cayley table entry out of range (not closed)");
                impl->table[a * n + b] = table[a][b];
            }
        }
        auto at = [&](std::size_t a, std::size_t b) { return impl->table[a * n + b]; };

        std::optional<Element> identity;
        for (std::size_t e = 0; e < n && !identity; ++e) {
            bool ok = true;
            for (std::size_t x = 0; x < n && ok; ++x) ok = at(e, x) == x && at(x, e) == x;
            if (ok) identity = static_cast<Element>(e);
        }
        if (!identity) throw DomainError("Cayley table has no two-sided identity");
        impl->identity = *identity;

        impl->inverses.assign(n, 0);
        for (std::size_t x = 0; x < n; ++x) {
            bool found = false;
            for (std::size_t y = 0; y < n && !found; ++y) {
                if (at(x, y) == *identity && at(y, x) == *identity) {
                    impl->inverses[x] = static_cast<Element>(y);
                    found = true;
                }
            }
            if (!found) throw DomainError("element " + std::to_string(x) + " has no two-sided inverse");
        }
        for (std::size_t a = 0; a < n && check_associativity; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c)
                    if (at(at(a, b), c) != at(a, at(b, c)))
                        throw DomainError("Cayley table is not associative at (" + std::to_string(a) + "," +
                                          std::to_string(b) + "," + std::to_string(c) + ")");

        impl->abelian = true;
        for (std::size_t a = 0; a < n && impl->abelian; ++a)
            for (std::size_t b = a + 1; b < n && impl->abelian; ++b) impl->abelian = at(a, b) == at(b, a);

        FiniteGroup g(impl);
        impl->generators = g.greedy_generators();
        return g;
    }

public:

    Kind kind() const { return impl_->kind; }
    Element order() const { return impl_->order; }
    Element identity() const { return impl_->identity; }
    bool is_abelian() const { return impl_->abelian; }
    const std::vector<Element>& generators() const { return impl_->generators; }
    const std::vector<FiniteGroup>& factors() const { return impl_->factors; }

    /// Moduli of the leaf cyclic factors when the group is a (possibly
    /// nested) product of cyclic groups; empty otherwise.
    const std::vector<Element>& cyclic_moduli() const { return impl_->moduli; }

    /// Table rows for table-backed groups.
    const std::vector<Element>& raw_table() const { return impl_->table; }

    bool contains(std::uint64_t x) const { return x < impl_->order; }

    void check(std::uint64_t x) const {
        if (!contains(x))
            throw DomainError("element id " + std::to_string(x) + " out of range for group of order " +
                              std::to_string(order()));
    }

    Element op(Element a, Element b) const {
        const Impl& g = *impl_;
        if (!g.moduli.empty()) {
            if (g.moduli.size() == 1) {
                std::uint64_t s = std::uint64_t{a} + b;
                return static_cast<Element>(s >= g.order ? s - g.order : s);
            }
            Element out = 0;
            for (std::size_t k = 0; k < g.moduli.size(); ++k) {
                auto stride = g.leaf_radix.stride(k);
                auto m = g.moduli[k];
                auto da = (a / stride) % m;
                auto db = (b / stride) % m;
                auto d = da + db;
                if (d >= m) d -= m;
                out += static_cast<Element>(d * stride);
            }
            return out;
        }
        switch (g.kind) {
        case Kind::table: return g.table[std::size_t{a} * g.order + b];
        case Kind::product: {
            Element out = 0;
            for (std::size_t k = 0; k < g.factors.size(); ++k) {
                auto stride = g.radix.stride(k);
                auto m = g.factors[k].order();
                auto da = static_cast<Element>((a / stride) % m);
                auto db = static_cast<Element>((b / stride) % m);
                out += static_cast<Element>(g.factors[k].op(da, db) * stride);
            }
            return out;
        }
        case Kind::cyclic: break;
        }
        throw InternalError("unreachable group kind");
    }

    Element inverse(Element a) const {
        const Impl& g = *impl_;
        if (!g.moduli.empty()) {
            Element out = 0;
            for (std::size_t k = 0; k < g.moduli.size(); ++k) {
                auto stride = g.leaf_radix.stride(k);
                auto m = g.moduli[k];
                auto d = (a / stride) % m;
                out += static_cast<Element>(((m - d) % m) * stride);
            }
            return out;
        }
        if (g.kind == Kind::table) return g.inverses[a];
        Element out = 0;
        for (std::size_t k = 0; k < g.factors.size(); ++k) {
            auto stride = g.radix.stride(k);
            auto da = static_cast<Element>((a / stride) % g.factors[k].order());
            out += static_cast<Element>(g.factors[k].inverse(da) * stride);
        }
        return out;
    }

    /// Component ids of a product element, one per direct factor.
    std::vector<Element> components(Element a) const {
        if (impl_->kind != Kind::product) return {a};
        std::vector<Element> out;
        for (std::size_t k = 0; k < impl_->factors.size(); ++k)
            out.push_back(static_cast<Element>(impl_->radix.digit(a, k)));
        return out;
    }

    Element from_components(std::span<const Element> parts) const {
        if (impl_->kind != Kind::product) {
            if (parts.size() != 1) throw DomainError("non-product group takes exactly one component");
            check(parts[0]);
            return parts[0];
        }
        return static_cast<Element>(impl_->radix.encode(parts));
    }

    /// Embeds a factor element into the product with identities elsewhere.
    Element embed(std::size_t factor, Element x) const {
        if (impl_->kind != Kind::product) return x;
        std::vector<Element> parts;
        for (const auto& f : impl_->factors) parts.push_back(f.identity());
        parts.at(factor) = x;
        return from_components(parts);
    }

    std::string describe() const {
        switch (impl_->kind) {
        case Kind::cyclic: return "Z" + std::to_string(order());
        case Kind::table: return "T" + std::to_string(order());
        case Kind::product: {
            std::string s;
            for (const auto& f : impl_->factors) s += (s.empty() ? "" : "x") + f.describe();
            return s;
        }
        }
        return "?";
    }

private:
    struct Impl {
        Kind kind = Kind::cyclic;
        Element order = 1;
        Element identity = 0;
        bool abelian = true;
        std::vector<FiniteGroup> factors;
        MixedRadix radix;
        std::vector<Element> moduli;  // leaf cyclic moduli, empty unless all leaves are cyclic
        MixedRadix leaf_radix;
        std::vector<Element> table;
        std::vector<Element> inverses;
        std::vector<Element> generators;
    };

    explicit FiniteGroup(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}

    std::vector<Element> greedy_generators() const {
        std::vector<Element> gens;
        std::vector<char> in_span(order(), 0);
        std::vector<Element> span_members{identity()};
        in_span[identity()] = 1;
        for (Element x = 0; x < order(); ++x) {
            if (in_span[x]) continue;
            gens.push_back(x);
            // re-close the span under right multiplication by all generators
            std::vector<Element> frontier = span_members;
            while (!frontier.empty()) {
                std::vector<Element> next;
                for (auto a : frontier)
                    for (auto g : gens) {
                        auto b = op(a, g);
                        if (!in_span[b]) {
                            in_span[b] = 1;
                            span_members.push_back(b);
                            next.push_back(b);
                        }
                    }
                frontier = std::move(next);
            }
        }
        return gens;
    }

    std::shared_ptr<const Impl> impl_;
};

inline FiniteGroup make_cyclic(std::uint64_t n) { return FiniteGroup::cyclic(n); }

inline FiniteGroup direct_product(std::vector<FiniteGroup> factors) {
    return FiniteGroup::product(std::move(factors));
}

/// Full Cayley table of any group (for relabeling and serialization).
inline std::vector<std::vector<Element>> cayley_table(const FiniteGroup& g) {
    std::vector<std::vector<Element>> t(g.order(), std::vector<Element>(g.order()));
    for (Element a = 0; a < g.order(); ++a)
        for (Element b = 0; b < g.order(); ++b) t[a][b] = g.op(a, b);
    return t;
}

/// The same abstract group with element ids replaced by symbols:
/// symbol s stands for element symbol_to_element[s] of g.
inline FiniteGroup relabeled(const FiniteGroup& g, std::span<const Element> symbol_to_element,
                             std::size_t verify_bound = default_table_verify_bound) {
    if (symbol_to_element.size() != g.order()) throw DomainError("relabeling size does not match group order");
    std::vector<Element> element_to_symbol(g.order(), g.order());
    for (Element s = 0; s < g.order(); ++s) {
        g.check(symbol_to_element[s]);
        if (element_to_symbol[symbol_to_element[s]] != g.order()) throw DomainError("relabeling is not a bijection");
        element_to_symbol[symbol_to_element[s]] = s;
    }
    std::vector<std::vector<Element>> t(g.order(), std::vector<Element>(g.order()));
    for (Element a = 0; a < g.order(); ++a)
        for (Element b = 0; b < g.order(); ++b)
            t[a][b] = element_to_symbol[g.op(symbol_to_element[a], symbol_to_element[b])];
    return FiniteGroup::from_table(t, verify_bound);
}

struct Subgroup {
    FiniteGroup parent;
    std::vector<Element> members;  // sorted ascending

    std::size_t size() const { return members.size(); }
    bool contains(Element x) const { return std::binary_search(members.begin(), members.end(), x); }
    bool operator==(const Subgroup& other) const { return members == other.members; }
};

inline std::vector<Element> sorted_unique(std::vector<Element> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

/// True iff subset holds the identity and is closed under op and inverse.
inline bool is_subgroup(const FiniteGroup& g, std::span<const Element> subset) {
    std::vector<char> in(g.order(), 0);
    for (auto x : subset) {
        g.check(x);
        in[x] = 1;
    }
    if (!in[g.identity()]) return false;
    for (auto a : subset) {
        if (!in[g.inverse(a)]) return false;
        for (auto b : subset)
            if (!in[g.op(a, b)]) return false;
    }
    return true;
}

inline Subgroup make_subgroup(const FiniteGroup& g, std::vector<Element> members) {
    members = sorted_unique(std::move(members));
    if (!is_subgroup(g, members)) throw PreconditionError("element set is not a subgroup of " + g.describe());
    return Subgroup{g, std::move(members)};
}

inline Subgroup trivial_subgroup(const FiniteGroup& g) { return Subgroup{g, {g.identity()}}; }

inline Subgroup whole_group(const FiniteGroup& g) {
    std::vector<Element> all(g.order());
    for (Element x = 0; x < g.order(); ++x) all[x] = x;
    return Subgroup{g, std::move(all)};
}

/// Smallest subgroup containing gens.
inline Subgroup generated_subgroup(const FiniteGroup& g, std::span<const Element> gens) {
    std::vector<char> in(g.order(), 0);
    std::vector<Element> members{g.identity()};
    in[g.identity()] = 1;
    std::vector<Element> frontier = members;
    for (auto x : gens) g.check(x);
    while (!frontier.empty()) {
        std::vector<Element> next;
        for (auto a : frontier)
            for (auto s : gens) {
                auto b = g.op(a, s);
                if (!in[b]) {
                    in[b] = 1;
                    members.push_back(b);
                    next.push_back(b);
                }
            }
        frontier = std::move(next);
    }
    return Subgroup{g, sorted_unique(std::move(members))};
}

inline Subgroup intersect(const Subgroup& a, const Subgroup& b) {
    std::vector<Element> out;
    std::set_intersection(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
                          std::back_inserter(out));
    return Subgroup{a.parent, std::move(out)};
}

/// The set product HK = {hk}. Throws unless it is a subgroup (always the
/// case when the parent is abelian).
inline Subgroup subgroup_product(const Subgroup& h, const Subgroup& k) {
    std::vector<Element> out;
    out.reserve(h.size() * k.size());
    for (auto a : h.members)
        for (auto b : k.members) out.push_back(h.parent.op(a, b));
    return make_subgroup(h.parent, std::move(out));
}

inline bool is_subset(const Subgroup& a, const Subgroup& b) {
    return std::includes(b.members.begin(), b.members.end(), a.members.begin(), a.members.end());
}

/// Left coset index of every element: coset gH gets the index of the order
/// in which its smallest element appears.
inline std::vector<std::uint32_t> coset_labels(const FiniteGroup& g, const Subgroup& h) {
    if (!is_subgroup(g, h.members)) throw PreconditionError("cosets of a non-subgroup");
    constexpr auto unset = static_cast<std::uint32_t>(-1);
    std::vector<std::uint32_t> label(g.order(), unset);
    std::uint32_t next = 0;
    for (Element x = 0; x < g.order(); ++x) {
        if (label[x] != unset) continue;
        for (auto m : h.members) label[g.op(x, m)] = next;
        ++next;
    }
    return label;
}

/// Left cosets gH as a partition of the elements, ordered by smallest member.
inline std::vector<std::vector<Element>> cosets(const FiniteGroup& g, const Subgroup& h) {
    auto label = coset_labels(g, h);
    std::uint32_t count = 0;
    for (auto l : label) count = std::max(count, l + 1);
    std::vector<std::vector<Element>> cells(count);
    for (Element x = 0; x < g.order(); ++x) cells[label[x]].push_back(x);
    return cells;
}

namespace detail {

inline void check_map(std::span<const Element> f, const FiniteGroup& dom, const FiniteGroup& cod) {
    if (f.size() != dom.order())
        throw DomainError("map has " + std::to_string(f.size()) + " entries but domain order is " +
                          std::to_string(dom.order()));
    for (auto v : f) cod.check(v);
}

}  // namespace detail

/// True iff f(a*b) = f(a)*f(b) for all a, b. Checked as f(identity) =
/// identity plus f(a*s) = f(a)*f(s) for every a and every generator s, which
/// is equivalent to the all-pairs law and costs |dom| * |generators|. For a
/// product of cyclic groups into an abelian group a linear-time equivalent
/// test is used.
inline bool is_homomorphism(std::span<const Element> f, const FiniteGroup& dom, const FiniteGroup& cod) {
    detail::check_map(f, dom, cod);
    if (f[dom.identity()] != cod.identity()) return false;
    const auto& gens = dom.generators();
    const auto& moduli = dom.cyclic_moduli();
    if (!moduli.empty() && cod.is_abelian()) {
        // Into an abelian group, f is a homomorphism iff every generator
        // image has order dividing its factor's modulus and f(a) is the sum
        // of digit multiples of those images. The odometer keeps that sum
        // with one operation per changed digit.
        std::vector<std::uint64_t> strides(moduli.size(), 1);
        for (std::size_t k = moduli.size() - 1; k-- > 0;) strides[k] = strides[k + 1] * moduli[k + 1];
        std::vector<Element> img(moduli.size());
        for (std::size_t k = 0; k < moduli.size(); ++k) {
            img[k] = moduli[k] > 1 ? f[strides[k]] : cod.identity();
            Element p = cod.identity();
            for (std::uint64_t r = 0; r < moduli[k]; ++r) p = cod.op(p, img[k]);
            if (p != cod.identity()) return false;
        }
        std::vector<Element> digits(moduli.size(), 0);
        Element v = cod.identity();
        for (std::uint64_t a = 0; a < dom.order(); ++a) {
            if (f[a] != v) return false;
            for (std::size_t k = moduli.size(); k-- > 0;) {
                v = cod.op(v, img[k]);
                if (++digits[k] < moduli[k]) break;
                digits[k] = 0;
            }
        }
        return true;
    }
    if (!moduli.empty()) {
        // Odometer walk: a*s_k is a digit increment in leaf factor k.
        std::vector<std::uint64_t> strides(moduli.size(), 1);
        for (std::size_t k = moduli.size() - 1; k-- > 0;) strides[k] = strides[k + 1] * moduli[k + 1];
        std::vector<Element> digits(moduli.size(), 0);
        std::vector<Element> gen_images(moduli.size());
        for (std::size_t k = 0; k < moduli.size(); ++k)
            gen_images[k] = moduli[k] > 1 ? f[strides[k]] : cod.identity();
        for (std::uint64_t a = 0; a < dom.order(); ++a) {
            for (std::size_t k = 0; k < moduli.size(); ++k) {
                if (moduli[k] == 1) continue;
                std::uint64_t b = digits[k] + 1 < moduli[k] ? a + strides[k] : a - (moduli[k] - 1) * strides[k];
                if (f[b] != cod.op(f[a], gen_images[k])) return false;
            }
            for (std::size_t k = moduli.size(); k-- > 0;) {
                if (++digits[k] < moduli[k]) break;
                digits[k] = 0;
            }
        }
        return true;
    }
    for (Element a = 0; a < dom.order(); ++a)
        for (auto s : gens)
            if (f[dom.op(a, s)] != cod.op(f[a], f[s])) return false;
    return true;
}

/// Preimage of the codomain identity under a verified homomorphism.
inline Subgroup kernel(std::span<const Element> f, const FiniteGroup& dom, const FiniteGroup& cod) {
    if (!is_homomorphism(f, dom, cod)) throw PreconditionError("kernel of a map that is not a homomorphism");
    std::vector<Element> members;
    for (Element x = 0; x < dom.order(); ++x)
        if (f[x] == cod.identity()) members.push_back(x);
    return Subgroup{dom, std::move(members)};
}

/// Image of a map as a sorted element list.
inline std::vector<Element> image(std::span<const Element> f) {
    return sorted_unique(std::vector<Element>(f.begin(), f.end()));
}

/// A subgroup as a standalone table group whose element k is members[k].
inline FiniteGroup subgroup_as_group(const Subgroup& h, std::size_t verify_bound = default_table_verify_bound) {
    const auto n = h.size();
    std::vector<std::vector<Element>> t(n, std::vector<Element>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            auto prod = h.parent.op(h.members[a], h.members[b]);
            auto it = std::lower_bound(h.members.begin(), h.members.end(), prod);
            if (it == h.members.end() || *it != prod) throw PreconditionError("subgroup is not closed");
            t[a][b] = static_cast<Element>(it - h.members.begin());
        }
    return FiniteGroup::from_table(t, verify_bound);
}

/// Every subgroup of a small group, smallest first. Intended for groups of
/// order up to a few hundred.
inline std::vector<Subgroup> all_subgroups(const FiniteGroup& g, std::size_t max_order = 256) {
    if (g.order() > max_order) throw ResourceError("subgroup enumeration limited to order " + std::to_string(max_order));
    std::set<std::vector<Element>> seen;
    std::vector<Subgroup> out;
    std::vector<Subgroup> frontier{trivial_subgroup(g)};
    seen.insert(frontier.front().members);
    while (!frontier.empty()) {
        std::vector<Subgroup> next;
        for (const auto& h : frontier) {
            out.push_back(h);
            for (Element x = 0; x < g.order(); ++x) {
                if (h.contains(x)) continue;
                auto gens = h.members;
                gens.push_back(x);
                auto bigger = generated_subgroup(g, gens);
                if (seen.insert(bigger.members).second) next.push_back(std::move(bigger));
            }
        }
        frontier = std::move(next);
    }
    std::stable_sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
        return a.size() != b.size() ? a.size() < b.size() : a.members < b.members;
    });
    return out;
}

}  // namespace edgerm
