#pragma once

// Group-characterizable random variables. A uniform element g of a finite
// group G determines one variable per named subgroup G_f, namely the coset
// gG_f. Joint entropies are log-ratios of group orders.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "edgerm/error.hpp"
#include "edgerm/group.hpp"

namespace edgerm {

struct GroupCharacterization {
    FiniteGroup group;
    std::vector<std::string> names;
    std::vector<Subgroup> subgroups;
    /// Indices into names of the source variables.
    std::vector<std::size_t> sources;

    bool abelian() const { return group.is_abelian(); }

    std::size_t index(const std::string& name) const {
        for (std::size_t k = 0; k < names.size(); ++k)
            if (names[k] == name) return k;
        throw DomainError("unknown variable '" + name + "'");
    }

    const Subgroup& subgroup(const std::string& name) const { return subgroups[index(name)]; }
};

/// Throws PreconditionError unless every subgroup is a verified subgroup of
/// the group and names are distinct.
inline void validate_characterization(const GroupCharacterization& gc) {
    if (gc.names.size() != gc.subgroups.size()) throw PreconditionError("one subgroup per variable name is required");
    for (std::size_t a = 0; a < gc.names.size(); ++a)
        for (std::size_t b = a + 1; b < gc.names.size(); ++b)
            if (gc.names[a] == gc.names[b]) throw PreconditionError("duplicate variable '" + gc.names[a] + "'");
    for (std::size_t k = 0; k < gc.subgroups.size(); ++k)
        if (!is_subgroup(gc.group, gc.subgroups[k].members))
            throw PreconditionError("variable '" + gc.names[k] + "' is not given by a subgroup");
    for (auto s : gc.sources)
        if (s >= gc.names.size()) throw PreconditionError("source index out of range");
}

/// The intersection of G_f over the given variables (G for the empty set).
inline Subgroup intersection_of(const GroupCharacterization& gc, const std::vector<std::size_t>& vars) {
    Subgroup acc = whole_group(gc.group);
    for (auto v : vars) {
        if (v >= gc.subgroups.size()) throw DomainError("unknown variable index " + std::to_string(v));
        acc = intersect(acc, gc.subgroups[v]);
    }
    return acc;
}

/// H(X_alpha) = log2(|G| / |intersection of G_f over alpha|).
inline double induced_entropy(const GroupCharacterization& gc, const std::vector<std::size_t>& vars) {
    if (vars.empty()) return 0.0;
    auto inter = intersection_of(gc, vars);
    return std::log2(static_cast<double>(gc.group.order()) / static_cast<double>(inter.size()));
}

inline double induced_entropy(const GroupCharacterization& gc, const std::vector<std::string>& vars) {
    std::vector<std::size_t> idx;
    for (const auto& v : vars) idx.push_back(gc.index(v));
    return induced_entropy(gc, idx);
}

/// Per-variable coset labels of every group element: labels[f][g].
inline std::vector<std::vector<std::uint32_t>> coset_variables(const GroupCharacterization& gc) {
    std::vector<std::vector<std::uint32_t>> out;
    for (const auto& h : gc.subgroups) out.push_back(coset_labels(gc.group, h));
    return out;
}

}  // namespace edgerm
