#pragma once

// Explicit network codes and exact feasibility by exhaustive enumeration.
//
// Every encoder and decoder is a total table. Encoder inputs are the
// messages on In(u) sorted by edge id (or the source message when u is a
// source), indexed in mixed-radix order with the first edge most
// significant. Source tuples are indexed the same way over the sources in
// instance order. Sources are uniform and independent, so the error of a
// code is the exact fraction of source tuples some terminal decodes wrongly.

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "edgerm/entropy.hpp"
#include "edgerm/error.hpp"
#include "edgerm/mixed_radix.hpp"
#include "edgerm/network.hpp"
#include "edgerm/parallel.hpp"
#include "edgerm/rational.hpp"

namespace edgerm {

inline constexpr std::uint64_t default_enumeration_cap = std::uint64_t{1} << 24;

struct EnumerationOptions {
    std::uint64_t cap = default_enumeration_cap;
    unsigned workers = 1;
};

struct NetworkCode {
    unsigned blocklength = 1;
    std::vector<std::uint64_t> source_alphabets;
    std::map<std::string, std::uint64_t> edge_alphabets;
    std::map<std::string, std::vector<Symbol>> encoders;
    /// decoders[t][input index] = demanded source symbols in source order.
    std::map<std::string, std::vector<std::vector<Symbol>>> decoders;

    bool operator==(const NetworkCode&) const = default;
};

/// A code bound to its instance, with tables validated and evaluation order
/// fixed.
class CompiledCode {
public:
    struct Step {
        std::size_t edge = 0;
        std::ptrdiff_t source = -1;  // >= 0 when the tail is a source
        std::vector<std::size_t> inputs;
        MixedRadix radix;
        const std::vector<Symbol>* table = nullptr;
    };

    struct Decoder {
        std::size_t terminal = 0;
        std::vector<std::size_t> inputs;
        MixedRadix radix;
        std::vector<std::size_t> demanded;
        const std::vector<std::vector<Symbol>>* table = nullptr;
    };

    CompiledCode(const NetworkInstance& inst, const NetworkCode& code) : inst_(&inst), code_(&code) {
        if (code.blocklength < 1) throw MalformedError("blocklength must be positive");
        if (code.source_alphabets.size() != inst.sources.size())
            throw MalformedError("code declares " + std::to_string(code.source_alphabets.size()) +
                                 " source alphabets for " + std::to_string(inst.sources.size()) + " sources");
        for (auto a : code.source_alphabets)
            if (a < 1 || a > 0xffffffffULL) throw MalformedError("source alphabet size out of range");
        for (const auto& e : inst.edges) {
            auto it = code.edge_alphabets.find(e.id);
            if (it == code.edge_alphabets.end()) throw MalformedError("code has no alphabet for edge '" + e.id + "'");
            if (it->second < 1 || it->second > 0xffffffffULL)
                throw MalformedError("edge alphabet size out of range for '" + e.id + "'");
            edge_alphabet_.push_back(it->second);
        }
        for (const auto& [id, size] : code.edge_alphabets)
            if (!inst.has_edge(id)) throw MalformedError("code has alphabet for unknown edge '" + id + "'");
        for (const auto& [id, table] : code.encoders)
            if (!inst.has_edge(id)) throw MalformedError("code has encoder for unknown edge '" + id + "'");
        for (const auto& [t, table] : code.decoders) {
            if (std::find(inst.terminals.begin(), inst.terminals.end(), t) == inst.terminals.end())
                throw MalformedError("code has decoder for unknown terminal '" + t + "'");
        }

        source_radix_ = MixedRadix(code.source_alphabets);
        for (auto k : topological_order(inst)) {
            const auto& e = inst.edges[k];
            Step step;
            step.edge = k;
            step.source = inst.source_at(e.tail);
            std::vector<std::uint64_t> radices;
            if (step.source >= 0) {
                radices.push_back(code.source_alphabets[static_cast<std::size_t>(step.source)]);
            } else {
                step.inputs = inst.in_edges(e.tail);
                for (auto f : step.inputs) radices.push_back(edge_alphabet_[f]);
            }
            step.radix = MixedRadix(radices);
            auto it = code.encoders.find(e.id);
            if (it == code.encoders.end()) throw MalformedError("code has no encoder for edge '" + e.id + "'");
            if (it->second.size() != step.radix.size())
                throw MalformedError("encoder for edge '" + e.id + "' has " + std::to_string(it->second.size()) +
                                     " entries, expected " + std::to_string(step.radix.size()));
            for (auto v : it->second)
                if (v >= edge_alphabet_[k])
                    throw MalformedError("encoder for edge '" + e.id + "' emits symbol " + std::to_string(v) +
                                         " outside its alphabet");
            step.table = &it->second;
            steps_.push_back(std::move(step));
        }

        for (std::size_t t = 0; t < inst.terminals.size(); ++t) {
            Decoder d;
            d.terminal = t;
            d.inputs = inst.in_edges(inst.terminals[t]);
            std::vector<std::uint64_t> radices;
            for (auto f : d.inputs) radices.push_back(edge_alphabet_[f]);
            d.radix = MixedRadix(radices);
            d.demanded = inst.demanded_sources(t);
            auto it = code.decoders.find(inst.terminals[t]);
            if (it == code.decoders.end())
                throw MalformedError("code has no decoder for terminal '" + inst.terminals[t] + "'");
            if (it->second.size() != d.radix.size())
                throw MalformedError("decoder for terminal '" + inst.terminals[t] + "' has " +
                                     std::to_string(it->second.size()) + " rows, expected " +
                                     std::to_string(d.radix.size()));
            for (const auto& row : it->second) {
                if (row.size() != d.demanded.size())
                    throw MalformedError("decoder row width mismatch at terminal '" + inst.terminals[t] + "'");
                for (std::size_t j = 0; j < row.size(); ++j)
                    if (row[j] >= code.source_alphabets[d.demanded[j]])
                        throw MalformedError("decoder at '" + inst.terminals[t] + "' outputs an out-of-alphabet symbol");
            }
            d.table = &it->second;
            decoders_.push_back(std::move(d));
        }
    }

    const NetworkInstance& instance() const { return *inst_; }
    const NetworkCode& code() const { return *code_; }
    const MixedRadix& source_radix() const { return source_radix_; }
    const std::vector<Step>& steps() const { return steps_; }
    const std::vector<Decoder>& decoders() const { return decoders_; }
    std::uint64_t edge_alphabet(std::size_t k) const { return edge_alphabet_[k]; }

    /// Edge messages (by instance edge index) for one source tuple.
    void evaluate(std::span<const Symbol> sources, std::span<Symbol> edges) const {
        for (const auto& step : steps_) {
            std::uint64_t idx = 0;
            if (step.source >= 0) {
                idx = sources[static_cast<std::size_t>(step.source)];
            } else {
                for (std::size_t j = 0; j < step.inputs.size(); ++j) idx += edges[step.inputs[j]] * step.radix.stride(j);
            }
            edges[step.edge] = (*step.table)[idx];
        }
    }

    /// True iff terminal decoder d reproduces the demanded sources.
    bool decodes(const Decoder& d, std::span<const Symbol> sources, std::span<const Symbol> edges) const {
        std::uint64_t idx = 0;
        for (std::size_t j = 0; j < d.inputs.size(); ++j) idx += edges[d.inputs[j]] * d.radix.stride(j);
        const auto& row = (*d.table)[idx];
        for (std::size_t j = 0; j < d.demanded.size(); ++j)
            if (row[j] != sources[d.demanded[j]]) return false;
        return true;
    }

private:
    const NetworkInstance* inst_;
    const NetworkCode* code_;
    MixedRadix source_radix_;
    std::vector<std::uint64_t> edge_alphabet_;
    std::vector<Step> steps_;
    std::vector<Decoder> decoders_;
};

/// Edge-message vector (instance edge order) for one source tuple.
inline std::vector<Symbol> evaluate_global(const NetworkInstance& inst, const NetworkCode& code,
                                           std::span<const Symbol> sources) {
    CompiledCode cc(inst, code);
    if (sources.size() != inst.sources.size()) throw DomainError("source tuple has wrong width");
    for (std::size_t i = 0; i < sources.size(); ++i)
        if (sources[i] >= code.source_alphabets[i]) throw DomainError("source symbol outside its alphabet");
    std::vector<Symbol> edges(inst.edges.size(), 0);
    cc.evaluate(sources, edges);
    return edges;
}

/// The global encoding map materialized over every source tuple.
struct GlobalCodeTable {
    MixedRadix source_radix;
    std::vector<std::string> edge_ids;
    std::vector<std::uint64_t> edge_alphabets;
    /// edge_values[edge][tuple]
    std::vector<std::vector<Symbol>> edge_values;
    /// good[tuple] = 1 iff every terminal decodes the tuple correctly.
    std::vector<std::uint8_t> good;
    std::vector<std::string> terminals;
    std::vector<std::uint64_t> terminal_bad;
    /// Smallest tuple index decoded wrongly by each terminal (tuple_count() if none).
    std::vector<std::uint64_t> terminal_first_bad;
    std::uint64_t bad_count = 0;

    std::uint64_t tuple_count() const { return source_radix.size(); }
    std::size_t source_count() const { return source_radix.width(); }
    std::uint64_t source_alphabet(std::size_t i) const { return source_radix.radices()[i]; }
    Symbol source_symbol(std::uint64_t tuple, std::size_t i) const {
        return static_cast<Symbol>(source_radix.digit(tuple, i));
    }
    std::size_t edge_index(const std::string& id) const {
        for (std::size_t k = 0; k < edge_ids.size(); ++k)
            if (edge_ids[k] == id) return k;
        throw DomainError("unknown edge id '" + id + "'");
    }
    Rational error() const { return make_fraction(bad_count, tuple_count()); }
};

namespace detail {

inline void check_cap(std::uint64_t count, const EnumerationOptions& opt) {
    if (count > opt.cap)
        throw ResourceError("enumeration needs " + std::to_string(count) + " source tuples, cap is " +
                            std::to_string(opt.cap));
}

inline GlobalCodeTable build_table(const CompiledCode& cc, const EnumerationOptions& opt) {
    const auto& inst = cc.instance();
    GlobalCodeTable t;
    t.source_radix = cc.source_radix();
    const auto n = t.tuple_count();
    check_cap(n, opt);
    for (std::size_t k = 0; k < inst.edges.size(); ++k) {
        t.edge_ids.push_back(inst.edges[k].id);
        t.edge_alphabets.push_back(cc.edge_alphabet(k));
    }
    t.terminals = inst.terminals;
    t.edge_values.assign(inst.edges.size(), std::vector<Symbol>(n, 0));
    t.good.assign(n, 1);
    const auto terminal_count = inst.terminals.size();

    std::mutex merge;
    std::vector<std::uint64_t> bad(terminal_count, 0);
    std::vector<std::uint64_t> first(terminal_count, n);
    std::uint64_t total_bad = 0;
    parallel_for(n, opt.workers, [&](std::uint64_t begin, std::uint64_t end) {
        std::vector<Symbol> sources(t.source_count());
        std::vector<Symbol> edges(inst.edges.size());
        std::vector<std::uint64_t> local_bad(terminal_count, 0);
        std::vector<std::uint64_t> local_first(terminal_count, n);
        std::uint64_t local_total = 0;
        for (std::uint64_t x = begin; x < end; ++x) {
            for (std::size_t i = 0; i < sources.size(); ++i) sources[i] = t.source_symbol(x, i);
            cc.evaluate(sources, edges);
            for (std::size_t k = 0; k < edges.size(); ++k) t.edge_values[k][x] = edges[k];
            bool all_ok = true;
            for (const auto& d : cc.decoders()) {
                if (!cc.decodes(d, sources, edges)) {
                    all_ok = false;
                    ++local_bad[d.terminal];
                    local_first[d.terminal] = std::min(local_first[d.terminal], x);
                }
            }
            if (!all_ok) {
                t.good[x] = 0;
                ++local_total;
            }
        }
        std::lock_guard lock(merge);
        for (std::size_t k = 0; k < terminal_count; ++k) {
            bad[k] += local_bad[k];
            first[k] = std::min(first[k], local_first[k]);
        }
        total_bad += local_total;
    });
    t.terminal_bad = std::move(bad);
    t.terminal_first_bad = std::move(first);
    t.bad_count = total_bad;
    return t;
}

}  // namespace detail

/// Evaluates the code on every source tuple and classifies tuples as good
/// (all terminals decode correctly) or bad.
inline GlobalCodeTable build_global_table(const NetworkInstance& inst, const NetworkCode& code,
                                          const EnumerationOptions& opt = {}) {
    CompiledCode cc(inst, code);
    detail::check_cap(cc.source_radix().size(), opt);
    return detail::build_table(cc, opt);
}

struct FeasibilityTarget {
    Rational epsilon{0};
    /// Required source alphabet cardinality per source, i.e. 2^(n R_i).
    std::vector<std::uint64_t> source_cardinalities;
};

struct TerminalError {
    std::string terminal;
    Rational error{0};
    std::optional<std::uint64_t> first_bad_tuple;
};

struct EdgeCapacity {
    std::string edge;
    std::uint64_t code_alphabet = 0;
    std::uint64_t capacity = 0;
    std::uint64_t support = 0;  // distinct symbols actually carried
    bool within_capacity = false;
};

struct FeasibilityReport {
    unsigned blocklength = 1;
    Rational error{0};
    std::vector<TerminalError> terminals;
    std::vector<std::uint64_t> source_cardinalities;
    std::vector<EdgeCapacity> edges;
    // Uniform independent sources and deterministic encoders hold by
    // construction of the table data model.
    bool uniform_independent_sources = true;
    bool deterministic_encoding = true;
    FeasibilityTarget target;
    bool decoding_ok = false;
    bool rates_ok = false;
    bool capacity_ok = false;
    bool verdict = false;
};

/// Decoding criterion for one terminal error against a target epsilon:
/// strict "error < epsilon", except that epsilon = 0 demands error = 0 and
/// epsilon >= 1 is vacuous.
inline bool error_meets_target(const Rational& error, const Rational& epsilon) {
    if (epsilon >= Rational(1)) return true;
    if (epsilon == Rational(0)) return error == Rational(0);
    return error < epsilon;
}

inline FeasibilityReport check_feasibility(const NetworkInstance& inst, const NetworkCode& code,
                                           const GlobalCodeTable& table, const FeasibilityTarget& target) {
    if (target.source_cardinalities.size() != inst.sources.size())
        throw DomainError("target has " + std::to_string(target.source_cardinalities.size()) + " rates for " +
                          std::to_string(inst.sources.size()) + " sources");
    if (target.epsilon < Rational(0)) throw DomainError("negative target epsilon");
    FeasibilityReport r;
    r.blocklength = code.blocklength;
    r.target = target;
    r.error = table.error();
    r.decoding_ok = true;
    for (std::size_t t = 0; t < table.terminals.size(); ++t) {
        TerminalError te;
        te.terminal = table.terminals[t];
        te.error = make_fraction(table.terminal_bad[t], table.tuple_count());
        if (table.terminal_first_bad[t] < table.tuple_count()) te.first_bad_tuple = table.terminal_first_bad[t];
        r.decoding_ok = r.decoding_ok && error_meets_target(te.error, target.epsilon);
        r.terminals.push_back(std::move(te));
    }
    r.source_cardinalities = code.source_alphabets;
    r.rates_ok = true;
    for (std::size_t i = 0; i < inst.sources.size(); ++i)
        r.rates_ok = r.rates_ok && code.source_alphabets[i] >= target.source_cardinalities[i];
    r.capacity_ok = true;
    for (std::size_t k = 0; k < inst.edges.size(); ++k) {
        EdgeCapacity ec;
        ec.edge = inst.edges[k].id;
        ec.code_alphabet = code.edge_alphabets.at(ec.edge);
        ec.capacity = inst.edges[k].alphabet_size;
        const auto& col = table.edge_values[table.edge_index(ec.edge)];
        std::vector<char> seen(ec.code_alphabet, 0);
        for (auto v : col) seen[v] = 1;
        ec.support = static_cast<std::uint64_t>(std::count(seen.begin(), seen.end(), 1));
        ec.within_capacity = ec.code_alphabet <= ec.capacity;
        r.capacity_ok = r.capacity_ok && ec.within_capacity;
        r.edges.push_back(std::move(ec));
    }
    r.verdict = r.decoding_ok && r.rates_ok && r.capacity_ok;
    return r;
}

/// Verifies (epsilon, rates, n)-feasibility of a code on an instance.
inline FeasibilityReport check_feasibility(const NetworkInstance& inst, const NetworkCode& code,
                                           const FeasibilityTarget& target, const EnumerationOptions& opt = {}) {
    auto table = build_global_table(inst, code, opt);
    return check_feasibility(inst, code, table, target);
}

/// Cardinality 2^(n * bits) for a rate given in bits per symbol.
inline std::uint64_t cardinality_from_bits(std::uint64_t bits, unsigned blocklength) {
    auto exponent = bits * blocklength;
    if (exponent >= 63) throw DomainError("rate too large for exact cardinality");
    return std::uint64_t{1} << exponent;
}

/// Variables of a code: source indices and edge indices.
struct VariableSet {
    std::vector<std::size_t> sources;
    std::vector<std::size_t> edges;
};

/// Entropy in bits of the selected variables under uniform source tuples.
inline double joint_entropy(const GlobalCodeTable& table, const VariableSet& vars) {
    if (vars.sources.empty() && vars.edges.empty()) return 0.0;
    const auto n = table.tuple_count();
    std::vector<std::vector<Symbol>> source_cols;
    for (auto i : vars.sources) {
        if (i >= table.source_count()) throw DomainError("unknown source index in entropy query");
        std::vector<Symbol> col(n);
        for (std::uint64_t x = 0; x < n; ++x) col[x] = table.source_symbol(x, i);
        source_cols.push_back(std::move(col));
    }
    std::vector<Column> cols;
    for (std::size_t j = 0; j < vars.sources.size(); ++j)
        cols.push_back({source_cols[j], table.source_alphabet(vars.sources[j])});
    for (auto k : vars.edges) {
        if (k >= table.edge_values.size()) throw DomainError("unknown edge index in entropy query");
        cols.push_back({table.edge_values[k], table.edge_alphabets[k]});
    }
    return joint_entropy_columns(cols, n);
}

}  // namespace edgerm
