#pragma once

// JSON file formats for instances, codes, groups, characterizations,
// partitions and CWL group assignments, plus report serializers for the
// result types. Any structural problem raises MalformedError.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "edgerm/characterization.hpp"
#include "edgerm/code.hpp"
#include "edgerm/cwl.hpp"
#include "edgerm/edge_removal.hpp"
#include "edgerm/error.hpp"
#include "edgerm/group.hpp"
#include "edgerm/group_codes.hpp"
#include "edgerm/library.hpp"
#include "edgerm/network.hpp"
#include "edgerm/rational.hpp"

namespace edgerm {

using Json = nlohmann::json;

namespace detail {

template <class Fn>
auto guarded(const std::string& what, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw MalformedError(what + ": " + e.what());
    }
}

inline const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw MalformedError(std::string("missing field '") + key + "'");
    return j.at(key);
}

}  // namespace detail

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MalformedError("cannot write '" + path + "'");
    out << text;
}

inline Json parse_json_text(const std::string& text) {
    return detail::guarded("invalid JSON", [&] { return Json::parse(text); });
}

// ---- instances ----

inline Json instance_to_json(const NetworkInstance& inst) {
    Json edges = Json::array();
    for (const auto& e : inst.edges)
        edges.push_back({{"id", e.id}, {"tail", e.tail}, {"head", e.head}, {"alphabet_size", e.alphabet_size}});
    Json sources = Json::array();
    for (const auto& s : inst.sources) sources.push_back({{"node", s.node}, {"alphabet_size", s.alphabet_size}});
    return {{"nodes", inst.nodes},
            {"edges", edges},
            {"sources", sources},
            {"terminals", inst.terminals},
            {"demands", inst.demands}};
}

inline NetworkInstance instance_from_json(const Json& j) {
    return detail::guarded("malformed instance", [&] {
        NetworkInstance inst;
        inst.nodes = detail::field(j, "nodes").get<std::vector<std::string>>();
        for (const auto& e : detail::field(j, "edges"))
            inst.edges.push_back({detail::field(e, "id").get<std::string>(), detail::field(e, "tail").get<std::string>(),
                                  detail::field(e, "head").get<std::string>(),
                                  detail::field(e, "alphabet_size").get<std::uint64_t>()});
        for (const auto& s : detail::field(j, "sources"))
            inst.sources.push_back(
                {detail::field(s, "node").get<std::string>(), detail::field(s, "alphabet_size").get<std::uint64_t>()});
        inst.terminals = detail::field(j, "terminals").get<std::vector<std::string>>();
        inst.demands = detail::field(j, "demands").get<std::vector<std::vector<int>>>();
        return inst;
    });
}

// ---- codes ----

inline Json code_to_json(const NetworkCode& c) {
    return {{"blocklength", c.blocklength},
            {"source_alphabets", c.source_alphabets},
            {"edge_alphabets", c.edge_alphabets},
            {"encoders", c.encoders},
            {"decoders", c.decoders}};
}

inline NetworkCode code_from_json(const Json& j) {
    return detail::guarded("malformed code", [&] {
        NetworkCode c;
        c.blocklength = detail::field(j, "blocklength").get<unsigned>();
        c.source_alphabets = detail::field(j, "source_alphabets").get<std::vector<std::uint64_t>>();
        c.edge_alphabets = detail::field(j, "edge_alphabets").get<std::map<std::string, std::uint64_t>>();
        c.encoders = detail::field(j, "encoders").get<std::map<std::string, std::vector<Symbol>>>();
        c.decoders = detail::field(j, "decoders").get<std::map<std::string, std::vector<std::vector<Symbol>>>>();
        return c;
    });
}

// ---- groups ----

inline Json group_to_json(const FiniteGroup& g) {
    switch (g.kind()) {
    case FiniteGroup::Kind::cyclic: return {{"kind", "cyclic"}, {"order", g.order()}};
    case FiniteGroup::Kind::product: {
        Json f = Json::array();
        for (const auto& x : g.factors()) f.push_back(group_to_json(x));
        return {{"kind", "product"}, {"order", g.order()}, {"factors", f}};
    }
    case FiniteGroup::Kind::table: return {{"kind", "table"}, {"order", g.order()}, {"table", cayley_table(g)}};
    }
    throw InternalError("unknown group kind");
}

inline FiniteGroup group_from_json(const Json& j) {
    return detail::guarded("malformed group", [&] {
        auto kind = detail::field(j, "kind").get<std::string>();
        FiniteGroup g;
        if (kind == "cyclic") {
            g = make_cyclic(detail::field(j, "order").get<std::uint64_t>());
        } else if (kind == "product") {
            std::vector<FiniteGroup> factors;
            for (const auto& f : detail::field(j, "factors")) factors.push_back(group_from_json(f));
            g = direct_product(std::move(factors));
        } else if (kind == "table") {
            g = FiniteGroup::from_table(detail::field(j, "table").get<std::vector<std::vector<Element>>>());
        } else {
            throw MalformedError("unknown group kind '" + kind + "'");
        }
        if (j.contains("order") && j.at("order").get<std::uint64_t>() != g.order())
            throw MalformedError("declared group order does not match its description");
        return g;
    });
}

// ---- characterizations ----

struct CharacterizationFile {
    GroupCharacterization characterization;
    std::vector<TerminalDemand> terminals;
};

inline Json characterization_to_json(const CharacterizationFile& f) {
    const auto& gc = f.characterization;
    Json subs = Json::array();
    for (std::size_t k = 0; k < gc.names.size(); ++k)
        subs.push_back({{"name", gc.names[k]}, {"members", gc.subgroups[k].members}});
    Json sources = Json::array();
    for (auto s : gc.sources) sources.push_back(gc.names[s]);
    Json terms = Json::array();
    for (const auto& t : f.terminals) terms.push_back({{"terminal", t.terminal}, {"inputs", t.inputs}, {"source", t.source}});
    return {{"group", group_to_json(gc.group)}, {"subgroups", subs}, {"sources", sources}, {"terminals", terms}};
}

inline CharacterizationFile characterization_from_json(const Json& j) {
    return detail::guarded("malformed characterization", [&] {
        CharacterizationFile f;
        auto& gc = f.characterization;
        gc.group = group_from_json(detail::field(j, "group"));
        for (const auto& s : detail::field(j, "subgroups")) {
            gc.names.push_back(detail::field(s, "name").get<std::string>());
            auto members = detail::field(s, "members").get<std::vector<Element>>();
            for (auto m : members)
                if (m >= gc.group.order()) throw MalformedError("subgroup member out of range");
            gc.subgroups.push_back(Subgroup{gc.group, sorted_unique(std::move(members))});
        }
        for (const auto& s : detail::field(j, "sources")) gc.sources.push_back(gc.index(s.get<std::string>()));
        if (j.contains("terminals"))
            for (const auto& t : j.at("terminals"))
                f.terminals.push_back({detail::field(t, "terminal").get<std::string>(),
                                       detail::field(t, "inputs").get<std::vector<std::string>>(),
                                       detail::field(t, "source").get<std::string>()});
        validate_characterization(gc);
        return f;
    });
}

// ---- partitions and group assignments ----

inline AuxiliaryPartition partition_from_json(const Json& j) {
    return detail::guarded("malformed partition", [&] {
        return AuxiliaryPartition{detail::field(j, "labels").get<std::vector<std::uint64_t>>()};
    });
}

inline Json partition_to_json(const AuxiliaryPartition& p) { return {{"labels", p.labels}}; }

/// Source groups, and optionally the edge group with its symbols.
struct GroupAssignment {
    std::vector<FiniteGroup> sources;
    std::optional<FiniteGroup> edge;
    std::vector<Symbol> edge_symbols;
    std::vector<PiecewisePiece> pieces;
};

inline GroupAssignment group_assignment_from_json(const Json& j) {
    return detail::guarded("malformed group assignment", [&] {
        GroupAssignment a;
        for (const auto& g : detail::field(j, "sources")) a.sources.push_back(group_from_json(g));
        if (j.contains("edge")) {
            a.edge = group_from_json(j.at("edge"));
            a.edge_symbols = detail::field(j, "edge_symbols").get<std::vector<Symbol>>();
        }
        if (j.contains("pieces"))
            for (const auto& p : j.at("pieces")) {
                PiecewisePiece piece;
                piece.tuples = detail::field(p, "tuples").get<std::vector<std::uint64_t>>();
                piece.function = detail::field(p, "function").get<std::vector<Symbol>>();
                if (p.contains("edge_symbols")) piece.edge_symbols = p.at("edge_symbols").get<std::vector<Symbol>>();
                a.pieces.push_back(std::move(piece));
            }
        return a;
    });
}

inline Json group_assignment_to_json(const GroupAssignment& a) {
    Json j;
    j["sources"] = Json::array();
    for (const auto& g : a.sources) j["sources"].push_back(group_to_json(g));
    if (a.edge) {
        j["edge"] = group_to_json(*a.edge);
        j["edge_symbols"] = a.edge_symbols;
    }
    if (!a.pieces.empty()) {
        j["pieces"] = Json::array();
        for (const auto& p : a.pieces) {
            Json pj{{"tuples", p.tuples}, {"function", p.function}};
            if (!p.edge_symbols.empty()) pj["edge_symbols"] = p.edge_symbols;
            j["pieces"].push_back(pj);
        }
    }
    return j;
}

// ---- result serializers ----

inline Json rational_to_json(const Rational& r) { return format_rational(r); }

inline Rational rational_from_json(const Json& j) { return parse_rational(j.get<std::string>()); }

inline Json feasibility_to_json(const FeasibilityReport& r) {
    Json terms = Json::array();
    for (const auto& t : r.terminals) {
        Json tj{{"terminal", t.terminal}, {"error", rational_to_json(t.error)}};
        tj["first_bad_tuple"] = t.first_bad_tuple ? Json(*t.first_bad_tuple) : Json(nullptr);
        terms.push_back(tj);
    }
    Json edges = Json::array();
    for (const auto& e : r.edges)
        edges.push_back({{"edge", e.edge},
                         {"code_alphabet", e.code_alphabet},
                         {"capacity", e.capacity},
                         {"support", e.support},
                         {"within_capacity", e.within_capacity}});
    return {{"blocklength", r.blocklength},
            {"error", rational_to_json(r.error)},
            {"terminals", terms},
            {"source_cardinalities", r.source_cardinalities},
            {"edges", edges},
            {"uniform_independent_sources", r.uniform_independent_sources},
            {"deterministic_encoding", r.deterministic_encoding},
            {"target",
             {{"epsilon", rational_to_json(r.target.epsilon)},
              {"source_cardinalities", r.target.source_cardinalities}}},
            {"decoding_ok", r.decoding_ok},
            {"rates_ok", r.rates_ok},
            {"capacity_ok", r.capacity_ok},
            {"verdict", r.verdict}};
}

inline FeasibilityReport feasibility_from_json(const Json& j) {
    return detail::guarded("malformed feasibility report", [&] {
        FeasibilityReport r;
        r.blocklength = j.at("blocklength").get<unsigned>();
        r.error = rational_from_json(j.at("error"));
        for (const auto& t : j.at("terminals")) {
            TerminalError te{t.at("terminal").get<std::string>(), rational_from_json(t.at("error")), std::nullopt};
            if (!t.at("first_bad_tuple").is_null()) te.first_bad_tuple = t.at("first_bad_tuple").get<std::uint64_t>();
            r.terminals.push_back(te);
        }
        r.source_cardinalities = j.at("source_cardinalities").get<std::vector<std::uint64_t>>();
        for (const auto& e : j.at("edges"))
            r.edges.push_back({e.at("edge").get<std::string>(), e.at("code_alphabet").get<std::uint64_t>(),
                               e.at("capacity").get<std::uint64_t>(), e.at("support").get<std::uint64_t>(),
                               e.at("within_capacity").get<bool>()});
        r.uniform_independent_sources = j.at("uniform_independent_sources").get<bool>();
        r.deterministic_encoding = j.at("deterministic_encoding").get<bool>();
        r.target.epsilon = rational_from_json(j.at("target").at("epsilon"));
        r.target.source_cardinalities = j.at("target").at("source_cardinalities").get<std::vector<std::uint64_t>>();
        r.decoding_ok = j.at("decoding_ok").get<bool>();
        r.rates_ok = j.at("rates_ok").get<bool>();
        r.capacity_ok = j.at("capacity_ok").get<bool>();
        r.verdict = j.at("verdict").get<bool>();
        return r;
    });
}

inline Json certificate_to_json(const RemovalCertificate& c) {
    return {{"edge", c.edge},
            {"method", c.method},
            {"witness_label", c.witness_label ? Json(*c.witness_label) : Json(nullptr)},
            {"edge_value", c.edge_value},
            {"edge_alphabet", c.edge_alphabet},
            {"piece_count", c.piece_count},
            {"edge_group_order", c.edge_group_order ? Json(*c.edge_group_order) : Json(nullptr)},
            {"original_sizes", c.original_sizes},
            {"restricted_sizes", c.restricted_sizes},
            {"promised_sizes", c.promised_sizes},
            {"relabel", c.relabel},
            {"fiber_size", c.fiber_size},
            {"fiber_bad", c.fiber_bad},
            {"epsilon", rational_to_json(c.epsilon)},
            {"original_error", rational_to_json(c.original_error)},
            {"restricted", feasibility_to_json(c.restricted)},
            {"verified", c.verified}};
}

inline RemovalCertificate certificate_from_json(const Json& j) {
    return detail::guarded("malformed certificate", [&] {
        RemovalCertificate c;
        c.edge = j.at("edge").get<std::string>();
        c.method = j.at("method").get<std::string>();
        if (!j.at("witness_label").is_null()) c.witness_label = j.at("witness_label").get<std::uint64_t>();
        c.edge_value = j.at("edge_value").get<Symbol>();
        c.edge_alphabet = j.at("edge_alphabet").get<std::uint64_t>();
        c.piece_count = j.at("piece_count").get<std::uint64_t>();
        if (!j.at("edge_group_order").is_null()) c.edge_group_order = j.at("edge_group_order").get<std::uint64_t>();
        c.original_sizes = j.at("original_sizes").get<std::vector<std::uint64_t>>();
        c.restricted_sizes = j.at("restricted_sizes").get<std::vector<std::uint64_t>>();
        c.promised_sizes = j.at("promised_sizes").get<std::vector<std::uint64_t>>();
        c.relabel = j.at("relabel").get<std::vector<std::vector<Symbol>>>();
        c.fiber_size = j.at("fiber_size").get<std::uint64_t>();
        c.fiber_bad = j.at("fiber_bad").get<std::uint64_t>();
        c.epsilon = rational_from_json(j.at("epsilon"));
        c.original_error = rational_from_json(j.at("original_error"));
        c.restricted = feasibility_from_json(j.at("restricted"));
        c.verified = j.at("verified").get<bool>();
        return c;
    });
}

inline Json witness_to_json(const CwlWitness& w) {
    Json j;
    j["source_groups"] = Json::array();
    for (const auto& g : w.source_groups) j["source_groups"].push_back(group_to_json(g));
    j["edge_group"] = group_to_json(w.edge_group);
    j["edge_symbols"] = w.edge_symbols;
    return j;
}

inline Json abelian_removal_to_json(const AbelianRemoval& r) {
    Json h = Json::array();
    for (const auto& s : r.h) h.push_back(s.members);
    std::vector<bool> bounds(r.size_bound.begin(), r.size_bound.end());
    return {{"edge", r.edge},
            {"h", h},
            {"g_prime", r.g_prime.members},
            {"condition_A", r.condition_A},
            {"condition_B", r.condition_B},
            {"condition_C", r.condition_C},
            {"witness", r.witness ? Json(*r.witness) : Json(nullptr)},
            {"size_bound", bounds},
            {"joint_conditional_bits", r.joint_conditional},
            {"sum_conditional_bits", r.sum_conditional},
            {"source_coset_labels", std::vector<std::vector<std::uint32_t>>(r.bridge.coset_label.begin(),
                                                                            r.bridge.coset_label.end() - 1)}};
}

inline Json decision_to_json(const TerminalDecision& d) {
    return {{"terminal", d.terminal},
            {"source", d.source},
            {"zero_error", d.zero_error},
            {"decoder", d.decoder},
            {"q", d.q},
            {"min_error", rational_to_json(d.min_error)},
            {"brute_forced", d.brute_forced},
            {"decoders_checked", d.decoders_checked}};
}

inline Json n2_to_json(const N2Report& r) {
    Json blocks = Json::array();
    for (const auto& b : r.blocks) {
        Json cwl = Json::object();
        for (const auto& [name, ok] : b.cwl) cwl[name] = ok;
        blocks.push_back({{"block", b.block},
                          {"permutation", b.permutation},
                          {"bijective", b.bijective},
                          {"identity", b.identity},
                          {"decoding_ok", b.decoding_ok},
                          {"counterexample", b.counterexample ? Json(*b.counterexample) : Json(nullptr)},
                          {"cwl", cwl}});
    }
    return {{"m", r.m}, {"w", r.w}, {"assignment_is_reassignment", r.assignment_is_reassignment},
            {"blocks", blocks}, {"ok", r.ok()}};
}

inline Json n3_to_json(std::uint64_t m, std::uint64_t s, std::uint64_t alpha, const N3Report& r) {
    Json c = r.collision ? Json{r.collision->first, r.collision->second} : Json(nullptr);
    return {{"m", m}, {"s", s}, {"alpha", alpha}, {"modulus", r.modulus}, {"injective", r.injective}, {"collision", c}};
}

inline Json identity_to_json(const IdentityResult& r) {
    return {{"name", r.name},
            {"holds", r.holds},
            {"counterexample", r.counterexample ? Json(*r.counterexample) : Json(nullptr)}};
}

inline Json dougherty_to_json(const DoughertyReport& r) {
    Json ids = Json::array();
    for (const auto& i : r.identities) ids.push_back(identity_to_json(i));
    return {{"modulus", r.modulus},
            {"t", r.t},
            {"identities", ids},
            {"all_hold", r.all_hold()},
            {"n43_composed", identity_to_json(r.n43_composed)}};
}

}  // namespace edgerm
