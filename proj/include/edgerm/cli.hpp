#pragma once

// Command-line front end. dispatch() parses arguments, runs one subcommand
// and writes a report. Exit status: 0 verified-true, 1 verified-false or no
// result, 2 usage, input or processing errors.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "edgerm/code.hpp"
#include "edgerm/cwl.hpp"
#include "edgerm/edge_removal.hpp"
#include "edgerm/group_codes.hpp"
#include "edgerm/io.hpp"
#include "edgerm/library.hpp"
#include "edgerm/network.hpp"
#include "edgerm/report.hpp"

namespace edgerm::cli {

inline constexpr int exit_true = 0;
inline constexpr int exit_false = 1;
inline constexpr int exit_usage = 2;

struct Settings {
    unsigned workers = 1;
    std::uint64_t enum_cap = default_enumeration_cap;
    std::string out;
    std::string format = "text";
    bool meta = false;
};

/// Defaults for --workers and --enum-cap from EDGERM_WORKERS and
/// EDGERM_ENUM_CAP; flags take precedence.
inline Settings settings_from_environment() {
    Settings s;
    if (const char* w = std::getenv("EDGERM_WORKERS")) {
        try {
            s.workers = static_cast<unsigned>(std::stoul(w));
        } catch (const std::exception&) {
            throw MalformedError("EDGERM_WORKERS is not a number");
        }
    }
    if (const char* c = std::getenv("EDGERM_ENUM_CAP")) {
        try {
            s.enum_cap = std::stoull(c);
        } catch (const std::exception&) {
            throw MalformedError("EDGERM_ENUM_CAP is not a number");
        }
    }
    return s;
}

/// Parses "1,1" (bits per symbol) or "#4,#4" (cardinalities).
inline std::vector<std::uint64_t> parse_rates(const std::string& text, unsigned blocklength) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw MalformedError("empty rate in '" + text + "'");
        try {
            std::size_t used = 0;
            if (item[0] == '#') {
                auto v = std::stoull(item.substr(1), &used);
                if (used + 1 != item.size() || v == 0) throw MalformedError("bad cardinality '" + item + "'");
                out.push_back(v);
            } else {
                auto v = std::stoull(item, &used);
                if (used != item.size()) throw MalformedError("bad rate '" + item + "'");
                out.push_back(cardinality_from_bits(v, blocklength));
            }
        } catch (const std::invalid_argument&) {
            throw MalformedError("bad rate '" + item + "'");
        } catch (const std::out_of_range&) {
            throw MalformedError("rate out of range '" + item + "'");
        }
    }
    return out;
}

namespace detail {

struct Context {
    Settings settings;
    RunReport report;

    EnumerationOptions enumeration() const { return {settings.enum_cap, settings.workers}; }

    Json load(const std::string& path) {
        auto text = read_text_file(path);
        report.inputs.push_back({path, fnv1a64_hex(text)});
        return parse_json_text(text);
    }

    NetworkInstance load_instance(const std::string& path) {
        auto inst = instance_from_json(load(path));
        auto problems = validate_instance(inst);
        if (!problems.empty()) {
            std::string msg = "invalid instance '" + path + "':";
            for (const auto& p : problems) msg += " " + p + ";";
            throw MalformedError(msg);
        }
        return inst;
    }
};

/// Command echo without flags that change only execution, not results.
inline std::vector<std::string> command_echo(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < args.size(); ++k) {
        const auto& a = args[k];
        bool with_value = a == "--workers" || a == "--out";
        if (with_value) {
            ++k;
            continue;
        }
        if (a.rfind("--workers=", 0) == 0 || a.rfind("--out=", 0) == 0 || a == "--meta") continue;
        out.push_back(a);
    }
    return out;
}

inline void emit_files(const std::string& dir, const std::string& stem, const NetworkInstance& inst,
                       const NetworkCode& code) {
    std::filesystem::create_directories(dir);
    write_text_file((std::filesystem::path(dir) / (stem + ".instance.json")).string(),
                    instance_to_json(inst).dump(2) + "\n");
    write_text_file((std::filesystem::path(dir) / (stem + ".code.json")).string(), code_to_json(code).dump(2) + "\n");
}

/// Witness for the edge from a group file (edge group given or induced), or
/// by bounded search.
inline std::optional<CwlWitness> obtain_witness(Context& ctx, const NetworkInstance& inst, const NetworkCode& code,
                                                const GlobalCodeTable& table, const std::string& edge,
                                                const std::string& groups_path, std::uint64_t budget) {
    if (!groups_path.empty()) {
        auto a = group_assignment_from_json(ctx.load(groups_path));
        if (a.edge) return check_cwl(table, edge, a.sources, *a.edge, a.edge_symbols);
        if (a.sources.size() != table.source_count()) throw DomainError("need one group per source");
        for (std::size_t i = 0; i < a.sources.size(); ++i)
            if (a.sources[i].order() != table.source_alphabet(i))
                throw DomainError("group order does not match the source alphabet");
        return induce_edge_group(table.edge_values[table.edge_index(edge)], a.sources);
    }
    auto found = cwl_search(inst, code, edge, budget, ctx.enumeration());
    ctx.report.result["search_assignments_tried"] = found ? found->assignments_tried : budget;
    if (!found) return std::nullopt;
    return std::move(found->witness);
}

inline int finish_restriction(Context& ctx, const std::optional<Restriction>& r, const std::string& emit_dir) {
    if (!r) {
        ctx.report.result["certificate"] = nullptr;
        return exit_false;
    }
    ctx.report.certificates.push_back(r->certificate);
    ctx.report.result["verified"] = r->certificate.verified;
    ctx.report.result["restricted_instance"] = instance_to_json(r->instance);
    ctx.report.result["restricted_code"] = code_to_json(r->code);
    if (!emit_dir.empty()) emit_files(emit_dir, "restricted", r->instance, r->code);
    return r->certificate.verified ? exit_true : exit_false;
}

}  // namespace detail

/// Runs the CLI on args (without the program name).
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    detail::Context ctx;
    try {
        ctx.settings = settings_from_environment();
    } catch (const Error& e) {
        err << e.what() << "\n";
        return exit_usage;
    }
    auto& S = ctx.settings;

    CLI::App app{"Network coding edge-removal verification workbench", "edgerm"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--workers", S.workers, "worker threads for enumeration (default 1 or EDGERM_WORKERS)");
    app.add_option("--enum-cap", S.enum_cap, "maximum number of enumerated source tuples (default 2^24 or EDGERM_ENUM_CAP)");
    app.add_option("--out", S.out, "write the report to this path instead of stdout");
    app.add_option("--format", S.format, "report format: text or csv")->check(CLI::IsMember({"text", "csv"}));
    app.add_flag("--meta", S.meta, "include wall time and worker count in the report");

    std::string instance_path, code_path, edge, partition = "builtin:thm2", groups_path, pieces_path, eps_text = "0/1",
                                               rates_text, emit_dir, char_path, name;
    std::uint64_t budget = 1000;
    std::uint64_t m = 2, w = 2, s = 1, alpha = 1, N = 4, block = 1;
    std::string t_text;
    std::function<int()> run;

    auto add_pair = [&](CLI::App* sub) {
        sub->add_option("instance", instance_path, "instance file")->required();
        sub->add_option("code", code_path, "code file")->required();
    };

    auto* validate = app.add_subcommand("validate", "validate an instance file");
    validate->add_option("instance", instance_path, "instance file")->required();
    validate->callback([&] {
        run = [&] {
            auto inst = instance_from_json(ctx.load(instance_path));
            auto problems = validate_instance(inst);
            ctx.report.result = {{"valid", problems.empty()}, {"violations", problems}};
            return problems.empty() ? exit_true : exit_false;
        };
    });

    auto* verify = app.add_subcommand("verify", "check (eps, R, n)-feasibility of a code");
    add_pair(verify);
    verify->add_option("--eps", eps_text, "target error as p/q (default 0/1)");
    verify->add_option("--rates", rates_text, "bits per source (1,1) or cardinalities (#2,#2); default: instance sizes");
    verify->callback([&] {
        run = [&] {
            auto inst = ctx.load_instance(instance_path);
            auto code = code_from_json(ctx.load(code_path));
            FeasibilityTarget target;
            target.epsilon = parse_rational(eps_text);
            if (rates_text.empty()) {
                for (const auto& src : inst.sources) target.source_cardinalities.push_back(src.alphabet_size);
            } else {
                target.source_cardinalities = parse_rates(rates_text, code.blocklength);
            }
            auto r = check_feasibility(inst, code, target, ctx.enumeration());
            ctx.report.result = feasibility_to_json(r);
            return r.verdict ? exit_true : exit_false;
        };
    });

    auto* remove = app.add_subcommand("remove-edge", "remove an edge through an auxiliary partition");
    add_pair(remove);
    remove->add_option("--edge", edge, "edge id")->required();
    remove->add_option("--partition", partition, "partition file, builtin:thm2 or builtin:cor3 (default builtin:thm2)");
    remove->add_option("--eps", eps_text, "target error as p/q (default 0/1)");
    remove->add_option("--groups", groups_path, "group assignment file for builtin:thm2");
    remove->add_option("--budget", budget, "search budget when no group file is given (default 1000)");
    remove->add_option("--emit-dir", emit_dir, "directory for the restricted instance and code files");
    remove->callback([&] {
        run = [&] {
            auto inst = ctx.load_instance(instance_path);
            auto code = code_from_json(ctx.load(code_path));
            auto table = build_global_table(inst, code, ctx.enumeration());
            auto eps = parse_rational(eps_text);
            std::optional<Restriction> r;
            if (partition == "builtin:cor3") {
                r = corollary3_remove(inst, code, table, edge, ctx.enumeration());
            } else if (partition == "builtin:thm2") {
                auto wit = detail::obtain_witness(ctx, inst, code, table, edge, groups_path, budget);
                if (wit) r = theorem2_remove(inst, code, table, edge, *wit, eps, ctx.enumeration());
            } else {
                auto part = partition_from_json(ctx.load(partition));
                r = theorem1_remove(inst, code, table, edge, part, eps, ctx.enumeration());
            }
            return detail::finish_restriction(ctx, r, emit_dir);
        };
    });

    auto* cwl_check = app.add_subcommand("cwl-check", "certify that an edge function is CWL");
    add_pair(cwl_check);
    cwl_check->add_option("--edge", edge, "edge id")->required();
    cwl_check->add_option("--groups", groups_path, "group assignment file")->required();
    cwl_check->callback([&] {
        run = [&] {
            auto inst = ctx.load_instance(instance_path);
            auto code = code_from_json(ctx.load(code_path));
            auto table = build_global_table(inst, code, ctx.enumeration());
            auto wit = detail::obtain_witness(ctx, inst, code, table, edge, groups_path, 0);
            ctx.report.result["cwl"] = wit.has_value();
            if (wit) ctx.report.result["witness"] = witness_to_json(*wit);
            return wit ? exit_true : exit_false;
        };
    });

    auto* cwl_remove = app.add_subcommand("cwl-remove", "remove a CWL edge with the class partition");
    add_pair(cwl_remove);
    cwl_remove->add_option("--edge", edge, "edge id")->required();
    cwl_remove->add_option("--groups", groups_path, "group assignment file (default: bounded search)");
    cwl_remove->add_option("--budget", budget, "search budget (default 1000)");
    cwl_remove->add_option("--eps", eps_text, "target error as p/q (default 0/1)");
    cwl_remove->add_option("--emit-dir", emit_dir, "directory for the restricted instance and code files");
    cwl_remove->callback([&] {
        run = [&] {
            auto inst = ctx.load_instance(instance_path);
            auto code = code_from_json(ctx.load(code_path));
            auto table = build_global_table(inst, code, ctx.enumeration());
            auto wit = detail::obtain_witness(ctx, inst, code, table, edge, groups_path, budget);
            std::optional<Restriction> r;
            if (wit) r = theorem2_remove(inst, code, table, edge, *wit, parse_rational(eps_text), ctx.enumeration());
            return detail::finish_restriction(ctx, r, emit_dir);
        };
    });

    auto* pwl_remove = app.add_subcommand("pwl-remove", "remove a piecewise-CWL edge (zero-error codes)");
    add_pair(pwl_remove);
    pwl_remove->add_option("--edge", edge, "edge id")->required();
    pwl_remove->add_option("--pieces", pieces_path, "group assignment file with pieces")->required();
    pwl_remove->add_option("--emit-dir", emit_dir, "directory for the restricted instance and code files");
    pwl_remove->callback([&] {
        run = [&] {
            auto inst = ctx.load_instance(instance_path);
            auto code = code_from_json(ctx.load(code_path));
            auto table = build_global_table(inst, code, ctx.enumeration());
            auto a = group_assignment_from_json(ctx.load(pieces_path));
            if (!a.edge) throw MalformedError("pieces file needs an edge group");
            auto pw = check_piecewise(table.edge_values[table.edge_index(edge)], a.sources, *a.edge, a.edge_symbols,
                                      a.pieces);
            ctx.report.result["piecewise_cwl"] = pw.has_value();
            std::optional<Restriction> r;
            if (pw) r = theorem3_remove(inst, code, table, edge, *pw, ctx.enumeration());
            return detail::finish_restriction(ctx, r, emit_dir);
        };
    });

    auto* search = app.add_subcommand("cwl-search", "bounded search for group structures making an edge CWL");
    add_pair(search);
    search->add_option("--edge", edge, "edge id")->required();
    search->add_option("--budget", budget, "number of group assignments to try (default 1000)");
    search->callback([&] {
        run = [&] {
            auto inst = ctx.load_instance(instance_path);
            auto code = code_from_json(ctx.load(code_path));
            auto found = cwl_search(inst, code, edge, budget, ctx.enumeration());
            ctx.report.result["found"] = found.has_value();
            if (found) {
                ctx.report.result["assignments_tried"] = found->assignments_tried;
                ctx.report.result["witness"] = witness_to_json(found->witness);
                ctx.report.result["code"] = code_to_json(found->code);
            }
            return found ? exit_true : exit_false;
        };
    });

    auto* group_remove = app.add_subcommand("group-remove", "abelian group code edge removal");
    group_remove->add_option("characterization", char_path, "characterization file")->required();
    group_remove->add_option("--edge", edge, "edge variable name")->required();
    group_remove->callback([&] {
        run = [&] {
            auto f = characterization_from_json(ctx.load(char_path));
            auto r = abelian_edge_removal(f.characterization, edge);
            ctx.report.result = abelian_removal_to_json(r);
            bool ok = r.all_conditions() &&
                      std::all_of(r.size_bound.begin(), r.size_bound.end(), [](bool b) { return b; });
            return ok ? exit_true : exit_false;
        };
    });

    auto* group_zero = app.add_subcommand("group-zero-error", "zero-error dichotomy for group code terminals");
    group_zero->add_option("characterization", char_path, "characterization file with terminals")->required();
    group_zero->callback([&] {
        run = [&] {
            auto f = characterization_from_json(ctx.load(char_path));
            auto decisions = zero_error_upgrade(f.characterization, f.terminals);
            Json arr = Json::array();
            bool all_zero = true;
            for (const auto& d : decisions) {
                arr.push_back(decision_to_json(d));
                all_zero = all_zero && d.zero_error;
            }
            ctx.report.result["terminals"] = arr;
            return all_zero ? exit_true : exit_false;
        };
    });

    auto* case_study = app.add_subcommand("case-study", "bundled case studies");
    case_study->add_option("name", name, "butterfly, butterfly4, n2, n3-injectivity or dougherty")
        ->required()
        ->check(CLI::IsMember({"butterfly", "butterfly4", "n2", "n3-injectivity", "dougherty"}));
    case_study->add_option("--m", m, "n2/n3 parameter m (default 2)");
    case_study->add_option("--w", w, "n2 parameter w (default 2)");
    case_study->add_option("--block", block, "n2 block moved to the identity permutation (default 1)");
    case_study->add_option("--s", s, "n3 parameter s (default 1)");
    case_study->add_option("--alpha", alpha, "n3 parameter alpha (default 1)");
    case_study->add_option("--N", N, "dougherty alphabet size (default 4)");
    case_study->add_option("--t", t_text, "dougherty: comma-separated table of t; default searches all t");
    case_study->add_option("--emit-dir", emit_dir, "butterfly: directory for bundled instance and code files");
    case_study->callback([&] {
        run = [&]() -> int {
            if (name == "butterfly" || name == "butterfly4") {
                auto b = name == "butterfly" ? butterfly() : butterfly4();
                auto table = build_global_table(b.instance, b.code, ctx.enumeration());
                FeasibilityTarget target{Rational(0), {}};
                for (const auto& src : b.instance.sources) target.source_cardinalities.push_back(src.alphabet_size);
                auto feas = check_feasibility(b.instance, b.code, table, target);
                ctx.report.result["feasibility"] = feasibility_to_json(feas);
                if (!emit_dir.empty()) detail::emit_files(emit_dir, name, b.instance, b.code);
                auto found = cwl_search(b.instance, b.code, "bottleneck", 1000, ctx.enumeration());
                std::optional<Restriction> r;
                if (found)
                    r = theorem2_remove(b.instance, b.code, table, "bottleneck", found->witness, Rational(0),
                                        ctx.enumeration());
                if (r) ctx.report.certificates.push_back(r->certificate);
                ctx.report.result["removal_verified"] = r && r->certificate.verified;
                return feas.verdict && r && r->certificate.verified ? exit_true : exit_false;
            }
            if (name == "n2") {
                auto fam = n2_permutations(m, w);
                auto original = n2_code_check(m, fam, n2_original_assignment(w), S.enum_cap, S.workers);
                auto moved = n2_code_check(m, fam, n2_identity_assignment(w, block), S.enum_cap, S.workers);
                ctx.report.result = {{"original", n2_to_json(original)}, {"identity_reassignment", n2_to_json(moved)}};
                return original.ok() && moved.ok() ? exit_true : exit_false;
            }
            if (name == "n3-injectivity") {
                auto r = n3_injectivity(m, s, alpha);
                ctx.report.result = n3_to_json(m, s, alpha, r);
                return r.injective ? exit_true : exit_false;
            }
            if (!t_text.empty()) {
                std::vector<Symbol> t;
                std::stringstream ss(t_text);
                std::string item;
                while (std::getline(ss, item, ',')) t.push_back(static_cast<Symbol>(std::stoul(item)));
                auto r = dougherty_identity_check(N, t);
                ctx.report.result = dougherty_to_json(r);
                return r.all_hold() ? exit_true : exit_false;
            }
            auto found = dougherty_t_search(N);
            ctx.report.result = {{"modulus", found.modulus},
                                 {"candidates", found.candidates},
                                 {"solutions", found.solutions},
                                 {"composed_solutions", found.composed_solutions}};
            return found.solutions.empty() ? exit_false : exit_true;
        };
    });

    std::vector<std::string> argv_store{"edgerm"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_true : exit_usage;
    }
    if (S.workers == 0) S.workers = 1;

    ctx.report.command = detail::command_echo(args);
    int status = exit_usage;
    auto start = std::chrono::steady_clock::now();
    try {
        status = run();
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return exit_usage;
    }
    if (S.meta) {
        ctx.report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        ctx.report.workers = S.workers;
    }
    try {
        auto text = emit_report(ctx.report, parse_report_format(S.format));
        if (S.out.empty()) {
            out << text;
        } else {
            write_text_file(S.out, text);
        }
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return exit_usage;
    }
    return status;
}

}  // namespace edgerm::cli
