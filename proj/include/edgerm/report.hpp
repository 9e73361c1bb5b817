#pragma once

// Run reports: command echo, input digests, structured result and removal
// certificates. Text output is pretty-printed JSON with sorted keys; CSV
// output tabulates certificates only.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "edgerm/edge_removal.hpp"
#include "edgerm/io.hpp"

namespace edgerm {

struct InputDigest {
    std::string path;
    std::string fnv1a64;

    bool operator==(const InputDigest&) const = default;
};

struct RunReport {
    std::vector<std::string> command;
    std::vector<InputDigest> inputs;
    Json result = Json::object();
    std::vector<RemovalCertificate> certificates;
    /// Only present when requested, so default output is reproducible.
    std::optional<double> wall_seconds;
    std::optional<unsigned> workers;
};

inline std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline Json report_to_json(const RunReport& r) {
    Json inputs = Json::array();
    for (const auto& d : r.inputs) inputs.push_back({{"path", d.path}, {"fnv1a64", d.fnv1a64}});
    Json certs = Json::array();
    for (const auto& c : r.certificates) certs.push_back(certificate_to_json(c));
    Json j{{"command", r.command}, {"inputs", inputs}, {"result", r.result}, {"certificates", certs}};
    if (r.wall_seconds || r.workers) {
        Json meta = Json::object();
        if (r.wall_seconds) meta["wall_seconds"] = *r.wall_seconds;
        if (r.workers) meta["workers"] = *r.workers;
        j["meta"] = meta;
    }
    return j;
}

inline RunReport report_from_json(const Json& j) {
    return detail::guarded("malformed report", [&] {
        RunReport r;
        r.command = j.at("command").get<std::vector<std::string>>();
        for (const auto& d : j.at("inputs"))
            r.inputs.push_back({d.at("path").get<std::string>(), d.at("fnv1a64").get<std::string>()});
        r.result = j.at("result");
        for (const auto& c : j.at("certificates")) r.certificates.push_back(certificate_from_json(c));
        if (j.contains("meta")) {
            const auto& m = j.at("meta");
            if (m.contains("wall_seconds")) r.wall_seconds = m.at("wall_seconds").get<double>();
            if (m.contains("workers")) r.workers = m.at("workers").get<unsigned>();
        }
        return r;
    });
}

enum class ReportFormat { text, csv };

inline ReportFormat parse_report_format(const std::string& s) {
    if (s == "text") return ReportFormat::text;
    if (s == "csv") return ReportFormat::csv;
    throw MalformedError("unknown report format '" + s + "'");
}

namespace detail {

inline std::string join_sizes(const std::vector<std::uint64_t>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ";" : "") + std::to_string(v[k]);
    return s;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

}  // namespace detail

inline constexpr const char* certificate_csv_header =
    "edge,method,witness_label,edge_value,edge_alphabet,piece_count,edge_group_order,original_sizes,"
    "restricted_sizes,promised_sizes,fiber_size,fiber_bad,epsilon,original_error,restricted_error,verified";

inline std::string emit_report(const RunReport& r, ReportFormat format) {
    if (format == ReportFormat::text) return report_to_json(r).dump(2) + "\n";
    std::ostringstream out;
    out << certificate_csv_header << "\n";
    for (const auto& c : r.certificates) {
        out << detail::csv_field(c.edge) << ',' << detail::csv_field(c.method) << ','
            << (c.witness_label ? std::to_string(*c.witness_label) : "") << ',' << c.edge_value << ','
            << c.edge_alphabet << ',' << c.piece_count << ','
            << (c.edge_group_order ? std::to_string(*c.edge_group_order) : "") << ','
            << detail::join_sizes(c.original_sizes) << ',' << detail::join_sizes(c.restricted_sizes) << ','
            << detail::join_sizes(c.promised_sizes) << ',' << c.fiber_size << ',' << c.fiber_bad << ','
            << format_rational(c.epsilon) << ',' << format_rational(c.original_error) << ','
            << format_rational(c.restricted.error) << ',' << (c.verified ? "true" : "false") << "\n";
    }
    return out.str();
}

/// Inverse of the text format.
inline RunReport parse_report(const std::string& text) { return report_from_json(parse_json_text(text)); }

}  // namespace edgerm
