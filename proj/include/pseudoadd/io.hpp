#pragma once

// Wire formats. JSON for specs, grids, and reports; CSV for distributions,
// sample tables, and recovery output. All numbers are emitted with 17
// significant digits (or nlohmann's shortest round trip in JSON), so every
// value re-parses to the identical double.

#include <pseudoadd/axioms.hpp>
#include <pseudoadd/content.hpp>
#include <pseudoadd/entropy.hpp>
#include <pseudoadd/recover.hpp>

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace pseudoadd {

/// Malformed or unreadable input (bad JSON, bad CSV, missing file): a usage
/// problem, distinct from domain/validation failures.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using json = nlohmann::json;

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {

inline double parse_double(std::string_view text, const std::string& where) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw IoError(where + ": malformed number '" + std::string(text) + "'");
    return value;
}

inline std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == sep) {
            fields.emplace_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return fields;
}

inline bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

}  // namespace detail

// ---- ContentSpec <-> JSON -------------------------------------------------

inline json spec_to_json(const ContentSpec& spec) {
    json j;
    j["k"] = spec.k();
    j["phi"] = spec.phi().source();
    j["alpha"] = spec.alpha().source();
    j["q_min"] = spec.q_min();
    j["q_max"] = spec.q_max() ? json(*spec.q_max()) : json(nullptr);
    return j;
}

inline ContentSpec spec_from_json(const json& j) {
    if (!j.is_object()) throw IoError("spec JSON must be an object");
    if (!j.contains("k") || !j.contains("phi") || !j.contains("alpha"))
        throw IoError("spec JSON needs fields 'k', 'phi', 'alpha'");
    if (!j["k"].is_number() || !j["phi"].is_string() || !j["alpha"].is_string())
        throw IoError("spec JSON: 'k' must be a number, 'phi' and 'alpha' strings");
    double q_min = 0.0;
    std::optional<double> q_max;
    if (j.contains("q_min") && !j["q_min"].is_null()) q_min = j["q_min"].get<double>();
    if (j.contains("q_max") && !j["q_max"].is_null()) q_max = j["q_max"].get<double>();
    return ContentSpec(j["k"].get<double>(), Expr::parse(j["phi"].get<std::string>()),
                       Expr::parse(j["alpha"].get<std::string>()), q_min, q_max);
}

inline json parse_json(std::string_view text, const std::string& where) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw IoError(where + ": " + e.what());
    }
}

// ---- distributions and observables ----------------------------------------

namespace detail {

inline std::vector<double> values_from_csv(std::istream& in, const std::string& header,
                                           const std::string& where) {
    std::string line;
    if (!next_line(in, line)) throw IoError(where + ": empty input");
    if (line != header)
        throw IoError(where + ": expected header '" + header + "', got '" + line + "'");
    std::vector<double> values;
    std::size_t lineno = 1;
    while (next_line(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        values.push_back(parse_double(line, where + ":" + std::to_string(lineno)));
    }
    return values;
}

inline std::vector<double> values_from_json(const json& j, const std::string& key,
                                            const std::string& where) {
    if (!j.is_object() || !j.contains(key) || !j[key].is_array())
        throw IoError(where + ": expected an object with array field '" + key + "'");
    std::vector<double> values;
    for (const auto& x : j[key]) {
        if (!x.is_number()) throw IoError(where + ": non-numeric entry in '" + key + "'");
        values.push_back(x.get<double>());
    }
    return values;
}

}  // namespace detail

/// Distribution text: either JSON {"p": [...]} or CSV with header "p",
/// sniffed by the first non-space character.
inline Distribution distribution_from_text(std::string_view text, const std::string& where,
                                           bool renormalize = false) {
    std::size_t i = text.find_first_not_of(" \t\r\n");
    if (i == std::string_view::npos) throw IoError(where + ": empty input");
    if (text[i] == '{' || text[i] == '[')
        return Distribution(detail::values_from_json(parse_json(text, where), "p", where),
                            renormalize);
    std::istringstream in{std::string(text)};
    return Distribution(detail::values_from_csv(in, "p", where), renormalize);
}

/// Inline form used on the command line: "0.5,0.25,0.25".
inline Distribution distribution_from_inline(std::string_view text, bool renormalize = false) {
    std::vector<double> values;
    for (const auto& field : detail::split(text, ','))
        values.push_back(detail::parse_double(field, "inline distribution"));
    return Distribution(values, renormalize);
}

inline Observable observable_from_text(std::string_view text, const std::string& where) {
    std::size_t i = text.find_first_not_of(" \t\r\n");
    if (i == std::string_view::npos) throw IoError(where + ": empty input");
    if (text[i] == '{' || text[i] == '[')
        return Observable{detail::values_from_json(parse_json(text, where), "x", where)};
    std::istringstream in{std::string(text)};
    return Observable{detail::values_from_csv(in, "x", where)};
}

// ---- sample tables ---------------------------------------------------------

inline void write_samples_csv(std::ostream& out, const SampleTable& table) {
    out << "q,p,I\n";
    for (const auto& row : table.rows())
        out << fmt17(row.q) << ',' << fmt17(row.p) << ',' << fmt17(row.I) << '\n';
}

inline SampleTable read_samples_csv(std::istream& in, const std::string& where = "samples") {
    std::string line;
    if (!detail::next_line(in, line)) throw IoError(where + ": empty input");
    if (line != "q,p,I")
        throw IoError(where + ": expected header 'q,p,I', got '" + line + "'");
    SampleTable table;
    std::size_t lineno = 1;
    while (detail::next_line(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = detail::split(line, ',');
        std::string at = where + ":" + std::to_string(lineno);
        if (fields.size() != 3) throw IoError(at + ": expected 3 fields, got " +
                                              std::to_string(fields.size()));
        table.add(detail::parse_double(fields[0], at), detail::parse_double(fields[1], at),
                  detail::parse_double(fields[2], at));
    }
    return table;
}

// ---- recovery results ------------------------------------------------------

inline void write_recovery_csv(std::ostream& out, const RecoveryResult& result) {
    out << "# k_hat=" << fmt17(result.k_hat) << '\n';
    out << "q,phi_hat,alpha_hat,residual\n";
    for (const auto& row : result.rows)
        out << fmt17(row.q) << ',' << fmt17(row.phi_hat) << ',' << fmt17(row.alpha_hat) << ','
            << fmt17(row.residual) << '\n';
}

inline json recovery_to_json(const RecoveryResult& result) {
    json rows = json::array();
    for (const auto& row : result.rows)
        rows.push_back({{"q", row.q},
                        {"phi_hat", row.phi_hat},
                        {"alpha_hat", row.alpha_hat},
                        {"residual", row.residual},
                        {"flagged", row.flagged}});
    return json{{"k_hat", result.k_hat}, {"rows", rows}};
}

// ---- axiom reports ----------------------------------------------------------

inline json report_to_json(const AxiomReport& report) {
    json checks = json::array();
    for (const auto& c : report.checks) {
        json witness(nullptr);
        if (c.witness) {
            witness = json{{"q", c.witness->q}};
            if (c.witness->p) witness["p"] = *c.witness->p;
            if (c.witness->p1) witness["p1"] = *c.witness->p1;
            if (c.witness->p2) witness["p2"] = *c.witness->p2;
        }
        checks.push_back({{"id", to_string(c.id)},
                          {"status", to_string(c.status)},
                          {"max_residual", c.max_residual},
                          {"witness", witness}});
    }
    return json{{"verdict", to_string(report.verdict)}, {"checks", checks}};
}

// ---- grids ------------------------------------------------------------------

/// Grid override: {"q_points": [...], "p_points": [...]}; absent fields keep
/// the defaults passed in.
inline GridSpec grid_from_json(const json& j, GridSpec defaults) {
    if (!j.is_object()) throw IoError("grid JSON must be an object");
    if (j.contains("q_points"))
        defaults.q_points = detail::values_from_json(j, "q_points", "grid");
    if (j.contains("p_points"))
        defaults.p_points = detail::values_from_json(j, "p_points", "grid");
    return defaults;
}

}  // namespace pseudoadd
