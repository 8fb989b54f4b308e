#pragma once

// Command-line surface. Subcommands: eval, entropy, kl, verify, recover,
// scan. Exit codes: 0 success (and verify pass), 1 domain/validation error,
// 2 usage or malformed input, 3 verify fail. Data streams carry no
// timestamps or banners, so identical invocations emit identical bytes.

#include <pseudoadd/axioms.hpp>
#include <pseudoadd/content.hpp>
#include <pseudoadd/entropy.hpp>
#include <pseudoadd/io.hpp>
#include <pseudoadd/recover.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#ifdef __unix__
#include <unistd.h>
#endif

namespace pseudoadd {

inline constexpr const char* kCliVersion = "0.1.0";

namespace cli_detail {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SpecOpts {
    std::string preset_name;
    std::string spec_file;
    std::string phi, alpha;
    double k = 1.0;
    double q_min = 0.0;
    std::optional<double> q_max;
};

inline void add_spec_options(CLI::App* sub, SpecOpts& o) {
    sub->add_option("--preset", o.preset_name, "built-in family: suyari or hc");
    sub->add_option("--spec", o.spec_file, "spec JSON file");
    sub->add_option("--k", o.k, "scale k > 0 (with --phi/--alpha; default 1)");
    sub->add_option("--phi", o.phi, "phi(q) expression");
    sub->add_option("--alpha", o.alpha, "alpha(q) expression");
    sub->add_option("--q-min", o.q_min, "exclusive lower q bound (default 0)");
    sub->add_option("--q-max", o.q_max, "inclusive upper q bound (default none)");
}

inline std::string slurp(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot read file: " + path);
    std::ostringstream buf;
    buf << file.rdbuf();
    return buf.str();
}

inline ContentSpec build_spec(const SpecOpts& o) {
    int sources = 0;
    if (!o.preset_name.empty()) ++sources;
    if (!o.spec_file.empty()) ++sources;
    if (!o.phi.empty() || !o.alpha.empty()) ++sources;
    if (sources != 1)
        throw UsageError("exactly one spec source required: --preset, --spec, or --phi/--alpha");
    if (!o.preset_name.empty()) return preset(o.preset_name);
    if (!o.spec_file.empty()) return spec_from_json(parse_json(slurp(o.spec_file), o.spec_file));
    if (o.phi.empty() || o.alpha.empty())
        throw UsageError("--phi and --alpha must be given together");
    return ContentSpec(o.k, Expr::parse(o.phi), Expr::parse(o.alpha), o.q_min, o.q_max);
}

inline Distribution load_distribution(const std::string& source) {
    if (source.rfind("inline:", 0) == 0) return distribution_from_inline(source.substr(7));
    return distribution_from_text(slurp(source), source);
}

enum class Format { text, json, csv };

inline Format pick_format(const std::string& requested, std::ostream& out) {
    if (requested == "text") return Format::text;
    if (requested == "json") return Format::json;
    if (requested == "csv") return Format::csv;
    bool tty = false;
#ifdef __unix__
    tty = (&out == &std::cout) && isatty(fileno(stdout)) != 0;
#else
    (void)out;
#endif
    return tty ? Format::text : Format::json;
}

/// One scalar result, rendered per format. Infinities print as "inf".
inline void emit_scalar(std::ostream& out, Format fmt, const char* name, double value,
                        std::initializer_list<std::pair<const char*, double>> inputs) {
    std::string printed = std::isinf(value) ? (value > 0 ? "inf" : "-inf") : fmt17(value);
    switch (fmt) {
        case Format::text: out << printed << '\n'; break;
        case Format::csv: {
            std::string header, row;
            for (const auto& [key, v] : inputs) {
                header += key;
                header += ',';
                row += fmt17(v);
                row += ',';
            }
            out << header << name << '\n' << row << printed << '\n';
            break;
        }
        case Format::json: {
            json j;
            for (const auto& [key, v] : inputs) j[key] = v;
            if (std::isinf(value))
                j[name] = printed;
            else
                j[name] = value;
            out << j.dump() << '\n';
            break;
        }
    }
}

inline void render_report_text(std::ostream& out, const AxiomReport& report) {
    for (const auto& c : report.checks) {
        out << to_string(c.id) << ": ";
        out << to_string(c.status) << "  max_residual=" << fmt17(c.max_residual);
        if (c.witness) {
            out << "  witness q=" << fmt17(c.witness->q);
            if (c.witness->p) out << " p=" << fmt17(*c.witness->p);
            if (c.witness->p1) out << " p1=" << fmt17(*c.witness->p1);
            if (c.witness->p2) out << " p2=" << fmt17(*c.witness->p2);
        }
        out << '\n';
    }
    out << "verdict: " << to_string(report.verdict) << '\n';
}

}  // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
                   std::ostream& err) {
    using namespace cli_detail;

    CLI::App app{"nonextensive information content toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // global --format/--out/--verbose may follow the subcommand
    std::string format;
    std::string out_path;
    bool verbose = false;
    app.add_option("--format", format, "output format: json, csv, or text")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--out", out_path, "write output to a file instead of stdout");
    app.add_flag("--verbose", verbose, "print the version banner to stderr");

    SpecOpts eval_spec, entropy_spec, kl_spec, verify_spec, scan_spec;
    double eval_q = 0.0, eval_p = 0.0;
    double entropy_q = 0.0, kl_q = 0.0;
    std::string entropy_dist, kl_dist, kl_dist_b;
    std::string verify_grid;
    double scan_from = 0.0, scan_to = 0.0, scan_p = 0.5;
    int scan_steps = 0;
    std::string scan_dist = "inline:0.5,0.5";
    bool emit_samples = false;
    std::string recover_input;

    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate the information content I_q(p)");
    add_spec_options(eval_cmd, eval_spec);
    eval_cmd->add_option("--q", eval_q, "q value")->required();
    eval_cmd->add_option("--p", eval_p, "probability in (0, 1]")->required();

    CLI::App* entropy_cmd = app.add_subcommand("entropy", "entropy S_q of a distribution");
    add_spec_options(entropy_cmd, entropy_spec);
    entropy_cmd->add_option("--q", entropy_q, "q value")->required();
    entropy_cmd->add_option("--dist", entropy_dist, "distribution: inline:... or a file")
        ->required();

    CLI::App* kl_cmd = app.add_subcommand("kl", "divergence K_q(distA || distB)");
    add_spec_options(kl_cmd, kl_spec);
    kl_cmd->add_option("--q", kl_q, "q value")->required();
    kl_cmd->add_option("--dist", kl_dist, "first distribution")->required();
    kl_cmd->add_option("--dist-b", kl_dist_b, "second distribution")->required();

    CLI::App* verify_cmd = app.add_subcommand("verify", "check a spec against the axioms");
    add_spec_options(verify_cmd, verify_spec);
    verify_cmd->add_option("--grid", verify_grid, "grid override JSON file");

    CLI::App* recover_cmd =
        app.add_subcommand("recover", "estimate (k, phi, alpha) from a q,p,I sample table");
    recover_cmd->add_option("input", recover_input, "sample CSV file (default: stdin)");

    CLI::App* scan_cmd = app.add_subcommand("scan", "tabulate the family over a q range as CSV");
    add_spec_options(scan_cmd, scan_spec);
    scan_cmd->add_option("--q-from", scan_from, "first q")->required();
    scan_cmd->add_option("--q-to", scan_to, "last q")->required();
    scan_cmd->add_option("--steps", scan_steps, "number of grid points")
        ->required()
        ->check(CLI::PositiveNumber);
    scan_cmd->add_option("--p", scan_p, "reference p for the I column (default 0.5)");
    scan_cmd->add_option("--dist", scan_dist, "distribution for the S column (default fair coin)");
    scan_cmd->add_flag("--emit-samples", emit_samples,
                       "emit a q,p,I sample table for recover instead of the scan columns");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    if (verbose) err << "pseudoadd " << kCliVersion << '\n';

    std::ofstream out_file;
    std::ostream* sink = &out;
    try {
        if (!out_path.empty()) {
            out_file.open(out_path, std::ios::binary);
            if (!out_file) throw IoError("cannot write file: " + out_path);
            sink = &out_file;
        }
        Format fmt = pick_format(format, out);

        if (app.got_subcommand(eval_cmd)) {
            ContentSpec spec = build_spec(eval_spec);
            double value = info_content_stable(spec, {eval_q, eval_p});
            emit_scalar(*sink, fmt, "I", value, {{"q", eval_q}, {"p", eval_p}});
            return 0;
        }

        if (app.got_subcommand(entropy_cmd)) {
            ContentSpec spec = build_spec(entropy_spec);
            double value = entropy(spec, load_distribution(entropy_dist), entropy_q);
            emit_scalar(*sink, fmt, "S", value, {{"q", entropy_q}});
            return 0;
        }

        if (app.got_subcommand(kl_cmd)) {
            ContentSpec spec = build_spec(kl_spec);
            double value =
                kl_divergence(spec, load_distribution(kl_dist), load_distribution(kl_dist_b), kl_q);
            emit_scalar(*sink, fmt, "K", value, {{"q", kl_q}});
            return 0;
        }

        if (app.got_subcommand(verify_cmd)) {
            ContentSpec spec = build_spec(verify_spec);
            GridSpec grid = GridSpec::defaults_for(spec);
            if (!verify_grid.empty())
                grid = grid_from_json(parse_json(slurp(verify_grid), verify_grid), grid);
            AxiomReport report = verify(spec, grid);
            if (fmt == Format::text)
                render_report_text(*sink, report);
            else
                *sink << report_to_json(report).dump(2) << '\n';
            return report.passed() ? 0 : 3;
        }

        if (app.got_subcommand(recover_cmd)) {
            SampleTable table;
            if (recover_input.empty() || recover_input == "-") {
                table = read_samples_csv(in, "stdin");
            } else {
                std::istringstream stream(slurp(recover_input));
                table = read_samples_csv(stream, recover_input);
            }
            RecoveryResult result = recover(table);
            if (fmt == Format::json)
                *sink << recovery_to_json(result).dump(2) << '\n';
            else
                write_recovery_csv(*sink, result);
            return 0;
        }

        if (app.got_subcommand(scan_cmd)) {
            ContentSpec spec = build_spec(scan_spec);
            if (scan_to < scan_from) throw UsageError("--q-to must be >= --q-from");
            std::vector<double> qs;
            if (scan_steps == 1) {
                qs.push_back(scan_from);
            } else {
                for (int i = 0; i < scan_steps; ++i)
                    qs.push_back(scan_from + i * (scan_to - scan_from) / (scan_steps - 1));
            }
            for (double q : qs)
                if (!spec.contains_q(q))
                    throw DomainError("scan grid q = " + std::to_string(q) +
                                      " outside the spec's q domain");

            if (emit_samples) {
                // anchors near q = 1 make the output self-sufficient for recover
                for (double anchor : {1.0 - 1e-7, 1.0 + 1e-7})
                    if (spec.contains_q(anchor)) qs.push_back(anchor);
                std::sort(qs.begin(), qs.end());
                qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
                const double ps[] = {0.9, 0.5, 0.25};
                write_samples_csv(*sink, make_sample_table(spec, qs, ps));
                return 0;
            }

            Distribution dist = load_distribution(scan_dist);
            *sink << "q,phi,alpha,alpha_over_phi,I,S\n";
            for (double q : qs) {
                double phi = spec.phi_at(q);
                double alpha = spec.alpha_at(q);
                double ratio;
                if (phi != 0.0) {
                    ratio = alpha / phi;
                } else {
                    // phi's root (q = 1): report the one-sided limit instead of 0/0
                    double probe = spec.contains_q(q + 1e-9) ? q + 1e-9 : q - 1e-9;
                    double probe_phi = spec.phi_at(probe);
                    ratio = probe_phi == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                             : spec.alpha_at(probe) / probe_phi;
                }
                *sink << fmt17(q) << ',' << fmt17(phi) << ',' << fmt17(alpha) << ','
                      << fmt17(ratio) << ',' << fmt17(info_content_stable(spec, {q, scan_p}))
                      << ',' << fmt17(entropy(spec, dist, q)) << '\n';
            }
            return 0;
        }

        err << "usage error: no subcommand\n";
        return 2;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const EvalError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace pseudoadd
