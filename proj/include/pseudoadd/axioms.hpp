#pragma once

// Numerical verification of a ContentSpec against the content axioms
// (continuity variant) and the side conditions of the general solution:
//
//   T0             I_q(p) -> -k ln p as q -> 1, probed on a two-sided ladder
//   T1-continuity  no disproportionate jumps of I or phi across the q grid
//   T2-convexity   second differences in p plus the closed-form sign test
//   T3-residual    pseudoadditivity defect vanishes on the grid (and at q = 1)
//   T3-phi-nonzero phi(q) != 0 away from q = 1
//   cond-a         alpha(q)/phi(q) -> -1 along the ladder
//   cond-b         alpha in (-inf,0] where phi > 0, in [0,1] where phi < 0
//   constraint-19  k (alpha/phi)(alpha - 1) >= 0
//
// Failures carry a witness point; continuity is only ever flagged
// inconclusive (samples cannot prove a function continuous).

#include <pseudoadd/content.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace pseudoadd {

enum class CheckStatus { pass, fail, inconclusive };

enum class CheckId {
    t0,
    t1_continuity,
    t2_convexity,
    t3_residual,
    t3_phi_nonzero,
    cond_a,
    cond_b,
    constraint_19,
};

inline const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        default: return "inconclusive";
    }
}

inline const char* to_string(CheckId id) {
    switch (id) {
        case CheckId::t0: return "T0";
        case CheckId::t1_continuity: return "T1-continuity";
        case CheckId::t2_convexity: return "T2-convexity";
        case CheckId::t3_residual: return "T3-residual";
        case CheckId::t3_phi_nonzero: return "T3-phi-nonzero";
        case CheckId::cond_a: return "cond-a";
        case CheckId::cond_b: return "cond-b";
        case CheckId::constraint_19: return "constraint-19";
    }
    return "?";
}

struct Witness {
    double q;
    std::optional<double> p;
    std::optional<double> p1, p2;

    static Witness at(double q) { return {q, std::nullopt, std::nullopt, std::nullopt}; }
    static Witness at(double q, double p) { return {q, p, std::nullopt, std::nullopt}; }
    static Witness at(double q, double p1, double p2) { return {q, std::nullopt, p1, p2}; }
};

struct CheckRecord {
    CheckId id{};
    CheckStatus status = CheckStatus::pass;
    double max_residual = 0.0;
    std::optional<Witness> witness;
};

/// Sampling grid: base q points (positive, excluding 1) plus the fixed
/// near-1 ladder {1 +- 10^-j, j = 2..6}, and p points in (0, 1].
struct GridSpec {
    std::vector<double> q_points;
    std::vector<double> p_points;

    static constexpr int ladder_j_min = 2;
    static constexpr int ladder_j_max = 6;

    static const std::vector<double>& ladder_offsets() {
        static const std::vector<double> offs = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
        return offs;
    }

    /// q from 0.1 to 4.0 in steps of 0.1 clipped to the spec's domain,
    /// p from 0.05 to 1.0 in steps of 0.05.
    static GridSpec defaults_for(const ContentSpec& spec) {
        GridSpec g;
        for (int i = 1; i <= 40; ++i) {
            if (i == 10) continue;  // q = 1 is held out of the base grid
            double q = i / 10.0;
            if (spec.contains_q(q)) g.q_points.push_back(q);
        }
        for (int i = 1; i <= 20; ++i) g.p_points.push_back(i / 20.0);
        return g;
    }

    std::vector<double> ladder_in_domain(const ContentSpec& spec) const {
        std::vector<double> qs;
        for (double off : ladder_offsets()) {
            for (double q : {1.0 - off, 1.0 + off})
                if (spec.contains_q(q)) qs.push_back(q);
        }
        std::sort(qs.begin(), qs.end());
        return qs;
    }

    /// Base points and ladder merged, sorted, deduplicated.
    std::vector<double> all_q(const ContentSpec& spec) const {
        std::vector<double> qs = q_points;
        auto ladder = ladder_in_domain(spec);
        qs.insert(qs.end(), ladder.begin(), ladder.end());
        std::sort(qs.begin(), qs.end());
        qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
        return qs;
    }
};

struct AxiomReport {
    CheckStatus verdict = CheckStatus::pass;  // pass | fail
    std::vector<CheckRecord> checks;

    bool passed() const noexcept { return verdict == CheckStatus::pass; }
};

namespace detail {

inline void validate_grid(const ContentSpec& spec, const GridSpec& grid) {
    for (double q : grid.q_points) {
        if (q == 1.0) throw DomainError("grid q_points must exclude q = 1");
        if (!spec.contains_q(q))
            throw DomainError("grid q = " + std::to_string(q) + " outside the spec's q domain");
    }
    for (double p : grid.p_points)
        if (!(p > 0.0) || p > 1.0)
            throw DomainError("grid p = " + std::to_string(p) + " outside (0, 1]");
    if (grid.q_points.empty() || grid.p_points.empty())
        throw DomainError("grid needs at least one q point and one p point");
}

// Most negative value of a scan, with its location.
struct WorstPoint {
    double value = 0.0;
    Witness where = Witness::at(0.0);
    bool recorded = false;

    void note(double v, Witness w) {
        if (!recorded || v < value) {
            value = v;
            where = w;
            recorded = true;
        }
    }
};

}  // namespace detail

/// T0: on the near-1 ladder, I must approach -k ln p inside an envelope that
/// shrinks with the rung: |I - (-k ln p)| <= max(8*10^-j, 1e-5) * (1 + |k ln p|).
inline CheckRecord check_T0(const ContentSpec& spec, const GridSpec& grid) {
    CheckRecord rec{CheckId::t0, CheckStatus::pass, 0.0, std::nullopt};
    bool any_rung = false;
    for (double off : GridSpec::ladder_offsets()) {
        double tol = std::max(8.0 * off, 1e-5);
        for (double q : {1.0 - off, 1.0 + off}) {
            if (!spec.contains_q(q)) continue;
            any_rung = true;
            for (double p : grid.p_points) {
                double target = -spec.k() * std::log(p);
                double resid;
                try {
                    resid = std::fabs(info_content_stable(spec, {q, p}) - target) /
                            (1.0 + std::fabs(target));
                } catch (const std::runtime_error&) {
                    return {CheckId::t0, CheckStatus::fail, rec.max_residual, Witness::at(q, p)};
                }
                rec.max_residual = std::max(rec.max_residual, resid);
                if (resid > tol && rec.status == CheckStatus::pass) {
                    rec.status = CheckStatus::fail;
                    rec.witness = Witness::at(q, p);
                }
            }
        }
    }
    if (!any_rung) rec.status = CheckStatus::inconclusive;
    return rec;
}

namespace detail {

// Continuity heuristic: an interval is suspicious when its jump is far out
// of proportion with the neighbouring difference quotients. Returns the
// worst ratio and where it occurred.
inline bool scan_for_jumps(const std::vector<double>& qs, const std::vector<double>& vals,
                           double& worst_ratio, std::size_t& worst_interval) {
    std::size_t n = qs.size();
    if (n < 3) return false;
    std::vector<double> rate(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        rate[i] = std::fabs(vals[i + 1] - vals[i]) / (qs[i + 1] - qs[i]);
    bool flagged = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double jump = std::fabs(vals[i + 1] - vals[i]);
        if (jump <= 1e-9 * (1.0 + std::fabs(vals[i]) + std::fabs(vals[i + 1]))) continue;
        double neighbour = 0.0;
        if (i > 0) neighbour = std::max(neighbour, rate[i - 1]);
        if (i + 1 < rate.size()) neighbour = std::max(neighbour, rate[i + 1]);
        double ratio = rate[i] / std::max(neighbour, 1e-300);
        if (ratio > 12.0) {
            if (!flagged || ratio > worst_ratio) {
                worst_ratio = ratio;
                worst_interval = i;
            }
            flagged = true;
        }
    }
    return flagged;
}

}  // namespace detail

/// T1 (continuity variant): I(., p) and phi over adjacent grid q must not
/// jump out of proportion with their neighbourhood. A tripped heuristic is
/// inconclusive, never a failure; only evaluation errors fail.
inline CheckRecord check_T1_continuity(const ContentSpec& spec, const GridSpec& grid) {
    CheckRecord rec{CheckId::t1_continuity, CheckStatus::pass, 0.0, std::nullopt};
    std::vector<double> qs = grid.all_q(spec);
    if (spec.contains_q(1.0)) {
        qs.push_back(1.0);
        std::sort(qs.begin(), qs.end());
        qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
    }

    std::vector<double> phis(qs.size());
    for (std::size_t i = 0; i < qs.size(); ++i) {
        try {
            phis[i] = spec.phi_at(qs[i]);
        } catch (const std::runtime_error&) {
            return {CheckId::t1_continuity, CheckStatus::fail, rec.max_residual,
                    Witness::at(qs[i])};
        }
    }
    double ratio = 0.0;
    std::size_t at = 0;
    if (detail::scan_for_jumps(qs, phis, ratio, at)) {
        rec.status = CheckStatus::inconclusive;
        rec.max_residual = ratio;
        rec.witness = Witness::at(qs[at]);
    }

    for (double p : grid.p_points) {
        std::vector<double> vals(qs.size());
        for (std::size_t i = 0; i < qs.size(); ++i) {
            try {
                vals[i] = info_content_stable(spec, {qs[i], p});
            } catch (const std::runtime_error&) {
                return {CheckId::t1_continuity, CheckStatus::fail, rec.max_residual,
                        Witness::at(qs[i], p)};
            }
        }
        if (detail::scan_for_jumps(qs, vals, ratio, at) && ratio > rec.max_residual) {
            rec.status = CheckStatus::inconclusive;
            rec.max_residual = ratio;
            rec.witness = Witness::at(qs[at], p);
        }
    }
    return rec;
}

namespace detail {

// Closed-form convexity sign k (alpha/phi)(alpha - 1), scanned over the grid.
// Shared by T2 and constraint-19.
inline CheckRecord constraint19_scan(const ContentSpec& spec, const GridSpec& grid, CheckId id) {
    CheckRecord rec{id, CheckStatus::pass, 0.0, std::nullopt};
    WorstPoint worst;
    for (double q : grid.all_q(spec)) {
        double phi, alpha;
        try {
            phi = spec.phi_at(q);
            alpha = spec.alpha_at(q);
        } catch (const std::runtime_error&) {
            return {id, CheckStatus::fail, 0.0, Witness::at(q)};
        }
        if (phi == 0.0) continue;  // reported by T3-phi-nonzero
        double value = spec.k() * (alpha / phi) * (alpha - 1.0);
        worst.note(value, Witness::at(q));
    }
    if (worst.recorded && worst.value < -1e-12) {
        rec.status = CheckStatus::fail;
        rec.witness = worst.where;
        rec.max_residual = -worst.value;
    }
    return rec;
}

}  // namespace detail

/// T2: convexity of p -> I_q(p). Second central differences with h = 1e-4
/// must stay above -1e-6 * h^2 * (1 + |I|), and the closed-form sign
/// condition k (alpha/phi)(alpha - 1) >= 0 must hold; both are required.
inline CheckRecord check_T2_convexity(const ContentSpec& spec, const GridSpec& grid) {
    CheckRecord rec{CheckId::t2_convexity, CheckStatus::pass, 0.0, std::nullopt};
    constexpr double h = 1e-4;
    detail::WorstPoint worst;  // most negative normalized second difference
    for (double q : grid.all_q(spec)) {
        for (double p : grid.p_points) {
            if (p - h <= 0.0 || p + h > 1.0) continue;
            double d2, mid;
            try {
                mid = info_content_stable(spec, {q, p});
                d2 = info_content_stable(spec, {q, p - h}) - 2.0 * mid +
                     info_content_stable(spec, {q, p + h});
            } catch (const std::runtime_error&) {
                return {CheckId::t2_convexity, CheckStatus::fail, rec.max_residual,
                        Witness::at(q, p)};
            }
            worst.note(d2 / (h * h * (1.0 + std::fabs(mid))), Witness::at(q, p));
        }
    }
    if (worst.recorded && worst.value < -1e-6) {
        rec.status = CheckStatus::fail;
        rec.max_residual = -worst.value;
        rec.witness = worst.where;
    }
    CheckRecord sign = detail::constraint19_scan(spec, grid, CheckId::t2_convexity);
    if (sign.status == CheckStatus::fail && rec.status == CheckStatus::pass) {
        rec.status = CheckStatus::fail;
        rec.max_residual = sign.max_residual;
        rec.witness = sign.witness;
    }
    return rec;
}

/// T3 residual: pseudoadditivity defect over the grid (plus the q = 1 probe,
/// which is what detects phi(1) != 0) must vanish to rounding, relative to
/// the content magnitude: |residual| <= 1e-9 * (1 + |I(p1 p2)| / k).
inline CheckRecord check_T3_residual(const ContentSpec& spec, const GridSpec& grid) {
    CheckRecord rec{CheckId::t3_residual, CheckStatus::pass, 0.0, std::nullopt};
    std::vector<double> qs = grid.all_q(spec);
    if (spec.contains_q(1.0)) qs.push_back(1.0);
    for (double q : qs) {
        for (std::size_t i = 0; i < grid.p_points.size(); ++i) {
            for (std::size_t j = i; j < grid.p_points.size(); ++j) {
                double p1 = grid.p_points[i], p2 = grid.p_points[j];
                double normalized;
                try {
                    auto parts = detail::residual_parts(spec, q, p1, p2);
                    normalized = std::fabs(parts.residual) / (1.0 + std::fabs(parts.i12_over_k));
                } catch (const std::runtime_error&) {
                    return {CheckId::t3_residual, CheckStatus::fail, rec.max_residual,
                            Witness::at(q, p1, p2)};
                }
                rec.max_residual = std::max(rec.max_residual, normalized);
                if (normalized > 1e-9 && rec.status == CheckStatus::pass) {
                    rec.status = CheckStatus::fail;
                    rec.witness = Witness::at(q, p1, p2);
                }
            }
        }
    }
    return rec;
}

/// phi(q) != 0 for base grid q != 1 (the ladder is excluded: phi legitimately
/// vanishes as q -> 1). max_residual reports the smallest |phi| seen.
inline CheckRecord check_T3_phi_nonzero(const ContentSpec& spec, const GridSpec& grid) {
    CheckRecord rec{CheckId::t3_phi_nonzero, CheckStatus::pass, 0.0, std::nullopt};
    double min_abs = std::numeric_limits<double>::infinity();
    for (double q : grid.q_points) {
        double phi;
        try {
            phi = spec.phi_at(q);
        } catch (const std::runtime_error&) {
            return {CheckId::t3_phi_nonzero, CheckStatus::fail, 0.0, Witness::at(q)};
        }
        if (std::fabs(phi) < min_abs) {
            min_abs = std::fabs(phi);
            if (min_abs <= 1e-12 && rec.status == CheckStatus::pass) {
                rec.status = CheckStatus::fail;
                rec.witness = Witness::at(q);
            }
        }
    }
    rec.max_residual = min_abs;
    return rec;
}

/// Condition (a): r_j = alpha(1 +- 10^-j) / phi(1 +- 10^-j) must converge to
/// -1: |r_6 + 1| <= 1e-3 with deviations nonincreasing within a factor-2 slack.
inline CheckRecord check_condition_a(const ContentSpec& spec, const GridSpec&) {
    CheckRecord rec{CheckId::cond_a, CheckStatus::pass, 0.0, std::nullopt};
    std::vector<double> dev;
    std::vector<double> rung_q;
    for (double off : GridSpec::ladder_offsets()) {
        double worst = -1.0;
        double worst_q = 0.0;
        for (double q : {1.0 - off, 1.0 + off}) {
            if (!spec.contains_q(q)) continue;
            double phi, alpha;
            try {
                phi = spec.phi_at(q);
                alpha = spec.alpha_at(q);
            } catch (const std::runtime_error&) {
                return {CheckId::cond_a, CheckStatus::fail, 0.0, Witness::at(q)};
            }
            double r = phi == 0.0 ? std::numeric_limits<double>::infinity() : alpha / phi;
            double d = std::fabs(r + 1.0);
            if (d > worst) {
                worst = d;
                worst_q = q;
            }
        }
        if (worst >= 0.0) {
            dev.push_back(worst);
            rung_q.push_back(worst_q);
        }
    }
    if (dev.empty()) {
        rec.status = CheckStatus::inconclusive;
        return rec;
    }
    rec.max_residual = dev.back();
    if (dev.back() > 1e-3) {
        rec.status = CheckStatus::fail;
        rec.witness = Witness::at(rung_q.back());
        return rec;
    }
    for (std::size_t j = 0; j + 1 < dev.size(); ++j) {
        if (dev[j + 1] > std::max(2.0 * dev[j], 1e-9)) {
            rec.status = CheckStatus::fail;
            rec.witness = Witness::at(rung_q[j + 1]);
            rec.max_residual = dev[j + 1];
            return rec;
        }
    }
    return rec;
}

/// Condition (b): alpha(q) <= 0 wherever phi > 0, and 0 <= alpha(q) <= 1
/// wherever phi < 0, with 1e-12 slack at the boundaries.
inline CheckRecord check_condition_b(const ContentSpec& spec, const GridSpec& grid) {
    CheckRecord rec{CheckId::cond_b, CheckStatus::pass, 0.0, std::nullopt};
    for (double q : grid.all_q(spec)) {
        double phi, alpha;
        try {
            phi = spec.phi_at(q);
            alpha = spec.alpha_at(q);
        } catch (const std::runtime_error&) {
            return {CheckId::cond_b, CheckStatus::fail, 0.0, Witness::at(q)};
        }
        double violation = 0.0;
        if (phi > 0.0) {
            violation = alpha - 1e-12;  // positive means out of (-inf, 0]
        } else if (phi < 0.0) {
            violation = std::max(-1e-12 - alpha, alpha - (1.0 + 1e-12));
        }
        if (violation > 0.0 && violation > rec.max_residual) {
            rec.status = CheckStatus::fail;
            rec.max_residual = violation;
            rec.witness = Witness::at(q);
        }
    }
    return rec;
}

/// Convexity constraint in closed form: k (alpha/phi)(alpha - 1) >= -1e-12.
inline CheckRecord check_constraint_19(const ContentSpec& spec, const GridSpec& grid) {
    return detail::constraint19_scan(spec, grid, CheckId::constraint_19);
}

/// Run every check and aggregate. The verdict is pass exactly when no check
/// fails; inconclusive continuity flags do not fail a spec.
inline AxiomReport verify(const ContentSpec& spec, const GridSpec& grid) {
    detail::validate_grid(spec, grid);
    AxiomReport report;
    report.checks.push_back(check_T0(spec, grid));
    report.checks.push_back(check_T1_continuity(spec, grid));
    report.checks.push_back(check_T2_convexity(spec, grid));
    report.checks.push_back(check_T3_residual(spec, grid));
    report.checks.push_back(check_T3_phi_nonzero(spec, grid));
    report.checks.push_back(check_condition_a(spec, grid));
    report.checks.push_back(check_condition_b(spec, grid));
    report.checks.push_back(check_constraint_19(spec, grid));
    for (const auto& c : report.checks) {
        if (c.status == CheckStatus::fail) {
            report.verdict = CheckStatus::fail;
            break;
        }
    }
    return report;
}

inline AxiomReport verify(const ContentSpec& spec) {
    return verify(spec, GridSpec::defaults_for(spec));
}

}  // namespace pseudoadd
