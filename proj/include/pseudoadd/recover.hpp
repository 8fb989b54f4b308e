#pragma once

// Inverse problem: given tabulated samples of a black-box content I_q(p),
// estimate the triple (k, phi, alpha). k comes from a near-1 group through
// the Shannon limit, phi from the pseudoadditivity defect at (p_ref, p_ref),
// alpha by inverting f_q(p) = 1 + phi I/k = p^alpha at p_ref. Recovery is
// purely sample-driven: no expression is ever evaluated.

#include <pseudoadd/content.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace pseudoadd {

struct SampleRow {
    double q;
    double p;
    double I;
};

/// Rows of (q, p, I), grouped by exact q value. Within a group p values are
/// distinct; p = 1 rows must carry I = 0 (within 1e-9); I is nonnegative.
class SampleTable {
public:
    SampleTable() = default;

    void add(double q, double p, double I) {
        if (!(q > 0.0) || !std::isfinite(q))
            throw DomainError("sample q must be positive, got " + std::to_string(q));
        if (!(p > 0.0) || p > 1.0)
            throw DomainError("sample p must lie in (0, 1], got " + std::to_string(p));
        if (!std::isfinite(I) || I < 0.0)
            throw DomainError("sample I must be finite and nonnegative, got " + std::to_string(I));
        if (p == 1.0 && std::fabs(I) > 1e-9)
            throw DomainError("I(q, 1) must be 0, got " + std::to_string(I));
        auto& group = groups_[q];
        for (const auto& row : group)
            if (row.p == p)
                throw DomainError("duplicate sample at q = " + std::to_string(q) +
                                  ", p = " + std::to_string(p));
        group.push_back({q, p, I});
        ++size_;
    }

    bool empty() const noexcept { return size_ == 0; }
    std::size_t size() const noexcept { return size_; }

    const std::map<double, std::vector<SampleRow>>& groups() const noexcept { return groups_; }

    const std::vector<SampleRow>* group_at(double q) const {
        auto it = groups_.find(q);
        return it == groups_.end() ? nullptr : &it->second;
    }

    /// All rows in ascending (q, insertion) order.
    std::vector<SampleRow> rows() const {
        std::vector<SampleRow> out;
        out.reserve(size_);
        for (const auto& [q, group] : groups_) out.insert(out.end(), group.begin(), group.end());
        return out;
    }

private:
    std::map<double, std::vector<SampleRow>> groups_;
    std::size_t size_ = 0;
};

struct RecoveryRow {
    double q;
    double phi_hat;
    double alpha_hat;
    double residual;  // worst relative prediction defect across the group
    bool flagged;     // residual > 1e-6
};

struct RecoveryResult {
    double k_hat;
    std::vector<RecoveryRow> rows;
};

/// k from the Shannon limit: median of -I / ln p over rows with q within
/// 1e-6 of 1 (p = 1 rows carry no information and are skipped).
inline double recover_k(const SampleTable& table) {
    std::vector<double> estimates;
    for (const auto& [q, group] : table.groups()) {
        if (std::fabs(q - 1.0) > 1e-6) continue;
        for (const auto& row : group)
            if (row.p != 1.0) estimates.push_back(-row.I / std::log(row.p));
    }
    if (estimates.empty())
        throw DomainError("missing anchor: no sample group with q within 1e-6 of 1");
    std::sort(estimates.begin(), estimates.end());
    std::size_t n = estimates.size();
    double k_hat = n % 2 == 1 ? estimates[n / 2]
                              : 0.5 * (estimates[n / 2 - 1] + estimates[n / 2]);
    if (!(k_hat > 0.0))
        throw DomainError("invalid table: nonpositive k estimate " + std::to_string(k_hat));
    return k_hat;
}

namespace detail {

inline const SampleRow& find_sample(const SampleTable& table, double q, double p) {
    const auto* group = table.group_at(q);
    if (!group) throw DomainError("no sample group at q = " + std::to_string(q));
    for (const auto& row : *group)
        if (row.p == p) return row;
    throw DomainError("group at q = " + std::to_string(q) + " lacks a sample at p = " +
                      std::to_string(p));
}

}  // namespace detail

/// phi(q) from the defect of additivity at p1 = p2 = p_ref:
/// phi = k (I(p_ref^2) - 2 I(p_ref)) / I(p_ref)^2.
inline double recover_phi(const SampleTable& table, double k, double q, double p_ref = 0.5) {
    double i1 = detail::find_sample(table, q, p_ref).I;
    double i2 = detail::find_sample(table, q, p_ref * p_ref).I;
    if (std::fabs(i1) < 1e-12)
        throw DomainError("degenerate sample: I(q, p_ref) is 0 at q = " + std::to_string(q));
    return k * (i2 - 2.0 * i1) / (i1 * i1);
}

/// alpha(q) by inverting p_ref^alpha = 1 + phi I(p_ref)/k. Near phi = 0 the
/// first-order expansion phi I / (k ln p_ref) sidesteps the 0/0.
inline double recover_alpha(const SampleTable& table, double k, double phi_hat, double q,
                            double p_ref = 0.5) {
    if (!(p_ref > 0.0) || p_ref >= 1.0) throw DomainError("p_ref must lie in (0, 1)");
    double i1 = detail::find_sample(table, q, p_ref).I;
    double lp = std::log(p_ref);
    if (std::fabs(phi_hat) < 1e-8) return phi_hat * i1 / (k * lp);
    double x = phi_hat * i1 / k;
    if (1.0 + x <= 0.0)
        throw DomainError("inconsistent sample: 1 + phi*I/k = " + std::to_string(1.0 + x) +
                          " is not positive at q = " + std::to_string(q));
    return std::log1p(x) / lp;
}

/// Full recovery: k from the near-1 anchor, then (phi, alpha) per q group,
/// with a residual column reporting how well the reconstructed triple
/// reproduces every row of the group. Rows with residual > 1e-6 are flagged.
inline RecoveryResult recover(const SampleTable& table, double p_ref = 0.5) {
    double k_hat = recover_k(table);
    RecoveryResult result{k_hat, {}};
    for (const auto& [q, group] : table.groups()) {
        double phi_hat = recover_phi(table, k_hat, q, p_ref);
        double alpha_hat = recover_alpha(table, k_hat, phi_hat, q, p_ref);

        // ratio alpha/phi without dividing the two near-zero estimates
        double ratio;
        if (std::fabs(phi_hat) < 1e-8) {
            double i1 = detail::find_sample(table, q, p_ref).I;
            ratio = i1 / (k_hat * std::log(p_ref));
        } else {
            ratio = alpha_hat / phi_hat;
        }

        double residual = 0.0;
        for (const auto& row : group) {
            double lp = std::log(row.p);
            double predicted = std::fabs(phi_hat) >= 1e-8
                                   ? (k_hat / phi_hat) * std::expm1(alpha_hat * lp)
                                   : k_hat * ratio * lp * detail::expm1_over(alpha_hat * lp);
            residual = std::max(residual,
                                std::fabs(predicted - row.I) / (1.0 + std::fabs(row.I)));
        }
        result.rows.push_back({q, phi_hat, alpha_hat, residual, residual > 1e-6});
    }
    return result;
}

/// Tabulate a spec for round trips; q values outside the spec's domain are
/// skipped.
inline SampleTable make_sample_table(const ContentSpec& spec, std::span<const double> qs,
                                     std::span<const double> ps) {
    SampleTable table;
    for (double q : qs) {
        if (!spec.contains_q(q)) continue;
        for (double p : ps) table.add(q, p, info_content_stable(spec, {q, p}));
    }
    return table;
}

}  // namespace pseudoadd
