#pragma once

// Finite distributions, the generalized q-expectation
// E[X] = sum_i p_i^(1 - alpha(q)) X_i, the entropy S_q it induces on the
// information content, and the matching Kullback-Leibler divergence.

#include <pseudoadd/content.hpp>

#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

namespace pseudoadd {

class Distribution {
public:
    explicit Distribution(std::vector<double> weights, bool renormalize = false)
        : w_(std::move(weights)) {
        if (w_.empty()) throw DomainError("distribution needs at least one outcome");
        double sum = 0.0;
        for (double x : w_) {
            if (!(x >= 0.0) || !std::isfinite(x))
                throw DomainError("distribution weights must be finite and nonnegative");
            sum += x;
        }
        if (renormalize) {
            if (!(sum > 0.0)) throw DomainError("cannot renormalize a zero distribution");
            for (double& x : w_) x /= sum;
        } else if (std::fabs(sum - 1.0) > 1e-9) {
            throw DomainError("distribution weights sum to " + std::to_string(sum) +
                              ", expected 1 within 1e-9");
        }
    }

    std::size_t size() const noexcept { return w_.size(); }
    double operator[](std::size_t i) const noexcept { return w_[i]; }
    const std::vector<double>& weights() const noexcept { return w_; }

private:
    std::vector<double> w_;
};

struct Observable {
    std::vector<double> values;
};

namespace detail {

// p^g for a probability weight. p = 0 with g = 0 counts as 0 (the whole
// term vanishes with the outcome); p = 0 with g < 0 diverges.
inline double weight_power(double p, double g, double q) {
    if (p == 0.0) {
        if (g < 0.0)
            throw DomainError("divergent expectation: zero-probability outcome with exponent " +
                              std::to_string(g) + " at q = " + std::to_string(q));
        return 0.0;
    }
    return std::pow(p, g);
}

}  // namespace detail

/// Generalized q-expectation of an observable: sum_i p_i^(1 - alpha(q)) X_i.
/// At q = 1 this is the ordinary expectation.
inline double g_expectation(const ContentSpec& spec, const Distribution& dist,
                            const Observable& obs, double q) {
    if (obs.values.size() != dist.size())
        throw DomainError("observable length does not match the distribution");
    if (!spec.contains_q(q)) throw DomainError("q = " + std::to_string(q) + " outside q domain");

    if (q == 1.0) {
        double sum = 0.0;
        for (std::size_t i = 0; i < dist.size(); ++i) sum += dist[i] * obs.values[i];
        return sum;
    }
    double g = 1.0 - spec.alpha_at(q);
    double sum = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i)
        sum += detail::weight_power(dist[i], g, q) * obs.values[i];
    return sum;
}

/// S_q = (k/phi) (1 - sum_i p_i^(1 - alpha)); Shannon (-k sum p ln p) at q = 1.
/// The sum is accumulated through expm1 so the cancellation against 1 costs
/// nothing, and a phi ~ 0 band switches to the same stabilized form as
/// info_content_stable.
inline double entropy(const ContentSpec& spec, const Distribution& dist, double q) {
    if (!spec.contains_q(q)) throw DomainError("q = " + std::to_string(q) + " outside q domain");

    if (q == 1.0) {
        double sum = 0.0;
        for (double p : dist.weights())
            if (p > 0.0) sum += p * std::log(p);
        return -spec.k() * sum;
    }

    double phi = spec.phi_at(q);
    double alpha = spec.alpha_at(q);
    double g = 1.0 - alpha;
    for (double p : dist.weights()) {
        if (p == 0.0 && g < 0.0)
            throw DomainError("divergent expectation: zero-probability outcome with exponent " +
                              std::to_string(g) + " at q = " + std::to_string(q));
    }

    if (std::fabs(phi) < 1e-8) {
        if (std::fabs(phi) < 1e-300 && std::fabs(alpha) < 1e-300)
            throw DomainError("degenerate spec: alpha/phi is 0/0 at q = " + std::to_string(q));
        if (phi == 0.0)
            throw DomainError("phi(q) = 0 at q = " + std::to_string(q) +
                              " (invalid spec at that point)");
        long double lphi = spec.phi().eval_ld(q);
        long double lalpha = spec.alpha().eval_ld(q);
        if (lphi == 0.0L) {
            lphi = phi;
            lalpha = alpha;
        }
        long double sum = 0.0L;
        for (double p : dist.weights()) {
            if (p <= 0.0) continue;
            long double lp = logl(static_cast<long double>(p));
            sum += static_cast<long double>(p) * lp * detail::expm1_over(-lalpha * lp);
        }
        return static_cast<double>(static_cast<long double>(spec.k()) * (lalpha / lphi) * sum);
    }

    // 1 - sum p^(1-alpha) = -(sum_i p_i (p_i^-alpha - 1)) - (sum_i p_i - 1)
    double defect = 0.0;
    double total = 0.0;
    for (double p : dist.weights()) {
        total += p;
        if (p > 0.0) defect += p * std::expm1(-alpha * std::log(p));
    }
    return -(spec.k() / phi) * (defect + (total - 1.0));
}

/// K_q(pA || pB) = E_{q,pA}[ I_q(pB) - I_q(pA) ]. Infinite divergence is
/// reported as +infinity, not an error.
inline double kl_divergence(const ContentSpec& spec, const Distribution& pa,
                            const Distribution& pb, double q) {
    if (pa.size() != pb.size()) throw DomainError("distributions differ in length");
    if (!spec.contains_q(q)) throw DomainError("q = " + std::to_string(q) + " outside q domain");
    constexpr double inf = std::numeric_limits<double>::infinity();

    if (q == 1.0) {
        double sum = 0.0;
        for (std::size_t i = 0; i < pa.size(); ++i) {
            if (pa[i] == 0.0) continue;
            if (pb[i] == 0.0) return inf;
            sum += pa[i] * (std::log(pa[i]) - std::log(pb[i]));
        }
        return spec.k() * sum;
    }

    double phi = spec.phi_at(q);
    if (phi == 0.0)
        throw DomainError("phi(q) = 0 at q = " + std::to_string(q) +
                          " (invalid spec at that point)");
    double alpha = spec.alpha_at(q);
    double g = 1.0 - alpha;

    double sum = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i) {
        double w = detail::weight_power(pa[i], g, q);
        if (w == 0.0) continue;  // zero-probability outcomes of pA contribute nothing
        double ib;
        if (pb[i] == 0.0) {
            if (alpha < 0.0) return inf;
            ib = alpha == 0.0 ? 0.0 : -spec.k() / phi;  // limit of (k/phi)(p^alpha - 1)
        } else {
            ib = info_content_stable(spec, {q, pb[i]});
        }
        double ia = info_content_stable(spec, {q, pa[i]});
        sum += w * (ib - ia);
    }
    return sum;
}

}  // namespace pseudoadd
