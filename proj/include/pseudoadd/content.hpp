#pragma once

// Information-content families I_q(p) = (k / phi(q)) * (p^alpha(q) - 1),
// with q = 1 pinned to the Shannon content -k ln p and a cancellation-free
// evaluator for the neighbourhood where phi(q) crosses zero.

#include <pseudoadd/expr.hpp>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pseudoadd {

/// Validation or domain failure outside the expression language itself:
/// q outside the admissible interval, invalid spec parameters, divergent
/// sums, malformed sample tables.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct QPoint {
    double q;
    double p;  // in (0, 1]
};

/// One content family: scale k > 0, deformation phi(q), exponent alpha(q),
/// and the admissible q interval (q_min, q_max] (q_max absent means no upper
/// bound). Construction does not check the axioms; holding an invalid spec
/// is legitimate, rejecting it is the verifier's job.
class ContentSpec {
public:
    ContentSpec(double k, Expr phi, Expr alpha, double q_min = 0.0,
                std::optional<double> q_max = std::nullopt)
        : k_(k), phi_(std::move(phi)), alpha_(std::move(alpha)), q_min_(q_min), q_max_(q_max) {
        if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("k must be a positive finite real");
        if (q_min_ < 0.0 || !std::isfinite(q_min_)) throw DomainError("q_min must be >= 0");
        if (q_max_ && !(*q_max_ > q_min_)) throw DomainError("q_max must exceed q_min");
    }

    double k() const noexcept { return k_; }
    const Expr& phi() const noexcept { return phi_; }
    const Expr& alpha() const noexcept { return alpha_; }
    double q_min() const noexcept { return q_min_; }
    const std::optional<double>& q_max() const noexcept { return q_max_; }

    bool contains_q(double q) const noexcept {
        return q > q_min_ && q > 0.0 && (!q_max_ || q <= *q_max_);
    }

    double phi_at(double q) const { return phi_.eval(q); }
    double alpha_at(double q) const { return alpha_.eval(q); }

private:
    double k_;
    Expr phi_, alpha_;
    double q_min_;
    std::optional<double> q_max_;
};

/// Built-in families. "suyari" is the alpha = -phi subclass with phi = 1 - q
/// on (0, 2]; "hc" is the family whose expectation is the Havrda-Charvat
/// entropy: k = 1/ln 2, phi = (1 - 2^(1-q))/ln 2, alpha = 1 - q.
inline ContentSpec preset(std::string_view name) {
    if (name == "suyari")
        return ContentSpec(1.0, Expr::parse("1 - q"), Expr::parse("q - 1"), 0.0, 2.0);
    if (name == "hc")
        return ContentSpec(1.0 / std::numbers::ln2, Expr::parse("(1 - 2^(1 - q)) / ln(2)"),
                           Expr::parse("1 - q"));
    throw DomainError("unknown preset '" + std::string(name) + "' (expected 'suyari' or 'hc')");
}

namespace detail {

/// E(t) = (e^t - 1)/t, continuous at 0. Series below 1e-5 keeps the relative
/// error at rounding level through the cancellation region.
inline double expm1_over(double t) {
    if (std::fabs(t) < 1e-5) return 1.0 + t / 2.0 + t * t / 6.0;
    return std::expm1(t) / t;
}

inline long double expm1_over(long double t) {
    if (fabsl(t) < 1e-5L) return 1.0L + t / 2.0L + t * t / 6.0L;
    return expm1l(t) / t;
}

inline void check_point(const ContentSpec& spec, QPoint at) {
    if (!(at.p > 0.0) || at.p > 1.0 || !std::isfinite(at.p))
        throw DomainError("p must lie in (0, 1], got " + std::to_string(at.p));
    if (!std::isfinite(at.q) || !spec.contains_q(at.q))
        throw DomainError("q = " + std::to_string(at.q) + " is outside the spec's q domain");
}

/// Closed-form evaluation from already-known numeric phi, alpha.
inline double content_value(double k, double phi, double alpha, double p) {
    return (k / phi) * std::expm1(alpha * std::log(p));
}

}  // namespace detail

/// I_q(p). Exact -k ln p at q = 1; the closed form elsewhere.
inline double info_content(const ContentSpec& spec, QPoint at) {
    detail::check_point(spec, at);
    if (at.q == 1.0) return -spec.k() * std::log(at.p);
    double phi = spec.phi_at(at.q);
    if (phi == 0.0)
        throw DomainError("phi(q) = 0 at q = " + std::to_string(at.q) +
                          " (invalid spec at that point)");
    double alpha = spec.alpha_at(at.q);
    return detail::content_value(spec.k(), phi, alpha, at.p);
}

/// I_q(p) with the 0/0 cancellation near phi = 0 resolved: when
/// |phi(q)| < eps_phi the value is computed as k * (alpha/phi) * ln p * E(alpha ln p)
/// in extended precision, where E(t) = (e^t - 1)/t. Identical to
/// info_content outside that band.
inline double info_content_stable(const ContentSpec& spec, QPoint at, double eps_phi = 1e-8) {
    if (!(eps_phi > 0.0)) throw DomainError("eps_phi must be positive");
    detail::check_point(spec, at);
    if (at.q == 1.0) return -spec.k() * std::log(at.p);

    double phi = spec.phi_at(at.q);
    if (std::fabs(phi) >= eps_phi) {
        double alpha = spec.alpha_at(at.q);
        return detail::content_value(spec.k(), phi, alpha, at.p);
    }
    double alpha = spec.alpha_at(at.q);
    if (std::fabs(phi) < 1e-300 && std::fabs(alpha) < 1e-300)
        throw DomainError("degenerate spec: alpha/phi is 0/0 at q = " + std::to_string(at.q));
    if (phi == 0.0)
        throw DomainError("phi(q) = 0 at q = " + std::to_string(at.q) +
                          " (invalid spec at that point)");

    // Double-precision evaluation of phi near its root keeps only
    // ~|phi|/eps_machine digits; redo the quotient in long double.
    long double lphi = spec.phi().eval_ld(at.q);
    long double lalpha = spec.alpha().eval_ld(at.q);
    if (lphi == 0.0L) {  // rounding landed exactly on the root; fall back
        lphi = phi;
        lalpha = alpha;
    }
    long double lp = logl(static_cast<long double>(at.p));
    long double t = lalpha * lp;
    long double value = static_cast<long double>(spec.k()) * (lalpha / lphi) * lp *
                        detail::expm1_over(t);
    return static_cast<double>(value);
}

namespace detail {

struct ResidualParts {
    double residual;
    double i12_over_k;  // magnitude anchor for relative comparisons
};

inline ResidualParts residual_parts(const ContentSpec& spec, double q, double p1, double p2) {
    double k = spec.k();
    double i12 = info_content_stable(spec, {q, p1 * p2}) / k;
    double i1 = info_content_stable(spec, {q, p1}) / k;
    double i2 = info_content_stable(spec, {q, p2}) / k;
    double phi = spec.phi_at(q);
    return {i12 - i1 - i2 - phi * i1 * i2, i12};
}

}  // namespace detail

/// Defect of I(p1 p2)/k = I(p1)/k + I(p2)/k + phi(q) I(p1)I(p2)/k^2.
/// Zero up to rounding for every spec of the theorem form.
inline double pseudoadditivity_residual(const ContentSpec& spec, double q, double p1, double p2) {
    return detail::residual_parts(spec, q, p1, p2).residual;
}

}  // namespace pseudoadd
