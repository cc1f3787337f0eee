#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "photonstat/correlations.hpp"

namespace photonstat {

/// Thrown when an inversion has no valid state; carries the feasible
/// parameter interval.
class feasibility_error : public std::domain_error {
public:
    feasibility_error(const std::string& msg, double lo, double hi)
        : std::domain_error(msg), feasible_lo(lo), feasible_hi(hi) {}
    double feasible_lo;
    double feasible_hi;
};

namespace detail {

// sqrt(1 - 2 g2_eff) with the argument clamped to [0,1]; rejects arguments
// below -1e-14 as genuinely out of domain.
inline double sqrt_one_minus_two(double g2_eff) {
    double arg = 1.0 - 2.0 * g2_eff;
    if (arg < -1e-14)
        throw std::domain_error("effective g2 above 1/2 has no conclusive bound");
    arg = std::clamp(arg, 0.0, 1.0);
    return std::sqrt(arg);
}

} // namespace detail

/// q-independent lower bound C on the single-to-multi-photon ratio p/q:
/// C = 2 sqrt(1-2g)/(1 - sqrt(1-2g)) for effective g2 in (0, 1/2),
/// +infinity at 0, and 0 (inconclusive) for g >= 1/2.
inline double ratio_lower_bound(double g2_eff) {
    if (!(g2_eff >= 0.0))
        throw std::domain_error("effective g2 must be >= 0");
    if (g2_eff == 0.0)
        return std::numeric_limits<double>::infinity();
    if (g2_eff >= 0.5)
        return 0.0;
    // 1 - s = 2g/(1+s), so C = 2s/(1-s) = s(1+s)/g. Stable for small g.
    const double s = detail::sqrt_one_minus_two(g2_eff);
    return s * (1.0 + s) / g2_eff;
}

/// General-form ratio bound when the multi-photon weight q is known:
/// n2 [ sqrt(g2_comp / (g2 q)) - 1 ], floored at zero. n2 and g2_comp are
/// the mean photon number and g2 of the multi-photon constituent; the
/// universally valid choice is n2 = 2, g2_comp = 1/2.
inline double ratio_lower_bound_with_q(double g2_val, double q, double n2 = 2.0,
                                       double g2_comp = 0.5) {
    if (!(g2_val > 0.0))
        throw std::domain_error("g2 must be > 0 for the q-form bound");
    if (!(q > 0.0) || q > 1.0)
        throw std::domain_error("multi-photon weight q must be in (0,1]");
    if (!(n2 >= 2.0))
        throw std::domain_error("multi-photon mean n2 must be >= 2");
    if (!(g2_comp >= 0.5))
        throw std::domain_error("multi-photon g2 must be >= 1/2");
    return std::max(0.0, n2 * (std::sqrt(g2_comp / (g2_val * q)) - 1.0));
}

/// Largest effective g2 compatible with a desired ratio p/q >= N:
/// 2(N+1)/(N+2)^2.
inline double required_g2_for_ratio(double desired_ratio) {
    if (!(desired_ratio >= 0.0))
        throw std::domain_error("desired ratio must be >= 0");
    const double np2 = desired_ratio + 2.0;
    return 2.0 * (desired_ratio + 1.0) / (np2 * np2);
}

/// Small-g2 approximation of ratio_lower_bound: 2/g - 3. Within 1% of the
/// exact bound for effective g2 <= 0.01; useless near 1/2.
inline double ratio_lower_bound_approx(double g2_eff) {
    if (!(g2_eff > 0.0))
        throw std::domain_error("effective g2 must be > 0");
    return 2.0 / g2_eff - 3.0;
}

/// Lower bound C/(1+C) = 2 sqrt(1-2g)/(1 + sqrt(1-2g)) on the effective
/// purity p/(p+q); 1 at g = 0, 0 for g >= 1/2.
inline double effective_purity_bound(double g2_eff) {
    if (!(g2_eff >= 0.0))
        throw std::domain_error("effective g2 must be >= 0");
    if (g2_eff >= 0.5)
        return 0.0;
    const double s = detail::sqrt_one_minus_two(g2_eff);
    return 2.0 * s / (1.0 + s);
}

/// Upper bound on the total multi-photon weight q: 1/(1+C), i.e. the
/// complement of the purity bound. Equals 2g/(1+sqrt(1-2g))^2.
inline double multiphoton_upper_bound(double g2_eff) {
    if (!(g2_eff >= 0.0))
        throw std::domain_error("effective g2 must be >= 0");
    if (g2_eff >= 0.5)
        return 1.0;
    const double s = detail::sqrt_one_minus_two(g2_eff);
    return 2.0 * g2_eff / ((1.0 + s) * (1.0 + s));
}

/// Absolute interval for the single-photon weight p given g2 and vacuum x.
struct PInterval {
    double p_min = 0.0;
    double p_max = 0.0;
};

inline PInterval p_absolute_bounds(double g2_val, double x) {
    if (!(g2_val >= 0.0))
        throw std::domain_error("g2 must be >= 0");
    if (!(x >= 0.0) || x > 1.0)
        throw std::domain_error("vacuum fraction must be in [0,1]");
    const double p_max = 1.0 - x;
    // C/(1+C) is the purity bound; at C = +inf it is 1 and p is pinned.
    const double purity = effective_purity_bound(effective_g2(g2_val, x));
    return {p_max * purity, p_max};
}

/// Mean-photon-number-limit bound on individual Fock weights for g2 <= 1/2:
/// q_n <= 2/[n(n-1)] (capped at 1). The caller asserts g2 <= 1/2 holds.
inline double qn_upper_bound_meanlimit(std::size_t n) {
    if (n < 2)
        throw std::domain_error("Fock bound requires n >= 2");
    const double nn = static_cast<double>(n);
    return std::min(1.0, 2.0 / (nn * (nn - 1.0)));
}

/// Realizable g2 range of the |1>/|n> family is [0, 1-1/n].
inline double one_n_g2_max(std::size_t n) {
    if (n < 2)
        throw std::domain_error("one-n family requires n >= 2");
    return 1.0 - 1.0 / static_cast<double>(n);
}

/// Sharp upper bound on q_n from the |1>/|n> extremal family:
/// q_n = 4 g2 / [ n(n-1) (1 + sqrt(1 - 4 g2/n))^2 ],
/// the algebraically stable form of the quadratic-root solution.
inline double qn_upper_bound_refined(double g2_val, std::size_t n) {
    const double g_max = one_n_g2_max(n);
    if (!(g2_val >= 0.0) || g2_val > g_max + 1e-12)
        throw std::domain_error("g2 outside the realizable range [0, " +
                                std::to_string(g_max) + "] of the one/" +
                                std::to_string(n) + " family");
    if (g2_val == 0.0)
        return 0.0;
    const double nn = static_cast<double>(n);
    const double u = std::min(1.0, 4.0 * g2_val / nn);
    const double s = std::sqrt(1.0 - u);
    return 4.0 * g2_val / (nn * (nn - 1.0) * (1.0 + s) * (1.0 + s));
}

/// Single-photon weight of the |1>/|n> state realizing a given g2.
inline double invert_one_n(double g2_val, std::size_t n) {
    return 1.0 - qn_upper_bound_refined(g2_val, n);
}

/// Fock-weight bounds when the vacuum fraction is known. `relative` bounds
/// the n-photon weight of the vacuum-stripped component, `absolute` the
/// Fock-n weight of the full state; absolute = (1-x) * relative.
struct QnVacuumBound {
    double relative = 0.0;
    double absolute = 0.0;
};

inline QnVacuumBound qn_upper_bound_with_vacuum(double g2_val, double x, std::size_t n) {
    if (!(x >= 0.0) || x >= 1.0)
        throw std::domain_error("vacuum fraction must be in [0,1)");
    const double rel = qn_upper_bound_refined(effective_g2(g2_val, x), n);
    return {rel, (1.0 - x) * rel};
}

/// Largest multi-photon weight q for which the vacuum/one/two-photon state
/// can realize the given g2 (q beyond this forces p < 0 or p + q > 1).
inline double two_component_q_max(double g2_val) {
    if (!(g2_val > 0.0))
        throw std::domain_error("g2 must be > 0");
    if (g2_val < 0.5) {
        const double s = detail::sqrt_one_minus_two(g2_val);
        return 2.0 * g2_val / ((1.0 + s) * (1.0 + s));
    }
    return std::min(1.0, 0.5 / g2_val);
}

/// Single-photon weight of the vacuum/one/two-photon state with the given
/// g2 and two-photon weight q: p = sqrt(2q/g2) - 2q.
inline double invert_two_component(double g2_val, double q) {
    if (!(g2_val > 0.0))
        throw std::domain_error("g2 must be > 0");
    if (!(q >= 0.0) || q > 1.0)
        throw std::domain_error("two-photon weight q must be in [0,1]");
    const double p = std::sqrt(2.0 * q / g2_val) - 2.0 * q;
    const double q_max = two_component_q_max(g2_val);
    if (p < -1e-9 || p + q > 1.0 + 1e-9)
        throw feasibility_error("no valid state: g2 " + std::to_string(g2_val) +
                                    " needs q in [0, " + std::to_string(q_max) + "]",
                                0.0, q_max);
    return std::clamp(p, 0.0, 1.0 - q);
}

enum class ClassicalKind { coherent, thermal };

/// Validity thresholds of the closed-form classical bounds.
inline constexpr double coherent_bound_max_mean = 0.6931471805599453; // ln 2
inline constexpr double thermal_bound_max_mean = 1.0 / 3.0;

struct ClassicalStateBounds {
    double exact_ratio = 0.0;               // closed-form p/q
    std::optional<double> bound_ratio;      // empty above the validity threshold
};

/// Exact p/q of a coherent or thermal state together with the ratio bound
/// evaluated at the state's effective g2 (coherent: 1-exp(-m), thermal:
/// 2m/(1+m)). The bound is only reported inside its validity range
/// (mean <= ln 2 resp. 1/3), where the effective g2 stays below 1/2.
inline ClassicalStateBounds classical_state_bounds(ClassicalKind kind, double mean_n) {
    if (!(mean_n > 0.0))
        throw std::domain_error("mean photon number must be > 0");
    ClassicalStateBounds out;
    if (kind == ClassicalKind::coherent) {
        // p/q = m / (e^m - 1 - m); expm1 keeps the denominator accurate.
        out.exact_ratio = mean_n / (std::expm1(mean_n) - mean_n);
        if (mean_n <= coherent_bound_max_mean + 1e-12)
            out.bound_ratio = ratio_lower_bound(-std::expm1(-mean_n));
    } else {
        out.exact_ratio = 1.0 / mean_n;
        if (mean_n <= thermal_bound_max_mean + 1e-12)
            out.bound_ratio = ratio_lower_bound(2.0 * mean_n / (1.0 + mean_n));
    }
    return out;
}

/// All scalar bounds derivable from a measured (g2, x) pair.
struct BoundsReport {
    double g2_eff = 0.0;
    double ratio_lower = 0.0;  // C; +inf when g2_eff == 0
    double p_min = 0.0;
    double p_max = 0.0;
    double purity_lower = 0.0; // C/(1+C)
    double q_upper = 0.0;      // 1 - purity_lower
    bool conclusive = false;   // g2_eff < 1/2
};

inline BoundsReport full_report(double g2_val, double x) {
    if (!(g2_val >= 0.0))
        throw std::domain_error("g2 must be >= 0");
    if (!(x >= 0.0) || x > 1.0)
        throw std::domain_error("vacuum fraction must be in [0,1]");
    BoundsReport r;
    r.g2_eff = effective_g2(g2_val, x);
    r.conclusive = r.g2_eff < 0.5;
    r.ratio_lower = ratio_lower_bound(r.g2_eff);
    r.purity_lower = effective_purity_bound(r.g2_eff);
    r.q_upper = 1.0 - r.purity_lower;
    r.p_max = 1.0 - x;
    r.p_min = r.p_max * r.purity_lower;
    return r;
}

} // namespace photonstat
