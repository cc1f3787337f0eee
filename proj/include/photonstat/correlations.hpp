#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "photonstat/distribution.hpp"

namespace photonstat {

/// Mean photon number <n> = sum n q_n.
inline double mean_photon_number(const PhotonNumberDistribution& dist) {
    double sum = 0.0;
    for (std::size_t n = 1; n < dist.probs().size(); ++n)
        sum += static_cast<double>(n) * dist.probs()[n];
    return sum;
}

/// Second factorial moment <n(n-1)> = sum n(n-1) q_n, the numerator of g2.
inline double second_factorial_moment(const PhotonNumberDistribution& dist) {
    double sum = 0.0;
    for (std::size_t n = 2; n < dist.probs().size(); ++n)
        sum += static_cast<double>(n) * (static_cast<double>(n) - 1.0) * dist.probs()[n];
    return sum;
}

/// Zero-delay second-order correlation function <n(n-1)> / <n>^2.
///
/// The exact vacuum state returns 1 by the coherent-state-limit convention;
/// summarize() flags that case so consumers can refuse it. A positive but
/// denormal-range mean raises underflow_error instead of dividing.
inline double g2(const PhotonNumberDistribution& dist) {
    const double mean = mean_photon_number(dist);
    if (mean == 0.0)
        return 1.0; // vacuum convention
    if (mean < 1e-300)
        throw std::underflow_error("mean photon number below 1e-300; g2 would overflow");
    return second_factorial_moment(dist) / (mean * mean);
}

/// Vacuum-corrected effective correlation function (1-x) g2.
inline double effective_g2(double g2_val, double x) {
    if (!(g2_val >= 0.0))
        throw std::domain_error("g2 must be >= 0");
    if (!(x >= 0.0) || x > 1.0)
        throw std::domain_error("vacuum fraction must be in [0,1]");
    return (1.0 - x) * g2_val;
}

/// Exact single-to-multi-photon-projection ratio q_1 / sum_{n>=2} q_n.
/// Returns +infinity when there is no multi-photon weight but q_1 > 0,
/// and NaN (undefined) when both are zero.
inline double smpp_exact(const PhotonNumberDistribution& dist) {
    const double p = dist.prob(1);
    double q = 0.0;
    for (std::size_t n = 2; n < dist.probs().size(); ++n)
        q += dist.probs()[n];
    if (q == 0.0) {
        if (p > 0.0)
            return std::numeric_limits<double>::infinity();
        return std::numeric_limits<double>::quiet_NaN();
    }
    return p / q;
}

/// Statistics (g2, mean photon number) of one mixture constituent.
struct MixtureComponent {
    double g2 = 0.0;
    double mean_n = 0.0;
};

/// g2 of the incoherent two-component mixture s*rho_1 + (1-s)*rho_2,
/// computed from the constituents' statistics alone:
/// [s n1^2 g1 + (1-s) n2^2 g2] / [s n1 + (1-s) n2]^2.
inline double mixture_g2(const MixtureComponent& c1, const MixtureComponent& c2, double s) {
    if (!(s >= 0.0) || s > 1.0)
        throw std::domain_error("mixture weight s must be in [0,1]");
    if (!(c1.g2 >= 0.0) || !(c2.g2 >= 0.0) || !(c1.mean_n >= 0.0) || !(c2.mean_n >= 0.0))
        throw std::domain_error("component statistics must be >= 0");
    const double mean = s * c1.mean_n + (1.0 - s) * c2.mean_n;
    if (mean == 0.0)
        throw std::domain_error("mixture has zero mean photon number");
    const double num = s * c1.mean_n * c1.mean_n * c1.g2 +
                       (1.0 - s) * c2.mean_n * c2.mean_n * c2.g2;
    return num / (mean * mean);
}

/// d(g2)/ds of the mixture in units of g1, parametrized by r = n2/n1 and
/// t = g2/g1 in [0,1]:
/// { r [t(1-r)^2 - t + 1] - (1-r)(1 - r^2 t) s } / [s + (1-s) r]^3.
inline double mixture_g2_slope(double r, double t, double s) {
    if (!(r > 0.0))
        throw std::domain_error("mean-photon-number ratio r must be > 0");
    if (!(t >= 0.0) || t > 1.0)
        throw std::domain_error("g2 ratio t must be in [0,1]");
    if (!(s >= 0.0) || s > 1.0)
        throw std::domain_error("mixture weight s must be in [0,1]");
    const double num =
        r * (t * (1.0 - r) * (1.0 - r) - t + 1.0) - (1.0 - r) * (1.0 - r * r * t) * s;
    const double den = s + (1.0 - s) * r;
    return num / (den * den * den);
}

struct MixtureMaximum {
    double s_star = 0.0; // mixing weight of component 1 at the maximum
    double g2_max = 0.0;
};

/// Location and value of the g2 maximum for two equal-g2 components with
/// mean ratio r: s* = r/(1+r), g2_max = g1 (1+r)^2 / (4r).
inline MixtureMaximum mixture_g2_max(double r, double g1 = 1.0) {
    if (!(r > 0.0))
        throw std::domain_error("mean-photon-number ratio r must be > 0");
    if (!(g1 >= 0.0))
        throw std::domain_error("g1 must be >= 0");
    return {r / (1.0 + r), g1 * (1.0 + r) * (1.0 + r) / (4.0 * r)};
}

/// One state's correlation quantities in a single bundle.
struct CorrelationSummary {
    double mean_n = 0.0;
    double g2 = 0.0;
    double vacuum_x = 0.0;   // q_0
    double g2_eff = 0.0;     // (1 - vacuum_x) * g2
    double smpp_exact = 0.0; // q_1 / sum_{n>=2} q_n; +inf or NaN markers
    bool vacuum_convention = false; // g2 is the vacuum convention value 1
};

inline CorrelationSummary summarize(const PhotonNumberDistribution& dist) {
    CorrelationSummary s;
    s.mean_n = mean_photon_number(dist);
    s.g2 = g2(dist);
    s.vacuum_x = dist.prob(0);
    s.g2_eff = effective_g2(s.g2, std::min(1.0, s.vacuum_x));
    s.smpp_exact = smpp_exact(dist);
    s.vacuum_convention = (s.mean_n == 0.0);
    return s;
}

} // namespace photonstat
