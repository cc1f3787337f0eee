#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace photonstat {

/// Default certified bound on the probability mass dropped by truncation.
inline constexpr double default_tail_tolerance = 1e-12;

/// Default hard limit on the largest stored photon number.
inline constexpr std::size_t default_max_cutoff = 4096;

/// Thrown when a requested construction would exceed the cutoff limit.
class capacity_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Diagonal Fock-space weights q_n of a single-mode state.
///
/// Index n is the photon number. The representation is exact for every
/// quantity computed in this library: all of them depend only on the
/// diagonal of the density operator, so phases and coherences are never
/// stored. Values are immutable after construction.
class PhotonNumberDistribution {
public:
    /// Validating constructor. `tail_mass_bound` is a certified upper bound
    /// on the probability mass above the stored cutoff.
    explicit PhotonNumberDistribution(std::vector<double> probs,
                                      double tail_mass_bound = 0.0,
                                      double tail_tolerance = default_tail_tolerance)
        : probs_(std::move(probs)), tail_mass_bound_(tail_mass_bound) {
        if (probs_.empty())
            throw std::domain_error("distribution needs at least the n=0 entry");
        if (!(tail_mass_bound_ >= 0.0))
            throw std::domain_error("tail_mass_bound must be >= 0");
        if (tail_mass_bound_ > tail_tolerance)
            throw std::domain_error("tail_mass_bound " + std::to_string(tail_mass_bound_) +
                                    " exceeds tolerance " + std::to_string(tail_tolerance));
        double sum = 0.0;
        for (std::size_t n = 0; n < probs_.size(); ++n) {
            const double p = probs_[n];
            if (!(p >= 0.0) || p > 1.0)
                throw std::domain_error("probability at n=" + std::to_string(n) +
                                        " outside [0,1]");
            sum += p;
        }
        if (std::abs(sum - 1.0) > tail_mass_bound_ + 1e-12)
            throw std::domain_error("probabilities sum to " + std::to_string(sum) +
                                    ", not 1 within the certified tail bound");
    }

    /// Largest photon number stored.
    std::size_t cutoff() const { return probs_.size() - 1; }

    /// Weight q_n; zero above the cutoff.
    double prob(std::size_t n) const { return n < probs_.size() ? probs_[n] : 0.0; }

    const std::vector<double>& probs() const { return probs_; }

    double tail_mass_bound() const { return tail_mass_bound_; }

private:
    std::vector<double> probs_;
    double tail_mass_bound_;
};

/// Fock state |n>: point mass at photon number n.
inline PhotonNumberDistribution make_fock(std::size_t n) {
    std::vector<double> probs(n + 1, 0.0);
    probs[n] = 1.0;
    return PhotonNumberDistribution(std::move(probs), 0.0);
}

/// The vacuum state.
inline PhotonNumberDistribution vacuum_state() { return make_fock(0); }

namespace detail {

inline void check_tail_tol(double tail_tol) {
    if (!(tail_tol > 0.0) || tail_tol > 1e-9)
        throw std::domain_error("tail tolerance must be in (0, 1e-9]");
}

} // namespace detail

/// Coherent state with the given mean photon number: Poissonian weights
/// q_n = exp(-m) m^n / n!.
///
/// The cutoff is the smallest N whose certified remainder (geometric
/// domination of the Poisson tail) is below tail_tol; construction fails
/// with capacity_error if that N would exceed max_cutoff.
inline PhotonNumberDistribution make_coherent(double mean_n,
                                              double tail_tol = default_tail_tolerance,
                                              std::size_t max_cutoff = default_max_cutoff) {
    if (!(mean_n >= 0.0) || !std::isfinite(mean_n))
        throw std::domain_error("coherent mean photon number must be finite and >= 0");
    detail::check_tail_tol(tail_tol);
    if (mean_n == 0.0)
        return vacuum_state();

    const double log_mean = std::log(mean_n);
    std::vector<double> probs;
    double tail_bound = 0.0;
    for (std::size_t n = 0;; ++n) {
        if (n > max_cutoff)
            throw capacity_error("coherent cutoff for mean " + std::to_string(mean_n) +
                                 " exceeds limit " + std::to_string(max_cutoff));
        const double log_p = -mean_n + static_cast<double>(n) * log_mean -
                             std::lgamma(static_cast<double>(n) + 1.0);
        probs.push_back(std::exp(log_p));
        // Remainder after n: t_{n+1} / (1 - m/(n+2)), valid once n+2 > m.
        // Terms beyond n+1 shrink at least geometrically with ratio m/(n+2).
        if (n >= 1 && static_cast<double>(n) + 2.0 > mean_n) {
            const double log_next = -mean_n + static_cast<double>(n + 1) * log_mean -
                                    std::lgamma(static_cast<double>(n) + 2.0);
            const double ratio = mean_n / (static_cast<double>(n) + 2.0);
            tail_bound = std::exp(log_next) / (1.0 - ratio);
            if (tail_bound <= 0.25 * tail_tol)
                break;
        }
    }
    return PhotonNumberDistribution(std::move(probs), tail_bound, tail_tol);
}

/// Thermal state with the given mean photon number: Bose-Einstein weights
/// q_n = m^n / (1+m)^(n+1). The truncation remainder is the exact
/// geometric tail (m/(1+m))^(N+1).
inline PhotonNumberDistribution make_thermal(double mean_n,
                                             double tail_tol = default_tail_tolerance,
                                             std::size_t max_cutoff = default_max_cutoff) {
    if (!(mean_n >= 0.0) || !std::isfinite(mean_n))
        throw std::domain_error("thermal mean photon number must be finite and >= 0");
    detail::check_tail_tol(tail_tol);
    if (mean_n == 0.0)
        return vacuum_state();

    const double ratio = mean_n / (1.0 + mean_n);
    std::vector<double> probs;
    double term = 1.0 / (1.0 + mean_n);
    double tail = ratio; // exact mass above n after pushing q_n, starts at n=0
    for (std::size_t n = 0;; ++n) {
        if (n > max_cutoff)
            throw capacity_error("thermal cutoff for mean " + std::to_string(mean_n) +
                                 " exceeds limit " + std::to_string(max_cutoff));
        probs.push_back(term);
        if (n >= 1 && tail <= 0.25 * tail_tol)
            break;
        term *= ratio;
        tail *= ratio;
    }
    return PhotonNumberDistribution(std::move(probs), tail, tail_tol);
}

/// Vacuum/one/two-photon superposition weights: q_0 = 1-p-q, q_1 = p, q_2 = q.
inline PhotonNumberDistribution make_two_component(double p, double q) {
    if (!(p >= 0.0) || !(q >= 0.0))
        throw std::domain_error("projections must be >= 0");
    if (p + q > 1.0 + 1e-12)
        throw std::domain_error("p + q = " + std::to_string(p + q) + " exceeds 1");
    const double q0 = std::max(0.0, 1.0 - p - q);
    return PhotonNumberDistribution({q0, p, q}, 0.0);
}

/// One/n-photon superposition weights: q_1 = p, q_n = 1-p, n >= 2.
inline PhotonNumberDistribution make_one_n(double p, std::size_t n) {
    if (n < 2)
        throw std::domain_error("make_one_n requires n >= 2");
    if (!(p >= 0.0) || p > 1.0)
        throw std::domain_error("p must be in [0,1]");
    std::vector<double> probs(n + 1, 0.0);
    probs[1] = p;
    probs[n] = 1.0 - p;
    return PhotonNumberDistribution(std::move(probs), 0.0);
}

/// Convex combination of distributions. Weights must be nonnegative and sum
/// to 1 within 1e-12; the tail bound is the weighted sum of the inputs'.
inline PhotonNumberDistribution
mix(const std::vector<std::pair<PhotonNumberDistribution, double>>& components) {
    if (components.empty())
        throw std::domain_error("mix needs at least one component");
    double weight_sum = 0.0;
    std::size_t size = 1;
    for (const auto& [dist, w] : components) {
        if (!(w >= 0.0))
            throw std::domain_error("mixture weights must be >= 0");
        weight_sum += w;
        size = std::max(size, dist.probs().size());
    }
    if (std::abs(weight_sum - 1.0) > 1e-12)
        throw std::domain_error("mixture weights sum to " + std::to_string(weight_sum) +
                                ", not 1");
    std::vector<double> probs(size, 0.0);
    double tail_bound = 0.0;
    for (const auto& [dist, w] : components) {
        for (std::size_t n = 0; n < dist.probs().size(); ++n)
            probs[n] += w * dist.probs()[n];
        tail_bound += w * dist.tail_mass_bound();
    }
    return PhotonNumberDistribution(std::move(probs), tail_bound,
                                    std::max(default_tail_tolerance, tail_bound));
}

/// Incoherent vacuum admixture: q_0 -> x + (1-x) q_0, q_n -> (1-x) q_n for
/// n >= 1. Ratios among the n >= 1 weights are preserved.
inline PhotonNumberDistribution add_vacuum(const PhotonNumberDistribution& dist, double x) {
    if (!(x >= 0.0) || x > 1.0)
        throw std::domain_error("vacuum fraction must be in [0,1]");
    std::vector<double> probs(dist.probs());
    for (double& p : probs)
        p *= 1.0 - x;
    probs[0] += x;
    const double tail_bound = (1.0 - x) * dist.tail_mass_bound();
    return PhotonNumberDistribution(std::move(probs), tail_bound,
                                    std::max(default_tail_tolerance, tail_bound));
}

} // namespace photonstat
