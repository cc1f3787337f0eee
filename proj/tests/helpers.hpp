#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "photonstat/distribution.hpp"

namespace test_helpers {

/// Random normalized weight vector over photon numbers 0..max_n.
inline photonstat::PhotonNumberDistribution
random_distribution(std::mt19937_64& rng, std::size_t max_n) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> probs(max_n + 1);
    double sum = 0.0;
    for (double& p : probs) {
        p = unit(rng);
        sum += p;
    }
    for (double& p : probs)
        p /= sum;
    return photonstat::PhotonNumberDistribution(std::move(probs), 0.0);
}

/// Random state with a prescribed vacuum weight and support on 1..max_n.
inline photonstat::PhotonNumberDistribution
random_distribution_with_vacuum(std::mt19937_64& rng, double vacuum_x, std::size_t max_n) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> probs(max_n + 1);
    double sum = 0.0;
    for (std::size_t n = 1; n <= max_n; ++n) {
        probs[n] = unit(rng);
        sum += probs[n];
    }
    for (std::size_t n = 1; n <= max_n; ++n)
        probs[n] *= (1.0 - vacuum_x) / sum;
    probs[0] = vacuum_x;
    return photonstat::PhotonNumberDistribution(std::move(probs), 0.0);
}

} // namespace test_helpers
