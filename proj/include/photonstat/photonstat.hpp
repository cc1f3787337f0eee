#pragma once

// Photon-statistics toolkit: diagonal Fock-space states, second-order
// correlation functions, the vacuum-corrected effective g2, analytic
// single-photon-projection bounds, and a Monte Carlo detection simulator.

#include "photonstat/bounds.hpp"
#include "photonstat/correlations.hpp"
#include "photonstat/detection.hpp"
#include "photonstat/distribution.hpp"
#include "photonstat/io.hpp"
