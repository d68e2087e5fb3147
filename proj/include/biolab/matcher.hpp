#pragma once

#include <utility>
#include <vector>

#include "biolab/core.hpp"

namespace biolab::match {

struct MatchParams {
    double dist_tol = 12.0;       // pixels
    double angle_tol = kPi / 8;   // radians, pi-periodic
    double tau = kDefaultTau;
};

// Disjoint one-to-one pairs (index in a, index in b); every pair is
// same-kind and within both tolerances.
struct Pairing {
    std::vector<std::pair<size_t, size_t>> pairs;
    // Eligible candidate pairs enumerated before greedy dedup; this count
    // drives the simulated timing model.
    size_t candidate_count = 0;
};

// Greedy pairing: all eligible candidates sorted by distance (ties: angle
// difference, then (i, j) lexicographic), each accepted if both endpoints
// are still unused.
Pairing pair_minutiae(const MinutiaeTemplate& a, const MinutiaeTemplate& b,
                      const MatchParams& p);

// score = sum over pairs of (1 - d/dist_tol)(1 - dtheta/angle_tol),
// divided by max(n_a, n_b, 1).
MatchScore compare_minutiae(const MinutiaeTemplate& a, const MinutiaeTemplate& b,
                            const MatchParams& p);

double pair_weight(double dist, double angle_diff, const MatchParams& p);

}  // namespace biolab::match
