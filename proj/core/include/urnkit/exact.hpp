#pragma once

#include <cstdint>
#include <vector>

#include "urnkit/model.hpp"

namespace urnkit {

// Exact distribution of the urn after n draws. The state after n draws is a
// deterministic function of k, the number of type-1 draws, so the support has
// n+1 atoms and the forward recursion runs in O(n^2) time, O(n) memory.
struct ExactDistribution {
    std::uint64_t n = 0;
    struct Atom {
        std::uint64_t k;     // type-1 draw count
        double z;            // proportion at (n, k)
        double probability;
    };
    std::vector<Atom> support;
    UrnConfig config;
};

// deterministic state after m draws of which k were type 1
UrnState state_at(const UrnConfig& config, std::uint64_t m, std::uint64_t k);

// Forward DP over draw counts. Throws std::length_error beyond the cap.
ExactDistribution dp_distribution(const UrnConfig& config, std::uint64_t n,
                                  std::uint64_t cap = 20'000);

// P(|Z_n - y_star| > eps), strict inequality: atoms exactly at distance eps
// are excluded.
double exact_tail_probability(const ExactDistribution& dist, double eps, double y_star);
double exact_tail_probability(const UrnConfig& config, std::uint64_t n, double eps, double y_star);

// exact mean and variance of Z_n
std::pair<double, double> exact_moments(const ExactDistribution& dist);

}  // namespace urnkit
