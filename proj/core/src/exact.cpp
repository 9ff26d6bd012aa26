#include "urnkit/exact.hpp"

#include <cmath>
#include <stdexcept>

namespace urnkit {

UrnState state_at(const UrnConfig& config, std::uint64_t m, std::uint64_t k) {
    const auto& H = config.matrix;
    UrnState s;
    s.n = m;
    double j = static_cast<double>(m - k);
    double kk = static_cast<double>(k);
    s.y1 = config.y1_0 + kk * H.h11 + j * H.h12;
    s.y2 = config.y2_0 + kk * H.h21 + j * H.h22;
    s.t = s.y1 + s.y2;
    s.z = s.y1 / s.t;
    return s;
}

ExactDistribution dp_distribution(const UrnConfig& config, std::uint64_t n, std::uint64_t cap) {
    if (n > cap) throw std::length_error("dp_distribution: n exceeds cap");

    std::vector<double> row(n + 1, 0.0), next(n + 1, 0.0);
    row[0] = 1.0;
    for (std::uint64_t m = 0; m < n; ++m) {
        std::fill(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(m) + 2, 0.0);
        for (std::uint64_t k = 0; k <= m; ++k) {
            double p = row[k];
            if (p == 0.0) continue;
            double p1 = draw_probability(state_at(config, m, k), config.skew);
            next[k + 1] += p * p1;
            next[k] += p * (1.0 - p1);
        }
        row.swap(next);
    }

    ExactDistribution dist;
    dist.n = n;
    dist.config = config;
    dist.support.reserve(n + 1);
    for (std::uint64_t k = 0; k <= n; ++k)
        dist.support.push_back({k, state_at(config, n, k).z, row[k]});
    return dist;
}

double exact_tail_probability(const ExactDistribution& dist, double eps, double y_star) {
    if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
    // Kahan summation: the tail can be many orders below the head atoms
    double sum = 0.0, c = 0.0;
    for (const auto& a : dist.support) {
        if (std::abs(a.z - y_star) > eps) {
            double y = a.probability - c;
            double t = sum + y;
            c = (t - sum) - y;
            sum = t;
        }
    }
    return sum;
}

double exact_tail_probability(const UrnConfig& config, std::uint64_t n, double eps,
                              double y_star) {
    return exact_tail_probability(dp_distribution(config, n), eps, y_star);
}

std::pair<double, double> exact_moments(const ExactDistribution& dist) {
    double mean = 0.0;
    for (const auto& a : dist.support) mean += a.probability * a.z;
    double var = 0.0;
    for (const auto& a : dist.support) {
        double d = a.z - mean;
        var += a.probability * d * d;
    }
    return {mean, var};
}

}  // namespace urnkit
