#include "urnkit/skew.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace urnkit {

SkewSpec SkewSpec::identity() { return SkewSpec{}; }

SkewSpec SkewSpec::power_family(double p) {
    if (p < 1.0) throw std::invalid_argument("power exponent must be >= 1");
    SkewSpec s;
    s.family = Family::Power;
    s.power = p;
    return s;
}

SkewSpec SkewSpec::mirror_power(double p) {
    if (p < 1.0) throw std::invalid_argument("power exponent must be >= 1");
    SkewSpec s;
    s.family = Family::MirrorPower;
    s.power = p;
    s.concave_declared = true;  // 1-(1-y)^p is concave for p >= 1
    return s;
}

SkewSpec SkewSpec::table(std::vector<std::pair<double, double>> knots, bool concave_declared) {
    SkewSpec s;
    s.family = Family::MonotoneTable;
    s.knots = std::move(knots);
    s.concave_declared = concave_declared;
    return s;
}

std::string SkewSpec::name() const {
    switch (family) {
        case Family::Identity: return "identity";
        case Family::Power: return "power(" + std::to_string(power) + ")";
        case Family::MirrorPower: return "mirror_power(" + std::to_string(power) + ")";
        case Family::MonotoneTable: return "table[" + std::to_string(knots.size()) + "]";
    }
    return "?";
}

namespace {

void require_unit_interval(double y) {
    if (!(y >= 0.0 && y <= 1.0)) throw std::domain_error("skew argument outside [0,1]");
}

// index of the segment [knots[i], knots[i+1]] containing y, right-continuous
std::size_t segment_index(const std::vector<std::pair<double, double>>& knots, double y) {
    auto it = std::upper_bound(knots.begin(), knots.end(), y,
                               [](double v, const auto& k) { return v < k.first; });
    std::size_t i = static_cast<std::size_t>(it - knots.begin());
    if (i == 0) return 0;
    if (i >= knots.size()) return knots.size() - 2;
    return i - 1;
}

}  // namespace

double skew_eval(const SkewSpec& skew, double y) {
    require_unit_interval(y);
    switch (skew.family) {
        case SkewSpec::Family::Identity:
            return y;
        case SkewSpec::Family::Power:
            return std::pow(y, skew.power);
        case SkewSpec::Family::MirrorPower:
            return 1.0 - std::pow(1.0 - y, skew.power);
        case SkewSpec::Family::MonotoneTable: {
            const auto& k = skew.knots;
            if (k.size() < 2) throw std::invalid_argument("table skew needs >= 2 knots");
            std::size_t i = segment_index(k, y);
            double x0 = k[i].first, x1 = k[i + 1].first;
            double f0 = k[i].second, f1 = k[i + 1].second;
            return f0 + (f1 - f0) * (y - x0) / (x1 - x0);
        }
    }
    throw std::logic_error("unreachable skew family");
}

double skew_derivative(const SkewSpec& skew, double y) {
    require_unit_interval(y);
    switch (skew.family) {
        case SkewSpec::Family::Identity:
            return 1.0;
        case SkewSpec::Family::Power:
            if (y == 0.0) return skew.power == 1.0 ? 1.0 : 0.0;
            return skew.power * std::pow(y, skew.power - 1.0);
        case SkewSpec::Family::MirrorPower:
            if (y == 1.0) return skew.power == 1.0 ? 1.0 : 0.0;
            return skew.power * std::pow(1.0 - y, skew.power - 1.0);
        case SkewSpec::Family::MonotoneTable: {
            const auto& k = skew.knots;
            if (k.size() < 2) throw std::invalid_argument("table skew needs >= 2 knots");
            std::size_t i = segment_index(k, y);
            if (y >= k.back().first) i = k.size() - 2;  // left slope at y=1
            return (k[i + 1].second - k[i].second) / (k[i + 1].first - k[i].first);
        }
    }
    throw std::logic_error("unreachable skew family");
}

SkewCheck check_skew(const SkewSpec& skew, int grid_points) {
    SkewCheck c;
    if (skew.family == SkewSpec::Family::MonotoneTable) {
        const auto& k = skew.knots;
        c.table_well_formed = k.size() >= 2 && k.front().first == 0.0 &&
                              k.front().second == 0.0 && k.back().first == 1.0 &&
                              k.back().second == 1.0;
        for (std::size_t i = 0; c.table_well_formed && i + 1 < k.size(); ++i) {
            if (!(k[i + 1].first > k[i].first) || !(k[i + 1].second > k[i].second))
                c.table_well_formed = false;
        }
        if (!c.table_well_formed) return c;
        if (skew.concave_declared) {
            // concavity of a piecewise-linear table == non-increasing slopes
            for (std::size_t i = 0; i + 2 < k.size(); ++i) {
                double s0 = (k[i + 1].second - k[i].second) / (k[i + 1].first - k[i].first);
                double s1 = (k[i + 2].second - k[i + 1].second) / (k[i + 2].first - k[i + 1].first);
                if (s1 > s0 + 1e-12) c.concave_grid_ok = false;
            }
        }
    }

    double f0 = skew_eval(skew, 0.0);
    double f1 = skew_eval(skew, 1.0);
    c.endpoints_ok = std::abs(f0) <= 1e-15 && std::abs(f1 - 1.0) <= 1e-15;

    c.nondecreasing = true;
    c.positive_on_0_1 = true;
    double prev = f0;
    for (int i = 1; i < grid_points; ++i) {
        double y = static_cast<double>(i) / (grid_points - 1);
        double v = skew_eval(skew, y);
        if (v < prev - 1e-12) c.nondecreasing = false;
        if (v <= 0.0) c.positive_on_0_1 = false;
        prev = v;
    }

    c.derivatives_finite =
        std::isfinite(skew_derivative(skew, 0.0)) && std::isfinite(skew_derivative(skew, 1.0));
    return c;
}

}  // namespace urnkit
