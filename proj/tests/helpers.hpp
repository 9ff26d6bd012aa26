#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "urnkit/model.hpp"
#include "urnkit/skew.hpp"

namespace urnkit::testing {

// Independent oracle: exact distribution of the type-1 draw count after n
// steps by enumerating all 2^n outcome sequences. Deliberately avoids the DP
// path; only the skew evaluator is shared.
inline std::vector<double> brute_force_k_distribution(const UrnConfig& config, int n) {
    std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
    struct Frame {
        double y1, y2, prob;
        int k;
    };
    // iterative DFS over outcome sequences
    std::vector<std::pair<Frame, int>> stack;
    stack.push_back({{config.y1_0, config.y2_0, 1.0, 0}, 0});
    while (!stack.empty()) {
        auto [f, depth] = stack.back();
        stack.pop_back();
        if (depth == n) {
            out[static_cast<std::size_t>(f.k)] += f.prob;
            continue;
        }
        double t = f.y1 + f.y2;
        double z = f.y1 / t;
        double fz = skew_eval(config.skew, z);
        double fc = skew_eval(config.skew, 1.0 - z);
        double p1 = fz / (fz + fc);
        stack.push_back({{f.y1 + config.matrix.h11, f.y2 + config.matrix.h21, f.prob * p1,
                          f.k + 1},
                         depth + 1});
        stack.push_back({{f.y1 + config.matrix.h12, f.y2 + config.matrix.h22,
                          f.prob * (1.0 - p1), f.k},
                         depth + 1});
    }
    return out;
}

inline UrnConfig example_linear_a() {  // H = [[2,4],[3,6]], identity skew
    UrnConfig c;
    c.matrix = {2, 4, 3, 6};
    c.skew = SkewSpec::identity();
    c.y1_0 = 1;
    c.y2_0 = 1;
    return c;
}

inline UrnConfig example_linear_b() {  // H = [[4,1],[5,4]], identity skew
    UrnConfig c;
    c.matrix = {4, 1, 5, 4};
    c.skew = SkewSpec::identity();
    c.y1_0 = 1;
    c.y2_0 = 1;
    return c;
}

inline UrnConfig example_quadratic() {  // H = [[1,2],[3,4]], f(y) = y^2
    UrnConfig c;
    c.matrix = {1, 2, 3, 4};
    c.skew = SkewSpec::power_family(2);
    c.y1_0 = 2;
    c.y2_0 = 1;
    return c;
}

}  // namespace urnkit::testing
