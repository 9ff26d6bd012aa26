#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "urnkit/rng.hpp"
#include "urnkit/skew.hpp"

namespace urnkit {

// 2x2 ball-addition rule. Drawing type j adds column j: h1j type-1 balls and
// h2j type-2 balls. Column sums h1(), h2() are the per-draw totals.
struct ReplacementMatrix {
    double h11 = 0, h12 = 0, h21 = 0, h22 = 0;

    double h1() const { return h11 + h21; }
    double h2() const { return h12 + h22; }
    double hmin() const { return h1() < h2() ? h1() : h2(); }
    double hmax() const { return h1() > h2() ? h1() : h2(); }
    bool integer_entries() const;
};

struct UrnState {
    std::uint64_t n = 0;  // draws performed
    double y1 = 0, y2 = 0;
    double t = 0;  // y1 + y2
    double z = 0;  // y1 / t
};

enum class DrawOutcome : std::uint8_t { E1 = 1, E2 = 2 };

struct StepRecord {
    DrawOutcome outcome = DrawOutcome::E1;
    double l = 0;            // realized proportion increment numerator
    double cond_mean_l = 0;  // E[L | state], closed form
    double delta_m = 0;      // l - cond_mean_l
    double gamma = 0;        // 1 / T_{n+1}
};

struct UrnConfig {
    ReplacementMatrix matrix;
    SkewSpec skew;
    double y1_0 = 1, y2_0 = 1;
    std::uint64_t step_cap = 50'000'000;  // resource cap for a single path
};

struct UrnPath {
    UrnConfig config;
    std::uint64_t seed = 0;
    std::vector<UrnState> states;  // states[0] is the initial state
    std::vector<StepRecord> steps;
};

struct ConditionCheck {
    std::string id;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<ConditionCheck> checks;
    bool all_pass() const;
    const ConditionCheck* find(const std::string& id) const;
};

// Checks conditions C1-C4 plus the tenability operationalization
// (positive initial counts, replenishing off-diagonal entries).
// Report-valued; a failed condition is a configuration error for callers.
ValidationReport validate_config(const UrnConfig& config);

UrnState initial_state(const UrnConfig& config);

// P(next draw = type 1 | state) = f(z) / (f(z) + f(1-z))
double draw_probability(const UrnState& state, const SkewSpec& skew);

// Applies one draw outcome deterministically and fills the step diagnostics.
std::pair<UrnState, StepRecord> apply_outcome(const UrnState& state, const ReplacementMatrix& m,
                                              const SkewSpec& skew, DrawOutcome outcome);

// Samples the outcome from rng and advances the state.
std::pair<UrnState, StepRecord> urn_step(const UrnState& state, const ReplacementMatrix& m,
                                         const SkewSpec& skew, RandomStream& rng);

// Full recorded path; deterministic in (config, n, seed). Per-path streams are
// derived as RandomStream(seed, trial_index) by the Monte Carlo callers.
UrnPath simulate_path(const UrnConfig& config, std::uint64_t n, std::uint64_t seed,
                      std::uint64_t stream = 0);

// Exact two-outcome conditional step statistics at a state.
struct IncrementStats {
    double cond_mean_l = 0;          // E[L | state]
    double cond_mean_dm_over_t = 0;  // E[dM / T_next | state]
    // per-outcome table: {p, l, delta_m, t_next}
    struct Outcome {
        double p, l, delta_m, t_next;
    } e1, e2;
};

IncrementStats conditional_increment_stats(const UrnState& state, const ReplacementMatrix& m,
                                           const SkewSpec& skew);

}  // namespace urnkit
