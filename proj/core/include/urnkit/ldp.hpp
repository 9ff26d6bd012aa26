#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "urnkit/exact.hpp"
#include "urnkit/model.hpp"

namespace urnkit {

enum class TailProvenance { MonteCarlo, Exact };

struct TailEstimate {
    std::uint64_t n = 0;
    double eps = 0;
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;
    double p_hat = 0;
    double ci_half_width = 0;  // 99% normal approximation
    TailProvenance provenance = TailProvenance::MonteCarlo;
};

// Monte Carlo estimate of P(|Z_n - y_star| > eps). Trials fan out over
// `threads` workers; per-trial streams make the result independent of
// scheduling.
TailEstimate mc_tail_estimate(const UrnConfig& config, double y_star, std::uint64_t n, double eps,
                              std::uint64_t trials, std::uint64_t seed, int threads = 1);

TailEstimate exact_tail_estimate(const UrnConfig& config, double y_star, std::uint64_t n,
                                 double eps);

struct RateFit {
    double a_hat = 0;      // decay rate per step (minus the slope of log p vs n)
    double log_c_hat = 0;
    double r_squared = 0;
    std::size_t points_used = 0;
    std::size_t points_zero = 0;  // excluded p = 0 points
};

// OLS of log p against n. Zero-probability points are excluded and counted.
// Throws std::invalid_argument with fewer than 3 usable points.
RateFit rate_fit(const std::vector<TailEstimate>& estimates);

struct Lemma31Params {
    double beta = 2.718281828459045;  // any beta > 1
    std::uint64_t k = 0;              // first summed step
    std::uint64_t n = 0;              // last summed step
    double eps = 0;
    double big_k = 0;  // K(H1, H2), fitted empirically (no closed form)
    ReplacementMatrix matrix;
};

// Explicit martingale-sum tail bound:
//   2 exp(-(eps - (K/B^2) S)^2 / (2 (beta A^2 / B^2) S)),
// A = 4(H1+H2), B = 2 min{H1,H2}, S = sum_{i=k}^{n} 1/i^2.
// Returns the trivial bound 2 when the numerator positivity or the eps
// admissibility precondition fails.
double lemma31_bound(const Lemma31Params& params);

// sup over all reachable deterministic states (m, k), m <= horizon, of
// |E[dM/T_next | state]| * T^2 -- the empirical constant of the conditional
// mean bound.
double fit_khat_statespace(const UrnConfig& config, std::uint64_t horizon);

// same supremum along one simulated path
double fit_khat_path(const UrnConfig& config, std::uint64_t n, std::uint64_t seed,
                     std::uint64_t stream = 0);

struct BoundCheck {
    std::string id;
    std::string description;
    bool pass = false;
    bool informational = false;  // flagged, not counted as failure
    double worst_value = 0;
    std::uint64_t worst_step = 0;
    std::uint64_t violations = 0;
};

struct BoundReport {
    std::vector<BoundCheck> checks;
    double khat = 0;  // fitted conditional-mean constant over the audited paths
    bool all_pass() const;
    const BoundCheck* find(const std::string& id) const;
};

// Audits every per-step bound over `paths` simulated paths of length n:
//   dm_bound:      |dM| <= 4(H1+H2)
//   h_bound:       |h(Z)| <= 2(H1+H2)
//   t_envelope:    n*min <= T_n - T_0 <= n*max (exact accounting)
//   t_literal:     1/(2n*max) <= 1/T_n <= 1/(2n*min) (informational; the
//                  lower form needs T_0 >= n*min and fails for large n)
//   step_bound:    |Z_{k+1} - Z_k| <= 3(H1+H2) / ((k+1)*min)
//   cond_mean:     reports the fitted sup |E[dM/T]| * T^2 as khat
BoundReport bound_verification(const UrnConfig& config, std::uint64_t n, std::uint64_t paths,
                               std::uint64_t seed);

// Empirical exceedance frequency of |sum_{i=k}^{n} dM_{i+1}/T_{i+1}| >= eps
// over `paths` simulated paths.
double martingale_sum_exceedance(const UrnConfig& config, std::uint64_t k, std::uint64_t n,
                                 double eps, std::uint64_t paths, std::uint64_t seed,
                                 int threads = 1);

}  // namespace urnkit
