#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "urnkit/ldp.hpp"
#include "urnkit/model.hpp"

namespace urnkit {

// One recorded transition of the recursion X_{n+1} = X_n + gamma (g(X_n) + U).
struct SAStepRecord {
    double x_next = 0;
    double gamma = 0;
    double u = 0;
    bool has_cond_mean = false;       // exact E[gamma U | F_n] available
    double cond_mean_gamma_u = 0;
};

// Per-trajectory state driving the recursion: step sizes, noise, and (for
// adapters) any hidden state such as urn ball counts.
class SADynamics {
public:
    virtual ~SADynamics() = default;
    // advance from X = x after n completed steps
    virtual SAStepRecord advance(std::uint64_t n, double x) = 0;
};

struct SAProblem {
    std::function<double(double)> g;
    std::function<std::unique_ptr<SADynamics>(std::uint64_t seed, std::uint64_t stream)>
        make_dynamics;
    double x0 = 0;
    bool bounded = false;  // state space [0,1]; leaving it is a hard error
    // declared constants
    double u_l = 0, u_u = 0;  // gamma envelope: u_l/n <= gamma_n <= u_u/n
    double k_g = 0;           // |g| bound on [0,1] (bounded case)
    double k_u = 0;           // noise bound
    double k_e = 0;           // conditional-mean constant
    double k_gl = 0, k_gu = 0;  // -lim g at +inf, lim g at -inf (unbounded case)
    std::uint64_t step_cap = 50'000'000;
};

struct SATrajectory {
    std::uint64_t seed = 0;
    std::vector<double> states;  // states[0] = x0
    std::vector<SAStepRecord> steps;
};

// Synthetic problem: gamma(n) = u/n, i.i.d. noise uniform on [-k_u, k_u]
// (mean zero, so E[gamma U | F_n] = 0 exactly).
SAProblem make_synthetic_problem(std::function<double(double)> g, double u_gamma, double k_u,
                                 double x0, bool bounded);

// The urn proportion recursion as an SA instance: g = h, gamma = 1/T_{n+1},
// U = dM. khat feeds the declared conditional-mean constant. X_{n+1} is the
// urn proportion itself, so trajectories are bit-identical to simulate_path.
SAProblem urn_as_sa(const UrnConfig& config, double khat);

// Iterates the recursion for n steps. Throws std::range_error if a bounded
// problem leaves [0,1], std::length_error beyond the cap.
SATrajectory run_sa(const SAProblem& problem, std::uint64_t n, std::uint64_t seed,
                    std::uint64_t stream = 0);

struct SAConditionCheck {
    std::string id;
    bool auditable = true;
    bool pass = false;
    double worst_value = 0;  // worst normalized ratio observed
    std::uint64_t worst_step = 0;
    double implied_constant = 0;  // tightest constant that would pass
};

struct SAAuditReport {
    std::vector<SAConditionCheck> checks;
    bool all_pass() const;
    const SAConditionCheck* find(const std::string& id) const;
};

// Audits the step-size envelope, drift bound, noise bound, and (when the
// dynamics expose exact conditional means) the conditional-mean decay against
// the problem's declared constants.
SAAuditReport condition_audit(const SAProblem& problem, const SATrajectory& trajectory);

struct ShapeFit {
    double exp_r2 = 0;        // log p vs n
    double stretched_r2 = 0;  // log(-log p) vs log n
    std::string better;       // "exponential" | "stretched" | "indeterminate"
    std::size_t usable_points = 0;
};

struct TailExperimentResult {
    std::vector<TailEstimate> upper;  // P(X_n - x* > eps)
    std::vector<TailEstimate> lower;  // P(X_n - x* < -eps)
    ShapeFit upper_fit, lower_fit;
    std::string predicted_upper;  // regime from K_gl vs K_u
    std::string predicted_lower;  // regime from K_gu vs K_u
};

// One-sided tail estimates over an n grid, with decay-shape comparison and
// the predicted regime from the declared constants.
TailExperimentResult tail_experiment(const SAProblem& problem, double x_star,
                                     const std::vector<std::uint64_t>& n_grid, double eps,
                                     std::uint64_t trials, std::uint64_t seed, int threads = 1);

}  // namespace urnkit
