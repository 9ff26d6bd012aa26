#pragma once

#include <string>
#include <utility>
#include <vector>

#include "urnkit/model.hpp"

namespace urnkit {

struct DriftProfile {
    ReplacementMatrix matrix;
    SkewSpec skew;
    int grid_resolution = 4097;  // monotonicity / bound grids
};

// h(y): expected one-step proportion increment scaled by T.
double drift_eval(const DriftProfile& profile, double y);

// closed-form h'(y); one-sided f' at the endpoints
double drift_derivative(const DriftProfile& profile, double y);

// endpoints of I*: min and max of h11/H1 and h12/H2
std::pair<double, double> interval_istar(const ReplacementMatrix& m);

struct MonotonicityVerdict {
    bool pass = false;
    double worst_increase = 0;  // largest h(y_{i+1}) - h(y_i) over the grid
    double worst_y_lo = 0, worst_y_hi = 0;
    std::string note;
};

// grid check that h is non-increasing on [0,1] (tolerance 1e-12)
MonotonicityVerdict monotonicity_check(const DriftProfile& profile);

struct EquilibriumReport {
    double istar_lo = 0, istar_hi = 0;
    double y_star = 0;
    double h_prime_at_root = 0;
    bool monotone_nonincreasing = false;
    double worst_monotonicity_violation = 0;
    bool stable = false;           // sign pattern: h > 0 left of y*, h < 0 right
    bool unique = false;
    std::vector<double> roots_found;
    std::string note;
};

// Root-finding by bisection. h(0)=h12>0 and h(1)=-h21<0 under C4, so a
// bracket always exists. When the grid monotonicity check fails, every
// sign-change bracket on the grid is refined and reported.
EquilibriumReport equilibrium_solve(const DriftProfile& profile, double tol = 1e-12);

struct RemarkChecks {
    std::string skew_family;  // "identity" or "power(2)"
    // identity family: linear-h' endpoint conditions
    bool lin_h22_le = false;  // h22 <= h11 + 2 h21
    bool lin_h11_le = false;  // h11 <= h22 + 2 h12
    // power(2) family
    double y0 = 0;            // minimizer of the P3 quadratic
    int case_id = 0;          // 1: y0<=0, 2: y0>=1, 3: y0 in (0,1)
    bool case_condition = false;
    bool discussion1 = false;  // 10 H1 H2 + 4 (h12-h11)(H1+H2) >= 5 H2^2 + H1^2
    // uniqueness precondition: h11/H1 <= h12/H2, else skew must be concave
    bool ratio_ordered = false;
    bool concavity_needed = false;
    bool concave_declared = false;
    bool applicable_pass = false;  // the conditions for the declared family all hold
};

// Evaluates the sufficient conditions for h non-increasing that the linear
// and quadratic skew families admit in closed form.
// Throws std::invalid_argument for other families.
RemarkChecks remark_condition_checks(const ReplacementMatrix& m, const SkewSpec& skew);

}  // namespace urnkit
