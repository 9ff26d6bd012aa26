#include "urnkit/drift.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace urnkit {

double drift_eval(const DriftProfile& profile, double y) {
    if (!(y >= 0.0 && y <= 1.0)) throw std::domain_error("drift argument outside [0,1]");
    const auto& m = profile.matrix;
    double fy = skew_eval(profile.skew, y);
    double fc = skew_eval(profile.skew, 1.0 - y);
    return ((m.h11 - y * m.h1()) * fy + (m.h12 - y * m.h2()) * fc) / (fy + fc);
}

double drift_derivative(const DriftProfile& profile, double y) {
    if (!(y >= 0.0 && y <= 1.0)) throw std::domain_error("drift argument outside [0,1]");
    const auto& m = profile.matrix;
    double fy = skew_eval(profile.skew, y);
    double fc = skew_eval(profile.skew, 1.0 - y);
    double dfy = skew_derivative(profile.skew, y);
    double dfc = skew_derivative(profile.skew, 1.0 - y);
    double denom = fy + fc;
    double term1 = (-m.h1() * fy - m.h2() * fc) * denom;
    double term2 = (dfy * fc + fy * dfc) * ((m.h11 - y * m.h1()) - (m.h12 - y * m.h2()));
    return (term1 + term2) / (denom * denom);
}

std::pair<double, double> interval_istar(const ReplacementMatrix& m) {
    double a = m.h11 / m.h1();
    double b = m.h12 / m.h2();
    return {std::min(a, b), std::max(a, b)};
}

MonotonicityVerdict monotonicity_check(const DriftProfile& profile) {
    MonotonicityVerdict v;
    int n = std::max(profile.grid_resolution, 2);
    double prev_y = 0.0;
    double prev_h = drift_eval(profile, 0.0);
    v.worst_increase = 0.0;
    for (int i = 1; i < n; ++i) {
        double y = static_cast<double>(i) / (n - 1);
        double h = drift_eval(profile, y);
        double inc = h - prev_h;
        if (inc > v.worst_increase) {
            v.worst_increase = inc;
            v.worst_y_lo = prev_y;
            v.worst_y_hi = y;
        }
        prev_y = y;
        prev_h = h;
    }
    v.pass = v.worst_increase <= 1e-12;
    // the hypothesis is usually stated on the open interval; we check the
    // closed one, which is stricter at the endpoints.
    v.note = v.pass ? "non-increasing on the closed-interval grid"
                    : "increasing pair found on the grid";
    return v;
}

namespace {

double bisect(const DriftProfile& profile, double lo, double hi, double flo, double tol) {
    // invariant: sign(h(lo)) == sign(flo) != sign(h(hi))
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // bracket at machine resolution
        double fm = drift_eval(profile, mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

EquilibriumReport equilibrium_solve(const DriftProfile& profile, double tol) {
    if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
    EquilibriumReport rep;
    auto [lo, hi] = interval_istar(profile.matrix);
    rep.istar_lo = lo;
    rep.istar_hi = hi;

    auto mono = monotonicity_check(profile);
    rep.monotone_nonincreasing = mono.pass;
    rep.worst_monotonicity_violation = mono.worst_increase;

    if (mono.pass) {
        double h0 = drift_eval(profile, 0.0);
        rep.roots_found.push_back(bisect(profile, 0.0, 1.0, h0, tol));
    } else {
        // refine every sign-change bracket on the grid
        int n = std::max(profile.grid_resolution, 2);
        double prev_y = 0.0;
        double prev_h = drift_eval(profile, 0.0);
        for (int i = 1; i < n; ++i) {
            double y = static_cast<double>(i) / (n - 1);
            double h = drift_eval(profile, y);
            if (prev_h == 0.0) {
                rep.roots_found.push_back(prev_y);
            } else if ((prev_h > 0) != (h > 0)) {
                rep.roots_found.push_back(bisect(profile, prev_y, y, prev_h, tol));
            }
            prev_y = y;
            prev_h = h;
        }
        // merge refinements that collapsed to the same root
        std::sort(rep.roots_found.begin(), rep.roots_found.end());
        rep.roots_found.erase(std::unique(rep.roots_found.begin(), rep.roots_found.end(),
                                          [&](double a, double b) { return b - a <= 2 * tol; }),
                              rep.roots_found.end());
    }

    rep.unique = rep.roots_found.size() == 1;
    if (!rep.unique) {
        rep.note = "multiple candidate roots; downstream tail analyses assume uniqueness";
        return rep;
    }

    rep.y_star = rep.roots_found.front();
    rep.h_prime_at_root = drift_derivative(profile, rep.y_star);

    // local sign pattern: h > 0 just left of y*, h < 0 just right
    double span = 1e-3;
    bool pattern = true;
    for (int i = 1; i <= 8; ++i) {
        double d = span * i / 8.0;
        double yl = rep.y_star - d;
        double yr = rep.y_star + d;
        if (yl > 0.0 && drift_eval(profile, yl) <= 0.0) pattern = false;
        if (yr < 1.0 && drift_eval(profile, yr) >= 0.0) pattern = false;
    }
    rep.stable = rep.h_prime_at_root < 0.0 || pattern;
    rep.note = rep.stable ? "stable equilibrium" : "sign pattern inconclusive";
    return rep;
}

RemarkChecks remark_condition_checks(const ReplacementMatrix& m, const SkewSpec& skew) {
    RemarkChecks rc;
    double H1 = m.h1(), H2 = m.h2();

    double r1 = m.h11 / H1, r2 = m.h12 / H2;
    rc.ratio_ordered = r1 <= r2;
    rc.concavity_needed = !rc.ratio_ordered;
    rc.concave_declared = skew.concave_declared || skew.family == SkewSpec::Family::Identity;

    if (skew.family == SkewSpec::Family::Identity) {
        rc.skew_family = "identity";
        rc.lin_h22_le = m.h22 <= m.h11 + 2 * m.h21;
        rc.lin_h11_le = m.h11 <= m.h22 + 2 * m.h12;
        rc.applicable_pass = rc.lin_h22_le && rc.lin_h11_le;
        return rc;
    }
    if (skew.family == SkewSpec::Family::Power && skew.power == 2.0) {
        rc.skew_family = "power(2)";
        rc.y0 = (3 * H2 - H1) / (2 * (H1 + H2));
        rc.discussion1 = 10 * H1 * H2 + 4 * (m.h12 - m.h11) * (H1 + H2) >= 5 * H2 * H2 + H1 * H1;
        if (rc.y0 <= 0) {
            rc.case_id = 1;
            rc.case_condition = 3 * H2 <= H1 && m.h11 <= m.h22 + 2 * m.h12;
        } else if (rc.y0 >= 1) {
            rc.case_id = 2;
            rc.case_condition = H2 >= 3 * H1 && m.h22 <= m.h11 + 2 * m.h21;
        } else {
            rc.case_id = 3;
            rc.case_condition = 3 * H2 >= H1 && H2 <= 3 * H1 && rc.discussion1;
        }
        rc.applicable_pass = rc.case_condition;
        return rc;
    }
    throw std::invalid_argument("remark conditions are available for identity and power(2) only");
}

}  // namespace urnkit
