#pragma once

#include <string>
#include <utility>
#include <vector>

namespace urnkit {

// Drawing-rule reshaping function f on [0,1].
// Built-in families plus monotone piecewise-linear tables.
struct SkewSpec {
    enum class Family { Identity, Power, MirrorPower, MonotoneTable };

    Family family = Family::Identity;
    double power = 1.0;                               // Power / MirrorPower exponent, >= 1
    std::vector<std::pair<double, double>> knots;     // MonotoneTable, (y, f(y))
    bool concave_declared = false;

    static SkewSpec identity();
    static SkewSpec power_family(double p);
    static SkewSpec mirror_power(double p);
    static SkewSpec table(std::vector<std::pair<double, double>> knots,
                          bool concave_declared = false);

    std::string name() const;
};

// f(y). MonotoneTable interpolates piecewise-linearly between knots.
// Throws std::domain_error outside [0,1].
double skew_eval(const SkewSpec& skew, double y);

// f'(y), one-sided at the endpoints. MonotoneTable uses the slope of the
// segment to the right of y (right-continuous at knots).
double skew_derivative(const SkewSpec& skew, double y);

struct SkewCheck {
    bool endpoints_ok = false;       // f(0)=0, f(1)=1
    bool nondecreasing = false;      // grid check for tables, analytic otherwise
    bool positive_on_0_1 = false;    // f > 0 on (0,1]
    bool derivatives_finite = false;
    bool table_well_formed = true;   // strictly increasing knots, (0,0) first, (1,1) last
    bool concave_grid_ok = true;     // discrete second differences <= 1e-12 slack, tables only
    bool all_ok() const {
        return endpoints_ok && nondecreasing && positive_on_0_1 && derivatives_finite &&
               table_well_formed;
    }
};

SkewCheck check_skew(const SkewSpec& skew, int grid_points = 1025);

}  // namespace urnkit
