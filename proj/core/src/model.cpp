#include "urnkit/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace urnkit {

bool ReplacementMatrix::integer_entries() const {
    for (double v : {h11, h12, h21, h22})
        if (v != std::floor(v)) return false;
    return true;
}

bool ValidationReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

const ConditionCheck* ValidationReport::find(const std::string& id) const {
    for (const auto& c : checks)
        if (c.id == id) return &c;
    return nullptr;
}

ValidationReport validate_config(const UrnConfig& config) {
    ValidationReport report;
    const auto& m = config.matrix;

    {
        SkewCheck sc = check_skew(config.skew);
        std::ostringstream d;
        d << "endpoints=" << sc.endpoints_ok << " nondecreasing=" << sc.nondecreasing
          << " positive=" << sc.positive_on_0_1 << " derivatives_finite=" << sc.derivatives_finite;
        if (config.skew.family == SkewSpec::Family::MonotoneTable)
            d << " table_well_formed=" << sc.table_well_formed
              << " concave_grid=" << sc.concave_grid_ok;
        report.checks.push_back({"C1", sc.all_ok(), d.str()});
    }
    {
        bool pass = m.h1() != m.h2();
        std::ostringstream d;
        d << "H1=" << m.h1() << " H2=" << m.h2();
        report.checks.push_back({"C2", pass, d.str()});
    }
    {
        // tenability: positive initial counts and replenishing off-diagonals
        bool pass = config.y1_0 > 0 && config.y2_0 > 0 && m.h12 > 0 && m.h21 > 0;
        std::ostringstream d;
        d << "y1_0=" << config.y1_0 << " y2_0=" << config.y2_0;
        if (config.y1_0 <= 0 || config.y2_0 <= 0)
            d << " (a zero count with f(0)=0 stalls that color until replenished)";
        report.checks.push_back({"C3", pass, d.str()});
    }
    {
        bool nonneg = m.h11 >= 0 && m.h12 >= 0 && m.h21 >= 0 && m.h22 >= 0;
        bool not_all_zero = m.h11 > 0 || m.h12 > 0 || m.h21 > 0 || m.h22 > 0;
        bool off_diag = m.h12 > 0 && m.h21 > 0;
        std::ostringstream d;
        d << "nonneg=" << nonneg << " not_all_zero=" << not_all_zero
          << " h12>0:" << (m.h12 > 0) << " h21>0:" << (m.h21 > 0);
        report.checks.push_back({"C4", nonneg && not_all_zero && off_diag, d.str()});
    }
    {
        // informational: Z_0 at the boundary is flagged, not rejected
        double t0 = config.y1_0 + config.y2_0;
        bool interior = t0 > 0 && config.y1_0 > 0 && config.y1_0 < t0;
        report.checks.push_back(
            {"Z0_interior", interior, interior ? "Z_0 in (0,1)" : "Z_0 at {0,1}"});
    }
    return report;
}

UrnState initial_state(const UrnConfig& config) {
    UrnState s;
    s.n = 0;
    s.y1 = config.y1_0;
    s.y2 = config.y2_0;
    s.t = s.y1 + s.y2;
    if (!(s.t > 0)) throw std::invalid_argument("initial urn is empty");
    s.z = s.y1 / s.t;
    return s;
}

double draw_probability(const UrnState& state, const SkewSpec& skew) {
    double fz = skew_eval(skew, state.z);
    double fc = skew_eval(skew, 1.0 - state.z);
    return fz / (fz + fc);
}

namespace {

double realized_l(const UrnState& s, const ReplacementMatrix& m, DrawOutcome o) {
    return o == DrawOutcome::E1 ? m.h11 - s.z * m.h1() : m.h12 - s.z * m.h2();
}

double conditional_mean_l(const UrnState& s, const ReplacementMatrix& m, const SkewSpec& skew) {
    double fz = skew_eval(skew, s.z);
    double fc = skew_eval(skew, 1.0 - s.z);
    return ((m.h11 - s.z * m.h1()) * fz + (m.h12 - s.z * m.h2()) * fc) / (fz + fc);
}

}  // namespace

std::pair<UrnState, StepRecord> apply_outcome(const UrnState& state, const ReplacementMatrix& m,
                                              const SkewSpec& skew, DrawOutcome outcome) {
    UrnState next = state;
    next.n = state.n + 1;
    if (outcome == DrawOutcome::E1) {
        next.y1 += m.h11;
        next.y2 += m.h21;
    } else {
        next.y1 += m.h12;
        next.y2 += m.h22;
    }
    next.t = next.y1 + next.y2;
    next.z = next.y1 / next.t;

    StepRecord rec;
    rec.outcome = outcome;
    rec.l = realized_l(state, m, outcome);
    rec.cond_mean_l = conditional_mean_l(state, m, skew);
    rec.delta_m = rec.l - rec.cond_mean_l;
    rec.gamma = 1.0 / next.t;
    return {next, rec};
}

std::pair<UrnState, StepRecord> urn_step(const UrnState& state, const ReplacementMatrix& m,
                                         const SkewSpec& skew, RandomStream& rng) {
    double p1 = draw_probability(state, skew);
    DrawOutcome o = rng.next_double() < p1 ? DrawOutcome::E1 : DrawOutcome::E2;
    return apply_outcome(state, m, skew, o);
}

UrnPath simulate_path(const UrnConfig& config, std::uint64_t n, std::uint64_t seed,
                      std::uint64_t stream) {
    if (n > config.step_cap) throw std::length_error("simulate_path: n exceeds step cap");
    UrnPath path;
    path.config = config;
    path.seed = seed;
    path.states.reserve(n + 1);
    path.steps.reserve(n);
    path.states.push_back(initial_state(config));

    RandomStream rng(seed, stream);
    for (std::uint64_t i = 0; i < n; ++i) {
        auto [next, rec] = urn_step(path.states.back(), config.matrix, config.skew, rng);
        path.states.push_back(next);
        path.steps.push_back(rec);
    }
    return path;
}

IncrementStats conditional_increment_stats(const UrnState& state, const ReplacementMatrix& m,
                                           const SkewSpec& skew) {
    IncrementStats st;
    double p1 = draw_probability(state, skew);
    st.cond_mean_l = conditional_mean_l(state, m, skew);

    double l1 = realized_l(state, m, DrawOutcome::E1);
    double l2 = realized_l(state, m, DrawOutcome::E2);
    st.e1 = {p1, l1, l1 - st.cond_mean_l, state.t + m.h1()};
    st.e2 = {1.0 - p1, l2, l2 - st.cond_mean_l, state.t + m.h2()};
    st.cond_mean_dm_over_t =
        st.e1.p * st.e1.delta_m / st.e1.t_next + st.e2.p * st.e2.delta_m / st.e2.t_next;
    return st;
}

}  // namespace urnkit
