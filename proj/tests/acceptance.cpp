// End-to-end acceptance gate. Each criterion prints a single [PASS]/[FAIL]
// line; the binary exits nonzero if any selected criterion fails. Criteria
// may be selected by number on the command line; default runs all ten.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "urnkit/drift.hpp"
#include "urnkit/exact.hpp"
#include "urnkit/ldp.hpp"
#include "urnkit/model.hpp"
#include "urnkit/sa.hpp"

using namespace urnkit;
using namespace urnkit::testing;

namespace {

int g_threads = 4;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// 1. closed-form equilibria of the two linear-skew example matrices
bool crit_equilibrium(std::string& detail) {
    auto a = equilibrium_solve(DriftProfile{{2, 4, 3, 6}, SkewSpec::identity()});
    auto b = equilibrium_solve(DriftProfile{{4, 1, 5, 4}, SkewSpec::identity()});
    double target_b = (std::sqrt(5.0) - 1.0) / 4.0;
    double err_a = std::abs(a.y_star - 0.4);
    double err_b = std::abs(b.y_star - target_b);
    detail = "y*_a err " + fmt(err_a) + ", y*_b err " + fmt(err_b);
    return a.unique && b.unique && err_a <= 1e-10 && err_b <= 1e-10;
}

// 2. forward recursion equals exhaustive 2^n enumeration
bool crit_oracle_equivalence(std::string& detail) {
    std::vector<UrnConfig> configs = {example_linear_a(), example_linear_b(), example_quadratic()};
    UrnConfig mirror;  // mirror-power skew on the first matrix
    mirror.matrix = {2, 4, 3, 6};
    mirror.skew = SkewSpec::mirror_power(2);
    mirror.y1_0 = 1;
    mirror.y2_0 = 2;
    configs.push_back(mirror);
    UrnConfig pow_b;  // quadratic skew on the second matrix
    pow_b.matrix = {4, 1, 5, 4};
    pow_b.skew = SkewSpec::power_family(2);
    pow_b.y1_0 = 2;
    pow_b.y2_0 = 3;
    configs.push_back(pow_b);

    double worst = 0;
    for (const auto& c : configs) {
        const int n = 12;
        auto dist = dp_distribution(c, n);
        auto brute = brute_force_k_distribution(c, n);
        if (dist.support.size() != brute.size()) {
            detail = "support size mismatch";
            return false;
        }
        for (std::size_t k = 0; k < brute.size(); ++k)
            worst = std::max(worst, std::abs(dist.support[k].probability - brute[k]));
    }
    detail = "5 configs, n = 12, worst abs diff " + fmt(worst);
    return worst <= 1e-13;
}

// 3. Monte Carlo tails match the exact oracle within 3 standard errors
bool crit_mc_exact(std::string& detail) {
    auto c = example_linear_a();
    const double y_star = 0.4;
    const std::uint64_t trials = 100000;
    double worst_excess = -1;
    for (std::uint64_t n : {50ULL, 200ULL, 500ULL}) {
        auto dist = dp_distribution(c, n);
        for (double eps : {0.05, 0.1}) {
            double p_exact = exact_tail_probability(dist, eps, y_star);
            auto mc = mc_tail_estimate(c, y_star, n, eps, trials, 20260823 + n, g_threads);
            double tol = 3 * std::sqrt(p_exact * (1 - p_exact) / trials) + 1e-6;
            double excess = std::abs(mc.p_hat - p_exact) - tol;
            worst_excess = std::max(worst_excess, excess);
        }
    }
    detail = "worst |p_hat - p_exact| minus tolerance " + fmt(worst_excess);
    return worst_excess <= 0;
}

// 4. exact tails decay: strictly decreasing in n with a good exponential fit
bool crit_exponential_decay(std::string& detail) {
    auto c = example_linear_b();
    auto eq = equilibrium_solve(DriftProfile{c.matrix, c.skew});
    const double eps = 0.05;
    std::vector<TailEstimate> pts;
    bool decreasing = true;
    double prev = 2.0;
    for (std::uint64_t n = 100; n <= 1000; n += 100) {
        double p = exact_tail_probability(c, n, eps, eq.y_star);
        if (!(p < prev) || p <= 0.0) decreasing = false;
        prev = p;
        TailEstimate e;
        e.n = n;
        e.eps = eps;
        e.p_hat = p;
        e.provenance = TailProvenance::Exact;
        pts.push_back(e);
    }
    auto fit = rate_fit(pts);
    detail = "a_hat " + fmt(fit.a_hat) + ", r2 " + fmt(fit.r_squared) +
             (decreasing ? ", strictly decreasing" : ", NOT strictly decreasing");
    return decreasing && fit.a_hat > 0 && fit.r_squared >= 0.9;
}

// 5. per-step bound audit over 100 seeds plus fitted-constant stability
bool crit_bound_audit(std::string& detail) {
    auto c = example_linear_a();
    const std::uint64_t n = 10000;
    auto rep = bound_verification(c, n, 100, 424242);
    if (!rep.all_pass()) {
        detail = "per-step bound violated";
        return false;
    }
    std::vector<double> khats;
    for (std::uint64_t seed = 1; seed <= 100; ++seed)
        khats.push_back(fit_khat_path(c, n, seed));
    double mean = std::accumulate(khats.begin(), khats.end(), 0.0) / khats.size();
    double worst_rel = 0;
    for (double k : khats) worst_rel = std::max(worst_rel, std::abs(k - mean) / mean);
    detail = "0 violations over 100 paths; K-hat mean " + fmt(mean) + ", worst rel dev " +
             fmt(worst_rel);
    return std::isfinite(mean) && mean > 0 && worst_rel <= 0.10;
}

// 6. the martingale-sum tail bound dominates the empirical frequency
bool crit_lemma_bound(std::string& detail) {
    auto c = example_linear_a();
    Lemma31Params p;
    p.matrix = c.matrix;
    p.beta = std::exp(1.0);
    p.k = 100;
    p.n = 2000;
    p.eps = 0.5;
    p.big_k = fit_khat_statespace(c, 2000);
    double bound = lemma31_bound(p);
    double freq = martingale_sum_exceedance(c, p.k, p.n, p.eps, 10000, 777, g_threads);
    detail = "empirical " + fmt(freq) + " <= bound " + fmt(bound) + " (K-hat " + fmt(p.big_k) +
             ")";
    return freq <= bound;
}

// 7. one-step increment bound and the half-to-three-quarters band inclusions
bool crit_step_bound(std::string& detail) {
    auto c = example_linear_b();
    auto eq = equilibrium_solve(DriftProfile{c.matrix, c.skew});
    double hsum = c.matrix.h1() + c.matrix.h2();
    const double eps = 0.2;
    // band inclusions apply beyond these step thresholds
    double k_upper = 12 * hsum / (eps * c.matrix.hmin());
    double k_lower = 12 * hsum / (eps * c.matrix.hmax());
    std::uint64_t step_viol = 0, incl_viol = 0, antecedents = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto path = simulate_path(c, 5000, seed);
        for (std::size_t k = 0; k + 1 < path.states.size(); ++k) {
            double dz = path.states[k + 1].z - path.states[k].z;
            double cap = 3 * hsum / ((static_cast<double>(k) + 1) * c.matrix.hmin());
            if (std::abs(dz) > cap) ++step_viol;
            double d_now = path.states[k].z - eq.y_star;
            double d_next = path.states[k + 1].z - eq.y_star;
            if (static_cast<double>(k) > k_upper && d_now <= 0.5 * eps) {
                ++antecedents;
                if (!(d_next <= 0.75 * eps)) ++incl_viol;
            }
            if (static_cast<double>(k) > k_lower && d_now >= -0.5 * eps) {
                ++antecedents;
                if (!(d_next >= -0.75 * eps)) ++incl_viol;
            }
        }
    }
    detail = fmt(static_cast<double>(step_viol)) + " step violations, " +
             fmt(static_cast<double>(incl_viol)) + " inclusion violations over " +
             fmt(static_cast<double>(antecedents)) + " antecedent events";
    return step_viol == 0 && incl_viol == 0 && antecedents > 0;
}

// 8. strong drift concentrates faster than weak drift on matched problems
bool crit_regime_separation(std::string& detail) {
    auto make = [](double k_drift) {
        auto p = make_synthetic_problem(
            [k_drift](double x) { return -k_drift * std::tanh(x); }, 1.0, 1.0, 0.0, false);
        p.k_gl = k_drift;
        p.k_gu = k_drift;
        return p;
    };
    std::vector<std::uint64_t> grid = {500, 1000, 2000, 4000};
    const double eps = 0.02;
    auto strong = tail_experiment(make(2.0), 0.0, grid, eps, 10000, 1618, g_threads);
    auto weak = tail_experiment(make(0.5), 0.0, grid, eps, 10000, 1618, g_threads);
    bool mono = true, ordered = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i > 0 && (strong.upper[i].p_hat > strong.upper[i - 1].p_hat ||
                      weak.upper[i].p_hat > weak.upper[i - 1].p_hat))
            mono = false;
        if (grid[i] > 1000 && strong.upper[i].p_hat > weak.upper[i].p_hat) ordered = false;
    }
    detail = "strong tails [" + fmt(strong.upper[0].p_hat) + ".." +
             fmt(strong.upper.back().p_hat) + "], weak [" + fmt(weak.upper[0].p_hat) + ".." +
             fmt(weak.upper.back().p_hat) + "], regimes " + strong.predicted_upper + "/" +
             weak.predicted_upper;
    return mono && ordered;
}

// 9. the urn adapter is the urn: bit-identical trajectories, conditions pass
bool crit_urn_sa_consistency(std::string& detail) {
    auto c = example_linear_b();
    const std::uint64_t n = 1000;
    auto problem = urn_as_sa(c, fit_khat_statespace(c, n));
    bool audits_pass = true;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto traj = run_sa(problem, n, seed);
        auto path = simulate_path(c, n, seed);
        if (traj.states.size() != path.states.size()) {
            detail = "length mismatch";
            return false;
        }
        for (std::size_t i = 0; i < traj.states.size(); ++i)
            if (traj.states[i] != path.states[i].z) {
                detail = "trajectory mismatch at seed " + std::to_string(seed);
                return false;
            }
        if (seed <= 5 && !condition_audit(problem, traj).all_pass()) audits_pass = false;
    }
    detail = "100 seeds bit-identical; condition audits " +
             std::string(audits_pass ? "pass" : "FAIL");
    return audits_pass;
}

// 10. the validator rejects each malformed family and names the condition
bool crit_negative_validation(std::string& detail) {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "urnkit_acceptance_neg";
    fs::create_directories(dir);
    struct Case {
        const char* name;
        const char* body;
        const char* condition;
    } cases[] = {
        {"balanced",
         "model.h11 = 1\nmodel.h12 = 2\nmodel.h21 = 2\nmodel.h22 = 1\nmodel.skew = identity\n",
         "C2"},
        {"zero_offdiag",
         "model.h11 = 2\nmodel.h12 = 0\nmodel.h21 = 3\nmodel.h22 = 6\nmodel.skew = identity\n",
         "C4"},
        {"bad_table",
         "model.h11 = 4\nmodel.h12 = 1\nmodel.h21 = 5\nmodel.h22 = 4\nmodel.skew = table\n"
         "model.table = 0:0; 0.4:0.9; 0.6:0.5; 1:1\n",
         "C1"},
    };
    bool ok = true;
    std::string seen;
    for (const auto& cs : cases) {
        fs::path cfg = dir / (std::string(cs.name) + ".cfg");
        std::ofstream(cfg) << cs.body;
        fs::path log = dir / (std::string(cs.name) + ".log");
        std::string cmd = std::string(URNSIM_PATH) + " check --config " + cfg.string() +
                          " --out " + (dir / cs.name).string() + " >" + log.string() + " 2>&1";
        int rc = std::system(cmd.c_str());
        std::stringstream ss;
        ss << std::ifstream(log).rdbuf();
        bool named = ss.str().find(cs.condition) != std::string::npos;
        if (WEXITSTATUS(rc) != 1 || !named) ok = false;
        seen += std::string(cs.condition) + (named ? "+" : "-");
        seen += " ";
    }
    fs::remove_all(dir);
    detail = "exit codes and named conditions: " + seen;
    return ok;
}

struct Criterion {
    int id;
    const char* name;
    bool (*fn)(std::string&);
};

const Criterion kCriteria[] = {
    {1, "equilibrium closed forms", crit_equilibrium},
    {2, "recursion vs exhaustive enumeration", crit_oracle_equivalence},
    {3, "monte carlo vs exact tails", crit_mc_exact},
    {4, "exponential tail decay", crit_exponential_decay},
    {5, "per-step bound audit and constant stability", crit_bound_audit},
    {6, "martingale-sum tail bound domination", crit_lemma_bound},
    {7, "one-step bound and band inclusions", crit_step_bound},
    {8, "drift-strength regime separation", crit_regime_separation},
    {9, "urn as stochastic approximation", crit_urn_sa_consistency},
    {10, "negative validation via the cli", crit_negative_validation},
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
    int failures = 0;
    for (const auto& c : kCriteria) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), c.id) == selected.end())
            continue;
        std::string detail;
        bool ok = false;
        try {
            ok = c.fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", c.id, c.name,
                    detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
