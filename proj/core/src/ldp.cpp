#include "urnkit/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

#include "urnkit/drift.hpp"

namespace urnkit {

namespace {

constexpr double kZ99 = 2.5758293035489004;  // 99% two-sided normal quantile

std::uint64_t count_hits_range(const UrnConfig& config, double y_star, std::uint64_t n,
                               double eps, std::uint64_t seed, std::uint64_t first,
                               std::uint64_t last) {
    std::uint64_t hits = 0;
    for (std::uint64_t trial = first; trial < last; ++trial) {
        UrnState s = initial_state(config);
        RandomStream rng(seed, trial);
        for (std::uint64_t i = 0; i < n; ++i)
            s = urn_step(s, config.matrix, config.skew, rng).first;
        if (std::abs(s.z - y_star) > eps) ++hits;
    }
    return hits;
}

template <typename Fn>
std::uint64_t fan_out(std::uint64_t trials, int threads, Fn&& worker) {
    if (threads <= 1) return worker(0, trials);
    std::vector<std::future<std::uint64_t>> parts;
    std::uint64_t chunk = (trials + threads - 1) / threads;
    for (std::uint64_t first = 0; first < trials; first += chunk) {
        std::uint64_t last = std::min(first + chunk, trials);
        parts.push_back(std::async(std::launch::async, worker, first, last));
    }
    std::uint64_t total = 0;
    for (auto& p : parts) total += p.get();
    return total;
}

}  // namespace

TailEstimate mc_tail_estimate(const UrnConfig& config, double y_star, std::uint64_t n, double eps,
                              std::uint64_t trials, std::uint64_t seed, int threads) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
    if (n > config.step_cap || trials * n > 64 * config.step_cap)
        throw std::length_error("mc_tail_estimate: work exceeds step cap");

    TailEstimate est;
    est.n = n;
    est.eps = eps;
    est.trials = trials;
    est.hits = fan_out(trials, threads, [&](std::uint64_t a, std::uint64_t b) {
        return count_hits_range(config, y_star, n, eps, seed, a, b);
    });
    est.p_hat = static_cast<double>(est.hits) / static_cast<double>(trials);
    est.ci_half_width = kZ99 * std::sqrt(est.p_hat * (1.0 - est.p_hat) / trials);
    est.provenance = TailProvenance::MonteCarlo;
    return est;
}

TailEstimate exact_tail_estimate(const UrnConfig& config, double y_star, std::uint64_t n,
                                 double eps) {
    TailEstimate est;
    est.n = n;
    est.eps = eps;
    est.trials = 0;
    est.hits = 0;
    est.p_hat = exact_tail_probability(config, n, eps, y_star);
    est.ci_half_width = 0;
    est.provenance = TailProvenance::Exact;
    return est;
}

RateFit rate_fit(const std::vector<TailEstimate>& estimates) {
    std::vector<std::pair<double, double>> pts;  // (n, log p)
    std::size_t zeros = 0;
    for (const auto& e : estimates) {
        double p = e.p_hat;
        if (p <= 0.0) {
            ++zeros;
            // rule-of-three surrogate for zero-hit Monte Carlo estimates
            if (e.provenance == TailProvenance::MonteCarlo && e.trials > 0)
                pts.emplace_back(static_cast<double>(e.n), std::log(3.0 / e.trials));
            continue;
        }
        pts.emplace_back(static_cast<double>(e.n), std::log(p));
    }
    if (pts.size() < 3) throw std::invalid_argument("rate_fit needs >= 3 points with p > 0");

    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    double m = static_cast<double>(pts.size());
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    double sxx_c = sxx - sx * sx / m;
    double sxy_c = sxy - sx * sy / m;
    double syy_c = syy - sy * sy / m;
    double slope = sxy_c / sxx_c;

    RateFit fit;
    fit.a_hat = -slope;
    fit.log_c_hat = (sy - slope * sx) / m;
    fit.r_squared = syy_c > 0 ? (sxy_c * sxy_c) / (sxx_c * syy_c) : 1.0;
    fit.points_used = pts.size();
    fit.points_zero = zeros;
    return fit;
}

double lemma31_bound(const Lemma31Params& params) {
    if (!(params.beta > 1.0)) throw std::invalid_argument("beta must exceed 1");
    if (params.k == 0 || params.k > params.n) throw std::invalid_argument("need 0 < k <= n");
    const auto& m = params.matrix;
    double A = 4.0 * (m.h1() + m.h2());
    double B = 2.0 * m.hmin();

    double eps_max = 4.0 * params.beta * (m.h1() + m.h2()) * (m.h1() + m.h2()) / m.hmin() *
                     std::log(params.beta);
    if (!(params.eps > 0) || params.eps > eps_max) return 2.0;

    double s = 0.0;
    for (std::uint64_t i = params.n; i >= params.k; --i)
        s += 1.0 / (static_cast<double>(i) * static_cast<double>(i));

    double numer = params.eps - params.big_k / (B * B) * s;
    if (numer <= 0.0) return 2.0;
    double denom = 2.0 * params.beta * A * A / (B * B) * s;
    return 2.0 * std::exp(-numer * numer / denom);
}

namespace {

double cond_mean_abs_t2(const UrnConfig& config, const UrnState& s) {
    auto st = conditional_increment_stats(s, config.matrix, config.skew);
    return std::abs(st.cond_mean_dm_over_t) * s.t * s.t;
}

}  // namespace

double fit_khat_statespace(const UrnConfig& config, std::uint64_t horizon) {
    double sup = 0.0;
    for (std::uint64_t m = 0; m <= horizon; ++m)
        for (std::uint64_t k = 0; k <= m; ++k)
            sup = std::max(sup, cond_mean_abs_t2(config, state_at(config, m, k)));
    return sup;
}

double fit_khat_path(const UrnConfig& config, std::uint64_t n, std::uint64_t seed,
                     std::uint64_t stream) {
    double sup = 0.0;
    UrnState s = initial_state(config);
    RandomStream rng(seed, stream);
    for (std::uint64_t i = 0; i < n; ++i) {
        sup = std::max(sup, cond_mean_abs_t2(config, s));
        s = urn_step(s, config.matrix, config.skew, rng).first;
    }
    return sup;
}

bool BoundReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass && !c.informational) return false;
    return true;
}

const BoundCheck* BoundReport::find(const std::string& id) const {
    for (const auto& c : checks)
        if (c.id == id) return &c;
    return nullptr;
}

BoundReport bound_verification(const UrnConfig& config, std::uint64_t n, std::uint64_t paths,
                               std::uint64_t seed) {
    if (paths < 1) throw std::invalid_argument("paths must be >= 1");
    const auto& H = config.matrix;
    double hsum = H.h1() + H.h2();
    double hmin = H.hmin(), hmax = H.hmax();
    DriftProfile profile{H, config.skew};

    BoundCheck dm{"dm_bound", "|dM| <= 4(H1+H2)", true, false, 0, 0, 0};
    BoundCheck hb{"h_bound", "|h(Z)| <= 2(H1+H2)", true, false, 0, 0, 0};
    BoundCheck env{"t_envelope", "n*min <= T_n - T_0 <= n*max", true, false, 0, 0, 0};
    BoundCheck lit{"t_literal", "1/(2n*max) <= 1/T_n <= 1/(2n*min)", true, true, 0, 0, 0};
    BoundCheck stp{"step_bound", "|Z_{k+1}-Z_k| <= 3(H1+H2)/((k+1)*min)", true, false, 0, 0, 0};
    double khat = 0.0;

    for (std::uint64_t path_idx = 0; path_idx < paths; ++path_idx) {
        UrnState s = initial_state(config);
        double t0 = s.t;
        RandomStream rng(seed, path_idx);
        for (std::uint64_t i = 0; i < n; ++i) {
            khat = std::max(khat, cond_mean_abs_t2(config, s));
            double h = drift_eval(profile, s.z);
            if (std::abs(h) > hb.worst_value) {
                hb.worst_value = std::abs(h);
                hb.worst_step = i;
            }
            if (std::abs(h) > 2.0 * hsum + 1e-12) {
                hb.pass = false;
                ++hb.violations;
            }

            auto [next, rec] = urn_step(s, config.matrix, config.skew, rng);

            if (std::abs(rec.delta_m) > dm.worst_value) {
                dm.worst_value = std::abs(rec.delta_m);
                dm.worst_step = i;
            }
            if (std::abs(rec.delta_m) > 4.0 * hsum + 1e-12) {
                dm.pass = false;
                ++dm.violations;
            }

            double steps_done = static_cast<double>(i + 1);
            double growth = next.t - t0;
            if (growth < steps_done * hmin - 1e-9 || growth > steps_done * hmax + 1e-9) {
                env.pass = false;
                ++env.violations;
                env.worst_value = growth / steps_done;
                env.worst_step = i;
            }

            double inv_t = 1.0 / next.t;
            if (inv_t < 1.0 / (2.0 * steps_done * hmax) - 1e-15 ||
                inv_t > 1.0 / (2.0 * steps_done * hmin) + 1e-15) {
                if (lit.pass) {
                    lit.worst_value = inv_t * 2.0 * steps_done * hmin;
                    lit.worst_step = i;
                }
                lit.pass = false;
                ++lit.violations;
            }

            double dz = std::abs(next.z - s.z);
            double cap = 3.0 * hsum / (steps_done * hmin);
            if (dz / cap > stp.worst_value) {
                stp.worst_value = dz / cap;
                stp.worst_step = i;
            }
            if (dz > cap + 1e-12) {
                stp.pass = false;
                ++stp.violations;
            }
            s = next;
        }
    }

    BoundReport rep;
    rep.khat = khat;
    rep.checks = {dm, hb, env, lit, stp};
    rep.checks.push_back({"cond_mean", "sup |E[dM/T]| * T^2 (fitted K)", std::isfinite(khat),
                          false, khat, 0, 0});
    return rep;
}

double martingale_sum_exceedance(const UrnConfig& config, std::uint64_t k, std::uint64_t n,
                                 double eps, std::uint64_t paths, std::uint64_t seed,
                                 int threads) {
    if (k == 0 || k > n) throw std::invalid_argument("need 0 < k <= n");
    std::uint64_t hits = fan_out(paths, threads, [&](std::uint64_t a, std::uint64_t b) {
        std::uint64_t local = 0;
        for (std::uint64_t path_idx = a; path_idx < b; ++path_idx) {
            UrnState s = initial_state(config);
            RandomStream rng(seed, path_idx);
            double sum = 0.0;
            // iteration i advances state i -> i+1 and yields dM_{i+1}/T_{i+1};
            // the bound sums those terms for i = k..n
            for (std::uint64_t i = 0; i <= n; ++i) {
                auto [next, rec] = urn_step(s, config.matrix, config.skew, rng);
                if (i >= k) sum += rec.delta_m * rec.gamma;
                s = next;
            }
            if (std::abs(sum) >= eps) ++local;
        }
        return local;
    });
    return static_cast<double>(hits) / static_cast<double>(paths);
}

}  // namespace urnkit
