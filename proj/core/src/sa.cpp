#include "urnkit/sa.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

namespace urnkit {

namespace {

class SyntheticDynamics final : public SADynamics {
public:
    SyntheticDynamics(std::function<double(double)> g, double u_gamma, double k_u,
                      std::uint64_t seed, std::uint64_t stream)
        : g_(std::move(g)), u_gamma_(u_gamma), k_u_(k_u), rng_(seed, stream) {}

    SAStepRecord advance(std::uint64_t n, double x) override {
        SAStepRecord rec;
        rec.gamma = u_gamma_ / static_cast<double>(n + 1);
        rec.u = k_u_ * rng_.next_symmetric();
        rec.x_next = x + rec.gamma * (g_(x) + rec.u);
        rec.has_cond_mean = true;  // i.i.d. mean-zero noise
        rec.cond_mean_gamma_u = 0.0;
        return rec;
    }

private:
    std::function<double(double)> g_;
    double u_gamma_, k_u_;
    RandomStream rng_;
};

class UrnDynamics final : public SADynamics {
public:
    UrnDynamics(UrnConfig config, std::uint64_t seed, std::uint64_t stream)
        : config_(std::move(config)), state_(initial_state(config_)), rng_(seed, stream) {}

    SAStepRecord advance(std::uint64_t, double) override {
        auto stats = conditional_increment_stats(state_, config_.matrix, config_.skew);
        auto [next, step] = urn_step(state_, config_.matrix, config_.skew, rng_);
        SAStepRecord rec;
        rec.x_next = next.z;  // the urn proportion itself, bit-identical to simulate_path
        rec.gamma = step.gamma;
        rec.u = step.delta_m;
        rec.has_cond_mean = true;
        rec.cond_mean_gamma_u = stats.cond_mean_dm_over_t;
        state_ = next;
        return rec;
    }

private:
    UrnConfig config_;
    UrnState state_;
    RandomStream rng_;
};

}  // namespace

SAProblem make_synthetic_problem(std::function<double(double)> g, double u_gamma, double k_u,
                                 double x0, bool bounded) {
    SAProblem p;
    p.g = g;
    p.x0 = x0;
    p.bounded = bounded;
    p.u_l = u_gamma;
    p.u_u = u_gamma;
    p.k_u = k_u;
    p.k_e = 0.0;
    p.make_dynamics = [g, u_gamma, k_u](std::uint64_t seed, std::uint64_t stream) {
        return std::make_unique<SyntheticDynamics>(g, u_gamma, k_u, seed, stream);
    };
    return p;
}

SAProblem urn_as_sa(const UrnConfig& config, double khat) {
    SAProblem p;
    p.g =[m = config.matrix, skew = config.skew](double y) {
        double fy = skew_eval(skew, y);
        double fc = skew_eval(skew, 1.0 - y);
        return ((m.h11 - y * m.h1()) * fy + (m.h12 - y * m.h2()) * fc) / (fy + fc);
    };
    double t0 = config.y1_0 + config.y2_0;
    p.x0 = config.y1_0 / t0;
    p.bounded = true;
    p.u_l = 1.0 / (t0 + config.matrix.hmax());
    p.u_u = 1.0 / config.matrix.hmin();
    p.k_g = 2.0 * (config.matrix.h1() + config.matrix.h2());
    p.k_u = 4.0 * (config.matrix.h1() + config.matrix.h2());
    p.k_e = khat / (config.matrix.hmin() * config.matrix.hmin());
    p.make_dynamics = [config](std::uint64_t seed, std::uint64_t stream) {
        return std::make_unique<UrnDynamics>(config, seed, stream);
    };
    return p;
}

SATrajectory run_sa(const SAProblem& problem, std::uint64_t n, std::uint64_t seed,
                    std::uint64_t stream) {
    if (n < 1) throw std::invalid_argument("run_sa needs n >= 1");
    if (n > problem.step_cap) throw std::length_error("run_sa: n exceeds step cap");
    SATrajectory traj;
    traj.seed = seed;
    traj.states.reserve(n + 1);
    traj.steps.reserve(n);
    traj.states.push_back(problem.x0);
    auto dyn = problem.make_dynamics(seed, stream);
    for (std::uint64_t i = 0; i < n; ++i) {
        SAStepRecord rec = dyn->advance(i, traj.states.back());
        if (problem.bounded && !(rec.x_next >= 0.0 && rec.x_next <= 1.0))
            throw std::range_error("bounded SA recursion left [0,1]");
        traj.states.push_back(rec.x_next);
        traj.steps.push_back(rec);
    }
    return traj;
}

bool SAAuditReport::all_pass() const {
    for (const auto& c : checks)
        if (c.auditable && !c.pass) return false;
    return true;
}

const SAConditionCheck* SAAuditReport::find(const std::string& id) const {
    for (const auto& c : checks)
        if (c.id == id) return &c;
    return nullptr;
}

SAAuditReport condition_audit(const SAProblem& problem, const SATrajectory& trajectory) {
    SAConditionCheck c1{"sa-1", true, true, 0, 0, 0};
    SAConditionCheck c2{"sa-2", true, true, 0, 0, 0};
    SAConditionCheck c3{"sa-3", true, true, 0, 0, 0};
    SAConditionCheck c4{"sa-4", true, true, 0, 0, 0};

    // sa-2: |g| <= K_g on [0,1], grid evaluation
    for (int i = 0; i <= 4096; ++i) {
        double x = static_cast<double>(i) / 4096;
        double v = std::abs(problem.g(x));
        if (v > c2.implied_constant) c2.implied_constant = v;
    }
    c2.worst_value = problem.k_g > 0 ? c2.implied_constant / problem.k_g : 0;
    c2.pass = c2.implied_constant <= problem.k_g + 1e-12;
    if (!(problem.k_g > 0)) c2.auditable = false;  // unbounded-case problems do not declare K_g

    bool any_cond_mean = false;
    for (std::uint64_t i = 0; i < trajectory.steps.size(); ++i) {
        const auto& rec = trajectory.steps[i];
        double np = static_cast<double>(i + 1);  // gamma produced at this step is gamma_{i+1}

        double g_scaled = rec.gamma * np;  // must lie in [u_l, u_u]
        if (g_scaled < problem.u_l - 1e-12 || g_scaled > problem.u_u + 1e-12) {
            if (c1.pass) c1.worst_step = i;
            c1.pass = false;
        }
        c1.implied_constant = std::max(c1.implied_constant, g_scaled);
        c1.worst_value = std::max(c1.worst_value, g_scaled / problem.u_u);

        double au = std::abs(rec.u);
        if (au > c3.implied_constant) {
            c3.implied_constant = au;
            c3.worst_step = i;
        }
        if (au > problem.k_u + 1e-12) c3.pass = false;
        c3.worst_value = std::max(c3.worst_value, au / problem.k_u);

        if (rec.has_cond_mean && i >= 1) {
            any_cond_mean = true;
            double scaled = std::abs(rec.cond_mean_gamma_u) * static_cast<double>(i) *
                            static_cast<double>(i);
            if (scaled > c4.implied_constant) {
                c4.implied_constant = scaled;
                c4.worst_step = i;
            }
            if (scaled > problem.k_e + 1e-12) c4.pass = false;
        }
    }
    c4.auditable = any_cond_mean;
    c4.worst_value = problem.k_e > 0 ? c4.implied_constant / problem.k_e : 0;

    SAAuditReport rep;
    rep.checks = {c1, c2, c3, c4};
    return rep;
}

namespace {

ShapeFit fit_shapes(const std::vector<TailEstimate>& pts) {
    ShapeFit fit;
    std::vector<std::pair<double, double>> exp_pts, str_pts;
    for (const auto& e : pts) {
        if (e.p_hat <= 0.0 || e.p_hat >= 1.0) continue;
        double lp = std::log(e.p_hat);
        exp_pts.emplace_back(static_cast<double>(e.n), lp);
        if (lp < 0) str_pts.emplace_back(std::log(static_cast<double>(e.n)), std::log(-lp));
    }
    auto r2 = [](const std::vector<std::pair<double, double>>& p) {
        if (p.size() < 3) return -1.0;
        double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0, m = static_cast<double>(p.size());
        for (auto [x, y] : p) {
            sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
        }
        double sxx_c = sxx - sx * sx / m, sxy_c = sxy - sx * sy / m, syy_c = syy - sy * sy / m;
        if (syy_c <= 0 || sxx_c <= 0) return 1.0;
        return (sxy_c * sxy_c) / (sxx_c * syy_c);
    };
    fit.usable_points = exp_pts.size();
    fit.exp_r2 = r2(exp_pts);
    fit.stretched_r2 = r2(str_pts);
    if (fit.exp_r2 < 0 && fit.stretched_r2 < 0)
        fit.better = "indeterminate";
    else
        fit.better = fit.exp_r2 >= fit.stretched_r2 ? "exponential" : "stretched";
    return fit;
}

}  // namespace

TailExperimentResult tail_experiment(const SAProblem& problem, double x_star,
                                     const std::vector<std::uint64_t>& n_grid, double eps,
                                     std::uint64_t trials, std::uint64_t seed, int threads) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (n_grid.empty()) throw std::invalid_argument("n_grid must be non-empty");
    std::vector<std::uint64_t> grid = n_grid;
    std::sort(grid.begin(), grid.end());
    std::uint64_t n_max = grid.back();
    if (n_max > problem.step_cap) throw std::length_error("tail_experiment: n exceeds step cap");

    auto worker = [&](std::uint64_t first, std::uint64_t last) {
        std::vector<std::uint64_t> up(grid.size(), 0), lo(grid.size(), 0);
        for (std::uint64_t trial = first; trial < last; ++trial) {
            auto dyn = problem.make_dynamics(seed, trial);
            double x = problem.x0;
            std::size_t gi = 0;
            for (std::uint64_t i = 0; i < n_max && gi < grid.size(); ++i) {
                x = dyn->advance(i, x).x_next;
                if (problem.bounded && !(x >= 0.0 && x <= 1.0))
                    throw std::range_error("bounded SA recursion left [0,1]");
                while (gi < grid.size() && i + 1 == grid[gi]) {
                    if (x - x_star > eps) ++up[gi];
                    if (x - x_star < -eps) ++lo[gi];
                    ++gi;
                }
            }
        }
        return std::make_pair(up, lo);
    };

    std::vector<std::uint64_t> up(grid.size(), 0), lo(grid.size(), 0);
    if (threads <= 1) {
        std::tie(up, lo) = worker(0, trials);
    } else {
        std::vector<std::future<std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>>>
            parts;
        std::uint64_t chunk = (trials + threads - 1) / threads;
        for (std::uint64_t first = 0; first < trials; first += chunk)
            parts.push_back(
                std::async(std::launch::async, worker, first, std::min(first + chunk, trials)));
        for (auto& p : parts) {
            auto [u, l] = p.get();
            for (std::size_t i = 0; i < grid.size(); ++i) {
                up[i] += u[i];
                lo[i] += l[i];
            }
        }
    }

    constexpr double z99 = 2.5758293035489004;
    TailExperimentResult res;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (auto [hits, out] : {std::pair{up[i], &res.upper}, std::pair{lo[i], &res.lower}}) {
            TailEstimate e;
            e.n = grid[i];
            e.eps = eps;
            e.trials = trials;
            e.hits = hits;
            e.p_hat = static_cast<double>(hits) / static_cast<double>(trials);
            e.ci_half_width = z99 * std::sqrt(e.p_hat * (1.0 - e.p_hat) / trials);
            out->push_back(e);
        }
    }
    res.upper_fit = fit_shapes(res.upper);
    res.lower_fit = fit_shapes(res.lower);
    auto regime = [&](double k_side) {
        if (!(k_side > 0)) return std::string("undeclared");
        return k_side > problem.k_u ? std::string("exponential")
                                    : std::string("stretched(K/K_u - delta)");
    };
    res.predicted_upper = regime(problem.k_gl);
    res.predicted_lower = regime(problem.k_gu);
    return res;
}

}  // namespace urnkit
