// urnsim: command-line driver for the urn / stochastic-approximation toolkit.
// Subcommands: check, equilibrium, simulate, exact, ldp, sa, bounds.
// Every stochastic output is a pure function of the resolved run manifest.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "urnkit/config.hpp"
#include "urnkit/drift.hpp"
#include "urnkit/exact.hpp"
#include "urnkit/ldp.hpp"
#include "urnkit/model.hpp"
#include "urnkit/sa.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace urnkit;

namespace {

constexpr const char* kToolVersion = "urnsim 0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResourceCap = 3;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct OutputWriter {
    fs::path dir;
    std::string format = "csv";
    std::vector<fs::path> written;
    bool committed = false;

    OutputWriter() = default;
    OutputWriter(OutputWriter&&) = default;
    OutputWriter& operator=(OutputWriter&&) = default;
    OutputWriter(const OutputWriter&) = delete;
    OutputWriter& operator=(const OutputWriter&) = delete;
    // partial outputs are removed when a command aborts before committing
    ~OutputWriter() {
        if (!committed) remove_partial();
    }

    void write_table(const std::string& name, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
        if (format == "json") {
            json arr = json::array();
            for (const auto& row : rows) {
                json obj;
                for (std::size_t i = 0; i < header.size(); ++i) obj[header[i]] = row[i];
                arr.push_back(obj);
            }
            write_text(name + ".json", arr.dump(2) + "\n");
            return;
        }
        std::ostringstream out;
        for (std::size_t i = 0; i < header.size(); ++i)
            out << header[i] << (i + 1 < header.size() ? "," : "\n");
        for (const auto& row : rows)
            for (std::size_t i = 0; i < row.size(); ++i)
                out << row[i] << (i + 1 < row.size() ? "," : "\n");
        write_text(name + ".csv", out.str());
    }

    void write_json(const std::string& name, const json& j) {
        write_text(name + ".json", j.dump(2) + "\n");
    }

    void write_text(const std::string& filename, const std::string& content) {
        fs::create_directories(dir);
        fs::path p = dir / filename;
        std::ofstream out(p, std::ios::binary);
        out << content;
        if (!out) throw std::runtime_error("cannot write " + p.string());
        written.push_back(p);
    }

    void remove_partial() {
        for (const auto& p : written) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }
};

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 1;
    std::string format = "csv";
    bool allow_invalid = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_config = true) {
    auto* c = cmd->add_option("--config", opts.config_path, "experiment config file");
    if (needs_config) c->required();
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "64-bit unsigned seed")->each([&](const std::string&) {
        opts.seed_set = true;
    });
    cmd->add_option("--threads", opts.threads, "worker threads for trial fan-out");
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("--allow-invalid", opts.allow_invalid,
                  "run even when validation fails (negative testing)");
}

struct Run {
    ExperimentConfig cfg;
    UrnConfig urn;
    OutputWriter out;
    std::uint64_t seed = 0;
    int threads = 1;
};

Run make_run(const CommonOpts& opts, bool needs_seed) {
    Run run;
    run.cfg = ExperimentConfig::parse_file(opts.config_path);
    run.urn = run.cfg.urn_config();
    run.out.dir = opts.out_dir;
    run.out.format = opts.format;
    run.threads = opts.threads;
    if (opts.seed_set)
        run.seed = opts.seed;
    else if (run.cfg.has("analysis.seed"))
        run.seed = run.cfg.get_u64("analysis.seed");
    else if (needs_seed)
        throw std::invalid_argument("stochastic subcommands need --seed or analysis.seed");
    return run;
}

json manifest_json(const Run& run, const std::string& subcommand) {
    json m;
    m["tool"] = kToolVersion;
    m["subcommand"] = subcommand;
    m["seed"] = run.seed;
    json resolved;
    for (const auto& [k, v] : run.cfg.entries()) resolved[k] = v;
    m["config"] = resolved;
    return m;
}

int require_valid(const Run& run, bool allow_invalid) {
    auto report = validate_config(run.urn);
    bool ok = true;
    for (const auto& c : report.checks)
        if (c.id != "Z0_interior" && !c.pass) ok = false;
    if (!ok && !allow_invalid) {
        std::cerr << "configuration fails validation (use `check` for details, or "
                     "--allow-invalid)\n";
        return kExitCheckFailure;
    }
    return kExitOk;
}

double solve_ystar(const Run& run) {
    DriftProfile profile{run.urn.matrix, run.urn.skew};
    double tol = run.cfg.get_double("analysis.tol", 1e-12);
    auto rep = equilibrium_solve(profile, tol);
    if (!rep.unique) throw std::runtime_error("drift has no unique equilibrium");
    return rep.y_star;
}

int cmd_check(const CommonOpts& opts) {
    Run run = make_run(opts, false);
    auto report = validate_config(run.urn);

    json out;
    bool all_ok = true;
    json conds = json::array();
    for (const auto& c : report.checks) {
        conds.push_back({{"id", c.id}, {"pass", c.pass}, {"detail", c.detail}});
        if (c.id != "Z0_interior" && !c.pass) all_ok = false;
    }
    out["conditions"] = conds;

    bool structural_ok = all_ok;
    if (structural_ok) {
        DriftProfile profile{run.urn.matrix, run.urn.skew};
        auto mono = monotonicity_check(profile);
        out["monotonicity"] = {{"pass", mono.pass},
                               {"worst_increase", mono.worst_increase},
                               {"note", mono.note}};
        if (!mono.pass) all_ok = false;

        bool remark_supported = run.urn.skew.family == SkewSpec::Family::Identity ||
                                (run.urn.skew.family == SkewSpec::Family::Power &&
                                 run.urn.skew.power == 2.0);
        if (remark_supported) {
            auto rc = remark_condition_checks(run.urn.matrix, run.urn.skew);
            json r = {{"family", rc.skew_family},
                      {"ratio_ordered", rc.ratio_ordered},
                      {"concavity_needed", rc.concavity_needed},
                      {"concave_declared", rc.concave_declared},
                      {"pass", rc.applicable_pass}};
            if (rc.skew_family == "identity") {
                r["h22_le_h11_plus_2h21"] = rc.lin_h22_le;
                r["h11_le_h22_plus_2h12"] = rc.lin_h11_le;
            } else {
                r["y0"] = rc.y0;
                r["case"] = rc.case_id;
                r["case_condition"] = rc.case_condition;
                r["discussion1"] = rc.discussion1;
            }
            out["remark_conditions"] = r;
            if (!rc.applicable_pass) all_ok = false;
            if (rc.concavity_needed && !rc.concave_declared) all_ok = false;
        }
    }
    out["pass"] = all_ok;

    run.out.write_json("check", out);
    run.out.write_json("manifest", manifest_json(run, "check"));
    run.out.committed = true;
    std::cout << (all_ok ? "check: pass" : "check: fail") << "\n";
    for (const auto& c : report.checks)
        if (!c.pass) std::cout << "  failed " << c.id << ": " << c.detail << "\n";
    return all_ok ? kExitOk : kExitCheckFailure;
}

int cmd_equilibrium(const CommonOpts& opts) {
    Run run = make_run(opts, false);
    if (int rc = require_valid(run, opts.allow_invalid); rc != kExitOk) return rc;

    DriftProfile profile{run.urn.matrix, run.urn.skew};
    auto rep = equilibrium_solve(profile, run.cfg.get_double("analysis.tol", 1e-12));

    json out = {{"istar_lo", rep.istar_lo},
                {"istar_hi", rep.istar_hi},
                {"unique", rep.unique},
                {"monotone_nonincreasing", rep.monotone_nonincreasing},
                {"roots_found", rep.roots_found},
                {"note", rep.note}};
    if (rep.unique) {
        out["y_star"] = rep.y_star;
        out["h_prime_at_root"] = rep.h_prime_at_root;
        out["stable"] = rep.stable;
    }
    run.out.write_json("equilibrium", out);
    run.out.write_json("manifest", manifest_json(run, "equilibrium"));
    run.out.committed = true;
    if (!rep.unique) {
        std::cerr << "no unique equilibrium; roots:";
        for (double r : rep.roots_found) std::cerr << " " << fmt17(r);
        std::cerr << "\n";
        return kExitCheckFailure;
    }
    std::cout << "y_star = " << fmt17(rep.y_star) << "\n";
    return kExitOk;
}

int cmd_simulate(const CommonOpts& opts) {
    Run run = make_run(opts, true);
    if (int rc = require_valid(run, opts.allow_invalid); rc != kExitOk) return rc;

    std::uint64_t n = run.cfg.get_u64("analysis.n");
    std::uint64_t trials = run.cfg.get_u64("analysis.trials", 1);
    if (trials < 1) throw std::invalid_argument("analysis.trials must be >= 1");

    std::vector<std::vector<std::string>> rows;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        UrnPath path = simulate_path(run.urn, n, run.seed, trial);
        for (std::size_t i = 0; i < path.states.size(); ++i) {
            const auto& s = path.states[i];
            std::string outcome = "-", dm = "0";
            if (i > 0) {
                outcome = path.steps[i - 1].outcome == DrawOutcome::E1 ? "1" : "2";
                dm = fmt17(path.steps[i - 1].delta_m);
            }
            rows.push_back({std::to_string(trial), std::to_string(s.n), fmt17(s.y1), fmt17(s.y2),
                            fmt17(s.t), fmt17(s.z), outcome, dm});
        }
    }
    run.out.write_table("paths", {"trial", "step", "y1", "y2", "t", "z", "outcome", "delta_m"},
                        rows);
    run.out.write_json("manifest", manifest_json(run, "simulate"));
    run.out.committed = true;
    return kExitOk;
}

int cmd_exact(const CommonOpts& opts) {
    Run run = make_run(opts, false);
    if (int rc = require_valid(run, opts.allow_invalid); rc != kExitOk) return rc;

    std::uint64_t n = run.cfg.get_u64("analysis.n");
    std::uint64_t cap = run.cfg.get_u64("analysis.dp_cap", 20'000);
    auto dist = dp_distribution(run.urn, n, cap);

    std::vector<std::vector<std::string>> rows;
    for (const auto& a : dist.support)
        rows.push_back({std::to_string(n), std::to_string(a.k), fmt17(a.z), fmt17(a.probability)});
    run.out.write_table("exact", {"n", "k", "z", "probability"}, rows);

    auto [mean, var] = exact_moments(dist);
    json manifest = manifest_json(run, "exact");
    manifest["moments"] = {{"mean", mean}, {"variance", var}};
    run.out.write_json("manifest", manifest);
    run.out.committed = true;
    return kExitOk;
}

int cmd_ldp(const CommonOpts& opts) {
    Run run = make_run(opts, true);
    if (int rc = require_valid(run, opts.allow_invalid); rc != kExitOk) return rc;

    auto n_grid = run.cfg.get_u64_list("analysis.n_grid");
    double eps = run.cfg.get_double("analysis.eps");
    std::uint64_t trials = run.cfg.get_u64("analysis.trials", 100'000);
    if (trials < 1) throw std::invalid_argument("analysis.trials must be >= 1");
    std::string provenance = run.cfg.get_string("analysis.provenance", "mc");
    double y_star = solve_ystar(run);

    std::vector<TailEstimate> estimates;
    for (std::uint64_t n : n_grid) {
        if (provenance == "exact")
            estimates.push_back(exact_tail_estimate(run.urn, y_star, n, eps));
        else
            estimates.push_back(
                mc_tail_estimate(run.urn, y_star, n, eps, trials, run.seed, run.threads));
    }

    std::vector<std::vector<std::string>> rows;
    for (const auto& e : estimates)
        rows.push_back({std::to_string(e.n), fmt17(e.eps), std::to_string(e.trials),
                        std::to_string(e.hits), fmt17(e.p_hat), fmt17(e.ci_half_width),
                        e.provenance == TailProvenance::Exact ? "exact" : "mc"});
    run.out.write_table("tails", {"n", "eps", "trials", "hits", "p_hat", "ci99", "provenance"},
                        rows);

    try {
        RateFit fit = rate_fit(estimates);
        run.out.write_table(
            "ratefit", {"a_hat", "log_c_hat", "r_squared", "points_used", "points_zero"},
            {{fmt17(fit.a_hat), fmt17(fit.log_c_hat), fmt17(fit.r_squared),
              std::to_string(fit.points_used), std::to_string(fit.points_zero)}});
    } catch (const std::invalid_argument&) {
        run.out.write_table("ratefit",
                            {"a_hat", "log_c_hat", "r_squared", "points_used", "points_zero"},
                            {});
    }

    json manifest = manifest_json(run, "ldp");
    manifest["y_star"] = y_star;
    run.out.write_json("manifest", manifest);
    run.out.committed = true;
    return kExitOk;
}

int cmd_sa(const CommonOpts& opts) {
    Run run = make_run(opts, true);

    std::string mode = run.cfg.get_string("sa.mode", "urn");
    auto n_grid = run.cfg.get_u64_list("analysis.n_grid");
    double eps = run.cfg.get_double("analysis.eps");
    std::uint64_t trials = run.cfg.get_u64("analysis.trials", 10'000);
    if (trials < 1) throw std::invalid_argument("analysis.trials must be >= 1");

    SAProblem problem;
    double x_star = 0;
    if (mode == "urn") {
        if (int rc = require_valid(run, opts.allow_invalid); rc != kExitOk) return rc;
        std::uint64_t horizon = run.cfg.get_u64("sa.khat_horizon", 1'000);
        problem = urn_as_sa(run.urn, fit_khat_statespace(run.urn, horizon));
        x_star = solve_ystar(run);
    } else if (mode == "tanh") {
        // g(x) = -k_drift * tanh(x - x*): K_gl = K_gu = k_drift
        double k_drift = run.cfg.get_double("sa.k_drift");
        double k_u = run.cfg.get_double("sa.k_u", 1.0);
        x_star = run.cfg.get_double("sa.x_star", 0.0);
        problem = make_synthetic_problem(
            [k_drift, x_star](double x) { return -k_drift * std::tanh(x - x_star); },
            run.cfg.get_double("sa.u_gamma", 1.0), k_u, run.cfg.get_double("sa.x0", x_star),
            false);
        problem.k_gl = k_drift;
        problem.k_gu = k_drift;
    } else {
        throw std::invalid_argument("sa.mode must be urn or tanh");
    }

    auto res = tail_experiment(problem, x_star, n_grid, eps, trials, run.seed, run.threads);

    auto dump_side = [&](const std::string& name, const std::vector<TailEstimate>& side) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& e : side)
            rows.push_back({std::to_string(e.n), fmt17(e.eps), std::to_string(e.trials),
                            std::to_string(e.hits), fmt17(e.p_hat), fmt17(e.ci_half_width),
                            "mc"});
        run.out.write_table(name, {"n", "eps", "trials", "hits", "p_hat", "ci99", "provenance"},
                            rows);
    };
    dump_side("tails", res.upper);
    dump_side("tails_lower", res.lower);

    json summary = {{"predicted_upper", res.predicted_upper},
                    {"predicted_lower", res.predicted_lower},
                    {"upper_fit",
                     {{"exp_r2", res.upper_fit.exp_r2},
                      {"stretched_r2", res.upper_fit.stretched_r2},
                      {"better", res.upper_fit.better},
                      {"usable_points", res.upper_fit.usable_points}}},
                    {"lower_fit",
                     {{"exp_r2", res.lower_fit.exp_r2},
                      {"stretched_r2", res.lower_fit.stretched_r2},
                      {"better", res.lower_fit.better},
                      {"usable_points", res.lower_fit.usable_points}}}};
    run.out.write_json("regime", summary);

    json manifest = manifest_json(run, "sa");
    manifest["x_star"] = x_star;
    run.out.write_json("manifest", manifest);
    run.out.committed = true;
    return kExitOk;
}

int cmd_bounds(const CommonOpts& opts) {
    Run run = make_run(opts, true);
    if (int rc = require_valid(run, opts.allow_invalid); rc != kExitOk) return rc;

    std::uint64_t n = run.cfg.get_u64("analysis.n", 10'000);
    std::uint64_t paths = run.cfg.get_u64("analysis.paths", 1);
    auto report = bound_verification(run.urn, n, paths, run.seed);

    std::vector<std::vector<std::string>> rows;
    for (const auto& c : report.checks) {
        std::string status = c.pass ? "pass" : (c.informational ? "flagged" : "fail");
        rows.push_back(
            {c.id, c.description, status, fmt17(c.worst_value), std::to_string(c.worst_step)});
    }
    run.out.write_table("bounds", {"check_id", "description", "status", "worst_value",
                                   "worst_step"},
                        rows);

    json manifest = manifest_json(run, "bounds");
    manifest["khat"] = report.khat;
    run.out.write_json("manifest", manifest);
    run.out.committed = true;
    return report.all_pass() ? kExitOk : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonlinear unbalanced urn / stochastic approximation toolkit"};
    app.require_subcommand(1);

    CommonOpts opts;
    struct Sub {
        CLI::App* cmd;
        int (*fn)(const CommonOpts&);
    };
    std::vector<Sub> subs = {
        {app.add_subcommand("check", "validate conditions C1-C4, monotonicity, remark checks"),
         cmd_check},
        {app.add_subcommand("equilibrium", "I*, y*, stability"), cmd_equilibrium},
        {app.add_subcommand("simulate", "record simulated paths"), cmd_simulate},
        {app.add_subcommand("exact", "exact distribution of Z_n"), cmd_exact},
        {app.add_subcommand("ldp", "tail estimates and rate fit"), cmd_ldp},
        {app.add_subcommand("sa", "stochastic approximation tail experiment"), cmd_sa},
        {app.add_subcommand("bounds", "per-step bound audit"), cmd_bounds},
    };
    for (auto& s : subs) add_common(s.cmd, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        for (auto& s : subs)
            if (s.cmd->parsed()) return s.fn(opts);
        return kExitUsage;
    } catch (const std::length_error& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return kExitResourceCap;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailure;
    }
}
