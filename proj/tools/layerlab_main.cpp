// layerlab command-line driver: profile construction, full-system solves,
// expansion assembly, and the epsilon-sweep convergence report.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "layerlab/analysis.hpp"
#include "layerlab/config.hpp"
#include "layerlab/io.hpp"

namespace fs = std::filesystem;
using namespace layerlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::vector<double> eps_override;
    bool quiet = false;
};

RunConfig load_config(const CommonOpts& opts) {
    RunConfig cfg = parse_config(opts.config_path);
    if (!opts.out_dir.empty()) cfg.output_dir = opts.out_dir;
    if (!opts.eps_override.empty()) cfg.epsilon_list = opts.eps_override;
    return cfg;
}

void prepare_out_dir(const RunConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    write_file(cfg.output_dir + "/effective.cfg", cfg.echo());
}

int run_check(const RunConfig& cfg, bool quiet) {
    ModelParams params = cfg.to_model_params();
    IntervalGrid grid = make_interval_grid(512);
    InitialData data = build_initial_data(params.initial_data, params, grid);
    CompatibilityReport rep = check_compatibility(data, params.v_star, grid);

    static const char* names[] = {"v0=v_star", "u0=0", "third-order", "order-4", "order-5"};
    bool ok = rep.pass;
    for (std::size_t c = 0; c < CompatibilityReport::condition_count; ++c) {
        if (!quiet)
            std::printf("compatibility %-12s left=%-12.3e right=%-12.3e %s\n", names[c],
                        rep.residuals[c][0], rep.residuals[c][1],
                        rep.condition_pass[c] ? "pass" : "FAIL");
    }
    if (rep.stencil_warning && !quiet)
        std::printf("warning: grid too coarse for stable high-order endpoint stencils\n");

    // quick invariant battery on a coarse run
    SweepPlan plan = cfg.to_sweep_plan();
    plan.epsilons = {1.0 / 64};
    plan.n_profile = 256;
    plan.profile_steps = 200;
    plan.m_layer = 256;
    plan.layer_substeps = 2;
    plan.output_times = {cfg.horizon / 2.0, cfg.horizon};
    ConvergenceReport quick = run_sweep(plan);
    for (const auto& b : quick.battery) {
        if (!quiet)
            std::printf("battery %-32s residual=%-12.3e threshold=%-10.1e %s\n", b.name.c_str(),
                        b.residual, b.threshold, b.pass ? "pass" : "FAIL");
        ok = ok && b.pass;
    }
    return ok ? kExitOk : kExitInvariant;
}

int run_sweep_cmd(const RunConfig& cfg, bool quiet) {
    prepare_out_dir(cfg);
    SweepPlan plan = cfg.to_sweep_plan();
    ConvergenceReport report = run_sweep(plan);

    write_file(cfg.output_dir + "/report.csv", report_csv(report));
    write_file(cfg.output_dir + "/report.json", report_json(report));

    if (!quiet) {
        for (const auto& w : report.warnings) std::printf("warning: %s\n", w.c_str());
        if (report.fit_Ev.valid)
            std::printf("slope(E_v) = %.4f (R^2 %.4f)\n", report.fit_Ev.slope,
                        report.fit_Ev.r_squared);
        else
            std::printf("slope(E_v) absent: %s\n", report.fit_Ev.note.c_str());
        if (report.fit_Eu.valid)
            std::printf("slope(E_u) = %.4f (R^2 %.4f)\n", report.fit_Eu.slope,
                        report.fit_Eu.r_squared);
        if (report.fit_thickness_left.valid)
            std::printf("thickness exponents: left %.4f right %.4f\n",
                        report.fit_thickness_left.slope, report.fit_thickness_right.slope);
        std::printf("battery: %s\n", report.battery_pass() ? "pass" : "FAIL");
        std::printf("report written to %s\n", cfg.output_dir.c_str());
    }
    return report.battery_pass() ? kExitOk : kExitInvariant;
}

int run_solve_full(const RunConfig& cfg, bool quiet) {
    prepare_out_dir(cfg);
    SweepPlan plan = cfg.to_sweep_plan();
    for (double eps : cfg.epsilon_list) {
        if (eps <= 0.0) {
            std::fprintf(stderr,
                         "solve-full needs eps > 0; use solve-outer for the eps = 0 problem\n");
            return kExitConfig;
        }
        const std::size_t n = plan.resolve_n(eps);
        if (n == 0) {
            std::fprintf(stderr, "epsilon %g needs more than the grid cap; skipped\n", eps);
            continue;
        }
        ModelParams params = cfg.to_model_params();
        params.epsilon = eps;
        IntervalGrid grid = make_interval_grid(n);
        InitialData data = build_initial_data(params.initial_data, params, grid);
        FullSolveResult res = solve_full(params, grid, data, plan.full_stepper,
                                         plan.output_times, plan.hard_resolution_guard);
        char name[64];
        std::snprintf(name, sizeof name, "/trajectory_eps_%g.txt", eps);
        write_file(cfg.output_dir + name, columnar_trajectory(res.snapshots, grid));
        if (!quiet)
            std::printf("eps=%-10g n=%-6zu dt=%-12.4e mass_drift=%.3e\n", eps, n, res.dt,
                        res.mass_drift_rel);
    }
    return kExitOk;
}

int run_solve_outer(const RunConfig& cfg, bool quiet) {
    prepare_out_dir(cfg);
    SweepPlan plan = cfg.to_sweep_plan();
    ProfileSet profiles = build_profiles(plan);
    write_file(cfg.output_dir + "/outer_profiles.txt", columnar_outer(profiles.outer));
    if (!quiet)
        std::printf("outer profiles written; exp-identity residual %.3e\n",
                    profiles.outer.exp_identity_residual());
    return kExitOk;
}

int run_solve_layers(const RunConfig& cfg, bool quiet) {
    prepare_out_dir(cfg);
    SweepPlan plan = cfg.to_sweep_plan();
    ProfileSet profiles = build_profiles(plan);
    write_file(cfg.output_dir + "/layer_left.txt", columnar_layer(profiles.left));
    write_file(cfg.output_dir + "/layer_right.txt", columnar_layer(profiles.right));
    if (!quiet)
        std::printf("layer profiles written; left bracket [%.3e, %.3e]\n",
                    profiles.left.v0_min_seen(), profiles.left.v0_max_seen());
    return kExitOk;
}

int run_assemble(const RunConfig& cfg, bool quiet) {
    prepare_out_dir(cfg);
    SweepPlan plan = cfg.to_sweep_plan();
    ProfileSet profiles = build_profiles(plan);
    for (double eps : cfg.epsilon_list) {
        const std::size_t n = plan.resolve_n(eps);
        if (n == 0) continue;
        IntervalGrid grid = make_interval_grid(n);
        CorrectorPair correctors = build_correctors(profiles.left, profiles.right, eps);
        Assembly as = assemble(AssemblyOrder::full, profiles.outer, profiles.left,
                               profiles.right, &correctors, eps, grid);
        char name[64];
        std::snprintf(name, sizeof name, "/assembly_eps_%g.txt", eps);
        write_file(cfg.output_dir + name, columnar_assembly(as, grid));
        if (!quiet) std::printf("assembly eps=%g written (n=%zu)\n", eps, n);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"layerlab: chemotaxis boundary-layer expansion laboratory"};
    app.require_subcommand(1);

    CommonOpts opts;
    for (auto* sub : {app.add_subcommand("check", "compatibility report and invariant battery"),
                      app.add_subcommand("solve-full", "integrate the eps > 0 system"),
                      app.add_subcommand("solve-outer", "outer profiles (eps = 0 hierarchy)"),
                      app.add_subcommand("solve-layers", "half-line boundary-layer profiles"),
                      app.add_subcommand("assemble", "corrector-homogenized approximation"),
                      app.add_subcommand("sweep", "epsilon sweep with convergence report")}) {
        sub->add_option("--config", opts.config_path, "config file (section.key = value)");
        sub->add_option("--out", opts.out_dir, "output directory");
        sub->add_option("--eps", opts.eps_override, "override epsilon list")->delimiter(',');
        sub->add_flag("--quiet", opts.quiet, "suppress progress output");
    }

    CLI11_PARSE(app, argc, argv);

    RunConfig cfg;
    try {
        cfg = load_config(opts);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        if (sub == "check") return run_check(cfg, opts.quiet);
        if (sub == "sweep") return run_sweep_cmd(cfg, opts.quiet);
        if (sub == "solve-full") return run_solve_full(cfg, opts.quiet);
        if (sub == "solve-outer") return run_solve_outer(cfg, opts.quiet);
        if (sub == "solve-layers") return run_solve_layers(cfg, opts.quiet);
        if (sub == "assemble") return run_assemble(cfg, opts.quiet);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "%s: usage error: %s\n", sub.c_str(), e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s: numerical abort: %s\n", sub.c_str(), e.what());
        return kExitNumerical;
    }
    return kExitOk;
}
