// Acceptance suite: runs the default epsilon sweep plus the degenerate and
// refinement studies, and checks every shipping criterion at its pinned
// tolerance. Prints one pass/fail line per criterion; exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "layerlab/analysis.hpp"

using namespace layerlab;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%2d] %-28s %s  (%s)\n", id, name.c_str(), pass ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
    char buf[256];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

const BatteryEntry* find_entry(const ConvergenceReport& rep, const std::string& name) {
    for (const auto& b : rep.battery)
        if (b.name == name) return &b;
    return nullptr;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
    // --- criterion 1: compatibility of the default preset -------------------
    {
        const auto t0 = std::chrono::steady_clock::now();
        ModelParams params;
        IntervalGrid grid = make_interval_grid(512);
        InitialData data = build_initial_data(params.initial_data, params, grid);
        const CompatibilityReport rep = check_compatibility(data, params.v_star, grid);
        const double el = elapsed_s(t0);
        report(1, "compatibility", rep.pass && rep.max_residual() <= 1e-6 && el < 1.0,
               fmt("max residual %.2e, %.2f s", rep.max_residual(), el));
    }

    // --- the default sweep feeds criteria 2-4 and 6-12 ----------------------
    SweepPlan plan;
    const auto t_sweep = std::chrono::steady_clock::now();
    const ConvergenceReport rep = run_sweep(plan);
    const double sweep_s = elapsed_s(t_sweep);

    // criterion 2: conservation on every run of the sweep
    {
        double worst = find_entry(rep, "outer0.mass_conservation")->residual;
        for (const auto& e : rep.entries) worst = std::max(worst, e.mass_drift);
        report(2, "mass conservation", worst <= 1e-10, fmt("max rel drift %.2e", worst));
    }

    // criterion 3: outer exponential identity
    {
        const BatteryEntry* b = find_entry(rep, "outer0.exponential_identity");
        report(3, "outer exp identity", b->pass,
               fmt("residual %.2e vs 5 dt^2 max v0 = %.2e", b->residual, b->threshold));
    }

    // criterion 4: layer bracket
    {
        const double worst = std::max(find_entry(rep, "layer.bracket_left")->residual,
                                      find_entry(rep, "layer.bracket_right")->residual);
        report(4, "layer bracket", worst <= 1e-10, fmt("max excursion %.2e", worst));
    }

    // criterion 5: degeneration at v_star = 0
    {
        const auto t0 = std::chrono::steady_clock::now();
        SweepPlan dplan;
        dplan.params.v_star = 0.0;
        dplan.epsilons = {1.0 / 64, 1.0 / 256};
        dplan.n_profile = 512;
        dplan.profile_steps = 500;
        dplan.m_layer = 1024;
        dplan.layer_substeps = 4;
        dplan.output_times = {0.125, 0.25};

        ProfileSet ps = build_profiles(dplan);
        double layer_max = 0.0;
        for (std::size_t k = 0; k < ps.left.output_steps().size(); ++k) {
            for (const Field* f : {&ps.left.v0_at_output(k), &ps.left.phi1_at_output(k),
                                   &ps.left.v1_at_output(k), &ps.left.phi2_at_output(k),
                                   &ps.right.v0_at_output(k), &ps.right.phi1_at_output(k),
                                   &ps.right.v1_at_output(k), &ps.right.phi2_at_output(k)})
                for (double v : *f) layer_max = std::max(layer_max, std::abs(v));
        }
        double assembly_gap = 0.0;
        for (double eps : dplan.epsilons) {
            IntervalGrid grid = make_interval_grid(dplan.resolve_n(eps));
            const CorrectorPair cp = build_correctors(ps.left, ps.right, eps);
            const Assembly as =
                assemble(AssemblyOrder::full, ps.outer, ps.left, ps.right, &cp, eps, grid);
            for (std::size_t k = 0; k < as.times.size(); ++k) {
                const Field u0 = restrict_to_grid(ps.outer.u0_at_output(k), ps.outer.grid(), grid);
                const Field v0 = restrict_to_grid(ps.outer.v0_at_output(k), ps.outer.grid(), grid);
                for (std::size_t i = 0; i < u0.size(); ++i) {
                    assembly_gap = std::max(assembly_gap, std::abs(as.u_app[k][i] - u0[i]));
                    assembly_gap = std::max(assembly_gap, std::abs(as.v_app[k][i] - v0[i]));
                }
            }
        }
        const double el = elapsed_s(t0);
        report(5, "degeneration (v_star=0)",
               layer_max <= 1e-12 && assembly_gap <= 1e-12 && el < 120.0,
               fmt("layer max %.2e, assembly gap %.2e, %.1f s", layer_max, assembly_gap, el));
    }

    // criterion 6: rate reproduction
    {
        const bool pass = rep.fit_Ev.valid && rep.fit_Eu.valid && rep.fit_Ev.slope >= 0.45 &&
                          rep.fit_Eu.slope >= 0.20 && rep.fit_Ev.r_squared >= 0.95 &&
                          rep.fit_Eu.r_squared >= 0.95 && sweep_s <= 1800.0;
        report(6, "rate reproduction", pass,
               fmt("slope(Ev)=%.3f R2=%.3f, slope(Eu)=%.3f R2=%.3f, sweep %.0f s",
                   rep.fit_Ev.slope, rep.fit_Ev.r_squared, rep.fit_Eu.slope,
                   rep.fit_Eu.r_squared, sweep_s));
    }

    // criterion 7: layer thickness scaling
    {
        const bool pass = rep.fit_thickness_left.valid && rep.fit_thickness_right.valid &&
                          rep.fit_thickness_left.slope >= 0.4 &&
                          rep.fit_thickness_left.slope <= 0.6 &&
                          rep.fit_thickness_right.slope >= 0.4 &&
                          rep.fit_thickness_right.slope <= 0.6;
        report(7, "thickness scaling", pass,
               fmt("exponents left %.3f right %.3f", rep.fit_thickness_left.slope,
                   rep.fit_thickness_right.slope));
    }

    // criterion 8: boundary exactness of the homogenized assembly
    {
        double worst = 0.0;
        for (const auto& e : rep.entries)
            worst = std::max(worst, e.assembly_boundary_residual);
        report(8, "assembly boundary exactness", worst <= 1e-12,
               fmt("max wall residual %.2e", worst));
    }

    // criterion 9: approximate-boundary-value formula
    {
        const bool pass = rep.fit_boundary.valid && rep.fit_boundary.slope >= 0.20;
        report(9, "boundary-value formula", pass,
               fmt("residual slope %.3f", rep.fit_boundary.slope));
    }

    // criterion 10: interior vs full-interval gap at the finest epsilon
    {
        const EpsRecord& finest = rep.entries.back();
        const double floor = 0.25 * std::abs(plan.params.v_star - rep.outer_wall_v_T);
        const bool pass = finest.gap.interior_sup_v <= 0.1 * finest.gap.full_sup_v &&
                          finest.gap.full_sup_v >= floor;
        report(10, "interior/full gap", pass,
               fmt("interior %.2e vs 0.1*full %.2e, full %.2e vs floor %.2e",
                   finest.gap.interior_sup_v, 0.1 * finest.gap.full_sup_v,
                   finest.gap.full_sup_v, floor));
    }

    // criterion 11: refinement-oracle equivalence of the full solve
    {
        const auto t0 = std::chrono::steady_clock::now();
        bool pass = true;
        std::string detail;
        for (double eps : {1.0 / 64, 1.0 / 256}) {
            ModelParams p = plan.params;
            p.epsilon = eps;
            std::vector<double> probes[3];
            double dt0 = 0.0;
            for (int lev = 0; lev < 3; ++lev) {
                const std::size_t n = 64u << lev;
                IntervalGrid grid = make_interval_grid(n);
                InitialData data = build_initial_data(p.initial_data, p, grid);
                TimeStepper st;
                if (lev == 0) {
                    Field vxf = derivative(data.v0, grid.spacing(0));
                    double vxm = 0.0;
                    for (double v : vxf) vxm = std::max(vxm, std::abs(v));
                    dt0 = st.resolve_dt(grid.spacing(0), eps, p.horizon, vxm);
                }
                st.cfl_factor = 1e9;
                st.transport_safety = 1e9;
                st.max_step_fraction = p.horizon / (dt0 / (1 << lev));
                FullSolveResult r = solve_full(p, grid, data, st, {p.horizon});
                for (std::size_t ix : {n / 4, 3 * n / 8, n / 2}) {
                    probes[lev].push_back(r.snapshots[0].u[ix]);
                    probes[lev].push_back(r.snapshots[0].v[ix]);
                }
            }
            for (std::size_t j = 0; j < probes[0].size(); ++j) {
                const double ratio = std::abs(probes[0][j] - probes[1][j]) /
                                     std::abs(probes[1][j] - probes[2][j]);
                if (!(ratio >= 3.0 && ratio <= 5.0)) {
                    pass = false;
                    detail += fmt("eps %.4g probe %zu ratio %.2f; ", eps, j, ratio);
                }
            }
        }
        const double el = elapsed_s(t0);
        pass = pass && el < 300.0;
        if (detail.empty()) detail = fmt("all ratios in [3,5], %.1f s", el);
        report(11, "refinement oracle", pass, detail);
    }

    // criterion 12: left/right mirror symmetry of the layer profiles
    {
        const BatteryEntry* b = find_entry(rep, "layer.mirror_symmetry");
        report(12, "mirror symmetry", b != nullptr && b->pass,
               b ? fmt("max asymmetry %.2e", b->residual) : "entry missing");
    }

    std::printf("acceptance: %d of 12 criteria failed\n", g_failures);
    return g_failures;
}
