#include "layerlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace layerlab {

void SweepPlan::validate() const {
    if (epsilons.empty()) throw std::invalid_argument("sweep needs at least one epsilon");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (epsilons[i] <= 0.0) throw std::invalid_argument("sweep epsilons must be positive");
        if (i > 0 && epsilons[i] >= epsilons[i - 1])
            throw std::invalid_argument("sweep epsilons must be strictly decreasing");
    }
    params.validate();
    if (output_times.empty()) throw std::invalid_argument("sweep needs output times");
    for (double t : output_times)
        if (t <= 0.0 || t > params.horizon + 1e-12)
            throw std::invalid_argument("output times must lie in (0, T]");
}

std::size_t SweepPlan::resolve_n(double epsilon) const {
    const double needed = dx_divisor / std::sqrt(epsilon);  // n >= divisor/sqrt(eps)
    std::size_t n = 16;
    while (static_cast<double>(n) < needed) n *= 2;
    if (n > n_cap) return 0;
    return n;
}

FitResult fit_rate(const std::vector<double>& eps, const std::vector<double>& err) {
    if (eps.size() != err.size()) throw std::invalid_argument("fit_rate: size mismatch");
    std::vector<double> lx, ly;
    FitResult fr;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(err[i] > 0.0) || !(eps[i] > 0.0)) {
            fr.note = "nonpositive values excluded from the fit";
            continue;
        }
        lx.push_back(std::log(eps[i]));
        ly.push_back(std::log(err[i]));
    }
    fr.points_used = lx.size();
    if (lx.size() < 3) {
        fr.note = fr.note.empty() ? "fewer than 3 usable points" : fr.note;
        return fr;
    }
    const double n = static_cast<double>(lx.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
        syy += ly[i] * ly[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) {
        fr.note = "degenerate abscissae";
        return fr;
    }
    fr.slope = (n * sxy - sx * sy) / denom;
    fr.intercept = (sy - fr.slope * sx) / n;
    double ss_res = 0.0, ss_tot = 0.0;
    const double ybar = sy / n;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double fit = fr.intercept + fr.slope * lx[i];
        ss_res += (ly[i] - fit) * (ly[i] - fit);
        ss_tot += (ly[i] - ybar) * (ly[i] - ybar);
    }
    fr.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fr.valid = true;
    return fr;
}

namespace {

// first crossing of |diff| below the threshold, walking inward from the wall
std::optional<double> scan_thickness(const Field& diff, const IntervalGrid& grid,
                                     double threshold, bool from_left) {
    const std::size_t n = grid.cell_count();
    double prev = std::abs(from_left ? diff.front() : diff.back());
    if (prev <= threshold) return 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const std::size_t i = from_left ? k : n - k;
        const double cur = std::abs(diff[i]);
        if (cur <= threshold) {
            const double x_prev = from_left ? grid.node(i - 1) : 1.0 - grid.node(i + 1);
            const double x_cur = from_left ? grid.node(i) : 1.0 - grid.node(i);
            const double w = (prev - threshold) / std::max(prev - cur, 1e-300);
            return x_prev + w * (x_cur - x_prev);
        }
        prev = cur;
    }
    return std::nullopt;
}

}  // namespace

ThicknessResult measure_thickness(const Field& v_full, const Field& v_outer,
                                  const IntervalGrid& grid, double threshold_fraction,
                                  double solver_tolerance) {
    if (v_full.size() != v_outer.size() || v_full.size() != grid.node_count())
        throw std::invalid_argument("thickness: field/grid size mismatch");
    if (threshold_fraction <= 0.0 || threshold_fraction >= 1.0)
        throw std::invalid_argument("thickness threshold fraction must be in (0,1)");

    Field diff(v_full.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = v_full[i] - v_outer[i];

    ThicknessResult tr;
    const double floor = 10.0 * solver_tolerance;

    const double amp_left = std::abs(diff.front());
    if (amp_left > floor) {
        if (auto x = scan_thickness(diff, grid, threshold_fraction * amp_left, true)) {
            tr.left = *x;
            tr.left_defined = true;
        }
    }
    const double amp_right = std::abs(diff.back());
    if (amp_right > floor) {
        if (auto x = scan_thickness(diff, grid, threshold_fraction * amp_right, false)) {
            tr.right = *x;
            tr.right_defined = true;
        }
    }
    return tr;
}

double boundary_value_residual(const FullSolveResult& full, const OuterProfiles& outer,
                               double v_star) {
    double worst = 0.0;
    for (std::size_t s = 0; s < full.step_times.size(); ++s) {
        const double t = full.step_times[s];
        const double u0w = outer.trace_at(outer.left().u, t);
        const double v0w = outer.trace_at(outer.left().v, t);
        const double formula = u0w * std::exp(v_star - v0w);
        worst = std::max(worst, std::abs(full.u_wall_left[s] - formula));
    }
    return worst;
}

InteriorGap interior_check(const std::vector<StateUV>& full,
                           const std::vector<Field>& u_outer_on_grid,
                           const std::vector<Field>& v_outer_on_grid, const IntervalGrid& grid,
                           double delta) {
    if (delta <= 0.0 || delta >= 0.5)
        throw std::invalid_argument("interior delta must lie in (0, 1/2)");
    InteriorGap gap;
    for (std::size_t k = 0; k < full.size(); ++k) {
        for (std::size_t i = 0; i < grid.node_count(); ++i) {
            const double x = grid.node(i);
            const double du = std::abs(full[k].u[i] - u_outer_on_grid[k][i]);
            const double dv = std::abs(full[k].v[i] - v_outer_on_grid[k][i]);
            gap.full_sup_u = std::max(gap.full_sup_u, du);
            gap.full_sup_v = std::max(gap.full_sup_v, dv);
            if (x >= delta - 1e-12 && x <= 1.0 - delta + 1e-12) {
                gap.interior_sup_u = std::max(gap.interior_sup_u, du);
                gap.interior_sup_v = std::max(gap.interior_sup_v, dv);
            }
        }
    }
    return gap;
}

ProfileSet build_profiles(const SweepPlan& plan) {
    plan.validate();
    IntervalGrid grid = make_interval_grid(plan.n_profile);
    InitialData data = build_initial_data(plan.params.initial_data, plan.params, grid);

    const double dt = plan.params.horizon / static_cast<double>(plan.profile_steps);
    OuterProfiles outer =
        solve_outer0(plan.params, grid, data, dt, plan.profile_steps, plan.output_times, 2);

    const HalfLineGrid grid_left =
        make_halfline_grid(plan.z_max, plan.m_layer, HalfLineGrid::Orientation::left);
    const HalfLineGrid grid_right =
        make_halfline_grid(plan.z_max, plan.m_layer, HalfLineGrid::Orientation::right);

    LayerProfiles left =
        solve_layer_v0(Side::left, outer, grid_left, plan.params.v_star, plan.layer_substeps);
    LayerProfiles right =
        solve_layer_v0(Side::right, outer, grid_right, plan.params.v_star, plan.layer_substeps);

    LayerTraces trL = canonical_traces(outer, Side::left, false);
    LayerTraces trR = canonical_traces(outer, Side::right, false);
    if (plan.layer_order >= 1) {
        compute_phi1_layer(left, trL);
        compute_phi1_layer(right, trR);
        solve_outer1(outer, left.phi1_trace_true(), right.phi1_trace_true());
        trL = canonical_traces(outer, Side::left, true);
        trR = canonical_traces(outer, Side::right, true);
    }
    if (plan.layer_order >= 2) {
        solve_layer_order2(left, trL, plan.layer_substeps);
        solve_layer_order2(right, trR, plan.layer_substeps);
    }

    return ProfileSet{std::move(grid), std::move(data), std::move(outer),
                      std::move(left), std::move(right), std::move(trL), std::move(trR)};
}

namespace {

double layer_far_tail_max(const LayerProfiles& lp) {
    double m = 0.0;
    const std::size_t nodes = lp.grid().node_count();
    const std::size_t start = (3 * nodes) / 4;
    for (std::size_t k = 0; k < lp.output_steps().size(); ++k) {
        auto scan = [&](const Field& f) {
            for (std::size_t i = start; i < nodes; ++i) m = std::max(m, std::abs(f[i]));
        };
        scan(lp.v0_at_output(k));
        if (lp.order() >= 1) scan(lp.phi1_at_output(k));
        if (lp.order() >= 2) {
            scan(lp.v1_at_output(k));
            scan(lp.phi2_at_output(k));
        }
    }
    return m;
}

double mirror_asymmetry(const LayerProfiles& left, const LayerProfiles& right) {
    double m = 0.0;
    for (std::size_t k = 0; k < left.output_steps().size(); ++k) {
        auto scan = [&](const Field& a, const Field& b) {
            for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
        };
        scan(left.v0_at_output(k), right.v0_at_output(k));
        if (left.order() >= 1) scan(left.phi1_at_output(k), right.phi1_at_output(k));
        if (left.order() >= 2 && right.order() >= 2) {
            scan(left.v1_at_output(k), right.v1_at_output(k));
            scan(left.phi2_at_output(k), right.phi2_at_output(k));
        }
    }
    return m;
}

// residual and quadrature-order allowance of the identity
// d/dz phi^{B,1} = (phi_x^{I,0}+M)(e^{v^{B,0}}-1) at the last output time;
// the centered stencil against the trapezoid cumulative leaves dz^2/4 times
// the layer curvature, whose scale is the layer amplitude
std::pair<double, double> phi1_derivative_identity(const LayerProfiles& lp,
                                                   const LayerTraces& tr) {
    const std::size_t k = lp.output_steps().size() - 1;
    const Field& phi1 = lp.phi1_at_output(k);
    const Field u_layer = compute_u_layer(lp, tr, k);
    const double dz = lp.grid().spacing();
    double resid = 0.0, scale = 0.0;
    for (std::size_t i = 1; i + 1 < phi1.size(); ++i) {
        const double dphi = (phi1[i + 1] - phi1[i - 1]) / (2.0 * dz);
        resid = std::max(resid, std::abs(dphi - u_layer[i]));
        scale = std::max(scale, std::abs(u_layer[i]));
    }
    return {resid, 10.0 * dz * dz * scale + 1e-12};
}

}  // namespace

std::vector<BatteryEntry> invariant_battery(const ProfileSet& profiles, double v_star,
                                            const std::vector<EpsRecord>& entries,
                                            const std::vector<FullSolveResult>& full_stats,
                                            bool symmetric_data) {
    std::vector<BatteryEntry> battery;
    auto add = [&](const std::string& name, double residual, double threshold) {
        battery.push_back({name, residual, threshold, std::abs(residual) <= threshold});
    };

    const OuterProfiles& outer = profiles.outer;
    add("outer0.mass_conservation", outer.mass_drift_rel(), 1e-10);
    add("outer0.u_nonnegative", std::min(0.0, outer.u0_min_seen()), 1e-12);
    double v0max = 0.0;
    for (double v : profiles.data.v0) v0max = std::max(v0max, v);
    add("outer0.v_below_initial_max", std::max(0.0, outer.v0_max_seen() - v0max), 1e-12);
    add("outer0.exponential_identity", outer.exp_identity_residual(),
        5.0 * outer.dt() * outer.dt() * std::max(v0max, 1e-30));

    add("layer.bracket_left",
        std::max(std::max(0.0, -profiles.left.v0_min_seen()),
                 std::max(0.0, profiles.left.v0_max_seen() - v_star)),
        1e-10);
    add("layer.bracket_right",
        std::max(std::max(0.0, -profiles.right.v0_min_seen()),
                 std::max(0.0, profiles.right.v0_max_seen() - v_star)),
        1e-10);
    add("layer.far_tail_decay", std::max(layer_far_tail_max(profiles.left),
                                         layer_far_tail_max(profiles.right)),
        1e-8);
    if (profiles.left.order() >= 1 && profiles.right.order() >= 1) {
        const auto [phi1_res_l, phi1_tol_l] =
            phi1_derivative_identity(profiles.left, profiles.traces_left);
        const auto [phi1_res_r, phi1_tol_r] =
            phi1_derivative_identity(profiles.right, profiles.traces_right);
        add("layer.phi1_derivative_identity", std::max(phi1_res_l, phi1_res_r),
            std::max(phi1_tol_l, phi1_tol_r));
    }
    if (symmetric_data)
        add("layer.mirror_symmetry", mirror_asymmetry(profiles.left, profiles.right), 1e-8);

    double mass_worst = 0.0, vmax_excess = 0.0, vmin_deficit = 0.0;
    double v0_full_max = v0max;
    for (const auto& fs : full_stats) {
        mass_worst = std::max(mass_worst, fs.mass_drift_rel);
        vmax_excess =
            std::max(vmax_excess, fs.v_max_seen - std::max(v_star, v0_full_max));
        vmin_deficit = std::max(vmin_deficit, -(fs.v_min_seen - std::min(0.0, 0.0)));
    }
    if (!full_stats.empty()) {
        add("full.mass_conservation", mass_worst, 1e-10);
        add("full.max_principle_upper", std::max(0.0, vmax_excess), 1e-12);
        add("full.max_principle_lower", std::max(0.0, vmin_deficit), 1e-12);
    }
    if (!entries.empty()) {
        double worst_bc = 0.0;
        for (const auto& e : entries)
            worst_bc = std::max(worst_bc, e.assembly_boundary_residual);
        add("assembly.boundary_exactness", worst_bc, 1e-12 * std::max(1.0, v_star));
    }
    return battery;
}

bool ConvergenceReport::battery_pass() const {
    for (const auto& b : battery)
        if (!b.pass) return false;
    return true;
}

ConvergenceReport run_sweep(const SweepPlan& plan) {
    plan.validate();
    ConvergenceReport report;
    report.degenerate_mode = plan.params.v_star == 0.0;

    ProfileSet profiles = build_profiles(plan);
    const OuterProfiles& outer = profiles.outer;

    std::vector<FullSolveResult> full_stats;
    std::vector<double> eps_used, Ev_list, Eu_list, Ephi_list, thickL, thickR, eps_thick,
        bres_list;

    bool aborted = false;
    for (double eps : plan.epsilons) {
        const std::size_t n = plan.resolve_n(eps);
        if (n == 0) {
            report.warnings.push_back("epsilon " + std::to_string(eps) +
                                      " dropped: grid cap exceeded");
            continue;
        }
        IntervalGrid grid = make_interval_grid(n);
        InitialData data = build_initial_data(plan.params.initial_data, plan.params, grid);
        ModelParams p = plan.params;
        p.epsilon = eps;

        FullSolveResult full;
        try {
            full = solve_full(p, grid, data, plan.full_stepper, plan.output_times,
                              plan.hard_resolution_guard);
        } catch (const std::exception& e) {
            report.warnings.push_back("sweep aborted at epsilon " + std::to_string(eps) + ": " +
                                      e.what());
            aborted = true;
            break;
        }

        Assembly lead_assembly = assemble(AssemblyOrder::order0, outer, profiles.left,
                                          profiles.right, nullptr, eps, grid);
        const Remainders lead = compute_remainders(full.snapshots, lead_assembly, grid);
        Remainders ord1 = lead;
        if (plan.layer_order >= 1) {
            Assembly order1_assembly = assemble(AssemblyOrder::order1, outer, profiles.left,
                                                profiles.right, nullptr, eps, grid);
            ord1 = compute_remainders(full.snapshots, order1_assembly, grid);
        }

        EpsRecord rec;
        rec.epsilon = eps;
        rec.n = n;
        rec.dt = full.dt;
        rec.Eu = lead.Eu;
        rec.Ev = lead.Ev;
        rec.Ephi = ord1.Ephi;
        rec.Ephi_x = lead.Eu;  // (2.23b) remainder coincides with the u-remainder
        rec.Ephi_order0 = lead.Ephi;
        rec.mass_drift = full.mass_drift_rel;

        // boundary exactness of the corrector-homogenized assembly
        double bc_resid = 0.0;
        if (plan.layer_order >= 2) {
            CorrectorPair correctors = build_correctors(profiles.left, profiles.right, eps);
            Assembly full_assembly = assemble(AssemblyOrder::full, outer, profiles.left,
                                              profiles.right, &correctors, eps, grid);
            for (std::size_t k = 0; k < full_assembly.times.size(); ++k) {
                bc_resid = std::max(bc_resid, std::abs(full_assembly.v_app[k].front() - p.v_star));
                bc_resid = std::max(bc_resid, std::abs(full_assembly.v_app[k].back() - p.v_star));
                bc_resid = std::max(bc_resid, std::abs(full_assembly.phi_app[k].front()));
                bc_resid = std::max(bc_resid, std::abs(full_assembly.phi_app[k].back()));
            }
        }
        rec.assembly_boundary_residual = bc_resid;

        // outer fields on the per-eps grid, every output time
        std::vector<Field> u_outer, v_outer;
        for (std::size_t k = 0; k < plan.output_times.size(); ++k) {
            u_outer.push_back(restrict_to_grid(outer.u0_at_output(k), outer.grid(), grid));
            v_outer.push_back(restrict_to_grid(outer.v0_at_output(k), outer.grid(), grid));
        }

        const std::size_t kT = plan.output_times.size() - 1;
        ThicknessResult th = measure_thickness(full.snapshots[kT].v, v_outer[kT], grid,
                                               plan.thickness_threshold, plan.solver_tolerance);
        rec.thickness_left = th.left;
        rec.thickness_right = th.right;
        rec.thickness_defined = th.left_defined && th.right_defined;
        if (rec.thickness_defined) {
            thickL.push_back(th.left);
            thickR.push_back(th.right);
            eps_thick.push_back(eps);
        }

        rec.boundary_residual = boundary_value_residual(full, outer, p.v_star);
        rec.gap = interior_check(full.snapshots, u_outer, v_outer, grid, plan.interior_delta);

        eps_used.push_back(eps);
        Ev_list.push_back(rec.Ev);
        Eu_list.push_back(rec.Eu);
        Ephi_list.push_back(rec.Ephi);
        bres_list.push_back(rec.boundary_residual);

        report.entries.push_back(rec);
        full_stats.push_back(std::move(full));
    }

    report.fit_Ev = fit_rate(eps_used, Ev_list);
    report.fit_Eu = fit_rate(eps_used, Eu_list);
    report.fit_Ephi = fit_rate(eps_used, Ephi_list);
    report.fit_boundary = fit_rate(eps_used, bres_list);
    report.fit_thickness_left = fit_rate(eps_thick, thickL);
    report.fit_thickness_right = fit_rate(eps_thick, thickR);
    if (eps_used.size() < 3)
        report.warnings.push_back("fewer than 3 epsilons: slopes reported as absent");

    const bool symmetric =
        plan.params.initial_data.kind == InitialDataSpec::Kind::preset &&
        (plan.params.initial_data.preset.rfind("paper_poly8", 0) == 0 ||
         plan.params.initial_data.preset == "constant");
    report.battery =
        invariant_battery(profiles, plan.params.v_star, report.entries, full_stats, symmetric);
    report.outer_wall_v_T = outer.left().v.back();
    report.complete = !aborted;
    return report;
}

}  // namespace layerlab
