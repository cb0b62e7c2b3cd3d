#include "layerlab/interval_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "layerlab/tridiag.hpp"

namespace layerlab {

namespace {

double max_abs(const Field& f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

void require_finite(const Field& f, const char* what, std::size_t step) {
    for (double v : f)
        if (!std::isfinite(v))
            throw std::runtime_error(std::string("nonfinite ") + what + " at step " +
                                     std::to_string(step));
}

// Zero-flux finite-volume machinery on a uniform node grid: half cells at the
// walls so that trapezoid-weighted mass telescopes exactly.
struct FluxFormOps {
    double dx;
    std::size_t n;  // cells; nodes n+1

    // divergence of the explicit chemotaxis flux G_{i+1/2} = -mean(u) dv, with
    // zero end fluxes
    void chem_div(const Field& u, const Field& vx_unused, const Field& v, Field& out) const {
        (void)vx_unused;
        out.assign(n + 1, 0.0);
        double g_prev = 0.0;  // G_{-1/2}
        for (std::size_t i = 0; i <= n; ++i) {
            const double g_next =
                i < n ? -0.5 * (u[i] + u[i + 1]) * (v[i + 1] - v[i]) / dx : 0.0;
            const double w = (i == 0 || i == n) ? 0.5 * dx : dx;
            out[i] = (g_next - g_prev) / w;
            g_prev = g_next;
        }
    }

    // (Lu)_i of the zero-flux Laplacian
    void laplacian(const Field& u, Field& out) const {
        out.resize(n + 1);
        const double idx2 = 1.0 / (dx * dx);
        out[0] = 2.0 * (u[1] - u[0]) * idx2;
        for (std::size_t i = 1; i < n; ++i) out[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * idx2;
        out[n] = -2.0 * (u[n] - u[n - 1]) * idx2;
    }
};

// (I - theta dt L_N) u_new = rhs for the zero-flux Laplacian.
struct NeumannDiffusion {
    std::vector<double> a, b, c;
    TridiagSolver solver;

    NeumannDiffusion(std::size_t nodes, double dx, double theta_dt)
        : a(nodes), b(nodes), c(nodes), solver(nodes) {
        const double r = theta_dt / (dx * dx);
        const std::size_t n = nodes - 1;
        b[0] = 1.0 + 2.0 * r;
        c[0] = -2.0 * r;
        for (std::size_t i = 1; i < n; ++i) {
            a[i] = -r;
            b[i] = 1.0 + 2.0 * r;
            c[i] = -r;
        }
        a[n] = -2.0 * r;
        b[n] = 1.0 + 2.0 * r;
    }

    void solve(const Field& rhs, Field& out) { solver.solve(a, b, c, rhs, out); }
};

// (I - theta dt eps D) v_new = rhs with Dirichlet identity rows at the walls.
struct DirichletDiffusion {
    std::vector<double> a, b, c;
    TridiagSolver solver;

    DirichletDiffusion(std::size_t nodes, double dx, double theta_dt_eps)
        : a(nodes), b(nodes, 1.0), c(nodes), solver(nodes) {
        const double r = theta_dt_eps / (dx * dx);
        for (std::size_t i = 1; i + 1 < nodes; ++i) {
            a[i] = -r;
            b[i] = 1.0 + 2.0 * r;
            c[i] = -r;
        }
    }

    void solve(const Field& rhs, Field& out) { solver.solve(a, b, c, rhs, out); }
};

std::vector<std::size_t> map_output_steps(const std::vector<double>& output_times, double dt,
                                          std::size_t steps) {
    std::vector<std::size_t> out;
    out.reserve(output_times.size());
    for (double t : output_times) {
        const auto s = static_cast<std::size_t>(std::llround(t / dt));
        if (s > steps) throw std::invalid_argument("output time beyond the horizon");
        out.push_back(s);
    }
    return out;
}

}  // namespace

double TimeStepper::resolve_dt(double dx, double eps, double horizon, double vx_max) const {
    const double eps_eff = std::max(eps, 1.0);
    double dt = cfl_factor * dx * dx / eps_eff;
    if (vx_max > 0.0) dt = std::min(dt, transport_safety * dx / vx_max);
    dt = std::min(dt, horizon / max_step_fraction);
    const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-12));
    return horizon / static_cast<double>(steps);
}

FullSolveResult solve_full(const ModelParams& params, const IntervalGrid& grid,
                           const InitialData& data, const TimeStepper& stepper,
                           const std::vector<double>& output_times, bool hard_resolution_guard) {
    params.validate();
    if (params.epsilon <= 0.0)
        throw std::invalid_argument("solve_full needs eps > 0; use the outer solver for eps = 0");
    if (!grid.uniform()) throw std::invalid_argument("solve_full implemented for uniform grids");

    const std::size_t n = grid.cell_count();
    const double dx = grid.spacing(0);
    const double eps = params.epsilon;
    const double v_star = params.v_star;
    const double T = params.horizon;

    FullSolveResult res;
    res.resolution_guard_ok = dx <= std::sqrt(eps) / 8.0 + 1e-15;
    if (!res.resolution_guard_ok && hard_resolution_guard)
        throw std::invalid_argument("resolution guard violated: dx > sqrt(eps)/8");

    Field vx = derivative(data.v0, dx);
    const double dt = stepper.resolve_dt(dx, eps, T, max_abs(vx));
    const auto steps = static_cast<std::size_t>(std::llround(T / dt));
    res.dt = dt;
    res.steps = steps;
    const auto output_steps = map_output_steps(output_times, dt, steps);

    const double mass0 = integrate(grid, data.u0);
    double v_lo = std::min(0.0, *std::min_element(data.v0.begin(), data.v0.end()));
    double v_hi = std::max(v_star, *std::max_element(data.v0.begin(), data.v0.end()));
    res.v_min_seen = v_lo;
    res.v_max_seen = v_hi;
    res.u_min_seen = 0.0;

    FluxFormOps ops{dx, n};
    const int order = stepper.time_order;
    NeumannDiffusion u_be(n + 1, dx, dt), u_cn(n + 1, dx, 0.5 * dt);
    DirichletDiffusion v_be(n + 1, dx, eps * dt), v_cn(n + 1, dx, 0.5 * eps * dt);

    Field u = data.u0, v = data.v0;
    Field chem0, chem1, rhs, u_star, v_work, v_stage, lap, u_next;

    res.step_times.resize(steps + 1);
    res.u_wall_left.resize(steps + 1);
    res.u_wall_right.resize(steps + 1);
    auto record_traces = [&](std::size_t s) {
        res.step_times[s] = dt * static_cast<double>(s);
        res.u_wall_left[s] = u.front();
        res.u_wall_right[s] = u.back();
    };
    record_traces(0);
    for (std::size_t k = 0; k < output_steps.size(); ++k)
        if (output_steps[k] == 0) res.snapshots.push_back({0.0, u, v});

    auto v_reaction = [&](Field& f, const Field& ucoef, double tau) {
        for (std::size_t i = 1; i < n; ++i) f[i] *= std::exp(-ucoef[i] * tau);
        f[0] = v_star;
        f[n] = v_star;
    };
    auto v_diffuse = [&](const Field& vin, Field& vout, bool cn) {
        rhs = vin;
        if (cn) {
            const double r2 = 0.5 * eps * dt / (dx * dx);
            for (std::size_t i = 1; i < n; ++i)
                rhs[i] = vin[i] + r2 * (vin[i + 1] - 2.0 * vin[i] + vin[i - 1]);
        }
        rhs[0] = v_star;
        rhs[n] = v_star;
        (cn ? v_cn : v_be).solve(rhs, vout);
    };

    for (std::size_t s = 0; s < steps; ++s) {
        ops.chem_div(u, vx, v, chem0);

        Field& u_new = u_next;
        if (order <= 1) {
            rhs.resize(n + 1);
            for (std::size_t i = 0; i <= n; ++i) rhs[i] = u[i] + dt * chem0[i];
            u_be.solve(rhs, u_new);

            v_diffuse(v, v_work, false);
            v_reaction(v_work, u_new, dt);
            v.swap(v_work);
        } else {
            // predictor
            ops.laplacian(u, lap);
            rhs.resize(n + 1);
            for (std::size_t i = 0; i <= n; ++i)
                rhs[i] = u[i] + 0.5 * dt * lap[i] + dt * chem0[i];
            u_cn.solve(rhs, u_star);

            v_stage = v;
            v_reaction(v_stage, u, 0.5 * dt);
            v_diffuse(v_stage, v_work, true);
            v_stage = v_work;
            v_reaction(v_stage, u_star, 0.5 * dt);

            // corrector
            ops.chem_div(u_star, vx, v_stage, chem1);
            for (std::size_t i = 0; i <= n; ++i)
                rhs[i] = u[i] + 0.5 * dt * lap[i] + 0.5 * dt * (chem0[i] + chem1[i]);
            u_cn.solve(rhs, u_new);

            v_stage = v;
            v_reaction(v_stage, u, 0.5 * dt);
            v_diffuse(v_stage, v_work, true);
            v_reaction(v_work, u_new, 0.5 * dt);
            v.swap(v_work);
        }
        u.swap(u_new);
        derivative_into(v, dx, vx);

        require_finite(u, "u", s + 1);
        require_finite(v, "v", s + 1);

        // the flux form telescopes exactly in exact arithmetic; re-center the
        // machine-epsilon rounding bias of the implicit solve so it cannot
        // random-walk over millions of steps (weights sum to 1)
        double m = integrate(grid, u);
        const double shift = mass0 - m;
        for (double& uv : u) uv += shift;
        m = integrate(grid, u);
        res.mass_drift_rel = std::max(res.mass_drift_rel, std::abs(m - mass0) / std::max(mass0, 1e-300));
        for (double uv : u) res.u_min_seen = std::min(res.u_min_seen, uv);
        for (double vv : v) {
            res.v_min_seen = std::min(res.v_min_seen, vv);
            res.v_max_seen = std::max(res.v_max_seen, vv);
        }

        record_traces(s + 1);
        for (std::size_t k = 0; k < output_steps.size(); ++k)
            if (output_steps[k] == s + 1)
                res.snapshots.push_back({dt * static_cast<double>(s + 1), u, v});
    }
    return res;
}

OuterProfiles::OuterProfiles(const IntervalGrid& grid, double mass, double v_star, double dt,
                             std::size_t steps, std::vector<double> output_times)
    : grid_(grid),
      mass_(mass),
      v_star_(v_star),
      dt_(dt),
      steps_(steps),
      output_times_(std::move(output_times)) {
    output_steps_ = map_output_steps(output_times_, dt_, steps_);
}

Field OuterProfiles::phi0_at_output(std::size_t k) const {
    // subtract the instantaneous quadrature mass: phi^{I,0}(1,t) = 0 then
    // holds to rounding instead of carrying the accumulated drift of int u
    const Field& u = u0_at_output(k);
    return antiderivative_transform(grid_, u, integrate(grid_, u));
}

double OuterProfiles::trace_at(const std::vector<double>& series, double t) const {
    if (t <= 0.0) return series.front();
    const double r = t / dt_;
    const auto i = std::min(static_cast<std::size_t>(r), steps_ - 1);
    const double w = r - static_cast<double>(i);
    return (1.0 - w) * series[i] + w * series[i + 1];
}

OuterProfiles solve_outer0(const ModelParams& params, const IntervalGrid& grid,
                           const InitialData& data, double dt, std::size_t steps,
                           const std::vector<double>& output_times, int time_order) {
    params.validate();
    if (!grid.uniform()) throw std::invalid_argument("solve_outer0 implemented for uniform grids");
    if (std::abs(dt * static_cast<double>(steps) - params.horizon) > 1e-9 * params.horizon)
        throw std::invalid_argument("outer solve: dt * steps must equal the horizon");

    const std::size_t n = grid.cell_count();
    const double dx = grid.spacing(0);
    const double mass = data.mass;

    OuterProfiles out(grid, mass, params.v_star, dt, steps, output_times);
    out.u0_hist_.assign(steps + 1, Field());
    out.v0_hist_.assign(steps + 1, Field());
    out.u0_hist_[0] = data.u0;
    out.v0_hist_[0] = data.v0;
    out.v0_max_seen_ = *std::max_element(data.v0.begin(), data.v0.end());

    auto resize_traces = [&](WallTraces& w) {
        w.u.assign(steps + 1, 0.0);
        w.ux.assign(steps + 1, 0.0);
        w.v.assign(steps + 1, 0.0);
        w.vx.assign(steps + 1, 0.0);
    };
    resize_traces(out.left_);
    resize_traces(out.right_);

    FluxFormOps ops{dx, n};
    NeumannDiffusion u_be(n + 1, dx, dt), u_cn(n + 1, dx, 0.5 * dt),
        u_be_quarter(n + 1, dx, 0.25 * dt);

    Field u = data.u0, v = data.v0;
    Field int_u(n + 1, 0.0);
    Field chem0, chem1, rhs, lap, u_star, v_star_field, vx;

    out.int_u_out_.assign(out.output_steps_.size(), Field());

    auto record = [&](std::size_t s) {
        out.u0_hist_[s] = u;
        out.v0_hist_[s] = v;
        out.left_.u[s] = u.front();
        out.right_.u[s] = u.back();
        out.left_.ux[s] = derivative_at_left(u, dx);
        out.right_.ux[s] = derivative_at_right(u, dx);
        out.left_.v[s] = v.front();
        out.right_.v[s] = v.back();
        out.left_.vx[s] = derivative_at_left(v, dx);
        out.right_.vx[s] = derivative_at_right(v, dx);
        for (std::size_t k = 0; k < out.output_steps_.size(); ++k)
            if (out.output_steps_[k] == s) out.int_u_out_[k] = int_u;
    };
    record(0);

    const double u_scale = std::max(1.0, max_abs(u));
    const double neg_tol = 1e-10 * u_scale;
    // Rannacher startup: open with dissipative BE sub-steps so the CN pass
    // does not carry high-mode oscillations of the initial transient.
    const std::size_t startup_steps = time_order >= 2 ? 8 : 0;

    auto be_substep = [&](double tau, NeumannDiffusion& solver) {
        vx = derivative(v, dx);
        ops.chem_div(u, vx, v, chem0);
        rhs.resize(n + 1);
        for (std::size_t i = 0; i <= n; ++i) rhs[i] = u[i] + tau * chem0[i];
        Field u_new;
        solver.solve(rhs, u_new);
        for (std::size_t i = 0; i <= n; ++i) {
            const double ubar = 0.5 * (u[i] + u_new[i]);
            v[i] *= std::exp(-ubar * tau);
            int_u[i] += tau * ubar;
        }
        u = std::move(u_new);
    };

    for (std::size_t s = 0; s < steps; ++s) {
        if (time_order <= 1) {
            be_substep(dt, u_be);
        } else if (s < startup_steps) {
            for (int q = 0; q < 4; ++q) be_substep(0.25 * dt, u_be_quarter);
        } else {
            vx = derivative(v, dx);
            ops.chem_div(u, vx, v, chem0);
            ops.laplacian(u, lap);
            rhs.resize(n + 1);
            for (std::size_t i = 0; i <= n; ++i)
                rhs[i] = u[i] + 0.5 * dt * lap[i] + dt * chem0[i];
            u_cn.solve(rhs, u_star);

            v_star_field.resize(n + 1);
            for (std::size_t i = 0; i <= n; ++i)
                v_star_field[i] = v[i] * std::exp(-0.5 * (u[i] + u_star[i]) * dt);

            ops.chem_div(u_star, vx, v_star_field, chem1);
            Field u_new;
            for (std::size_t i = 0; i <= n; ++i)
                rhs[i] = u[i] + 0.5 * dt * lap[i] + 0.5 * dt * (chem0[i] + chem1[i]);
            u_cn.solve(rhs, u_new);

            for (std::size_t i = 0; i <= n; ++i) {
                const double ubar = 0.5 * (u[i] + u_new[i]);
                v[i] *= std::exp(-ubar * dt);
                int_u[i] += dt * ubar;
            }
            u = std::move(u_new);
        }

        require_finite(u, "u^{I,0}", s + 1);
        require_finite(v, "v^{I,0}", s + 1);
        double umin = 0.0;
        for (double uv : u) umin = std::min(umin, uv);
        out.u0_min_seen_ = std::min(out.u0_min_seen_, umin);
        if (umin < -neg_tol)
            throw std::runtime_error("outer0: u^{I,0} negative beyond tolerance at step " +
                                     std::to_string(s + 1));
        // re-center the rounding bias of the solves (see solve_full)
        double m = integrate(grid, u);
        const double shift = mass - m;
        for (double& uv : u) uv += shift;
        m = integrate(grid, u);
        out.mass_drift_rel_ =
            std::max(out.mass_drift_rel_, std::abs(m - mass) / std::max(mass, 1e-300));

        record(s + 1);
    }

    // closed-form cross-check: v^{I,0} = v0 exp(-int u^{I,0})
    double resid = 0.0;
    for (std::size_t k = 0; k < out.output_steps_.size(); ++k) {
        const Field& vk = out.v0_at_output(k);
        const Field& iu = out.int_u_out_[k];
        for (std::size_t i = 0; i <= n; ++i)
            resid = std::max(resid, std::abs(vk[i] - data.v0[i] * std::exp(-iu[i])));
    }
    out.exp_identity_residual_ = resid;
    return out;
}

void solve_outer1(OuterProfiles& outer, const std::vector<double>& phi1_trace_left_true,
                  const std::vector<double>& phi1_trace_right_true) {
    const std::size_t steps = outer.steps_;
    if (phi1_trace_left_true.size() != steps + 1 || phi1_trace_right_true.size() != steps + 1)
        throw std::invalid_argument("outer1: layer trace series do not match the time mesh");

    const IntervalGrid& grid = outer.grid_;
    const std::size_t n = grid.cell_count();
    const double dx = grid.spacing(0);
    const double dt = outer.dt_;

    outer.left_.phi1x.assign(steps + 1, 0.0);
    outer.right_.phi1x.assign(steps + 1, 0.0);
    outer.left_.v1.assign(steps + 1, 0.0);
    outer.right_.v1.assign(steps + 1, 0.0);
    outer.phi1_out_.assign(outer.output_steps_.size(), Field());
    outer.v1_out_.assign(outer.output_steps_.size(), Field());

    Field phi1(n + 1, 0.0), v1(n + 1, 0.0);

    auto bc_left = [&](std::size_t s) { return -phi1_trace_left_true[s]; };
    auto bc_right = [&](std::size_t s) { return -phi1_trace_right_true[s]; };

    TridiagSolver solver(n + 1);
    std::vector<double> a(n + 1, 0.0), b(n + 1, 1.0), c(n + 1, 0.0);
    const double r2 = 0.5 * dt / (dx * dx);
    for (std::size_t i = 1; i < n; ++i) {
        a[i] = -r2;
        b[i] = 1.0 + 2.0 * r2;
        c[i] = -r2;
    }

    auto record = [&](std::size_t s) {
        outer.left_.phi1x[s] = derivative_at_left(phi1, dx);
        outer.right_.phi1x[s] = derivative_at_right(phi1, dx);
        outer.left_.v1[s] = v1.front();
        outer.right_.v1[s] = v1.back();
        for (std::size_t k = 0; k < outer.output_steps_.size(); ++k)
            if (outer.output_steps_[k] == s) {
                outer.phi1_out_[k] = phi1;
                outer.v1_out_[k] = v1;
            }
    };
    record(0);

    Field f0(n + 1), f1(n + 1), rhs(n + 1), phi_star(n + 1), v1_star(n + 1), g0(n + 1),
        g1(n + 1);

    auto transport = [&](const Field& ph, const Field& vv, const Field& u0, const Field& v0x,
                         Field& outf) {
        const Field phx = derivative(ph, dx);
        const Field vvx = derivative(vv, dx);
        for (std::size_t i = 0; i <= n; ++i) outf[i] = -u0[i] * vvx[i] - phx[i] * v0x[i];
    };
    auto forcing = [&](const Field& ph, const Field& v0, Field& outf) {
        const Field phx = derivative(ph, dx);
        for (std::size_t i = 0; i <= n; ++i) outf[i] = -phx[i] * v0[i];
    };
    auto cn_solve = [&](const Field& explicit_term, double bcl, double bcr, Field& outp) {
        for (std::size_t i = 1; i < n; ++i)
            rhs[i] = phi1[i] + r2 * (phi1[i + 1] - 2.0 * phi1[i] + phi1[i - 1]) +
                     dt * explicit_term[i];
        rhs[0] = bcl;
        rhs[n] = bcr;
        solver.solve(a, b, c, rhs, outp);
    };

    for (std::size_t s = 0; s < steps; ++s) {
        const Field& u0_n = outer.u0_hist_[s];
        const Field& v0_n = outer.v0_hist_[s];
        const Field& u0_n1 = outer.u0_hist_[s + 1];
        const Field& v0_n1 = outer.v0_hist_[s + 1];
        const Field v0x_n = derivative(v0_n, dx);
        const Field v0x_n1 = derivative(v0_n1, dx);

        // predictor
        transport(phi1, v1, u0_n, v0x_n, f0);
        cn_solve(f0, bc_left(s + 1), bc_right(s + 1), phi_star);
        forcing(phi1, v0_n, g0);
        for (std::size_t i = 0; i <= n; ++i) {
            const double ubar = 0.5 * (u0_n[i] + u0_n1[i]);
            v1_star[i] = std::exp(-ubar * dt) * v1[i] + dt * std::exp(-0.5 * ubar * dt) * g0[i];
        }

        // corrector
        transport(phi_star, v1_star, u0_n1, v0x_n1, f1);
        for (std::size_t i = 0; i <= n; ++i) f1[i] = 0.5 * (f0[i] + f1[i]);
        Field phi_new;
        cn_solve(f1, bc_left(s + 1), bc_right(s + 1), phi_new);
        forcing(phi_star, v0_n1, g1);
        for (std::size_t i = 0; i <= n; ++i) {
            const double ubar = 0.5 * (u0_n[i] + u0_n1[i]);
            v1[i] = std::exp(-ubar * dt) * v1[i] +
                    dt * std::exp(-0.5 * ubar * dt) * 0.5 * (g0[i] + g1[i]);
        }
        phi1 = std::move(phi_new);

        require_finite(phi1, "phi^{I,1}", s + 1);
        require_finite(v1, "v^{I,1}", s + 1);
        record(s + 1);
    }
    outer.has_outer1_ = true;
}

}  // namespace layerlab
