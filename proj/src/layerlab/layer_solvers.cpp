#include "layerlab/layer_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "layerlab/tridiag.hpp"

namespace layerlab {

LayerTraces canonical_traces(const OuterProfiles& outer, Side side, bool with_outer1) {
    const WallTraces& w = side == Side::left ? outer.left() : outer.right();
    LayerTraces t;
    t.a = w.u;
    t.b = w.v;
    t.c = w.vx;
    t.d = w.ux;
    if (side == Side::right) {
        for (double& v : t.c) v = -v;
        for (double& v : t.d) v = -v;
    }
    if (with_outer1) {
        if (!outer.has_outer1())
            throw std::invalid_argument("outer1 traces requested before solve_outer1");
        t.e = w.phi1x;
        t.f = w.v1;
    } else {
        t.e.assign(t.a.size(), 0.0);
        t.f.assign(t.a.size(), 0.0);
    }
    return t;
}

LayerProfiles::LayerProfiles(Side side, const HalfLineGrid& grid, double dt, std::size_t steps,
                             std::vector<double> output_times,
                             std::vector<std::size_t> output_steps)
    : side_(side),
      grid_(grid),
      dt_(dt),
      steps_(steps),
      output_times_(std::move(output_times)),
      output_steps_(std::move(output_steps)) {}

std::vector<double> LayerProfiles::phi1_trace_true() const {
    std::vector<double> t = phi1_trace_;
    const double s = phi_sign();
    for (double& v : t) v *= s;
    return t;
}

namespace {

double lerp(double x0, double x1, double w) { return (1.0 - w) * x0 + w * x1; }

void check_layer_finite(const Field& f, const char* what, std::size_t step) {
    for (double v : f)
        if (!std::isfinite(v))
            throw std::runtime_error(std::string("layer solve: nonfinite ") + what +
                                     " at step " + std::to_string(step));
}

}  // namespace

LayerProfiles solve_layer_v0(Side side, const OuterProfiles& outer, const HalfLineGrid& grid,
                             double v_star, std::size_t substeps) {
    if (substeps == 0) throw std::invalid_argument("layer solve needs substeps >= 1");
    const LayerTraces tr = canonical_traces(outer, side, false);
    const std::size_t steps = outer.steps();
    const double dt = outer.dt();

    LayerProfiles lp(side, grid, dt, steps, outer.output_times(), outer.output_steps());
    const std::size_t m = grid.cell_count();
    const double dz = grid.spacing();

    lp.v0_hist_.assign(steps + 1, Field(m + 1, 0.0));
    lp.v0_trace_.assign(steps + 1, 0.0);
    lp.v0_trace_[0] = v_star - tr.b[0];
    lp.v0_hist_[0][0] = v_star - tr.b[0];  // compatible data make this 0 at t=0

    Field w = lp.v0_hist_[0];
    TridiagSolver solver(m + 1);
    std::vector<double> a_band(m + 1, 0.0), b_band(m + 1, 1.0), c_band(m + 1, 0.0),
        rhs(m + 1, 0.0);
    Field w_new(m + 1, 0.0);

    const double dtau = dt / static_cast<double>(substeps);
    const double idz2 = 1.0 / (dz * dz);
    const double bound_tol = 1e-10 * std::max(1.0, v_star);

    for (std::size_t s = 0; s < steps; ++s) {
        for (std::size_t q = 0; q < substeps; ++q) {
            const double wmid = (static_cast<double>(q) + 0.5) / static_cast<double>(substeps);
            const double wend = (static_cast<double>(q) + 1.0) / static_cast<double>(substeps);
            const double a_mid = lerp(tr.a[s], tr.a[s + 1], wmid);
            const double b_mid = lerp(tr.b[s], tr.b[s + 1], wmid);
            const double b_end = lerp(tr.b[s], tr.b[s + 1], wend);

            b_band[0] = 1.0;
            c_band[0] = 0.0;
            rhs[0] = v_star - b_end;
            for (std::size_t i = 1; i < m; ++i) {
                const double ew = std::exp(w[i]);
                a_band[i] = -dtau * idz2;
                b_band[i] = 1.0 + 2.0 * dtau * idz2 + dtau * a_mid * ew;
                c_band[i] = -dtau * idz2;
                rhs[i] = w[i] - dtau * a_mid * b_mid * (ew - 1.0);
            }
            a_band[m] = 0.0;
            b_band[m] = 1.0;
            rhs[m] = 0.0;
            solver.solve(a_band, b_band, c_band, rhs, w_new);
            w.swap(w_new);
        }
        check_layer_finite(w, "v^{B,0}", s + 1);
        for (double v : w) {
            lp.v0_min_seen_ = std::min(lp.v0_min_seen_, v);
            lp.v0_max_seen_ = std::max(lp.v0_max_seen_, v);
        }
        if (lp.v0_min_seen_ < -bound_tol || lp.v0_max_seen_ > v_star + bound_tol)
            throw std::runtime_error("layer solve: v^{B,0} left the [0, v_star] bracket at step " +
                                     std::to_string(s + 1));
        lp.v0_hist_[s + 1] = w;
        lp.v0_trace_[s + 1] = v_star - tr.b[s + 1];
    }
    lp.order_ = 0;
    return lp;
}

void compute_phi1_layer(LayerProfiles& lp, const LayerTraces& tr, const QuadratureRule& rule) {
    if (lp.order_ < 0) throw std::invalid_argument("phi1 layer needs the leading profile first");
    if (rule.kind != QuadratureRule::Kind::trapezoid)
        throw std::invalid_argument(
            "phi1 layer uses the trapezoid cumulative so the stored wall trace equals the "
            "field value bit-exactly; Simpson is available through integrate_tail");
    const HalfLineGrid& grid = lp.grid_;
    const std::size_t m = grid.cell_count();

    lp.phi1_trace_.assign(lp.steps_ + 1, 0.0);
    lp.phi1_out_.assign(lp.output_steps_.size(), Field());

    Field expm1_field(m + 1);
    for (std::size_t s = 0; s <= lp.steps_; ++s) {
        const Field& w = lp.v0_hist_[s];
        for (std::size_t i = 0; i <= m; ++i) expm1_field[i] = std::expm1(w[i]);
        Field tail = cumulative_tail(grid, expm1_field);
        for (double& v : tail) v *= -tr.a[s];
        lp.phi1_trace_[s] = tail[0];
        for (std::size_t k = 0; k < lp.output_steps_.size(); ++k)
            if (lp.output_steps_[k] == s) lp.phi1_out_[k] = tail;
    }
    lp.order_ = std::max(lp.order_, 1);
}

Field compute_u_layer(const LayerProfiles& lp, const LayerTraces& tr, std::size_t k) {
    const Field& w = lp.v0_at_output(k);
    const double a = tr.a[lp.output_steps()[k]];
    Field u(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) u[i] = a * std::expm1(w[i]);
    return u;
}

void solve_layer_order2(LayerProfiles& lp, const LayerTraces& tr, std::size_t substeps) {
    if (lp.phi1_trace_.empty())
        throw std::invalid_argument("order-2 layer solve needs phi1 computed first");
    if (substeps == 0) throw std::invalid_argument("layer solve needs substeps >= 1");

    const HalfLineGrid& grid = lp.grid_;
    const std::size_t m = grid.cell_count();
    const double dz = grid.spacing();
    const double idz2 = 1.0 / (dz * dz);
    const std::size_t steps = lp.steps_;
    const double dtau = lp.dt_ / static_cast<double>(substeps);

    lp.v1_out_.assign(lp.output_steps_.size(), Field(m + 1, 0.0));
    lp.phi2_out_.assign(lp.output_steps_.size(), Field(m + 1, 0.0));
    lp.v1_trace_.assign(steps + 1, 0.0);
    lp.phi2_trace_.assign(steps + 1, 0.0);
    lp.v1_trace_[0] = -tr.f[0];

    Field r(m + 1, 0.0);
    r[0] = -tr.f[0];

    TridiagSolver solver(m + 1);
    std::vector<double> a_band(m + 1, 0.0), b_band(m + 1, 1.0), c_band(m + 1, 0.0),
        rhs(m + 1, 0.0);
    Field r_new(m + 1, 0.0), w_mid(m + 1), wz(m + 1), integrand(m + 1), i2(m + 1);

    // phi_z^{B,2} = e^w (a r - I2), then phi^{B,2} by tail integration
    auto phi2_field = [&](const Field& w_lvl, const Field& r_lvl, double a, double cc, double dd,
                          double ee) {
        for (std::size_t i = 0; i <= m; ++i) {
            const double zi = grid.node(i);
            const double wy = i == 0   ? (w_lvl[1] - w_lvl[0]) / dz
                              : i == m ? (w_lvl[m] - w_lvl[m - 1]) / dz
                                       : (w_lvl[i + 1] - w_lvl[i - 1]) / (2.0 * dz);
            integrand[i] =
                std::exp(-w_lvl[i]) * (wy * (dd * zi + ee) + a * cc * std::expm1(w_lvl[i]));
        }
        Field i2f = cumulative_tail(grid, integrand);
        Field phi2z(m + 1);
        for (std::size_t i = 0; i <= m; ++i)
            phi2z[i] = std::exp(w_lvl[i]) * (a * r_lvl[i] - i2f[i]);
        Field phi2 = cumulative_tail(grid, phi2z);
        for (double& v : phi2) v = -v;
        return phi2;
    };

    auto store_output = [&](std::size_t s) {
        for (std::size_t k = 0; k < lp.output_steps_.size(); ++k)
            if (lp.output_steps_[k] == s) {
                lp.v1_out_[k] = r;
                lp.phi2_out_[k] =
                    phi2_field(lp.v0_hist_[s], r, tr.a[s], tr.c[s], tr.d[s], tr.e[s]);
            }
    };
    store_output(0);

    for (std::size_t s = 0; s < steps; ++s) {
        const Field& w0 = lp.v0_hist_[s];
        const Field& w1 = lp.v0_hist_[s + 1];
        for (std::size_t q = 0; q < substeps; ++q) {
            const double lm = (static_cast<double>(q) + 0.5) / static_cast<double>(substeps);
            const double le = (static_cast<double>(q) + 1.0) / static_cast<double>(substeps);
            const double a = lerp(tr.a[s], tr.a[s + 1], lm);
            const double b = lerp(tr.b[s], tr.b[s + 1], lm);
            const double cc = lerp(tr.c[s], tr.c[s + 1], lm);
            const double dd = lerp(tr.d[s], tr.d[s + 1], lm);
            const double ee = lerp(tr.e[s], tr.e[s + 1], lm);
            const double ff_mid = lerp(tr.f[s], tr.f[s + 1], lm);
            const double ff_end = lerp(tr.f[s], tr.f[s + 1], le);

            for (std::size_t i = 0; i <= m; ++i) w_mid[i] = lerp(w0[i], w1[i], lm);
            for (std::size_t i = 0; i <= m; ++i)
                wz[i] = i == 0   ? (w_mid[1] - w_mid[0]) / dz
                        : i == m ? (w_mid[m] - w_mid[m - 1]) / dz
                                 : (w_mid[i + 1] - w_mid[i - 1]) / (2.0 * dz);

            // I2(z) = int_z^inf e^{-w} [w_y (d y + e) + a c (e^w - 1)] dy
            for (std::size_t i = 0; i <= m; ++i)
                integrand[i] = std::exp(-w_mid[i]) *
                               (wz[i] * (dd * grid.node(i) + ee) + a * cc * std::expm1(w_mid[i]));
            i2 = cumulative_tail(grid, integrand);

            b_band[0] = 1.0;
            c_band[0] = 0.0;
            rhs[0] = -ff_end;
            for (std::size_t i = 1; i < m; ++i) {
                const double ew = std::exp(w_mid[i]);
                const double phiz1 = a * (ew - 1.0);
                const double kappa = a + a * ew * (b + w_mid[i]) + phiz1;
                const double g = ew * (b + w_mid[i]) * i2[i] -
                                 phiz1 * (cc * grid.node(i) + ff_mid) -
                                 (dd * grid.node(i) + ee) * w_mid[i];
                a_band[i] = -dtau * idz2;
                b_band[i] = 1.0 + 2.0 * dtau * idz2 + dtau * kappa;
                c_band[i] = -dtau * idz2;
                rhs[i] = r[i] + dtau * g;
            }
            a_band[m] = 0.0;
            b_band[m] = 1.0;
            rhs[m] = 0.0;
            solver.solve(a_band, b_band, c_band, rhs, r_new);
            r.swap(r_new);
        }
        check_layer_finite(r, "v^{B,1}", s + 1);
        lp.v1_trace_[s + 1] = -tr.f[s + 1];

        // wall trace of phi^{B,2}: e^{w(0)} (a r(0) - I2(0)) integrated form
        const Field phi2 = phi2_field(w1, r, tr.a[s + 1], tr.c[s + 1], tr.d[s + 1], tr.e[s + 1]);
        lp.phi2_trace_[s + 1] = phi2[0];
        store_output(s + 1);
    }
    lp.order_ = 2;
}

}  // namespace layerlab
