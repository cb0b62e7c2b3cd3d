#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "layerlab/grids.hpp"
#include "layerlab/model.hpp"

namespace layerlab {

/// Discrete (u, v) pair on the interval grid at one time level.
struct StateUV {
    double t = 0.0;
    Field u;
    Field v;
};

/// IMEX step descriptor: diffusion implicit, chemotaxis transport explicit.
/// time_order 1 keeps backward-Euler diffusion with the Lie reaction split;
/// time_order 2 uses Crank-Nicolson diffusion with a Heun pass on the
/// explicit transport (plus Rannacher startup) and Strang reaction splitting.
struct TimeStepper {
    double cfl_factor = 0.4;        // dt <= cfl_factor * dx^2 / eps_eff
    double transport_safety = 1.0;  // dt <= safety * dx / max|v_x|
    double max_step_fraction = 2000.0;  // dt <= T / max_step_fraction
    int time_order = 1;

    /// Resolve the step for a full-system run (eps_eff = max(eps, 1) for the
    /// u-equation's unit diffusivity). Returns a step that divides T exactly.
    double resolve_dt(double dx, double eps, double horizon, double vx_max) const;
};

struct FullSolveResult {
    std::vector<StateUV> snapshots;   // at the requested output times
    std::vector<double> step_times;   // every step (size steps+1)
    std::vector<double> u_wall_left;  // u^eps(0,t) per step
    std::vector<double> u_wall_right; // u^eps(1,t) per step
    double dt = 0.0;
    std::size_t steps = 0;
    double mass_drift_rel = 0.0;  // max over steps of |m(t)-M|/M
    double v_min_seen = 0.0, v_max_seen = 0.0;
    double u_min_seen = 0.0;
    bool resolution_guard_ok = true;  // dx <= sqrt(eps)/8
};

/// Time integration of the full eps > 0 system: conservative flux-form u
/// update with zero end fluxes, implicit v diffusion with Dirichlet v_star
/// rows, reaction by the exponential factor after the diffusion solve.
FullSolveResult solve_full(const ModelParams& params, const IntervalGrid& grid,
                           const InitialData& data, const TimeStepper& stepper,
                           const std::vector<double>& output_times,
                           bool hard_resolution_guard = false);

/// Wall trace series of the outer hierarchy, one value per profile step.
struct WallTraces {
    std::vector<double> u;      // u^{I,0}(wall,t) = phi_x^{I,0}(wall,t) + M
    std::vector<double> ux;     // u_x^{I,0}(wall,t) = phi_xx^{I,0}(wall,t)
    std::vector<double> v;      // v^{I,0}(wall,t)
    std::vector<double> vx;     // v_x^{I,0}(wall,t)
    std::vector<double> phi1x;  // phi_x^{I,1}(wall,t)
    std::vector<double> v1;     // v^{I,1}(wall,t)
};

/// Outer-layer profiles: leading order stored at every step (the first-order
/// solve consumes the full coefficient history), first order at output times,
/// wall traces at every step.
class OuterProfiles {
public:
    OuterProfiles(const IntervalGrid& grid, double mass, double v_star, double dt,
                  std::size_t steps, std::vector<double> output_times);

    const IntervalGrid& grid() const { return grid_; }
    double mass() const { return mass_; }
    double v_star() const { return v_star_; }
    double dt() const { return dt_; }
    std::size_t steps() const { return steps_; }
    double time_at(std::size_t step) const { return dt_ * static_cast<double>(step); }
    double horizon() const { return time_at(steps_); }

    const std::vector<double>& output_times() const { return output_times_; }
    const std::vector<std::size_t>& output_steps() const { return output_steps_; }

    const Field& u0_at_step(std::size_t step) const { return u0_hist_[step]; }
    const Field& v0_at_step(std::size_t step) const { return v0_hist_[step]; }
    const Field& u0_at_output(std::size_t k) const { return u0_hist_[output_steps_[k]]; }
    const Field& v0_at_output(std::size_t k) const { return v0_hist_[output_steps_[k]]; }
    Field phi0_at_output(std::size_t k) const;
    /// Accumulated trapezoid integral of u^{I,0} in time, at output time k.
    const Field& int_u_at_output(std::size_t k) const { return int_u_out_[k]; }

    bool has_outer1() const { return has_outer1_; }
    const Field& phi1_at_output(std::size_t k) const { return phi1_out_[k]; }
    const Field& v1_at_output(std::size_t k) const { return v1_out_[k]; }

    const WallTraces& left() const { return left_; }
    const WallTraces& right() const { return right_; }

    /// Linear interpolation of a trace series at an arbitrary time.
    double trace_at(const std::vector<double>& series, double t) const;

    double mass_drift_rel() const { return mass_drift_rel_; }
    double u0_min_seen() const { return u0_min_seen_; }
    double v0_max_seen() const { return v0_max_seen_; }
    /// max residual of v^{I,0} = v0 exp(-int u^{I,0}) at the output times
    double exp_identity_residual() const { return exp_identity_residual_; }

private:
    friend OuterProfiles solve_outer0(const ModelParams&, const IntervalGrid&,
                                      const InitialData&, double, std::size_t,
                                      const std::vector<double>&, int);
    friend void solve_outer1(OuterProfiles&, const std::vector<double>&,
                             const std::vector<double>&);

    IntervalGrid grid_;
    double mass_, v_star_, dt_;
    std::size_t steps_;
    std::vector<double> output_times_;
    std::vector<std::size_t> output_steps_;

    std::vector<Field> u0_hist_, v0_hist_;
    std::vector<Field> int_u_out_;
    std::vector<Field> phi1_out_, v1_out_;
    WallTraces left_, right_;
    bool has_outer1_ = false;

    double mass_drift_rel_ = 0.0;
    double u0_min_seen_ = 0.0;
    double v0_max_seen_ = 0.0;
    double exp_identity_residual_ = 0.0;
};

/// Leading outer problem: u from the conservative flux form, v by the exact
/// exponential integrator with midpoint u. eps is ignored. Aborts on negative
/// u beyond tolerance (Lemma 3.1 violation) or nonfinite values.
OuterProfiles solve_outer0(const ModelParams& params, const IntervalGrid& grid,
                           const InitialData& data, double dt, std::size_t steps,
                           const std::vector<double>& output_times, int time_order = 2);

/// First-order outer problem on top of outer0. The Dirichlet data are the
/// *true* layer traces phi^{B,1}(0,t) (left) and phi^{b,1}(0,t) (right),
/// sampled on the same step mesh; the boundary condition imposed is
/// phi^{I,1}(wall,t) = -trace.
void solve_outer1(OuterProfiles& outer, const std::vector<double>& phi1_trace_left_true,
                  const std::vector<double>& phi1_trace_right_true);

}  // namespace layerlab
