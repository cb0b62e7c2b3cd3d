#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "layerlab/expansion.hpp"
#include "layerlab/grids.hpp"
#include "layerlab/interval_solvers.hpp"
#include "layerlab/layer_solvers.hpp"
#include "layerlab/model.hpp"

namespace layerlab {

/// The eps-sweep: strictly decreasing epsilons, per-eps grid resolution from
/// dx <= sqrt(eps)/dx_divisor rounded up to a power of two, shared model and
/// profile discretization.
struct SweepPlan {
    std::vector<double> epsilons{1.0 / 64,   1.0 / 128,  1.0 / 256,  1.0 / 512, 1.0 / 1024,
                                 1.0 / 2048, 1.0 / 4096, 1.0 / 8192, 1.0 / 16384};
    ModelParams params;

    // 16 points per sqrt(eps): satisfies the dx <= sqrt(eps)/8 guard with a
    // factor-2 margin so the power-of-two quantization of n does not leave a
    // resolution sawtooth on top of the fine-eps remainders
    double dx_divisor = 16.0;
    std::size_t n_cap = std::size_t{1} << 15;

    std::size_t n_profile = 2048;
    std::size_t profile_steps = 2000;
    std::size_t m_layer = 2048;
    double z_max = 32.0;
    std::size_t layer_substeps = 8;
    int layer_order = 2;  // 0: leading profile, 1: + phi^{B,1}, 2: + (v^{B,1}, phi^{B,2})

    std::vector<double> output_times{0.05, 0.10, 0.15, 0.20, 0.25};
    TimeStepper full_stepper{};

    double thickness_threshold = 0.1;
    double interior_delta = 0.25;
    double solver_tolerance = 1e-9;

    bool hard_resolution_guard = false;

    void validate() const;
    std::size_t resolve_n(double epsilon) const;  // 0 when the cap is exceeded
};

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;  // in ln-space
    double r_squared = 0.0;
    std::size_t points_used = 0;
    bool valid = false;
    std::string note;
};

/// Least-squares line through (log eps, log err); the slope is the empirical
/// convergence rate. Nonpositive errors are excluded with a warning.
FitResult fit_rate(const std::vector<double>& eps, const std::vector<double>& err);

struct ThicknessResult {
    double left = 0.0, right = 0.0;
    bool left_defined = false, right_defined = false;
};

/// Smallest x with |v_full - v_outer|(x) <= threshold_fraction * wall value
/// (mirrored on the right); linear interpolation between bracketing nodes.
/// Undefined when the wall amplitude is below 10x the solver tolerance.
ThicknessResult measure_thickness(const Field& v_full, const Field& v_outer,
                                  const IntervalGrid& grid, double threshold_fraction,
                                  double solver_tolerance);

/// Max over the full-solve step times of
/// |u^eps(0,t) - u^{I,0}(0,t) exp(v_star - v^{I,0}(0,t))|.
double boundary_value_residual(const FullSolveResult& full, const OuterProfiles& outer,
                               double v_star);

struct InteriorGap {
    double interior_sup_u = 0.0, full_sup_u = 0.0;
    double interior_sup_v = 0.0, full_sup_v = 0.0;
};

/// Sup-differences |u^eps - u^{I,0}|, |v^eps - v^{I,0}| over [delta, 1-delta]
/// and over the whole interval, max over output times.
InteriorGap interior_check(const std::vector<StateUV>& full,
                           const std::vector<Field>& u_outer_on_grid,
                           const std::vector<Field>& v_outer_on_grid, const IntervalGrid& grid,
                           double delta);

struct BatteryEntry {
    std::string name;
    double residual = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct EpsRecord {
    double epsilon = 0.0;
    std::size_t n = 0;
    double dt = 0.0;
    double Eu = 0.0, Ev = 0.0, Ephi = 0.0, Ephi_x = 0.0;
    double Ephi_order0 = 0.0;
    double thickness_left = 0.0, thickness_right = 0.0;
    bool thickness_defined = false;
    double boundary_residual = 0.0;
    InteriorGap gap;
    double mass_drift = 0.0;
    double assembly_boundary_residual = 0.0;  // max |V^A(0/1)-v_*|, |Phi^A(0/1)|
};

struct ConvergenceReport {
    std::vector<EpsRecord> entries;
    FitResult fit_Ev, fit_Eu, fit_Ephi, fit_boundary;
    FitResult fit_thickness_left, fit_thickness_right;
    std::vector<BatteryEntry> battery;
    bool degenerate_mode = false;  // v_star == 0, layer-free
    bool complete = false;
    double outer_wall_v_T = 0.0;  // v^{I,0}(0,T) from the run's own outer trace
    std::vector<std::string> warnings;
    bool battery_pass() const;
};

/// Profile bundle shared across the sweep (computed once, eps-independent).
struct ProfileSet {
    IntervalGrid grid;
    InitialData data;
    OuterProfiles outer;
    LayerProfiles left, right;
    LayerTraces traces_left, traces_right;
};

ProfileSet build_profiles(const SweepPlan& plan);

/// Invariant battery over the profile set and per-eps artifacts. The mirror
/// entry is only meaningful for initial data symmetric about x = 1/2.
std::vector<BatteryEntry> invariant_battery(const ProfileSet& profiles, double v_star,
                                            const std::vector<EpsRecord>& entries,
                                            const std::vector<FullSolveResult>& full_stats,
                                            bool symmetric_data = false);

ConvergenceReport run_sweep(const SweepPlan& plan);

}  // namespace layerlab
