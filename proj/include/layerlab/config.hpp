#pragma once

#include <string>
#include <vector>

#include "layerlab/analysis.hpp"

namespace layerlab {

/// Fully-resolved run configuration; every field has a documented default and
/// unknown keys are rejected with their line number.
struct RunConfig {
    // model
    std::vector<double> epsilon_list{1.0 / 64,   1.0 / 128,  1.0 / 256,  1.0 / 512, 1.0 / 1024,
                                     1.0 / 2048, 1.0 / 4096, 1.0 / 8192, 1.0 / 16384};
    double v_star = 1.0;
    double horizon = 0.25;
    std::string preset = "paper_poly8";
    std::string u0_file, v0_file;  // tabulated data override the preset
    double constant_value = 1.0;

    // grid
    double dx_divisor = 16.0;
    unsigned n_cap_log2 = 15;
    double z_max = 32.0;
    std::size_t m_layer = 2048;
    std::size_t n_profile = 2048;

    // time
    std::size_t profile_steps = 2000;
    std::size_t layer_substeps = 8;
    double cfl_factor = 0.4;
    double transport_safety = 1.0;
    double max_step_fraction = 2000.0;
    int full_time_order = 1;
    std::vector<double> output_times;  // default: five even samples of (0, T]

    // layer
    int layer_order = 2;

    // analysis
    double thickness_threshold = 0.1;
    double interior_delta = 0.25;
    double slope_floor_v = 0.45;
    double slope_floor_u = 0.20;
    double r2_floor = 0.95;
    double thickness_band_lo = 0.4;
    double thickness_band_hi = 0.6;
    double solver_tolerance = 1e-9;
    bool hard_resolution_guard = false;

    // output
    std::string output_dir = "out";
    bool write_trajectories = false;
    bool write_profiles = false;

    std::vector<double> resolved_output_times() const;
    SweepPlan to_sweep_plan() const;
    ModelParams to_model_params() const;

    /// Serialize back to the section.key = value text form (re-parseable).
    std::string echo() const;
};

/// Parse the text config (section.key = value, '#' comments). Errors carry
/// the offending line number. An empty path or empty file yields defaults.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

}  // namespace layerlab
