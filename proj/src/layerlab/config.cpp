#include "layerlab/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace layerlab {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw std::runtime_error("config line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& v, std::size_t line) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) fail(line, "trailing characters in numeric value '" + v + "'");
        return d;
    } catch (const std::invalid_argument&) {
        fail(line, "expected a number, got '" + v + "'");
    } catch (const std::out_of_range&) {
        fail(line, "number out of range: '" + v + "'");
    }
}

std::size_t parse_size(const std::string& v, std::size_t line) {
    const double d = parse_double(v, line);
    if (d < 0 || d != static_cast<double>(static_cast<std::size_t>(d)))
        fail(line, "expected a nonnegative integer, got '" + v + "'");
    return static_cast<std::size_t>(d);
}

bool parse_bool(const std::string& v, std::size_t line) {
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    fail(line, "expected a boolean, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& v, std::size_t line) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) fail(line, "empty entry in list");
        out.push_back(parse_double(item, line));
    }
    if (out.empty()) fail(line, "empty list");
    return out;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += fmt17(v[i]);
    }
    return s;
}

}  // namespace

std::vector<double> RunConfig::resolved_output_times() const {
    if (!output_times.empty()) return output_times;
    std::vector<double> t;
    for (int k = 1; k <= 5; ++k) t.push_back(horizon * static_cast<double>(k) / 5.0);
    return t;
}

ModelParams RunConfig::to_model_params() const {
    ModelParams p;
    p.v_star = v_star;
    p.horizon = horizon;
    if (!u0_file.empty() || !v0_file.empty()) {
        if (u0_file.empty() || v0_file.empty())
            throw std::runtime_error("tabulated data need both model.u0_file and model.v0_file");
        p.initial_data.kind = InitialDataSpec::Kind::tabulated;
        p.initial_data.u0_path = u0_file;
        p.initial_data.v0_path = v0_file;
    } else {
        p.initial_data.kind = InitialDataSpec::Kind::preset;
        p.initial_data.preset = preset;
        p.initial_data.constant_value = constant_value;
    }
    return p;
}

SweepPlan RunConfig::to_sweep_plan() const {
    SweepPlan plan;
    plan.epsilons = epsilon_list;
    plan.params = to_model_params();
    plan.dx_divisor = dx_divisor;
    plan.n_cap = std::size_t{1} << n_cap_log2;
    plan.n_profile = n_profile;
    plan.profile_steps = profile_steps;
    plan.m_layer = m_layer;
    plan.z_max = z_max;
    plan.layer_substeps = layer_substeps;
    plan.output_times = resolved_output_times();
    plan.full_stepper.cfl_factor = cfl_factor;
    plan.full_stepper.transport_safety = transport_safety;
    plan.full_stepper.max_step_fraction = max_step_fraction;
    plan.full_stepper.time_order = full_time_order;
    plan.layer_order = layer_order;
    plan.thickness_threshold = thickness_threshold;
    plan.interior_delta = interior_delta;
    plan.solver_tolerance = solver_tolerance;
    plan.hard_resolution_guard = hard_resolution_guard;
    return plan;
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::stringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    bool saw_output_times = false;

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        if (const auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(lineno, "expected 'section.key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) fail(lineno, "empty key or value");

        if (key == "model.epsilon_list") cfg.epsilon_list = parse_list(val, lineno);
        else if (key == "model.v_star") cfg.v_star = parse_double(val, lineno);
        else if (key == "model.T") cfg.horizon = parse_double(val, lineno);
        else if (key == "model.preset") cfg.preset = val;
        else if (key == "model.u0_file") cfg.u0_file = val;
        else if (key == "model.v0_file") cfg.v0_file = val;
        else if (key == "model.constant_value") cfg.constant_value = parse_double(val, lineno);
        else if (key == "grid.dx_divisor") cfg.dx_divisor = parse_double(val, lineno);
        else if (key == "grid.n_cap_log2") cfg.n_cap_log2 = static_cast<unsigned>(parse_size(val, lineno));
        else if (key == "grid.z_max") cfg.z_max = parse_double(val, lineno);
        else if (key == "grid.m") cfg.m_layer = parse_size(val, lineno);
        else if (key == "grid.n_profile") cfg.n_profile = parse_size(val, lineno);
        else if (key == "time.profile_steps") cfg.profile_steps = parse_size(val, lineno);
        else if (key == "time.layer_substeps") cfg.layer_substeps = parse_size(val, lineno);
        else if (key == "time.cfl_factor") cfg.cfl_factor = parse_double(val, lineno);
        else if (key == "time.transport_safety") cfg.transport_safety = parse_double(val, lineno);
        else if (key == "time.max_step_fraction") cfg.max_step_fraction = parse_double(val, lineno);
        else if (key == "time.full_order") cfg.full_time_order = static_cast<int>(parse_size(val, lineno));
        else if (key == "time.output_times") { cfg.output_times = parse_list(val, lineno); saw_output_times = true; }
        else if (key == "layer.order") cfg.layer_order = static_cast<int>(parse_size(val, lineno));
        else if (key == "analysis.thickness_threshold") cfg.thickness_threshold = parse_double(val, lineno);
        else if (key == "analysis.delta") cfg.interior_delta = parse_double(val, lineno);
        else if (key == "analysis.slope_floor_v") cfg.slope_floor_v = parse_double(val, lineno);
        else if (key == "analysis.slope_floor_u") cfg.slope_floor_u = parse_double(val, lineno);
        else if (key == "analysis.r2_floor") cfg.r2_floor = parse_double(val, lineno);
        else if (key == "analysis.thickness_band_lo") cfg.thickness_band_lo = parse_double(val, lineno);
        else if (key == "analysis.thickness_band_hi") cfg.thickness_band_hi = parse_double(val, lineno);
        else if (key == "analysis.solver_tol") cfg.solver_tolerance = parse_double(val, lineno);
        else if (key == "analysis.hard_resolution_guard") cfg.hard_resolution_guard = parse_bool(val, lineno);
        else if (key == "output.dir") cfg.output_dir = val;
        else if (key == "output.write_trajectories") cfg.write_trajectories = parse_bool(val, lineno);
        else if (key == "output.write_profiles") cfg.write_profiles = parse_bool(val, lineno);
        else fail(lineno, "unknown key '" + key + "'");

        // constraint checks with the line still at hand
        if (key == "model.v_star" && cfg.v_star < 0.0) fail(lineno, "model.v_star must be >= 0");
        if (key == "model.T" && cfg.horizon <= 0.0) fail(lineno, "model.T must be > 0");
        if (key == "model.epsilon_list")
            for (double e : cfg.epsilon_list)
                if (e < 0.0) fail(lineno, "epsilons must be >= 0");
        if (key == "grid.z_max" && cfg.z_max < 28.0) fail(lineno, "grid.z_max below decay budget (28)");
        if (key == "grid.dx_divisor" && cfg.dx_divisor <= 0.0) fail(lineno, "grid.dx_divisor must be > 0");
        if (key == "time.full_order" && (cfg.full_time_order < 1 || cfg.full_time_order > 2))
            fail(lineno, "time.full_order must be 1 or 2");
        if (key == "layer.order" && (cfg.layer_order != 0 && cfg.layer_order != 1 && cfg.layer_order != 2))
            fail(lineno, "layer.order must be 0, 1 or 2");
        if (key == "analysis.thickness_threshold" &&
            (cfg.thickness_threshold <= 0.0 || cfg.thickness_threshold >= 1.0))
            fail(lineno, "analysis.thickness_threshold must lie in (0,1)");
        if (key == "analysis.delta" && (cfg.interior_delta <= 0.0 || cfg.interior_delta >= 0.5))
            fail(lineno, "analysis.delta must lie in (0, 1/2)");
    }
    if (saw_output_times)
        for (double t : cfg.output_times)
            if (t <= 0.0 || t > cfg.horizon + 1e-12)
                throw std::runtime_error("config: output times must lie in (0, T]");
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    if (path.empty()) return RunConfig{};
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string RunConfig::echo() const {
    std::ostringstream o;
    o << "# layerlab effective configuration\n";
    o << "model.epsilon_list = " << fmt_list(epsilon_list) << "\n";
    o << "model.v_star = " << fmt17(v_star) << "\n";
    o << "model.T = " << fmt17(horizon) << "\n";
    if (!u0_file.empty()) {
        o << "model.u0_file = " << u0_file << "\n";
        o << "model.v0_file = " << v0_file << "\n";
    } else {
        o << "model.preset = " << preset << "\n";
        if (preset == "constant") o << "model.constant_value = " << fmt17(constant_value) << "\n";
    }
    o << "grid.dx_divisor = " << fmt17(dx_divisor) << "\n";
    o << "grid.n_cap_log2 = " << n_cap_log2 << "\n";
    o << "grid.z_max = " << fmt17(z_max) << "\n";
    o << "grid.m = " << m_layer << "\n";
    o << "grid.n_profile = " << n_profile << "\n";
    o << "time.profile_steps = " << profile_steps << "\n";
    o << "time.layer_substeps = " << layer_substeps << "\n";
    o << "time.cfl_factor = " << fmt17(cfl_factor) << "\n";
    o << "time.transport_safety = " << fmt17(transport_safety) << "\n";
    o << "time.max_step_fraction = " << fmt17(max_step_fraction) << "\n";
    o << "time.full_order = " << full_time_order << "\n";
    o << "time.output_times = " << fmt_list(resolved_output_times()) << "\n";
    o << "layer.order = " << layer_order << "\n";
    o << "analysis.thickness_threshold = " << fmt17(thickness_threshold) << "\n";
    o << "analysis.delta = " << fmt17(interior_delta) << "\n";
    o << "analysis.slope_floor_v = " << fmt17(slope_floor_v) << "\n";
    o << "analysis.slope_floor_u = " << fmt17(slope_floor_u) << "\n";
    o << "analysis.r2_floor = " << fmt17(r2_floor) << "\n";
    o << "analysis.thickness_band_lo = " << fmt17(thickness_band_lo) << "\n";
    o << "analysis.thickness_band_hi = " << fmt17(thickness_band_hi) << "\n";
    o << "analysis.solver_tol = " << fmt17(solver_tolerance) << "\n";
    o << "analysis.hard_resolution_guard = " << (hard_resolution_guard ? "true" : "false") << "\n";
    o << "output.dir = " << output_dir << "\n";
    o << "output.write_trajectories = " << (write_trajectories ? "true" : "false") << "\n";
    o << "output.write_profiles = " << (write_profiles ? "true" : "false") << "\n";
    return o.str();
}

}  // namespace layerlab
