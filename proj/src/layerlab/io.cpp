#include "layerlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace layerlab {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string report_csv(const ConvergenceReport& report) {
    std::ostringstream o;
    o << "epsilon,n,E_u,E_v,E_phi,thickness_left,thickness_right,boundary_residual\n";
    for (const auto& e : report.entries) {
        o << format_g17(e.epsilon) << ',' << e.n << ',' << format_g17(e.Eu) << ','
          << format_g17(e.Ev) << ',' << format_g17(e.Ephi) << ','
          << (e.thickness_defined ? format_g17(e.thickness_left) : "nan") << ','
          << (e.thickness_defined ? format_g17(e.thickness_right) : "nan") << ','
          << format_g17(e.boundary_residual) << '\n';
    }
    return o.str();
}

namespace {

nlohmann::json fit_json(const FitResult& f) {
    nlohmann::json j;
    j["valid"] = f.valid;
    if (f.valid) {
        j["slope"] = f.slope;
        j["intercept"] = f.intercept;
        j["r_squared"] = f.r_squared;
    }
    j["points_used"] = f.points_used;
    if (!f.note.empty()) j["note"] = f.note;
    return j;
}

}  // namespace

std::string report_json(const ConvergenceReport& report) {
    nlohmann::json j;
    j["complete"] = report.complete;
    j["degenerate_mode"] = report.degenerate_mode;
    j["fits"]["E_v"] = fit_json(report.fit_Ev);
    j["fits"]["E_u"] = fit_json(report.fit_Eu);
    j["fits"]["E_phi"] = fit_json(report.fit_Ephi);
    j["fits"]["boundary_residual"] = fit_json(report.fit_boundary);
    j["fits"]["thickness_left"] = fit_json(report.fit_thickness_left);
    j["fits"]["thickness_right"] = fit_json(report.fit_thickness_right);

    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : report.entries) {
        nlohmann::json je;
        je["epsilon"] = e.epsilon;
        je["n"] = e.n;
        je["dt"] = e.dt;
        je["E_u"] = e.Eu;
        je["E_v"] = e.Ev;
        je["E_phi"] = e.Ephi;
        je["E_phi_x"] = e.Ephi_x;
        je["E_phi_order0"] = e.Ephi_order0;
        je["thickness_defined"] = e.thickness_defined;
        if (e.thickness_defined) {
            je["thickness_left"] = e.thickness_left;
            je["thickness_right"] = e.thickness_right;
        }
        je["boundary_residual"] = e.boundary_residual;
        je["interior_sup_v"] = e.gap.interior_sup_v;
        je["full_sup_v"] = e.gap.full_sup_v;
        je["interior_sup_u"] = e.gap.interior_sup_u;
        je["full_sup_u"] = e.gap.full_sup_u;
        je["mass_drift"] = e.mass_drift;
        je["assembly_boundary_residual"] = e.assembly_boundary_residual;
        entries.push_back(je);
    }
    j["entries"] = entries;

    nlohmann::json battery = nlohmann::json::array();
    for (const auto& b : report.battery) {
        nlohmann::json jb;
        jb["name"] = b.name;
        jb["residual"] = b.residual;
        jb["threshold"] = b.threshold;
        jb["pass"] = b.pass;
        battery.push_back(jb);
    }
    j["battery"] = battery;
    j["battery_pass"] = report.battery_pass();
    j["warnings"] = report.warnings;
    return j.dump(2) + "\n";
}

std::string columnar_trajectory(const std::vector<StateUV>& snapshots, const IntervalGrid& grid) {
    std::ostringstream o;
    o << "t x u v\n";
    for (const auto& s : snapshots)
        for (std::size_t i = 0; i < grid.node_count(); ++i)
            o << format_g17(s.t) << ' ' << format_g17(grid.node(i)) << ' '
              << format_g17(s.u[i]) << ' ' << format_g17(s.v[i]) << '\n';
    return o.str();
}

std::string columnar_outer(const OuterProfiles& outer) {
    std::ostringstream o;
    const bool with1 = outer.has_outer1();
    o << (with1 ? "t x u0 v0 phi0 phi1 v1\n" : "t x u0 v0 phi0\n");
    for (std::size_t k = 0; k < outer.output_times().size(); ++k) {
        const Field phi0 = outer.phi0_at_output(k);
        for (std::size_t i = 0; i < outer.grid().node_count(); ++i) {
            o << format_g17(outer.output_times()[k]) << ' '
              << format_g17(outer.grid().node(i)) << ' '
              << format_g17(outer.u0_at_output(k)[i]) << ' '
              << format_g17(outer.v0_at_output(k)[i]) << ' ' << format_g17(phi0[i]);
            if (with1)
                o << ' ' << format_g17(outer.phi1_at_output(k)[i]) << ' '
                  << format_g17(outer.v1_at_output(k)[i]);
            o << '\n';
        }
    }
    return o.str();
}

std::string columnar_layer(const LayerProfiles& layer) {
    std::ostringstream o;
    const bool with1 = layer.order() >= 1;
    const bool with2 = layer.order() >= 2;
    o << (with2 ? "t z v0 phi1 v1 phi2\n" : with1 ? "t z v0 phi1\n" : "t z v0\n");
    const double sgn = layer.phi_sign();
    for (std::size_t k = 0; k < layer.output_times().size(); ++k) {
        for (std::size_t i = 0; i < layer.grid().node_count(); ++i) {
            o << format_g17(layer.output_times()[k]) << ' ' << format_g17(layer.grid().node(i))
              << ' ' << format_g17(layer.v0_at_output(k)[i]);
            if (with1) o << ' ' << format_g17(sgn * layer.phi1_at_output(k)[i]);
            if (with2)
                o << ' ' << format_g17(layer.v1_at_output(k)[i]) << ' '
                  << format_g17(sgn * layer.phi2_at_output(k)[i]);
            o << '\n';
        }
    }
    return o.str();
}

std::string columnar_assembly(const Assembly& assembly, const IntervalGrid& grid) {
    std::ostringstream o;
    o << "t x u_app v_app phi_app\n";
    for (std::size_t k = 0; k < assembly.times.size(); ++k)
        for (std::size_t i = 0; i < grid.node_count(); ++i)
            o << format_g17(assembly.times[k]) << ' ' << format_g17(grid.node(i)) << ' '
              << format_g17(assembly.u_app[k][i]) << ' ' << format_g17(assembly.v_app[k][i])
              << ' ' << format_g17(assembly.phi_app[k][i]) << '\n';
    return o.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

}  // namespace layerlab
