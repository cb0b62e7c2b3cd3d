#pragma once

#include <cstddef>
#include <vector>

#include "layerlab/grids.hpp"
#include "layerlab/interval_solvers.hpp"

namespace layerlab {

enum class Side { left, right };

/// Wall trace set feeding one half-line hierarchy, already mapped to the
/// canonical (left-form) variable. For the right wall the problems are posed
/// in the reflected variable s = -xi; that reflection flips the sign of the
/// odd-order x-derivative traces and of every phi-type layer field.
struct LayerTraces {
    std::vector<double> a;  // phi_x^{I,0}(wall,t) + M  == u^{I,0}(wall,t)
    std::vector<double> b;  // v^{I,0}(wall,t)
    std::vector<double> c;  // v_x^{I,0}(wall,t)   (sign-flipped on the right)
    std::vector<double> d;  // phi_xx^{I,0}(wall,t) (sign-flipped on the right)
    std::vector<double> e;  // phi_x^{I,1}(wall,t)
    std::vector<double> f;  // v^{I,1}(wall,t)
};

LayerTraces canonical_traces(const OuterProfiles& outer, Side side, bool with_outer1);

/// Half-line layer profiles in canonical (left-form) storage. v-type fields
/// are the true profiles; phi-type fields must be multiplied by phi_sign()
/// to obtain the true phi^{b,j} values on the right side.
class LayerProfiles {
public:
    LayerProfiles(Side side, const HalfLineGrid& grid, double dt, std::size_t steps,
                  std::vector<double> output_times, std::vector<std::size_t> output_steps);

    Side side() const { return side_; }
    /// computed depth: 0 after the leading solve, 1 once phi^{B,1} is in,
    /// 2 once the second-order pair is in; -1 before any solve
    double phi_sign() const { return side_ == Side::left ? 1.0 : -1.0; }
    const HalfLineGrid& grid() const { return grid_; }
    double dt() const { return dt_; }
    std::size_t steps() const { return steps_; }
    const std::vector<double>& output_times() const { return output_times_; }
    const std::vector<std::size_t>& output_steps() const { return output_steps_; }

    int order() const { return order_; }

    const Field& v0_at_step(std::size_t s) const { return v0_hist_[s]; }
    const Field& v0_at_output(std::size_t k) const { return v0_hist_[output_steps_[k]]; }
    const Field& phi1_at_output(std::size_t k) const { return phi1_out_[k]; }
    const Field& v1_at_output(std::size_t k) const { return v1_out_[k]; }
    const Field& phi2_at_output(std::size_t k) const { return phi2_out_[k]; }

    /// canonical phi^{B,1}(0,t) per step
    const std::vector<double>& phi1_trace() const { return phi1_trace_; }
    /// true phi^{B,1}(0,t) (resp. phi^{b,1}(0,t)) per step
    std::vector<double> phi1_trace_true() const;
    const std::vector<double>& phi2_trace() const { return phi2_trace_; }
    const std::vector<double>& v0_trace() const { return v0_trace_; }
    const std::vector<double>& v1_trace() const { return v1_trace_; }

    double v0_min_seen() const { return v0_min_seen_; }
    double v0_max_seen() const { return v0_max_seen_; }

private:
    friend LayerProfiles solve_layer_v0(Side, const OuterProfiles&, const HalfLineGrid&,
                                        double v_star, std::size_t substeps);
    friend void compute_phi1_layer(LayerProfiles&, const LayerTraces&, const QuadratureRule&);
    friend void solve_layer_order2(LayerProfiles&, const LayerTraces&, std::size_t substeps);

    Side side_;
    HalfLineGrid grid_;
    double dt_;
    std::size_t steps_;
    std::vector<double> output_times_;
    std::vector<std::size_t> output_steps_;
    int order_ = -1;

    std::vector<Field> v0_hist_;
    std::vector<Field> phi1_out_, v1_out_, phi2_out_;
    std::vector<double> v0_trace_, phi1_trace_, v1_trace_, phi2_trace_;
    double v0_min_seen_ = 0.0, v0_max_seen_ = 0.0;
};

/// Leading layer profile v^{B,0} (resp. v^{b,0} in the reflected variable):
/// implicit diffusion, semi-implicit reaction with the exponential factor
/// lagged; Dirichlet v_star - v^{I,0}(wall,t) at the wall and homogeneous
/// Dirichlet at the truncation radius. Sub-steps the shared profile mesh.
LayerProfiles solve_layer_v0(Side side, const OuterProfiles& outer, const HalfLineGrid& grid,
                             double v_star, std::size_t substeps = 8);

/// phi^{B,1} from the leading profile by tail quadrature; fills the fields at
/// the output times and the wall trace series at every step.
void compute_phi1_layer(LayerProfiles& layer, const LayerTraces& traces,
                        const QuadratureRule& rule = {});

/// Closed-form leading u-layer at output time k:
/// u^{B,0}(z,t) = (phi_x^{I,0}(wall,t)+M)(e^{v^{B,0}} - 1). Identical in the
/// reflected right variable (no sign flip).
Field compute_u_layer(const LayerProfiles& layer, const LayerTraces& traces, std::size_t k);

/// Second-order pair (v^{B,1}, phi^{B,2}) via the reformulated system: with
/// phi^{B,1} given by its tail formula, (a + phi_z^{B,1}) e^{-v^{B,0}} == a,
/// so the nonlocal kernel of the v^{B,1} evolution vanishes identically and
/// each step is one tridiagonal solve plus tail quadratures of known fields.
void solve_layer_order2(LayerProfiles& layer, const LayerTraces& traces,
                        std::size_t substeps = 8);

}  // namespace layerlab
