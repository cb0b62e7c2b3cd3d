#pragma once

#include <cstddef>
#include <vector>

#include "layerlab/grids.hpp"
#include "layerlab/interval_solvers.hpp"
#include "layerlab/layer_solvers.hpp"

namespace layerlab {

/// Affine-in-x homogenizing correctors, one coefficient pair per output time:
/// b(x, t_k) = constant[k] + slope[k] * x.
struct CorrectorPair {
    std::vector<double> phi_const, phi_slope;
    std::vector<double> v_const, v_slope;

    double b_phi(std::size_t k, double x) const { return phi_const[k] + phi_slope[k] * x; }
    double b_v(std::size_t k, double x) const { return v_const[k] + v_slope[k] * x; }
};

/// Correctors per the printed affine combinations: far-wall profile
/// evaluations at 1/sqrt(eps) (exactly 0 beyond the truncation radius, by the
/// decay budget) and the second-order phi traces at the near wall.
CorrectorPair build_correctors(const LayerProfiles& left, const LayerProfiles& right,
                               double epsilon);

/// Truncation order of the assembled approximation: order 0 keeps the leading
/// sums, order 1 adds the sqrt(eps) phi-terms, full reproduces the
/// corrector-homogenized approximate solution term for term.
enum class AssemblyOrder { order0, order1, full };

struct Assembly {
    AssemblyOrder order = AssemblyOrder::order0;
    double epsilon = 0.0;
    std::vector<double> times;
    std::vector<Field> u_app, v_app, phi_app;
};

Assembly assemble(AssemblyOrder order, const OuterProfiles& outer, const LayerProfiles& left,
                  const LayerProfiles& right, const CorrectorPair* correctors, double epsilon,
                  const IntervalGrid& grid);

struct Remainders {
    double Eu = 0.0, Ev = 0.0, Ephi = 0.0;
    std::vector<double> Eu_per_time, Ev_per_time, Ephi_per_time;
};

/// Sup-norm remainders over grid nodes and output times; phi^eps is obtained
/// from u^eps by the anti-derivative transform.
Remainders compute_remainders(const std::vector<StateUV>& full, const Assembly& assembly,
                              const IntervalGrid& grid);

/// Outer-profile fields restricted to a (usually finer-epsilon) uniform grid:
/// exact nodal extraction when the profile grid nests the target, cubic
/// interpolation otherwise.
Field restrict_to_grid(const Field& profile_field, const IntervalGrid& profile_grid,
                       const IntervalGrid& target_grid);

}  // namespace layerlab
