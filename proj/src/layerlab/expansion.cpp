#include "layerlab/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace layerlab {

CorrectorPair build_correctors(const LayerProfiles& left, const LayerProfiles& right,
                               double epsilon) {
    if (left.order() < 2 || right.order() < 2)
        throw std::invalid_argument("correctors need the order-2 layer profiles");
    if (epsilon <= 0.0) throw std::invalid_argument("correctors need eps > 0");

    const double sq = std::sqrt(epsilon);
    const double far = 1.0 / sq;
    const std::size_t nk = left.output_steps().size();

    CorrectorPair cp;
    cp.phi_const.resize(nk);
    cp.phi_slope.resize(nk);
    cp.v_const.resize(nk);
    cp.v_slope.resize(nk);

    for (std::size_t k = 0; k < nk; ++k) {
        const std::size_t sL = left.output_steps()[k];
        const std::size_t sR = right.output_steps()[k];

        // true right-side phi values carry the reflection sign
        const double phi_b1_far = right.phi_sign() * right.grid().sample(right.phi1_at_output(k), far);
        const double phi_b2_far = right.phi_sign() * right.grid().sample(right.phi2_at_output(k), far);
        const double phi_b2_wall = right.phi_sign() * right.phi2_trace()[sR];
        const double phi_B1_far = left.grid().sample(left.phi1_at_output(k), far);
        const double phi_B2_far = left.grid().sample(left.phi2_at_output(k), far);
        const double phi_B2_wall = left.phi2_trace()[sL];

        const double A = sq * phi_b1_far + epsilon * phi_b2_far + epsilon * phi_B2_wall;
        const double B = sq * phi_B1_far + epsilon * phi_B2_far + epsilon * phi_b2_wall;
        // b_phi(x) = -(1-x) A - x B
        cp.phi_const[k] = -A;
        cp.phi_slope[k] = A - B;

        const double v_b0_far = right.grid().sample(right.v0_at_output(k), far);
        const double v_b1_far = right.grid().sample(right.v1_at_output(k), far);
        const double v_B0_far = left.grid().sample(left.v0_at_output(k), far);
        const double v_B1_far = left.grid().sample(left.v1_at_output(k), far);

        const double C = v_b0_far + sq * v_b1_far;
        const double D = v_B0_far + sq * v_B1_far;
        // b_v(x) = (x-1) C - x D
        cp.v_const[k] = -C;
        cp.v_slope[k] = C - D;
    }
    return cp;
}

Field restrict_to_grid(const Field& f, const IntervalGrid& from, const IntervalGrid& to) {
    if (!from.uniform() || !to.uniform())
        throw std::invalid_argument("grid restriction implemented for uniform grids");
    const std::size_t np = from.cell_count();
    const std::size_t n = to.cell_count();
    Field out(n + 1);
    if (np % n == 0) {
        const std::size_t stride = np / n;
        for (std::size_t i = 0; i <= n; ++i) out[i] = f[i * stride];
        return out;
    }
    // 4-point Lagrange interpolation on the uniform source grid
    const double h = from.spacing(0);
    for (std::size_t i = 0; i <= n; ++i) {
        const double x = to.node(i);
        double r = x / h;
        auto j = static_cast<std::ptrdiff_t>(std::floor(r));
        j = std::clamp<std::ptrdiff_t>(j - 1, 0, static_cast<std::ptrdiff_t>(np) - 3);
        const double s = r - static_cast<double>(j);
        const double w0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
        const double w1 = s * (s - 2.0) * (s - 3.0) / 2.0;
        const double w2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
        const double w3 = s * (s - 1.0) * (s - 2.0) / 6.0;
        out[i] = w0 * f[j] + w1 * f[j + 1] + w2 * f[j + 2] + w3 * f[j + 3];
    }
    return out;
}

Assembly assemble(AssemblyOrder order, const OuterProfiles& outer, const LayerProfiles& left,
                  const LayerProfiles& right, const CorrectorPair* correctors, double epsilon,
                  const IntervalGrid& grid) {
    if (epsilon <= 0.0) throw std::invalid_argument("assembly needs eps > 0");
    if (order == AssemblyOrder::full && correctors == nullptr)
        throw std::invalid_argument("full assembly needs the correctors");
    if (order != AssemblyOrder::order0 &&
        (!outer.has_outer1() || left.order() < 1 || right.order() < 1))
        throw std::invalid_argument("requested assembly order exceeds the computed profiles");
    if (order == AssemblyOrder::full && (left.order() < 2 || right.order() < 2))
        throw std::invalid_argument("requested assembly order exceeds the computed profiles");

    const double sq = std::sqrt(epsilon);
    const std::size_t n = grid.cell_count();
    const std::size_t nk = outer.output_steps().size();

    Assembly as;
    as.order = order;
    as.epsilon = epsilon;
    as.times = outer.output_times();
    as.u_app.assign(nk, Field(n + 1, 0.0));
    as.v_app.assign(nk, Field(n + 1, 0.0));
    as.phi_app.assign(nk, Field(n + 1, 0.0));

    const LayerTraces trL{outer.left().u, outer.left().v, {}, {}, {}, {}};
    const LayerTraces trR{outer.right().u, outer.right().v, {}, {}, {}, {}};

    for (std::size_t k = 0; k < nk; ++k) {
        const Field u0 = restrict_to_grid(outer.u0_at_output(k), outer.grid(), grid);
        const Field v0 = restrict_to_grid(outer.v0_at_output(k), outer.grid(), grid);
        const Field phi0 = restrict_to_grid(outer.phi0_at_output(k), outer.grid(), grid);

        Field phi1, v1;
        if (order != AssemblyOrder::order0) {
            phi1 = restrict_to_grid(outer.phi1_at_output(k), outer.grid(), grid);
            v1 = restrict_to_grid(outer.v1_at_output(k), outer.grid(), grid);
        }

        const Field uB0_L = compute_u_layer(left, trL, k);
        const Field uB0_R = compute_u_layer(right, trR, k);

        for (std::size_t i = 0; i <= n; ++i) {
            const double x = grid.node(i);
            const double z = x / sq;
            const double s = (1.0 - x) / sq;

            double u = u0[i] + left.grid().sample(uB0_L, z) + right.grid().sample(uB0_R, s);
            double v = v0[i] + left.grid().sample(left.v0_at_output(k), z) +
                       right.grid().sample(right.v0_at_output(k), s);
            double phi = phi0[i];

            if (order != AssemblyOrder::order0) {
                const double phiB1 = left.grid().sample(left.phi1_at_output(k), z);
                const double phib1 =
                    right.phi_sign() * right.grid().sample(right.phi1_at_output(k), s);
                phi += sq * (phi1[i] + phiB1 + phib1);
            }
            if (order == AssemblyOrder::full) {
                const double phiB2 = left.grid().sample(left.phi2_at_output(k), z);
                const double phib2 =
                    right.phi_sign() * right.grid().sample(right.phi2_at_output(k), s);
                phi += epsilon * (phiB2 + phib2) + correctors->b_phi(k, x);
                const double vB1 = left.grid().sample(left.v1_at_output(k), z);
                const double vb1 = right.grid().sample(right.v1_at_output(k), s);
                v += sq * (v1[i] + vB1 + vb1) + correctors->b_v(k, x);
            }

            as.u_app[k][i] = u;
            as.v_app[k][i] = v;
            as.phi_app[k][i] = phi;
        }
    }
    return as;
}

Remainders compute_remainders(const std::vector<StateUV>& full, const Assembly& assembly,
                              const IntervalGrid& grid) {
    if (full.size() != assembly.times.size())
        throw std::invalid_argument("remainders: trajectory/assembly time meshes differ");

    Remainders r;
    for (std::size_t k = 0; k < full.size(); ++k) {
        if (full[k].u.size() != assembly.u_app[k].size())
            throw std::invalid_argument("remainders: grid mismatch");
        // instantaneous quadrature mass, matching the phi^{I,0} convention
        const Field phi_eps =
            antiderivative_transform(grid, full[k].u, integrate(grid, full[k].u));
        double eu = 0.0, ev = 0.0, ep = 0.0;
        for (std::size_t i = 0; i < full[k].u.size(); ++i) {
            eu = std::max(eu, std::abs(full[k].u[i] - assembly.u_app[k][i]));
            ev = std::max(ev, std::abs(full[k].v[i] - assembly.v_app[k][i]));
            ep = std::max(ep, std::abs(phi_eps[i] - assembly.phi_app[k][i]));
        }
        r.Eu_per_time.push_back(eu);
        r.Ev_per_time.push_back(ev);
        r.Ephi_per_time.push_back(ep);
        r.Eu = std::max(r.Eu, eu);
        r.Ev = std::max(r.Ev, ev);
        r.Ephi = std::max(r.Ephi, ep);
    }
    return r;
}

}  // namespace layerlab
