#include "layerlab/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace layerlab {

void ModelParams::validate() const {
    if (epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");
    if (v_star < 0.0) throw std::invalid_argument("v_star must be >= 0");
    if (horizon <= 0.0) throw std::invalid_argument("horizon T must be > 0");
}

double CompatibilityReport::max_residual() const {
    double m = 0.0;
    for (std::size_t c = 0; c < condition_count; ++c)
        for (double r : residuals[c]) m = std::max(m, std::abs(r) / scales[c]);
    return m;
}

namespace {

// (x(1-x))^p scaled by amp, expanded exactly.
Poly bump_poly(unsigned p, double amp) {
    const Poly x = Poly::monomial(1);
    const Poly one_minus_x = Poly::constant(1.0) - x;
    Poly b = Poly::constant(amp);
    for (unsigned k = 0; k < p; ++k) b = b * x * one_minus_x;
    return b;
}

// Fields are sampled from the factored closed form: the expanded coefficients
// are large and Horner evaluation near x = 1 would leave cancellation noise
// (including tiny negatives) in a field that is exactly nonnegative.
Field sample_bump(unsigned p, double amp, double offset, const IntervalGrid& grid) {
    Field f(grid.node_count());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double x = grid.node(i);
        f[i] = offset + amp * std::pow(x * (1.0 - x), static_cast<double>(p));
    }
    return f;
}

struct Table {
    std::vector<double> x, y;
};

Table read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open tabulated data file: " + path);
    std::string header;
    std::getline(in, header);  // field-name header line
    Table t;
    double x, y;
    while (in >> x >> y) {
        t.x.push_back(x);
        t.y.push_back(y);
    }
    if (t.x.size() < 2) throw std::runtime_error("tabulated data file too short: " + path);
    for (std::size_t i = 1; i < t.x.size(); ++i)
        if (t.x[i] <= t.x[i - 1])
            throw std::runtime_error("tabulated abscissae must be strictly increasing: " + path);
    return t;
}

Field interp_table(const Table& t, const IntervalGrid& grid) {
    Field f(grid.node_count());
    std::size_t j = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double x = grid.node(i);
        while (j + 2 < t.x.size() && t.x[j + 1] < x) ++j;
        const double w = (x - t.x[j]) / (t.x[j + 1] - t.x[j]);
        f[i] = (1.0 - w) * t.y[j] + w * t.y[j + 1];
    }
    return f;
}

}  // namespace

InitialData build_initial_data(const InitialDataSpec& spec, const ModelParams& params,
                               const IntervalGrid& grid) {
    InitialData data;

    if (spec.kind == InitialDataSpec::Kind::preset) {
        if (spec.preset == "paper_poly8") {
            // unit-peak normalization of the degree-8 bump: (4x(1-x))^8
            data.u0 = sample_bump(8, 65536.0, 0.0, grid);
            data.v0 = sample_bump(6, 1.0, params.v_star, grid);
            data.u0_poly = bump_poly(8, 65536.0);
            data.v0_poly = Poly::constant(params.v_star) + bump_poly(6, 1.0);
        } else if (spec.preset == "paper_poly8_literal") {
            data.u0 = sample_bump(8, 1.0, 0.0, grid);
            data.v0 = sample_bump(6, 1.0, params.v_star, grid);
            data.u0_poly = bump_poly(8, 1.0);
            data.v0_poly = Poly::constant(params.v_star) + bump_poly(6, 1.0);
        } else if (spec.preset == "constant") {
            if (spec.constant_value < 0.0)
                throw std::invalid_argument("constant preset needs a nonnegative value");
            data.u0.assign(grid.node_count(), spec.constant_value);
            data.v0.assign(grid.node_count(), params.v_star);
            data.u0_poly = Poly::constant(spec.constant_value);
            data.v0_poly = Poly::constant(params.v_star);
        } else {
            throw std::invalid_argument("unknown initial-data preset: " + spec.preset);
        }
    } else {
        data.u0 = interp_table(read_table(spec.u0_path), grid);
        data.v0 = interp_table(read_table(spec.v0_path), grid);
    }

    for (double v : data.u0)
        if (v < 0.0) throw std::invalid_argument("initial u0 has negative samples");
    for (double v : data.v0)
        if (v < 0.0) throw std::invalid_argument("initial v0 has negative samples");

    data.mass = integrate(grid, data.u0);
    data.phi0 = antiderivative_transform(grid, data.u0, data.mass);
    return data;
}

namespace {

// The five conditions from the polynomial data. Values at x = 1 are obtained
// from the reflected polynomials evaluated at 0: Horner at 0 reads the
// constant coefficient, which is exact, while direct evaluation of the large
// expanded combinations at x = 1 would drown in cancellation. Each condition
// reflects to itself up to a global sign, which the magnitude check ignores.
CompatibilityReport check_symbolic(const Poly& U, const Poly& V, double v_star, double tol) {
    auto condition_polys = [&](const Poly& u, const Poly& v) {
        // dt phi|0 = phi0_xx - (phi0_x + M) v0_x, with phi0_x + M = u0.
        const Poly P1 = u.deriv() - u * v.deriv();
        // dt^2 phi|0 = (dt phi)_xx + u0 (u0 v0)_x - (dt phi)_x v0_x
        const Poly P2 = P1.deriv(2) + u * (u * v).deriv() - P1.deriv() * v.deriv();
        return std::array<Poly, CompatibilityReport::condition_count>{
            v - Poly::constant(v_star),
            u,
            u.deriv() * v.deriv() - u.deriv(2),
            P1.deriv(2) - P1.deriv() * v.deriv(),
            P2.deriv(2) - P2.deriv() * v.deriv() + (P1.deriv() * u * v.deriv()) * 2.0};
    };
    const auto at_left = condition_polys(U, V);
    const auto at_right = condition_polys(U.reflect(), V.reflect());

    CompatibilityReport rep;
    rep.symbolic = true;
    rep.tolerance = tol;
    for (std::size_t c = 0; c < CompatibilityReport::condition_count; ++c) {
        rep.residuals[c][0] = at_left[c].eval(0.0);
        rep.residuals[c][1] = at_right[c].eval(0.0);
        double scale = 1.0;
        for (int k = 0; k <= 16; ++k)
            scale = std::max(scale, std::abs(at_left[c].eval(static_cast<double>(k) / 16.0)));
        rep.scales[c] = scale;
    }
    return rep;
}

// Numeric path for tabulated data: repeated full-grid derivatives, endpoint
// evaluation of the same combinations. Order-5 stencil chains are noisy on
// coarse grids; the report flags that instead of silently passing.
CompatibilityReport check_numeric(const Field& u0, const Field& v0, double v_star,
                                  const IntervalGrid& grid, double tol) {
    if (!grid.uniform())
        throw std::invalid_argument("numeric compatibility check needs a uniform grid");
    const double dx = grid.spacing(0);

    const Field& U = u0;
    const Field Ux = derivative(U, dx);
    const Field Uxx = derivative(Ux, dx);
    const Field Vx = derivative(v0, dx);

    auto combine = [](const Field& a, const Field& b, double ca, double cb) {
        Field r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = ca * a[i] + cb * b[i];
        return r;
    };
    auto prod = [](const Field& a, const Field& b) {
        Field r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * b[i];
        return r;
    };

    const Field P1 = combine(Uxx, prod(U, Vx), 1.0, -1.0);
    const Field P1x = derivative(P1, dx);
    const Field P1xx = derivative(P1x, dx);

    const Field UV = prod(U, v0);
    const Field P2 = combine(combine(P1xx, prod(U, derivative(UV, dx)), 1.0, 1.0),
                             prod(P1x, Vx), 1.0, -1.0);
    const Field P2x = derivative(P2, dx);
    const Field P2xx = derivative(P2x, dx);

    std::array<Field, CompatibilityReport::condition_count> combo;
    combo[0] = v0;
    for (double& v : combo[0]) v -= v_star;
    combo[1] = U;
    combo[2] = combine(prod(Ux, Vx), Uxx, 1.0, -1.0);
    combo[3] = combine(P1xx, prod(P1x, Vx), 1.0, -1.0);
    combo[4] = combine(combine(P2xx, prod(P2x, Vx), 1.0, -1.0), prod(prod(P1x, U), Vx), 1.0, 2.0);

    CompatibilityReport rep;
    rep.symbolic = false;
    rep.tolerance = tol;
    rep.stencil_warning = grid.cell_count() < 256;
    for (std::size_t c = 0; c < CompatibilityReport::condition_count; ++c) {
        rep.residuals[c][0] = combo[c].front();
        rep.residuals[c][1] = combo[c].back();
        double scale = 1.0;
        for (double v : combo[c]) scale = std::max(scale, std::abs(v));
        rep.scales[c] = scale;
    }
    return rep;
}

}  // namespace

CompatibilityReport check_compatibility(const InitialData& data, double v_star,
                                        const IntervalGrid& grid, double tolerance_symbolic,
                                        double tolerance_numeric) {
    CompatibilityReport rep =
        (data.u0_poly && data.v0_poly)
            ? check_symbolic(*data.u0_poly, *data.v0_poly, v_star, tolerance_symbolic)
            : check_numeric(data.u0, data.v0, v_star, grid, tolerance_numeric);

    rep.pass = true;
    for (std::size_t c = 0; c < CompatibilityReport::condition_count; ++c) {
        const double allowed = rep.tolerance * rep.scales[c];
        rep.condition_pass[c] = std::abs(rep.residuals[c][0]) <= allowed &&
                                std::abs(rep.residuals[c][1]) <= allowed;
        rep.pass = rep.pass && rep.condition_pass[c];
    }
    return rep;
}

Field antiderivative_transform(const IntervalGrid& grid, const Field& u, double mass) {
    if (u.size() != grid.node_count())
        throw std::invalid_argument("field size does not match interval grid");
    Field phi(u.size());
    phi[0] = 0.0;
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        const double h = grid.spacing(i);
        phi[i + 1] = phi[i] + 0.5 * h * ((u[i] - mass) + (u[i + 1] - mass));
    }
    return phi;
}

Field inverse_transform(const IntervalGrid& grid, const Field& phi, double mass) {
    if (!grid.uniform())
        throw std::invalid_argument("inverse transform implemented for uniform grids");
    Field u = derivative(phi, grid.spacing(0));
    for (double& v : u) v += mass;
    return u;
}

}  // namespace layerlab
