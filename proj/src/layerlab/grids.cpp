#include "layerlab/grids.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace layerlab {

Grading Grading::tanh_symmetric(double stretch) {
    if (stretch < 1.0)
        throw std::invalid_argument("grading stretch must be >= 1");
    Grading g;
    g.kind = Kind::tanh_symmetric;
    g.stretch = stretch;
    return g;
}

namespace {

// Symmetric tanh map [0,1] -> [0,1]: clusters nodes at both endpoints.
// Identity for stretch == 1.
double tanh_map(double s, double stretch) {
    if (stretch == 1.0) return s;
    const double a = stretch;
    return 0.5 * (1.0 + std::tanh(a * (2.0 * s - 1.0)) / std::tanh(a));
}

}  // namespace

IntervalGrid::IntervalGrid(std::size_t n, const Grading& grading) : n_(n) {
    if (n < 16) throw std::invalid_argument("interval grid needs n >= 16 cells");
    if (grading.stretch < 1.0)
        throw std::invalid_argument("grading stretch must be >= 1");

    nodes_.resize(n + 1);
    const bool graded = grading.kind == Grading::Kind::tanh_symmetric && grading.stretch > 1.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(n);
        nodes_[i] = graded ? tanh_map(s, grading.stretch) : s;
    }
    nodes_.front() = 0.0;
    nodes_.back() = 1.0;
    uniform_ = !graded;

    min_spacing_ = std::numeric_limits<double>::infinity();
    max_spacing_ = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double h = nodes_[i + 1] - nodes_[i];
        if (h <= 0.0) throw std::invalid_argument("grading map produced non-monotone nodes");
        min_spacing_ = std::min(min_spacing_, h);
        max_spacing_ = std::max(max_spacing_, h);
    }

    weights_.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double h = nodes_[i + 1] - nodes_[i];
        weights_[i] += 0.5 * h;
        weights_[i + 1] += 0.5 * h;
    }
}

IntervalGrid make_interval_grid(std::size_t n, const Grading& grading) {
    return IntervalGrid(n, grading);
}

HalfLineGrid::HalfLineGrid(double z_max, std::size_t m, Orientation orientation)
    : z_max_(z_max), m_(m), orientation_(orientation) {
    // exp(-28) ~ 7e-13; anything shorter lets truncation pollute the tails.
    if (z_max < 28.0)
        throw std::invalid_argument("half-line truncation z_max below decay budget (need z_max >= 28)");
    if (m < 64) throw std::invalid_argument("half-line grid needs m >= 64 cells");
    dz_ = z_max / static_cast<double>(m);
    nodes_.resize(m + 1);
    for (std::size_t i = 0; i <= m; ++i) nodes_[i] = dz_ * static_cast<double>(i);
    nodes_.back() = z_max;
}

double HalfLineGrid::sample(const Field& f, double z) const {
    if (z < 0.0) throw std::invalid_argument("half-line sample at negative z");
    if (z >= z_max_) return 0.0;
    const double r = z / dz_;
    const std::size_t i = std::min(static_cast<std::size_t>(r), m_ - 1);
    const double w = r - static_cast<double>(i);
    return (1.0 - w) * f[i] + w * f[i + 1];
}

HalfLineGrid make_halfline_grid(double z_max, std::size_t m, HalfLineGrid::Orientation orientation) {
    return HalfLineGrid(z_max, m, orientation);
}

double integrate_tail(const HalfLineGrid& grid, const Field& f, double z0, const QuadratureRule& rule) {
    if (f.size() != grid.node_count())
        throw std::invalid_argument("field size does not match half-line grid");
    if (z0 < 0.0 || z0 > grid.z_max())
        throw std::invalid_argument("tail integral start z0 outside [0, z_max]");

    const double dz = grid.spacing();
    const std::size_t m = grid.cell_count();
    const double r = z0 / dz;
    std::size_t first = static_cast<std::size_t>(std::ceil(r - 1e-12));
    if (first > m) first = m;
    const bool aligned = std::abs(r - static_cast<double>(first)) < 1e-12;

    double partial = 0.0;
    if (!aligned) {
        // trapezoid over the partial cell [z0, z_first]
        const double fz0 = grid.sample(f, z0);
        const double h = grid.node(first) - z0;
        partial = 0.5 * h * (fz0 + f[first]);
    }

    const std::size_t cells = m - first;
    if (rule.kind == QuadratureRule::Kind::simpson) {
        if (!aligned)
            throw std::invalid_argument("Simpson tail integral requires node-aligned z0");
        if (cells % 2 != 0)
            throw std::invalid_argument("Simpson tail integral requires an even cell count");
        double s = 0.0;
        for (std::size_t i = first; i < m; i += 2)
            s += f[i] + 4.0 * f[i + 1] + f[i + 2];
        return s * dz / 3.0;
    }

    double s = 0.0;
    for (std::size_t i = first; i < m; ++i) s += 0.5 * dz * (f[i] + f[i + 1]);
    return partial + s;
}

Field cumulative_tail(const HalfLineGrid& grid, const Field& f) {
    if (f.size() != grid.node_count())
        throw std::invalid_argument("field size does not match half-line grid");
    const double dz = grid.spacing();
    Field out(f.size(), 0.0);
    for (std::size_t i = f.size() - 1; i-- > 0;)
        out[i] = out[i + 1] + 0.5 * dz * (f[i] + f[i + 1]);
    return out;
}

Field derivative(const Field& f, double dx) {
    Field d;
    derivative_into(f, dx, d);
    return d;
}

void derivative_into(const Field& f, double dx, Field& d) {
    const std::size_t n = f.size();
    if (n < 3) throw std::invalid_argument("derivative needs at least 3 nodes");
    d.resize(n);
    const double half = 0.5 / dx;
    d[0] = derivative_at_left(f, dx);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) * half;
    d[n - 1] = derivative_at_right(f, dx);
}

double derivative_at_left(const Field& f, double dx) {
    return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
}

double derivative_at_right(const Field& f, double dx) {
    const std::size_t n = f.size();
    return (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx);
}

double integrate(const IntervalGrid& grid, const Field& f) {
    if (f.size() != grid.node_count())
        throw std::invalid_argument("field size does not match interval grid");
    const Field& w = grid.weights();
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i];
    return s;
}

double integrate_simpson(const IntervalGrid& grid, const Field& f) {
    if (!grid.uniform()) throw std::invalid_argument("Simpson integration needs a uniform grid");
    if (grid.cell_count() % 2 != 0)
        throw std::invalid_argument("Simpson integration needs an even cell count");
    if (f.size() != grid.node_count())
        throw std::invalid_argument("field size does not match interval grid");
    const double h = grid.spacing(0);
    double s = 0.0;
    for (std::size_t i = 0; i + 2 < f.size(); i += 2)
        s += f[i] + 4.0 * f[i + 1] + f[i + 2];
    return s * h / 3.0;
}

}  // namespace layerlab
