#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace layerlab {

using Field = std::vector<double>;

/// Mesh grading over [0,1]. Uniform, or a symmetric tanh map that clusters
/// nodes at both endpoints with the given stretch factor (stretch = 1 is
/// identical to uniform).
struct Grading {
    enum class Kind { uniform, tanh_symmetric };
    Kind kind = Kind::uniform;
    double stretch = 1.0;

    static Grading uniform() { return {}; }
    static Grading tanh_symmetric(double stretch);
};

/// Node-based discretization of [0,1] with n cells and n+1 nodes.
/// nodes[0] == 0 and nodes[n] == 1 exactly; strictly increasing.
class IntervalGrid {
public:
    IntervalGrid(std::size_t n, const Grading& grading);

    std::size_t cell_count() const { return n_; }
    std::size_t node_count() const { return nodes_.size(); }
    const Field& nodes() const { return nodes_; }
    double node(std::size_t i) const { return nodes_[i]; }
    bool uniform() const { return uniform_; }

    /// Spacing of cell i (between nodes i and i+1).
    double spacing(std::size_t i) const { return nodes_[i + 1] - nodes_[i]; }
    double min_spacing() const { return min_spacing_; }
    double max_spacing() const { return max_spacing_; }
    /// max/min spacing ratio, recorded at construction.
    double spacing_ratio() const { return max_spacing_ / min_spacing_; }

    /// Trapezoid quadrature weights (node-based, sum to 1).
    const Field& weights() const { return weights_; }

private:
    std::size_t n_;
    Field nodes_;
    Field weights_;
    double min_spacing_ = 0.0;
    double max_spacing_ = 0.0;
    bool uniform_ = true;
};

IntervalGrid make_interval_grid(std::size_t n, const Grading& grading = Grading::uniform());

/// Uniform truncation [0, z_max] of the boundary-layer half-line, m cells.
/// The same object serves both walls: the right layer is stored in the
/// reflected variable s = -xi, so orientation only records which wall the
/// fields belong to.
class HalfLineGrid {
public:
    enum class Orientation { left, right };

    HalfLineGrid(double z_max, std::size_t m, Orientation orientation);

    double z_max() const { return z_max_; }
    std::size_t cell_count() const { return m_; }
    std::size_t node_count() const { return nodes_.size(); }
    const Field& nodes() const { return nodes_; }
    double node(std::size_t i) const { return nodes_[i]; }
    double spacing() const { return dz_; }
    Orientation orientation() const { return orientation_; }

    /// Linear interpolation of a nodal field at z; exactly 0 beyond z_max
    /// (decay budget).
    double sample(const Field& f, double z) const;

private:
    double z_max_;
    std::size_t m_;
    double dz_;
    Field nodes_;
    Orientation orientation_;
};

HalfLineGrid make_halfline_grid(double z_max, std::size_t m,
                                HalfLineGrid::Orientation orientation = HalfLineGrid::Orientation::left);

struct QuadratureRule {
    enum class Kind { trapezoid, simpson };
    Kind kind = Kind::trapezoid;
};

/// Tail integral over [z0, z_max] of a half-line nodal field; the tail beyond
/// z_max is neglected per the decay budget. z0 need not be a node: the
/// leading partial cell is handled by linear interpolation. Simpson requires
/// a node-aligned z0 with an even number of remaining cells.
double integrate_tail(const HalfLineGrid& grid, const Field& f, double z0,
                      const QuadratureRule& rule = {});

/// Reverse cumulative trapezoid: out[i] = integral of f over [z_i, z_max].
Field cumulative_tail(const HalfLineGrid& grid, const Field& f);

// Nodal derivative helpers (second order; one-sided 3-point stencils at the
// endpoints). Uniform grids only.
Field derivative(const Field& f, double dx);
void derivative_into(const Field& f, double dx, Field& out);
double derivative_at_left(const Field& f, double dx);
double derivative_at_right(const Field& f, double dx);

/// Trapezoid integral of a nodal field against grid weights.
double integrate(const IntervalGrid& grid, const Field& f);

/// Simpson integral on a uniform interval grid (even cell count required).
double integrate_simpson(const IntervalGrid& grid, const Field& f);

}  // namespace layerlab
