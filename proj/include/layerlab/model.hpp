#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "layerlab/grids.hpp"
#include "layerlab/poly.hpp"

namespace layerlab {

/// Initial-data descriptor: a named preset, or tabulated (x, value) files for
/// u0 and v0 (two-column text, one header line naming the field).
struct InitialDataSpec {
    enum class Kind { preset, tabulated };
    Kind kind = Kind::preset;
    // Presets: paper_poly8 (unit-peak normalized), paper_poly8_literal,
    // constant (u0 identically constant_value).
    std::string preset = "paper_poly8";
    double constant_value = 1.0;
    std::string u0_path;
    std::string v0_path;
};

/// The dial set of the eps-family: oxygen diffusivity eps, wall saturation
/// v_star, horizon T, initial data. The total mass M is always recomputed
/// from u0 by quadrature, never trusted from configuration.
struct ModelParams {
    double epsilon = 1e-3;  // >= 0; eps == 0 is legal only for outer solves
    double v_star = 1.0;    // >= 0
    double horizon = 0.25;  // T > 0
    InitialDataSpec initial_data;

    void validate() const;
};

struct InitialData {
    Field u0;    // cell density, >= 0
    Field v0;    // oxygen, >= 0
    Field phi0;  // anti-derivative of u0 - M; phi0(0) = phi0(1) = 0
    double mass = 0.0;

    // Present when the data came from a polynomial preset; lets the
    // compatibility conditions be evaluated symbolically.
    std::optional<Poly> u0_poly;
    std::optional<Poly> v0_poly;
};

/// Residuals of the five explicit compatibility conditions at both endpoints:
///   1. v0 - v_star
///   2. u0                     (phi0_x + M)
///   3. phi0_xx v0_x - phi0_xxx
///   4. (dt phi)_xx - (dt phi)_x v0_x
///   5. (dt^2 phi)_xx - (dt^2 phi)_x v0_x + 2 (dt phi)_x (phi0_x + M) v0_x
/// with dt phi, dt^2 phi the inductively defined initial time derivatives of
/// the leading outer profile.
struct CompatibilityReport {
    static constexpr std::size_t condition_count = 5;
    std::array<std::array<double, 2>, condition_count> residuals{};  // [condition][left/right]
    /// Natural magnitude of each condition's combination field (>= 1); the
    /// pass rule is |residual| <= tolerance * scale, which keeps the check
    /// meaningful when the combination mixes large derivatives that cancel.
    std::array<double, condition_count> scales{};
    std::array<bool, condition_count> condition_pass{};
    double tolerance = 0.0;
    bool symbolic = false;        // evaluated from preset polynomials
    bool stencil_warning = false; // numeric path on a grid too coarse for order-5 stencils
    bool pass = false;

    /// Largest scale-normalized residual over conditions and endpoints.
    double max_residual() const;
};

InitialData build_initial_data(const InitialDataSpec& spec, const ModelParams& params,
                               const IntervalGrid& grid);

CompatibilityReport check_compatibility(const InitialData& data, double v_star,
                                        const IntervalGrid& grid,
                                        double tolerance_symbolic = 1e-8,
                                        double tolerance_numeric = 1e-4);

/// phi(x) = integral_0^x (u - M); phi(0) = 0 exactly, phi(1) = 0 within
/// quadrature tolerance iff integral of u equals M.
Field antiderivative_transform(const IntervalGrid& grid, const Field& u, double mass);

/// u = phi_x + M by centered differences (one-sided at the endpoints).
Field inverse_transform(const IntervalGrid& grid, const Field& phi, double mass);

}  // namespace layerlab
