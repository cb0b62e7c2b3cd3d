#include <doctest.h>

#include <stdexcept>
#include <cstdio>
#include <fstream>

#include <cmath>

#include "layerlab/model.hpp"

using namespace layerlab;

namespace {

ModelParams default_params(const std::string& preset = "paper_poly8") {
    ModelParams p;
    p.initial_data.preset = preset;
    return p;
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

TEST_CASE("paper presets sample the stated polynomials") {
    const IntervalGrid grid = make_interval_grid(256);
    const ModelParams p = default_params("paper_poly8_literal");
    const InitialData d = build_initial_data(p.initial_data, p, grid);
    for (std::size_t i = 0; i <= 256; i += 37) {
        const double x = grid.node(i);
        CHECK(d.u0[i] == doctest::Approx(std::pow(x * (1 - x), 8)).epsilon(1e-14));
        CHECK(d.v0[i] == doctest::Approx(1.0 + std::pow(x * (1 - x), 6)).epsilon(1e-14));
    }

    const ModelParams pn = default_params();
    const InitialData dn = build_initial_data(pn.initial_data, pn, grid);
    CHECK(dn.u0[128] == doctest::Approx(1.0).epsilon(1e-14));  // unit peak at x = 1/2
}

TEST_CASE("preset mass matches the exact Beta integral") {
    // B(9,9) = 8! 8! / 17!; the trapezoid value is spectrally accurate here
    // because the integrand vanishes to high order at both endpoints.
    const double beta_99 = factorial(8) * factorial(8) / factorial(17);
    const IntervalGrid grid = make_interval_grid(1024);

    const ModelParams lit = default_params("paper_poly8_literal");
    const InitialData dl = build_initial_data(lit.initial_data, lit, grid);
    CHECK(dl.mass == doctest::Approx(beta_99).epsilon(1e-12));

    const ModelParams norm = default_params();
    const InitialData dn = build_initial_data(norm.initial_data, norm, grid);
    CHECK(dn.mass == doctest::Approx(65536.0 * beta_99).epsilon(1e-12));
}

TEST_CASE("initial data construction is deterministic") {
    const IntervalGrid grid = make_interval_grid(128);
    const ModelParams p = default_params();
    const InitialData a = build_initial_data(p.initial_data, p, grid);
    const InitialData b = build_initial_data(p.initial_data, p, grid);
    for (std::size_t i = 0; i < a.u0.size(); ++i) {
        CHECK(a.u0[i] == b.u0[i]);
        CHECK(a.phi0[i] == b.phi0[i]);
    }
}

TEST_CASE("antiderivative transform") {
    const IntervalGrid grid = make_interval_grid(256);

    SUBCASE("u identically M gives phi identically 0") {
        const Field u(grid.node_count(), 0.731);
        const Field phi = antiderivative_transform(grid, u, 0.731);
        for (double v : phi) CHECK(v == 0.0);
    }

    SUBCASE("ends at zero iff the mass matches") {
        const ModelParams p = default_params();
        const InitialData d = build_initial_data(p.initial_data, p, grid);
        CHECK(d.phi0.front() == 0.0);
        CHECK(std::abs(d.phi0.back()) < 1e-13);
        const Field bad = antiderivative_transform(grid, d.u0, d.mass + 0.1);
        CHECK(std::abs(bad.back()) > 0.01);
    }

    SUBCASE("phi(1/2) against a fine-grid Simpson oracle") {
        const ModelParams p = default_params();
        const InitialData d = build_initial_data(p.initial_data, p, grid);
        // independent oracle: Simpson on an 8x finer sampling of u0 - M over [0, 1/2]
        const std::size_t fine = 2048;
        const double h = 0.5 / fine;
        double simpson = 0.0;
        auto f = [&](double x) { return std::pow(4.0 * x * (1.0 - x), 8) - d.mass; };
        for (std::size_t i = 0; i < fine; i += 2)
            simpson += h / 3.0 * (f(i * h) + 4.0 * f((i + 1) * h) + f((i + 2) * h));
        CHECK(d.phi0[128] == doctest::Approx(simpson).epsilon(1e-9));
    }
}

TEST_CASE("inverse transform") {
    const IntervalGrid grid = make_interval_grid(256);

    SUBCASE("phi identically 0 gives u identically M") {
        const Field phi(grid.node_count(), 0.0);
        const Field u = inverse_transform(grid, phi, 2.5);
        for (double v : u) CHECK(v == 2.5);
    }

    SUBCASE("sin profile recovers cos to scheme order") {
        Field phi(grid.node_count());
        for (std::size_t i = 0; i < phi.size(); ++i)
            phi[i] = std::sin(2.0 * M_PI * grid.node(i)) / (2.0 * M_PI);
        const Field u = inverse_transform(grid, phi, 0.0);
        for (std::size_t i = 0; i < u.size(); i += 16)
            CHECK(u[i] == doctest::Approx(std::cos(2.0 * M_PI * grid.node(i))).epsilon(1e-3));
    }

    SUBCASE("round trip decays at second order") {
        auto round_trip_error = [](std::size_t n) {
            const IntervalGrid g = make_interval_grid(n);
            const ModelParams p = default_params();
            const InitialData d = build_initial_data(p.initial_data, p, g);
            const Field u = inverse_transform(g, d.phi0, d.mass);
            double err = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i)
                err = std::max(err, std::abs(u[i] - d.u0[i]));
            return err;
        };
        const double e1 = round_trip_error(128);
        const double e2 = round_trip_error(256);
        CHECK(e1 / e2 > 3.0);
        CHECK(e1 / e2 < 5.0);
    }
}

TEST_CASE("compatibility report on the paper presets") {
    const IntervalGrid grid = make_interval_grid(512);
    for (const char* preset : {"paper_poly8", "paper_poly8_literal"}) {
        const ModelParams p = default_params(preset);
        const InitialData d = build_initial_data(p.initial_data, p, grid);
        const CompatibilityReport rep = check_compatibility(d, p.v_star, grid);
        CHECK(rep.symbolic);
        CHECK(rep.pass);
        CHECK(rep.max_residual() <= 1e-10);
    }
}

TEST_CASE("compatibility failures are detected") {
    const IntervalGrid grid = make_interval_grid(512);

    SUBCASE("wrong wall value of v0") {
        const ModelParams p = default_params();
        const InitialData d = build_initial_data(p.initial_data, p, grid);
        const CompatibilityReport rep = check_compatibility(d, 2.0, grid);  // v_star mismatch
        CHECK(!rep.condition_pass[0]);
        CHECK(rep.residuals[0][0] == doctest::Approx(-1.0));
    }

    SUBCASE("constant u0 fails the degeneracy condition") {
        ModelParams p = default_params("constant");
        p.initial_data.constant_value = 0.7;
        const InitialData d = build_initial_data(p.initial_data, p, grid);
        CHECK(d.mass == doctest::Approx(0.7).epsilon(1e-13));
        const CompatibilityReport rep = check_compatibility(d, p.v_star, grid);
        CHECK(rep.condition_pass[0]);   // v0 = v_star holds
        CHECK(!rep.condition_pass[1]);  // u0 = 0 on the boundary fails
        CHECK(rep.residuals[1][0] == doctest::Approx(0.7));
    }
}

TEST_CASE("numeric compatibility path stays within its tolerance on a fine grid") {
    // same preset fields, but fed through the tabulated (stencil) path; the
    // order-5/6 endpoint stencil chains need a fine grid on data this steep
    const IntervalGrid grid = make_interval_grid(4096);
    const ModelParams p = default_params();
    InitialData d = build_initial_data(p.initial_data, p, grid);
    d.u0_poly.reset();
    d.v0_poly.reset();
    const CompatibilityReport rep = check_compatibility(d, p.v_star, grid);
    CHECK(!rep.symbolic);
    CHECK(!rep.stencil_warning);
    CHECK(rep.pass);

    const IntervalGrid coarse = make_interval_grid(64);
    InitialData dc = build_initial_data(p.initial_data, p, coarse);
    dc.u0_poly.reset();
    dc.v0_poly.reset();
    CHECK(check_compatibility(dc, p.v_star, coarse).stencil_warning);

    // the stencil-chain noise decays at second order under grid doubling
    auto c5_residual = [&](std::size_t n) {
        const IntervalGrid g = make_interval_grid(n);
        InitialData dd = build_initial_data(p.initial_data, p, g);
        dd.u0_poly.reset();
        dd.v0_poly.reset();
        const CompatibilityReport r = check_compatibility(dd, p.v_star, g);
        return std::abs(r.residuals[4][0]) / r.scales[4];
    };
    CHECK(c5_residual(512) / c5_residual(1024) > 3.0);
}

TEST_CASE("tabulated data files round through construction") {
    const char* u0_path = "test_model_u0.txt";
    const char* v0_path = "test_model_v0.txt";
    {
        std::ofstream u0(u0_path), v0(v0_path);
        u0 << "u0\n";
        v0 << "v0\n";
        for (int i = 0; i <= 100; ++i) {
            const double x = i / 100.0;
            u0 << x << ' ' << x * (1.0 - x) << '\n';
            v0 << x << ' ' << 1.0 << '\n';
        }
    }
    ModelParams p;
    p.initial_data.kind = InitialDataSpec::Kind::tabulated;
    p.initial_data.u0_path = u0_path;
    p.initial_data.v0_path = v0_path;
    const IntervalGrid grid = make_interval_grid(256);
    const InitialData d = build_initial_data(p.initial_data, p, grid);
    CHECK(!d.u0_poly.has_value());
    CHECK(d.mass == doctest::Approx(1.0 / 6).epsilon(1e-3));
    CHECK(d.u0[128] == doctest::Approx(0.25).epsilon(1e-3));
    // u0(0) = 0 but u0 does not vanish to high order: the degeneracy
    // condition holds, the third-order one does not
    const CompatibilityReport rep = check_compatibility(d, p.v_star, grid);
    CHECK(!rep.symbolic);
    CHECK(rep.condition_pass[1]);
    CHECK(!rep.pass);
    std::remove(u0_path);
    std::remove(v0_path);
}

TEST_CASE("negative initial data are rejected") {
    const IntervalGrid grid = make_interval_grid(64);
    ModelParams p = default_params("constant");
    p.initial_data.constant_value = -1.0;
    CHECK_THROWS_AS(build_initial_data(p.initial_data, p, grid), std::invalid_argument);
}
