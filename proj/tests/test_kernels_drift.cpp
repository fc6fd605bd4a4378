#include <cmath>

#include "doctest.h"
#include "heatlab/drift.hpp"

using namespace heatlab;

namespace {

// constant-coefficient solution: the heat profile translated by drift*t
double drifted_gauss(double b, double t, double x, double y) {
    return gauss_density(1, t, x - y + b * t);
}

}  // namespace

TEST_CASE("zero drift reproduces the heat kernel") {
    DriftKernel k(0.0, 4.0);
    struct Probe { double t, x, y; };
    const Probe probes[] = {
        {0.1, 0.0, 0.0},   {0.1, 0.7, -0.8},  {0.1, 0.7, 0.3335},
        {0.5, 0.0, 1.5},   {0.5, 0.7, -2.0},  {2.0, 0.0, 3.0},
        {2.0, 0.7, -4.0},
    };
    for (const auto& p : probes)
        CHECK(k.value(p.t, {p.x, 0}, {p.y, 0}) ==
              doctest::Approx(drifted_gauss(0.0, p.t, p.x, p.y)).epsilon(1e-4));
    CHECK(k.mass(0.5, {0.0, 0}) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("constant drift translates the kernel") {
    DriftKernel k(0.5, 4.0);
    CHECK(k.drift() == 0.5);
    struct Probe { double t, x, y; };
    const Probe probes[] = {
        {0.25, 0.0, 0.0}, {0.25, -1.3, 0.6}, {1.0, 0.0, 2.0},
        {1.0, -1.3, -3.0}, {2.0, 0.0, -1.0},
    };
    for (const auto& p : probes)
        CHECK(k.value(p.t, {p.x, 0}, {p.y, 0}) ==
              doctest::Approx(drifted_gauss(0.5, p.t, p.x, p.y)).epsilon(1e-4));

    // conservative despite the transport term
    CHECK(k.mass(2.0, {-2.0, 0}) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(k.mass(0.5, {0.0, 0}) == doctest::Approx(1.0).epsilon(1e-4));

    // spatial homogeneity: shifting both arguments changes nothing
    const double ref = k.value(0.75, {0.4, 0}, {-0.9, 0});
    DriftKernel k2(0.5, 4.0);
    CHECK(k2.value(0.75, {0.4 + 1.5, 0}, {-0.9 + 1.5, 0}) ==
          doctest::Approx(ref).epsilon(1e-3));
}

TEST_CASE("row and column solves agree") {
    DriftKernel k(0.5, 4.0);
    k.prewarm_column(0.8, {0.6});
    const double via_col = k.value(0.6, {-0.4, 0}, {0.8, 0});  // column hit
    DriftKernel kr(0.5, 4.0);
    const double via_row = kr.value(0.6, {-0.4, 0}, {0.8, 0});  // row build
    CHECK(via_col == doctest::Approx(via_row).epsilon(1e-4));
    CHECK(via_col ==
          doctest::Approx(drifted_gauss(0.5, 0.6, -0.4, 0.8)).epsilon(1e-4));
}

TEST_CASE("chapman-kolmogorov for the drifted kernel") {
    DriftKernel k(0.5, 4.0);
    const double s = 0.4, t = 0.6;
    const Point x{-0.5, 0}, y{0.6, 0};
    k.prewarm_row(x[0], {s, s + t});
    k.prewarm_column(y[0], {t});
    Grid z = build_grid(1, 12.0, 2401);
    CHECK(chapman_kolmogorov_defect(k, s, t, x, y, z) < 1e-4);
}

TEST_CASE("pde apply matches the closed-form semigroup") {
    DriftKernel k(0.5, 4.0);
    CHECK(k.has_fast_apply());
    Grid g = build_grid(1, 12.0, 2401);
    Vec f(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        f[i] = std::exp(-g.axis[i] * g.axis[i]);
    const double t = 0.5;
    Vec sf = apply_semigroup(k, t, f, g);  // routes through fast_apply
    const double c = 1.0 / std::sqrt(1.0 + 4.0 * t);
    for (double x : {0.0, 1.2, -2.0}) {
        const double shifted = x + 0.5 * t;
        const std::size_t i = g.nearest(x);
        CHECK(sf[i] ==
              doctest::Approx(c * std::exp(-shifted * shifted * c * c)).epsilon(1e-4));
    }
}

TEST_CASE("drift solver guards") {
    DriftKernel k(0.5, 4.0);
    CHECK_THROWS_AS(k.value(0.005, {0, 0}, {0, 0}), resolution_error);
    CHECK_THROWS_AS(k.value(5.0, {0, 0}, {0, 0}), resolution_error);
    CHECK_THROWS_AS(k.value(0.5, {13.0, 0}, {0, 0}), invalid_parameter);
    CHECK_THROWS_AS(DriftKernel(0.5, 4.0, DriftOptions{4.0, 2001, 512, 256, 0.01}),
                    invalid_parameter);
}

TEST_CASE("two-sided gaussian comparability for moderate drift") {
    DriftKernel k(0.5, 2.0);
    std::vector<LatticePoint> lat;
    Vec times{0.25, 0.5, 1.0, 2.0};
    for (double x = -3.0; x <= 3.0; x += 1.0) k.prewarm_row(x, times);
    for (double t : times)
        for (double x = -3.0; x <= 3.0; x += 1.0)
            for (double y = -3.0; y <= 3.0; y += 0.5)
                lat.push_back({t, {x, 0}, {y, 0}});
    GaussianBoundFit fit = fit_gaussian_bound(k, lat, {0.1, 0.25, 0.5, 1.0});
    CHECK(fit.holds);
    CHECK(fit.alpha_upper > 4.0);
    CHECK(fit.alpha_lower < 4.0);
    CHECK(fit.C < 10.0);
}
