#include <cmath>

#include "doctest.h"
#include "heatlab/dunkl.hpp"

using namespace heatlab;

TEST_CASE("multiplicity zero collapses to the heat kernel") {
    DunklKernel k(0.0, 4.0);
    for (double t : {0.2, 1.0})
        for (double x : {0.0, 0.7, -1.5})
            for (double y : {0.0, 0.4, 2.0})
                CHECK(k.value(t, {x, 0}, {y, 0}) ==
                      doctest::Approx(gauss_density(1, t, x - y)).epsilon(1e-12));
}

TEST_CASE("kernel function at unit multiplicity has an elementary form") {
    // E_1(z) = (e^z (2z - 1) + e^{-z}) / (2 z^2)
    for (double z : {0.3, 2.0, 10.0, -0.7, -5.0}) {
        const double exact =
            (std::exp(z) * (2.0 * z - 1.0) + std::exp(-z)) / (2.0 * z * z);
        CHECK(log_dunkl_ek(1.0, z) ==
              doctest::Approx(std::log(exact)).epsilon(1e-12));
    }
    CHECK(log_dunkl_ek(1.0, 1e-12) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(log_dunkl_ek(0.37, 0.0) == 0.0);
}

TEST_CASE("normalization constant") {
    // c_k = int e^{-u^2/2} |u|^{2k} du via quadrature
    for (double k : {0.0, 0.5, 1.3}) {
        double q = 0.0;
        const int n = 40000;
        const double half = 14.0, h = 2.0 * half / n;
        for (int i = 0; i <= n; ++i) {
            const double u = -half + i * h;
            const double w = (i == 0 || i == n) ? 0.5 : 1.0;
            q += w * std::exp(-u * u / 2.0) * std::pow(std::fabs(u), 2.0 * k);
        }
        CHECK(dunkl_ck(k) == doctest::Approx(q * h).epsilon(5e-7));
    }
}

TEST_CASE("conservative for the weighted measure") {
    DunklKernel k7(0.7, 4.0);
    CHECK(k7.mass(0.3, {0.0, 0}) == doctest::Approx(1.0).epsilon(2e-4));
    CHECK(k7.mass(1.0, {1.3, 0}) == doctest::Approx(1.0).epsilon(2e-4));
    // cusped weight (2k < 1) converges a little slower
    DunklKernel k2(0.25, 4.0);
    CHECK(k2.mass(0.5, {0.8, 0}) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("symmetry and positivity") {
    DunklKernel k(1.2, 4.0);
    for (double x : {0.3, -1.1})
        for (double y : {0.9, -0.2}) {
            const double v = k.value(0.6, {x, 0}, {y, 0});
            CHECK(v > 0.0);
            CHECK(v == doctest::Approx(k.value(0.6, {y, 0}, {x, 0})).epsilon(1e-14));
        }
}

TEST_CASE("chapman-kolmogorov against the weighted measure") {
    DunklKernel k(1.0, 4.0);
    Grid z = build_grid(1, 12.0, 4801, k.measure());
    CHECK(chapman_kolmogorov_defect(k, 0.3, 0.4, {0.5, 0}, {-0.8, 0}, z) < 1e-5);
    CHECK(chapman_kolmogorov_defect(k, 0.2, 0.2, {1.5, 0}, {1.5, 0}, z) < 1e-5);
}

TEST_CASE("ball kernel integrates to the centered ball measure") {
    const double k = 1.0;
    for (double r : {0.5, 1.5})
        for (double x : {0.4, 2.0}) {
            double q = 0.0;
            const int n = 24000;
            const double half = 6.0, h = 2.0 * half / n;
            for (int i = 0; i <= n; ++i) {
                const double y = -half + i * h;
                const double w = (i == 0 || i == n) ? 0.5 : 1.0;
                q += w * dunkl_ball_kernel(k, r, x, y) *
                     std::pow(std::fabs(y), 2.0 * k);
            }
            CHECK(q * h == doctest::Approx(dunkl_ball_measure(k, r)).epsilon(1e-5));
        }
}

TEST_CASE("ball kernel shape") {
    const double k = 0.8;
    // symmetric, in [0, 1], nondecreasing in r
    CHECK(dunkl_ball_kernel(k, 1.0, 0.4, 0.9) ==
          doctest::Approx(dunkl_ball_kernel(k, 1.0, 0.9, 0.4)).epsilon(1e-14));
    double prev = 0.0;
    for (double r : {0.3, 0.6, 1.2, 2.4, 4.8}) {
        const double w = dunkl_ball_kernel(k, r, 1.1, -0.7);
        CHECK(w >= prev);
        CHECK(w <= 1.0);
        prev = w;
    }
    CHECK(prev == doctest::Approx(1.0).epsilon(1e-12));  // huge ball covers all

    // classical degeneration
    CHECK(dunkl_ball_kernel(0.0, 1.0, 0.2, 0.9) == 1.0);
    CHECK(dunkl_ball_kernel(0.0, 1.0, 0.2, 1.4) == 0.0);
    CHECK(dunkl_ball_measure(0.0, 1.5) == doctest::Approx(3.0));

    CHECK_THROWS_AS(dunkl_ball_kernel(-0.5, 1.0, 0.0, 0.0), invalid_parameter);
    CHECK_THROWS_AS(DunklKernel(-0.1, 1.0), invalid_parameter);
}
