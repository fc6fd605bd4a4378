#include <cmath>

#include "doctest.h"
#include "heatlab/gasket.hpp"

using namespace heatlab;

TEST_CASE("time zero gives the identity matrix") {
    const GasketGraph g = sierpinski_graph(3);
    const GasketKernel k(g);
    for (int i : {0, 5, 17}) {
        const Vec r = k.row(0.0, i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (int(j) == i)
                CHECK(r[j] == doctest::Approx(1.0).epsilon(1e-10));
            else
                CHECK(std::fabs(r[j]) < 1e-10);
        }
    }
}

TEST_CASE("rows sum to one at machine precision") {
    const GasketKernel k(sierpinski_graph(4));
    for (double t : {0.3, 2.0, 40.0, 900.0})
        CHECK(k.row_sum_deviation(t) < 1e-12);
}

TEST_CASE("kernel is symmetric and nonnegative") {
    const GasketKernel k(sierpinski_graph(3));
    const int n = int(k.size());
    for (double t : {0.5, 7.0}) {
        for (int i = 0; i < n; i += 5) {
            const Vec r = k.row(t, i);
            for (int j = 0; j < n; j += 3) {
                CHECK(k.value(t, j, i) == doctest::Approx(r[j]).epsilon(1e-11));
                CHECK(r[j] > -1e-13);
            }
        }
    }
}

TEST_CASE("semigroup composition is exact in the eigenbasis") {
    const GasketKernel k(sierpinski_graph(3));
    const double s = 0.8, t = 2.3;
    for (int i : {0, 11, 29}) {
        for (int j : {2, 19}) {
            const Vec rs = k.row(s, i);
            const Vec rt = k.row(t, j);
            double conv = 0.0;  // counting measure: plain dot product
            for (std::size_t z = 0; z < rs.size(); ++z) conv += rs[z] * rt[z];
            const double direct = k.value(s + t, i, j);
            CHECK(conv == doctest::Approx(direct).epsilon(1e-10));
        }
    }
}

TEST_CASE("apply matches row evaluation and preserves constants") {
    const GasketKernel k(sierpinski_graph(3));
    const std::size_t n = k.size();
    Vec ind(n, 0.0);
    ind[7] = 1.0;
    const Vec a = k.apply(1.7, ind);
    for (int i = 0; i < int(n); i += 4)
        CHECK(a[i] == doctest::Approx(k.value(1.7, i, 7)).epsilon(1e-11));

    const Vec ones(n, 1.0);
    const Vec b = k.apply(5.0, ones);
    for (double v : b) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("trace average matches the diagonal sum") {
    const GasketKernel k(sierpinski_graph(2));
    const double t = 1.9;
    double acc = 0.0;
    for (int i = 0; i < int(k.size()); ++i) acc += k.value(t, i, i);
    CHECK(k.trace_average(t) == doctest::Approx(acc / double(k.size())).epsilon(1e-12));
}

TEST_CASE("on-diagonal decay exponent approaches log3/log5") {
    const GasketKernel k(sierpinski_graph(5));
    const ExponentFit fit = fit_diagonal_exponent(k);
    const double target = std::log(3.0) / std::log(5.0);
    CHECK(std::fabs(fit.exponent - target) < 0.05 * target);
    CHECK(fit.t_hi > fit.t_lo);
    CHECK(fit.max_residual < 0.2);  // log-periodic wiggle, not drift
}

TEST_CASE("guards reject bad inputs") {
    const GasketKernel k(sierpinski_graph(2));
    CHECK_THROWS_AS((void)k.value(-1.0, 0, 0), invalid_parameter);
    CHECK_THROWS_AS((void)k.value(2e6, 0, 0), resolution_error);
    CHECK_THROWS_AS((void)k.value(1.0, 0, 999), invalid_parameter);

    GasketGraph huge;
    huge.level = 8;
    huge.adj.resize(4000);
    CHECK_THROWS_AS(GasketKernel{huge}, resource_error);
}
