#include <cmath>
#include <random>

#include "doctest.h"
#include "heatlab/rng.hpp"
#include "heatlab/symbols.hpp"

using namespace heatlab;

namespace {
Vec log_grid(double lo, double hi, int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i)
        v[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
    return v;
}
}  // namespace

TEST_CASE("power symbol inverse matches the closed form") {
    const auto s_half = make_power_symbol(0.5);
    const auto s_three_q = make_power_symbol(0.75);
    for (double y : {1e-4, 0.03, 1.0, 7.5, 4000.0}) {
        CHECK(inverse_symbol(s_half, y) == doctest::Approx(y).epsilon(1e-9));
        CHECK(inverse_symbol(s_three_q, y) ==
              doctest::Approx(std::pow(y, 2.0 / 3.0)).epsilon(1e-9));
    }
    CHECK(inverse_symbol(s_half, 0.0) == 0.0);
}

TEST_CASE("mixed symbol inverse round-trips") {
    const auto sym = make_mixed_symbol(0.25, 0.75);
    CHECK(sym(2.0) == doctest::Approx(3.0 * std::sqrt(2.0)).epsilon(1e-12));
    auto rng = substream(7, 0);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const double theta = std::pow(10.0, u(rng));
        CHECK(inverse_symbol(sym, sym(theta)) == doctest::Approx(theta).epsilon(1e-8));
    }
}

TEST_CASE("weak scaling envelope verifies for the built-in families") {
    auto p = make_power_symbol(0.6);
    auto m = make_mixed_symbol(0.3, 0.8);
    const auto lambdas = log_grid(1.0, 100.0, 25);
    const auto thetas = log_grid(1e-3, 1e3, 40);
    CHECK(verify_weak_scaling(p, lambdas, thetas).ok);
    CHECK(p.verified);
    CHECK(verify_weak_scaling(m, lambdas, thetas).ok);
    CHECK(m.verified);
}

TEST_CASE("weak scaling flags a wrong claimed envelope with a witness") {
    // data generated by theta^0.5 + theta^1.5 but claimed to scale like theta
    std::vector<std::pair<double, double>> pts;
    for (double t : log_grid(1e-3, 1e3, 60))
        pts.emplace_back(t, std::pow(t, 0.5) + std::pow(t, 1.5));
    auto sym = make_table_symbol(pts, 1.0, 1.0, 1.0, 1.0);
    const auto rep =
        verify_weak_scaling(sym, log_grid(1.0, 50.0, 15), log_grid(0.01, 100.0, 25));
    CHECK_FALSE(rep.ok);
    CHECK_FALSE(sym.verified);
    CHECK(rep.witness_lambda >= 1.0);
    CHECK(rep.witness_theta > 0.0);
}

TEST_CASE("table symbol reproduces a sampled power law") {
    std::vector<std::pair<double, double>> pts;
    for (double t : log_grid(1e-2, 1e2, 30)) pts.emplace_back(t, std::pow(t, 0.8));
    const auto sym = make_table_symbol(pts, 0.8, 0.8, 1.0, 1.0);
    // log-log interpolation of a pure power is exact, including continuation
    for (double t : {1e-3, 0.04, 1.0, 55.0, 1e3})
        CHECK(sym(t) == doctest::Approx(std::pow(t, 0.8)).epsilon(1e-10));
}

TEST_CASE("scale function and doubling dilation") {
    const auto s_half = make_power_symbol(0.5);
    const auto phi = make_scale_function(s_half);
    CHECK(phi(2.0) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(phi.gamma(2.0) == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(lambda_for_doubling(s_half) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(lambda_for_doubling(make_power_symbol(0.75)) ==
          doctest::Approx(std::pow(2.0, 2.0 / 3.0)).epsilon(1e-12));

    // psi^-(2y) <= lambda psi^-(y), the doubling property behind Gamma
    const auto mixed = make_mixed_symbol(0.25, 0.75);
    const double lam = lambda_for_doubling(mixed);
    for (double y : log_grid(1e-3, 1e3, 50)) {
        CHECK(inverse_symbol(mixed, 2.0 * y) <=
              lam * inverse_symbol(mixed, y) * (1.0 + 1e-8));
    }
}

TEST_CASE("stable-like envelope picks the right branch") {
    const auto s_half = make_power_symbol(0.5);
    CHECK(levy_envelope(s_half, 1.0, 10.0, 1) == doctest::Approx(0.01).epsilon(1e-9));
    CHECK(levy_envelope(s_half, 1.0, 0.0, 1) == doctest::Approx(1.0).epsilon(1e-9));
    // near the diagonal the on-diagonal branch is active
    CHECK(levy_envelope(s_half, 0.5, 0.1, 1) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("symbol constructors validate their inputs") {
    CHECK_THROWS_AS(make_power_symbol(0.0), invalid_parameter);
    CHECK_THROWS_AS(make_power_symbol(1.0), invalid_parameter);
    CHECK_THROWS_AS(make_mixed_symbol(0.5, 0.25), invalid_parameter);
    CHECK_THROWS_AS(make_table_symbol({{1.0, 1.0}}, 1, 1, 1, 1), invalid_parameter);
    CHECK_THROWS_AS(make_table_symbol({{1.0, 1.0}, {2.0, 0.5}}, 1, 1, 1, 1),
                    invalid_parameter);
}
