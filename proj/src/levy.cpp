#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

#include "heatlab/fft.hpp"
#include "heatlab/kernels.hpp"

namespace heatlab {

namespace {

// frequency cutoff: beyond it exp(-t * exponent) < 1e-14
constexpr double kLogCut = 32.24;  // 14 ln 10

double cubic_interp(const Vec& v, double h, double r) {
    const double s = r / h;
    const std::size_t n = v.size();
    long i0 = long(s) - 1;
    i0 = std::clamp(i0, 0L, long(n) - 4);
    const double u = s - double(i0);
    // 4-point Lagrange on nodes u = 0,1,2,3
    const double c0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
    const double c1 = u * (u - 2.0) * (u - 3.0) / 2.0;
    const double c2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
    const double c3 = u * (u - 1.0) * (u - 2.0) / 6.0;
    return c0 * v[i0] + c1 * v[i0 + 1] + c2 * v[i0 + 2] + c3 * v[i0 + 3];
}

}  // namespace

SpectralKernel::SpectralKernel(LevySymbol symbol, int dim, double horizon,
                               bool add_laplacian, SpectralOptions opt)
    : symbol_(std::move(symbol)),
      dim_(dim),
      horizon_(horizon),
      add_laplacian_(add_laplacian),
      opt_(opt) {
    require(dim == 1 || dim == 2, "SpectralKernel: dim must be 1 or 2");
    require(horizon > 0.0, "SpectralKernel: horizon must be positive");
    require(opt_.radial_step > 0.0 && opt_.fft_log2_size >= 16 &&
                opt_.fft_log2_size <= 24,
            "SpectralKernel: malformed options");
    family_ = (add_laplacian_ ? std::string("mixed:") : std::string("levy:")) +
              symbol_.name;
}

double SpectralKernel::exponent(double xi) const {
    const double base = symbol_.psi(xi);
    return add_laplacian_ ? base + xi * xi : base;
}

SpectralKernel::Table SpectralKernel::build_table_1d(double t) const {
    const std::size_t m = std::size_t(1) << opt_.fft_log2_size;
    const double h = opt_.radial_step;
    const double dxi = 2.0 * std::numbers::pi / (double(m) * h);

    double ximax = inverse_symbol(symbol_, kLogCut / t) * 1.05;
    if (add_laplacian_) ximax = std::min(ximax, std::sqrt(kLogCut / t) * 1.05);
    const std::size_t terms = std::size_t(ximax / dxi) + 2;
    if (terms > (std::size_t(1) << 26))
        throw resolution_error(family_ +
                               ": frequency grid for t=" + std::to_string(t) +
                               " exceeds the resource budget");

    // Trapezoid sum of (1/pi) int_0^inf e^{-t exponent(xi)} cos(xi r) dxi on
    // xi_j = j dxi, r_i = i h.  Since dxi * h = 2pi/m the sum is a DFT; terms
    // beyond m fold into bin j mod m, which periodizes the kernel in r with
    // period m h.  The fold means the heavy tail aliases back, so the
    // half-period trapezoid mass reproduces e^{-t psi(0)} = 1 exactly and
    // pointwise values are clean for r well below the period.
    std::vector<std::complex<double>> a(m, 0.0);
    a[0] = 0.5;  // trapezoid endpoint, exponent(0) = 0
    for (std::size_t j = 1; j < terms; ++j) {
        const double g = std::exp(-t * exponent(double(j) * dxi));
        a[j & (m - 1)] += g;
    }
    fft(a);

    Table tab;
    tab.h = h;
    const std::size_t keep =
        std::min(m / 2 + 1, std::size_t(opt_.valid_radius / h) + 8);
    tab.val.resize(keep);
    const double scale = dxi / std::numbers::pi;
    double mass = 0.0;
    for (std::size_t i = 0; i <= m / 2; ++i) {
        const double v = scale * a[i].real();
        if (i < keep) tab.val[i] = std::max(v, 0.0);
        mass += (i == 0 || i == m / 2) ? 0.5 * v : v;
    }
    tab.mass = 2.0 * h * mass;
    return tab;
}

SpectralKernel::Table SpectralKernel::build_table_2d(double t) const {
    const int npts = opt_.hankel_radial_points;
    const double rmax = opt_.valid_radius;
    const double h = rmax / (npts - 1);

    double ximax = inverse_symbol(symbol_, kLogCut / t) * 1.05;
    if (add_laplacian_) ximax = std::min(ximax, std::sqrt(kLogCut / t) * 1.05);
    // resolve the J0 oscillation at the largest radius
    const double drho = 2.0 * std::numbers::pi / (8.0 * rmax);
    const std::size_t terms = std::size_t(ximax / drho) + 2;
    if (terms > (std::size_t(1) << 21))
        throw resolution_error(family_ + ": 2-D frequency grid for t=" +
                               std::to_string(t) + " exceeds the resource budget");

    Vec g(terms);
    for (std::size_t j = 0; j < terms; ++j)
        g[j] = std::exp(-t * exponent(double(j) * drho)) * double(j) * drho;

    Table tab;
    tab.h = h;
    tab.val.resize(npts);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < npts; ++i) {
        const double r = i * h;
        double acc = 0.0;
        for (std::size_t j = 1; j < terms; ++j)
            acc += g[j] * std::cyl_bessel_j(0.0, double(j) * drho * r);
        // trapezoid plus the Euler-Maclaurin endpoint term: the integrand
        // rho e^{-t exponent(rho)} J0(rho r) has slope exactly 1 at rho = 0
        // and has decayed at the cutoff
        const double corrected = acc * drho + drho * drho / 12.0;
        tab.val[i] = std::max(corrected / (2.0 * std::numbers::pi), 0.0);
    }

    // near-field mass plus a tail estimate continued from the local
    // envelope constant at the table edge
    double near = 0.0;
    for (int i = 0; i < npts; ++i) {
        const double w = (i == 0 || i == npts - 1) ? 0.5 : 1.0;
        near += w * 2.0 * std::numbers::pi * (i * h) * tab.val[i] * h;
    }
    const double edge_env = t * symbol_.psi(1.0 / rmax) / (rmax * rmax);
    const double c_edge = edge_env > 0.0 ? tab.val[npts - 1] / edge_env : 0.0;
    double tail = 0.0;
    double r = rmax;
    for (int j = 0; j < 2000; ++j) {
        const double rn = r * 1.02;
        const double mid = 0.5 * (r + rn);
        tail += c_edge * t * symbol_.psi(1.0 / mid) / (mid * mid) * 2.0 *
                std::numbers::pi * mid * (rn - r);
        r = rn;
    }
    tab.mass = near + tail;
    return tab;
}

const SpectralKernel::Table& SpectralKernel::table_for(double t) const {
    {
        std::shared_lock lk(mutex_);
        auto it = cache_.find(t);
        if (it != cache_.end()) return it->second;
    }
    Table tab = dim_ == 1 ? build_table_1d(t) : build_table_2d(t);
    std::unique_lock lk(mutex_);
    return cache_.emplace(t, std::move(tab)).first->second;
}

void SpectralKernel::prepare(const Vec& times) const {
    for (double t : times) {
        check_time(t);
        table_for(t);
    }
}

double SpectralKernel::value_radial(double t, double r) const {
    check_time(t);
    require(r >= 0.0, "SpectralKernel: negative radius");
    if (r > opt_.valid_radius)
        throw resolution_error(family_ + ": radius " + std::to_string(r) +
                               " beyond the aliasing-safe window");
    const Table& tab = table_for(t);
    return std::max(cubic_interp(tab.val, tab.h, r), 0.0);
}

double SpectralKernel::value(double t, const Point& x, const Point& y) const {
    const double r = dim_ == 1 ? std::fabs(x[0] - y[0])
                               : std::hypot(x[0] - y[0], x[1] - y[1]);
    return value_radial(t, r);
}

double SpectralKernel::mass(double t, const Point&) const {
    check_time(t);
    return table_for(t).mass;
}

}  // namespace heatlab
