#include "heatlab/kernels.hpp"

#include <cmath>
#include <numbers>

namespace heatlab {

double gauss_density(int n, double t, double r) {
    return std::pow(4.0 * std::numbers::pi * t, -0.5 * n) *
           std::exp(-r * r / (4.0 * t));
}

GaussianKernel::GaussianKernel(int dim, double horizon)
    : dim_(dim), horizon_(horizon) {
    require(dim == 1 || dim == 2, "GaussianKernel: dim must be 1 or 2");
    require(horizon > 0.0, "GaussianKernel: horizon must be positive");
}

double GaussianKernel::value(double t, const Point& x, const Point& y) const {
    check_time(t);
    return gauss_density(dim_, t, std::hypot(x[0] - y[0], x[1] - y[1]));
}

double GaussianKernel::mass(double t, const Point&) const {
    check_time(t);
    // half-width 14 sqrt(t) puts the truncated tail below 1e-20
    const double half = 14.0 * std::sqrt(t);
    const int n = 4000;
    const double h = 2.0 * half / n;
    double m = 0.0;
    if (dim_ == 1) {
        for (int i = 0; i <= n; ++i) {
            const double w = (i == 0 || i == n) ? 0.5 : 1.0;
            m += w * gauss_density(1, t, std::fabs(-half + i * h));
        }
        return m * h;
    }
    // radial shell quadrature in 2-D
    for (int i = 0; i < n; ++i) {
        const double r = (i + 0.5) * (half / n);
        m += 2.0 * std::numbers::pi * r * gauss_density(2, t, r) * (half / n);
    }
    return m;
}

Vec apply_semigroup(const KernelBackend& k, double t, const Vec& f, const Grid& g) {
    require(f.size() == g.size(), "apply_semigroup: f size mismatch");
    require(k.dim() == g.dim, "apply_semigroup: dimension mismatch");
    if (k.has_fast_apply()) return k.fast_apply(t, f, g);
    k.prepare({t});
    const std::size_t n = g.size();
    Vec out(n, 0.0);
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
        const Point xi = g.coord(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (g.weight[j] == 0.0) continue;
            acc += k.value(t, xi, g.coord(j)) * g.weight[j] * f[j];
        }
        out[i] = acc;
    }
    return out;
}

double chapman_kolmogorov_defect(const KernelBackend& k, double s, double t,
                                 const Point& x, const Point& y, const Grid& z_grid) {
    require(s > 0.0 && t > 0.0, "chapman_kolmogorov_defect: times must be positive");
    k.prepare({s, t, s + t});
    const std::size_t n = z_grid.size();
    Vec terms(n, 0.0);
#pragma omp parallel for schedule(static)
    for (std::size_t j = 0; j < n; ++j) {
        if (z_grid.weight[j] == 0.0) continue;
        const Point z = z_grid.coord(j);
        terms[j] = k.value(s, x, z) * k.value(t, z, y) * z_grid.weight[j];
    }
    double conv = 0.0;
    for (double v : terms) conv += v;  // fixed-order reduction
    const double direct = k.value(s + t, x, y);
    require(direct > 0.0, "chapman_kolmogorov_defect: kernel vanished at target");
    return std::fabs(conv - direct) / direct;
}

BoundFit verify_two_sided_bound(const KernelBackend& k, const EnvelopeFn& envelope,
                                const std::vector<LatticePoint>& lattice) {
    require(!lattice.empty(), "verify_two_sided_bound: empty lattice");
    BoundFit fit;
    fit.lattice_size = lattice.size();
    for (const auto& p : lattice) {
        const double v = k.value(p.t, p.x, p.y);
        const double e = envelope(p.t, p.x, p.y);
        require(e > 0.0 && v > 0.0, "verify_two_sided_bound: nonpositive value/envelope");
        const double up = v / e, down = e / v;
        if (up > fit.worst_upper) fit.worst_upper = up;
        if (down > fit.worst_lower) {
            fit.worst_lower = down;
            fit.witness_t = p.t;
            fit.witness_r = std::hypot(p.x[0] - p.y[0], p.x[1] - p.y[1]);
        }
    }
    fit.C = std::max({fit.worst_upper, fit.worst_lower, 1.0});
    return fit;
}

GaussianBoundFit fit_gaussian_bound(const KernelBackend& k,
                                    const std::vector<LatticePoint>& lattice,
                                    const Vec& margins) {
    require(k.dim() == 1, "fit_gaussian_bound: 1-D only");
    GaussianBoundFit best;
    best.C = 1e300;
    for (double d : margins) {
        require(d > 0.0, "fit_gaussian_bound: margins must be positive");
        const double a_up = 4.0 * (1.0 + d), a_lo = 4.0 / (1.0 + d);
        // C_up: value <= C t^{-1/2} e^{-r^2/(a_up t)};  C_lo symmetric
        double c_up = 0.0, c_lo = 0.0;
        for (const auto& p : lattice) {
            const double v = k.value(p.t, p.x, p.y);
            if (v <= 0.0) {
                c_up = c_lo = 1e300;
                break;
            }
            const double r = std::fabs(p.x[0] - p.y[0]);
            const double shape_up =
                std::pow(p.t, -0.5) * std::exp(-r * r / (a_up * p.t));
            const double shape_lo =
                std::pow(p.t, -0.5) * std::exp(-r * r / (a_lo * p.t));
            c_up = std::max(c_up, v / shape_up);
            c_lo = std::max(c_lo, shape_lo / v);
        }
        const double c = std::max({c_up, c_lo, 1.0});
        if (c < best.C) {
            best.C = c;
            best.alpha_upper = a_up;
            best.alpha_lower = a_lo;
            best.holds = c < 1e290;
        }
    }
    return best;
}

double diffusion_jump_convolution(const SpectralKernel& jump, double t, double r) {
    jump.prepare({t});
    // Simpson quadrature of int gauss_t(u) jump_t(r - u) du; the Gaussian
    // factor cuts the domain at a few widths.
    const double half = 10.0 * std::sqrt(t) + 1e-3;
    const int n = 4000;  // even
    const double h = 2.0 * half / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double u = -half + i * h;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += w * gauss_density(1, t, std::fabs(u)) *
               jump.value_radial(t, std::fabs(r - u));
    }
    return acc * h / 3.0;
}

}  // namespace heatlab
