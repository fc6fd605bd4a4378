#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>

#include "heatlab/common.hpp"
#include "heatlab/space.hpp"
#include "heatlab/symbols.hpp"

namespace heatlab {

using Point = std::array<double, 2>;

// A transition-density family phi_t(x, y) on R^dim with respect to the
// backend's reference measure, valid for t in (0, horizon].
class KernelBackend {
public:
    virtual ~KernelBackend() = default;

    virtual double value(double t, const Point& x, const Point& y) const = 0;

    // Precompute whatever makes value() cheap and lock-free at these
    // times.  Sweep drivers call this before going parallel.
    virtual void prepare(const Vec& /*times*/) const {}

    // Total mass of phi_t(x, .) over the backend's natural domain,
    // evaluated numerically (not assumed).
    virtual double mass(double t, const Point& x) const = 0;

    virtual int dim() const = 0;
    virtual double horizon() const = 0;
    virtual bool conservative() const { return true; }
    virtual const std::string& family() const = 0;

    // Backends that can apply the semigroup faster than pairwise
    // quadrature (e.g. by advancing a PDE solve) override this.
    virtual bool has_fast_apply() const { return false; }
    virtual Vec fast_apply(double /*t*/, const Vec& /*f*/, const Grid& /*g*/) const {
        throw invalid_parameter("fast_apply not supported by " + family());
    }

protected:
    void check_time(double t) const {
        if (!(t > 0.0) || t > horizon())
            throw resolution_error(family() + ": time " + std::to_string(t) +
                                   " outside validity window (0, " +
                                   std::to_string(horizon()) + "]");
    }
};

double gauss_density(int n, double t, double r);  // (4 pi t)^{-n/2} e^{-r^2/4t}

class GaussianKernel : public KernelBackend {
public:
    GaussianKernel(int dim, double horizon);
    double value(double t, const Point& x, const Point& y) const override;
    double mass(double t, const Point& x) const override;
    int dim() const override { return dim_; }
    double horizon() const override { return horizon_; }
    const std::string& family() const override { return family_; }

private:
    int dim_;
    double horizon_;
    std::string family_ = "gaussian";
};

// Isotropic translation-invariant kernel obtained by Fourier inversion of
// exp(-t * symbol(|xi|)), optionally with a diffusion part added to the
// exponent.  1-D uses an FFT on a frequency grid wide enough that the
// integrand tail is below 1e-14 at the smallest prepared time; 2-D uses a
// direct Hankel quadrature.  Values are served from per-time radial
// tables with cubic interpolation.
struct SpectralOptions {
    double radial_step = 5e-3;   // near-field table spacing (1-D)
    int fft_log2_size = 20;      // 1-D transform size
    double valid_radius = 24.0;  // largest |x-y| served by value()
    int hankel_radial_points = 768;  // 2-D table resolution
};

class SpectralKernel : public KernelBackend {
public:
    SpectralKernel(LevySymbol symbol, int dim, double horizon,
                   bool add_laplacian = false, SpectralOptions opt = {});

    double value(double t, const Point& x, const Point& y) const override;
    double value_radial(double t, double r) const;
    void prepare(const Vec& times) const override;
    // For 1-D the aliased radial trapezoid folds the heavy tail back into
    // the period, so the discrete mass reproduces exp(-t psi(0)) = 1 up to
    // the frequency truncation; 2-D combines near-field quadrature with an
    // envelope tail estimate.
    double mass(double t, const Point& x) const override;
    int dim() const override { return dim_; }
    double horizon() const override { return horizon_; }
    const std::string& family() const override { return family_; }

    const LevySymbol& symbol() const { return symbol_; }
    // effective Fourier exponent (symbol plus optional |xi|^2)
    double exponent(double xi) const;
    bool has_diffusion_part() const { return add_laplacian_; }

private:
    struct Table {
        double h = 0.0;   // near-field spacing
        Vec val;          // near-field values on i*h
        double mass = 0.0;
    };
    const Table& table_for(double t) const;
    Table build_table_1d(double t) const;
    Table build_table_2d(double t) const;

    LevySymbol symbol_;
    int dim_;
    double horizon_;
    bool add_laplacian_;
    SpectralOptions opt_;
    std::string family_;
    mutable std::map<double, Table> cache_;
    mutable std::shared_mutex mutex_;
};

// Quadrature application of the semigroup on a grid:
// (S_t f)(x_i) = sum_j phi_t(x_i, x_j) w_j f_j.
Vec apply_semigroup(const KernelBackend& k, double t, const Vec& f, const Grid& g);

// Chapman-Kolmogorov defect |int phi_s(x,z) phi_t(z,y) dmu(z) - phi_{s+t}(x,y)|
// relative to phi_{s+t}(x,y), with the z-integral over the supplied grid.
double chapman_kolmogorov_defect(const KernelBackend& k, double s, double t,
                                 const Point& x, const Point& y, const Grid& z_grid);

// Two-sided comparability fit: the smallest constant C with
//   envelope / C <= value <= C * envelope
// over a (t, x, y) lattice, with witnesses.
struct BoundFit {
    double C = 0.0;
    double worst_upper = 0.0;  // max value / envelope
    double worst_lower = 0.0;  // max envelope / value
    double witness_t = 0.0;
    double witness_r = 0.0;
    std::size_t lattice_size = 0;
};

struct LatticePoint {
    double t;
    Point x;
    Point y;
};

using EnvelopeFn = std::function<double(double t, const Point& x, const Point& y)>;

BoundFit verify_two_sided_bound(const KernelBackend& k, const EnvelopeFn& envelope,
                                const std::vector<LatticePoint>& lattice);

// Gaussian two-sided bound fit for a 1-D kernel: searches a small family
// of rate pairs (a1, a2) = (4(1+d), 4/(1+d)) and reports the pair with the
// smallest comparability constant over the lattice.
struct GaussianBoundFit {
    double C = 0.0;
    double alpha_upper = 0.0;  // rate in the upper envelope
    double alpha_lower = 0.0;  // rate in the lower envelope
    bool holds = false;
};

GaussianBoundFit fit_gaussian_bound(const KernelBackend& k,
                                    const std::vector<LatticePoint>& lattice,
                                    const Vec& margins);

// Convolution cross-check for diffusion + jump kernels:
// (gaussian_t * jump_t)(r) by Simpson quadrature against the jump
// backend's radial table.
double diffusion_jump_convolution(const SpectralKernel& jump, double t, double r);

}  // namespace heatlab
