#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "heatlab/common.hpp"

namespace heatlab {

// Schroedinger kernel with an inverse-square potential on R^n \ {0},
// n in {3, 4}: generator Delta - b/|x|^2.  Well-posed for
// D = b + (n-2)^2/4 >= 0, with the boundary exponent
// gamma = sqrt(D) - n/2 + 1 governing the kernel's behavior near the
// puncture.  The kernel is radial in each argument separately, so
// evaluation points are (|x|, |y|, cos angle(x, y)).
//
// Primary evaluation is Feynman-Kac Monte Carlo over Brownian bridges:
//   p_t(x, y) = phat_t(x - y) * E[ exp(-b int_0^t |B_s|^{-2} ds) ],
// with the time integral discretized at midpoints and the bridge sampled
// sequentially; each path owns an independent substream so results do not
// depend on scheduling.  A deterministic cross-check integrates the
// perturbation series for the spherical mean twice on a radial grid.

double hardy_gamma(int n, double b);

struct HardyParams {
    int n = 3;
    double b = 0.0;
    double horizon = 1.0;
    int mc_paths = 100000;
    int mc_steps = 256;
    std::uint64_t seed = 1;
    double mc_rel_budget = 0.1;  // flag estimates whose stderr exceeds this
    double origin_floor = 1e-4;  // |B_s| floor inside the potential integral
};

struct HPoint {
    double rx;
    double ry;
    double cos_angle;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    int paths = 0;
    long clamped = 0;  // paths whose log-weight hit the overflow clamp
    bool flagged = false;
};

struct HardyFit {
    double C = 0.0;           // two-sided comparability constant
    double beta_upper = 0.0;  // rate in the upper envelope
    double beta_lower = 0.0;  // rate in the lower envelope
    double C_mid = 0.0;       // central multiplicative fit backing surrogate()
    double beta_mid = 0.0;
    double worst_dev = 0.0;   // sup |log(value / surrogate)| on the fit lattice
    bool holds = false;
};

class HardyKernel {
public:
    explicit HardyKernel(HardyParams params);

    const HardyParams& params() const { return params_; }
    double gamma() const { return gamma_; }
    bool conservative() const { return false; }

    // free heat kernel factor phat_t(|x - y|) in R^n
    double gauss_factor(double t, const HPoint& p) const;

    McEstimate value_mc(double t, const HPoint& p) const;

    // spherical mean over the first argument's direction, by Gauss-Legendre
    // in the angle; the combined standard error adds in quadrature
    McEstimate sphere_mean_mc(double t, double rx, double ry) const;

    // two-sided envelope shape at rate beta:
    //   t^{-n/2} ((rx/sqrt t) ^ 1)^gamma ((ry/sqrt t) ^ 1)^gamma e^{-r^2/(beta t)}
    // where (u ^ 1) means min(u, 1)
    double envelope(double t, const HPoint& p, double beta) const;

    // Fit envelope constants against Monte Carlo values on a lattice and
    // freeze a cheap multiplicative surrogate C_mid * envelope(beta_mid)
    // for sweep drivers that cannot afford a Monte Carlo call per point.
    const HardyFit& calibrate(const std::vector<std::pair<double, HPoint>>& lattice);
    bool calibrated() const { return fit_.holds; }
    const HardyFit& fit() const { return fit_; }
    double surrogate(double t, const HPoint& p) const;

private:
    void check_time(double t) const;

    HardyParams params_;
    double gamma_;
    HardyFit fit_;
};

// Two iterations of the perturbation series for the spherical mean
// (1/|S^2|) int p_t(a w, c e1) dw on a radial grid, n = 3 only: v0 is the
// free spherical mean, v1 and v2 the successive corrected iterates.  The
// gap v2 - v1 estimates the remaining series tail.
struct DuhamelIterates {
    double v0 = 0.0;
    double v1 = 0.0;
    double v2 = 0.0;
};

DuhamelIterates hardy_duhamel_sphere_mean(double b, double t, double a, double c,
                                          int radial_points = 96,
                                          int time_points = 32);

// stable closed form of the free spherical mean in R^3:
// (4 pi t)^{-3/2} (t/(a c)) e^{-(a-c)^2/4t} (1 - e^{-ac/t})
double gauss_sphere_mean3(double t, double a, double c);

// Exact spherical mean of the coupled kernel, both signs of the
// coupling.  The substitution h(x) = |x|^gamma absorbs the inverse
// square term (gamma solves gamma(gamma + n - 2) = b), leaving a Bessel
// flow of effective dimension n + 2 gamma in the radial variable; its
// rotationally invariant sector is
//   (ac)^gamma pi^gamma Gamma(n/2) (4 pi t)^{-(n+2g)/2} (2/z)^nu
//       e^{-(a^2+c^2)/4t} I_nu(z),
// with z = ac/2t and nu = n/2 - 1 + gamma.  At gamma = 0 this collapses
// to the free spherical mean.  Deterministic and cheap, so sweeps use it
// instead of Monte Carlo point values.
double hardy_sphere_mean(int n, double gamma, double t, double a, double c);

}  // namespace heatlab
