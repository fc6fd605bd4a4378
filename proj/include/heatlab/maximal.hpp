#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "heatlab/hardy.hpp"
#include "heatlab/kernels.hpp"
#include "heatlab/space.hpp"
#include "heatlab/symbols.hpp"

namespace heatlab {

// Shared result shape for the maximal-operator family.  Search grids over
// radii/times are geometric with ratio 2^{1/4}; refinement_delta records
// how much the value moves when the grid is refined once more (ratio
// 2^{1/8}), so callers can assert stability instead of exact suprema.
// hl_maximal is the exception: its supremum ranges over every discretely
// distinguishable ball, so it is exact and the delta is zero.
struct MaximalReport {
    std::vector<std::size_t> probes;  // node indices the operator was evaluated at
    Vec values;
    Vec argmax;            // maximizing radius (or time for time_maximal)
    Vec refinement_delta;

    struct Violation {
        double x;
        double lhs;
        double rhs;
        double margin;  // (rhs - lhs)/rhs, negative exactly when violated
    };
    std::vector<Violation> violations;
};

// descending-from-top geometric grid {top/ratio, top/ratio^2, ...} down to
// floor_value, returned ascending
Vec geometric_grid(double top, double ratio, double floor_value);

// Hardy-Littlewood maximal function over balls of radius < R, exact over
// all node-distance radii.  Empty (zero-measure) balls are skipped.
// probes empty means every node.
MaximalReport hl_maximal(const Grid& g, const Vec& f, double R,
                         std::vector<std::size_t> probes = {});

// sup_{0<t<R} |S_t f| over the geometric time grid
MaximalReport time_maximal(KernelBackend& k, const Grid& g, const Vec& f,
                           double R, std::vector<std::size_t> probes,
                           double t_floor = 1e-3, bool refine = true);

// weighted ball averages sup_{s<R} |B(x,s)|^{-1} int_B (|y| ^ 1)^gamma f
// on the punctured radial space; gamma_weight = 0 recovers plain averages
MaximalReport hardy_maximal(const RadialSpace& sp, const Vec& f, double R,
                            double gamma_weight,
                            std::vector<std::size_t> probes);

// sup_{r<R} |f *_k chi_{B_r}(x)| / mu_k(B(0,r)) via the rank-one
// translation kernel of the ball indicator
MaximalReport dunkl_maximal(const Grid& g, const Vec& f, double R, double k,
                            std::vector<std::size_t> probes);

// sup over the cone {(y,t): |y - x| <= aperture * phi(t), t < t_hi} of
// |S_t f(y)|; aperture 0 degenerates to time_maximal at x
double nontangential_maximal(KernelBackend& k, const Grid& g, const Vec& f,
                             double x_center, const ScaleFunction& phi,
                             double aperture, double t_hi,
                             double t_floor = 1e-3);

// One domination certificate: H*_R f <= K*(xi1(x,R) M_{Gamma(R)} f
//                                          + xi2(x,R) S_{time_factor*R} f).
// The shapes carry the per-family structure; the single multiplier K is
// fitted on a preliminary battery and frozen before the test battery.
struct DominationRecipe {
    std::string family;
    std::function<double(double)> hl_radius;    // R -> ball-radius window
    double time_factor = 1.0;                   // S anchored at time_factor*R
    std::function<double(double, double)> xi1;  // (x, R) shape on the M term
    std::function<double(double, double)> xi2;  // (x, R) shape on the S term
};

DominationRecipe gaussian_recipe();
DominationRecipe levy_recipe(const LevySymbol& s, int n);
// rho = alpha_upper/alpha_lower from a fitted two-sided Gaussian bound
DominationRecipe drift_recipe(double alpha_upper, double alpha_lower, int n);

struct DominationReport {
    double required_constant = 0.0;  // smallest K certifying this battery
    double worst_margin = 1e300;     // min margin with the supplied K
    int checks = 0;
    std::vector<MaximalReport::Violation> violations;
};

// K <= 0 switches to fitting mode: only required_constant is meaningful
DominationReport check_domination(KernelBackend& k, const Grid& g,
                                  const std::vector<Vec>& battery, double R,
                                  const DominationRecipe& recipe, double K,
                                  const std::vector<std::size_t>& probes,
                                  double t_floor = 1e-3);

// Hardy flavor on the radial space: H* and the S term are computed with
// the exact spherical-mean kernel (hardy_sphere_mean), which handles
// both coupling signs deterministically; M goes through the weighted
// hardy_maximal.  Shapes switch on the sign of the boundary exponent.
DominationReport check_domination_hardy(const HardyKernel& k,
                                        const RadialSpace& sp,
                                        const std::vector<Vec>& battery,
                                        double R, double K,
                                        const std::vector<std::size_t>& probes,
                                        double t_floor = 1e-3);

// S_t f at the probe radii for a radial profile f, through the exact
// rotationally invariant sector of the kernel
Vec radial_sector_apply(const HardyKernel& k, const RadialSpace& sp,
                        const Vec& f, double t,
                        const std::vector<std::size_t>& probes);

struct HarnackReport {
    struct Row {
        double x1, x2;
        double ratio;        // sup_y phi_{eta R}(x1,y)/phi_R(x2,y)
        double lower_bound;  // min of phi_R(x1,y) over |y-x1| <= ball_radius
    };
    std::vector<Row> rows;
};

HarnackReport harnack_check(KernelBackend& k, const Grid& g, double eta,
                            double R,
                            const std::vector<std::pair<double, double>>& pairs,
                            double ball_radius);

// nonnegative test functions: mixtures of indicators, bumps and spikes
std::vector<Vec> random_f_battery(const Grid& g, int count, std::uint64_t seed);
std::vector<Vec> random_radial_battery(const RadialSpace& sp, int count,
                                       std::uint64_t seed);

}  // namespace heatlab
