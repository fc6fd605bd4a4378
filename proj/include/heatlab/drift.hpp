#pragma once

#include <map>

#include "heatlab/kernels.hpp"

namespace heatlab {

// 1-D advection-diffusion kernel: generator u'' + drift u', integrated by
// Crank-Nicolson on a fine Dirichlet box with a damped (backward Euler)
// start from a hat-function delta.  Rows (fixed x, function of y) come
// from the adjoint equation, columns (fixed y, function of x) from the
// forward one; both are cached per time, so a lattice sweep costs one
// solve per probe line instead of one per point.
struct DriftOptions {
    double half_width = 14.0;
    int nodes = 28001;       // uniform solver grid, h = 1e-3 at defaults
    int delta_steps = 512;   // time steps when starting from a delta
    int smooth_steps = 256;  // time steps when continuing a cached profile
    double min_time = 0.01;  // below this the hat delta is under-resolved
};

class DriftKernel : public KernelBackend {
public:
    DriftKernel(double drift, double horizon, DriftOptions opt = {});

    double value(double t, const Point& x, const Point& y) const override;
    double mass(double t, const Point& x) const override;
    int dim() const override { return 1; }
    double horizon() const override { return horizon_; }
    const std::string& family() const override { return family_; }

    bool has_fast_apply() const override { return true; }
    Vec fast_apply(double t, const Vec& f, const Grid& g) const override;

    double drift() const { return drift_; }

    // Solve once, serve many: after prewarm_row(x, times) every
    // value(t, x, .) with t in times is an interpolation, and likewise
    // prewarm_column for a fixed source point.  Sweep drivers call these
    // before fanning out.
    void prewarm_row(double x, const Vec& times) const;
    void prewarm_column(double y, const Vec& times) const;

private:
    using Snapshots = std::map<double, Vec>;  // time -> profile

    Vec delta_profile(double center) const;
    void evolve(Vec& u, double span, int steps, double b, bool damped) const;
    const Vec& profile(bool row, double key, double t) const;
    double interp(const Vec& u, double z) const;
    void check_point(double z) const;

    double drift_;
    double horizon_;
    DriftOptions opt_;
    double h_;
    std::string family_;
    mutable std::map<double, Snapshots> rows_, cols_;
    mutable std::shared_mutex mutex_;
};

}  // namespace heatlab
