#include "heatlab/drift.hpp"

#include <cmath>
#include <mutex>

namespace heatlab {

namespace {

// Thomas solve of the constant-coefficient system (a, d, c) r = rhs,
// with the elimination coefficients cp precomputed for this matrix.
void tridiag_factor(double a, double d, double c, std::size_t m, Vec& cp) {
    cp.resize(m);
    cp[0] = c / d;
    for (std::size_t j = 1; j < m; ++j) cp[j] = c / (d - a * cp[j - 1]);
}

void tridiag_solve(double a, double d, const Vec& cp, Vec& r) {
    const std::size_t m = cp.size();
    r[0] /= d;
    for (std::size_t j = 1; j < m; ++j)
        r[j] = (r[j] - a * r[j - 1]) / (d - a * cp[j - 1]);
    for (std::size_t j = m - 1; j-- > 0;) r[j] -= cp[j] * r[j + 1];
}

}  // namespace

DriftKernel::DriftKernel(double drift, double horizon, DriftOptions opt)
    : drift_(drift), horizon_(horizon), opt_(opt) {
    require(horizon > 0.0, "DriftKernel: horizon must be positive");
    require(opt_.half_width >= 6.0 && opt_.nodes >= 2001,
            "DriftKernel: solver box too small");
    require(opt_.delta_steps >= 8 && opt_.smooth_steps >= 8,
            "DriftKernel: too few time steps");
    h_ = 2.0 * opt_.half_width / (opt_.nodes - 1);
    family_ = "drift:" + std::to_string(drift);
}

void DriftKernel::check_point(double z) const {
    require(std::fabs(z) <= opt_.half_width - 2.0,
            family_ + ": point too close to the solver box boundary");
}

Vec DriftKernel::delta_profile(double center) const {
    // hat delta: unit mass split between the two bracketing nodes, which
    // makes the evolved profile a linear interpolation of the kernel in
    // its source argument
    Vec u(opt_.nodes, 0.0);
    const double s = (center + opt_.half_width) / h_;
    const std::size_t j = std::size_t(s);
    const double th = s - double(j);
    u[j] = (1.0 - th) / h_;
    u[j + 1] = th / h_;
    return u;
}

void DriftKernel::evolve(Vec& u, double span, int steps, double b,
                         bool damped) const {
    const std::size_t m = opt_.nodes - 2;  // interior unknowns
    const double dt = span / steps;
    Vec cp, rhs(m);

    auto be_steps = [&](double tau, int count) {
        const double lam = tau / (h_ * h_), mu = b * tau / (2.0 * h_);
        const double a = -(lam - mu), d = 1.0 + 2.0 * lam, c = -(lam + mu);
        tridiag_factor(a, d, c, m, cp);
        for (int s = 0; s < count; ++s) {
            for (std::size_t j = 0; j < m; ++j) rhs[j] = u[j + 1];
            tridiag_solve(a, d, cp, rhs);
            for (std::size_t j = 0; j < m; ++j) u[j + 1] = rhs[j];
        }
    };

    int cn_steps = steps;
    if (damped) {
        // backward Euler half-steps over the first two slabs damp the
        // high-frequency content of a delta start
        be_steps(dt / 2.0, 4);
        cn_steps -= 2;
    }

    const double lam = dt / (2.0 * h_ * h_), mu = b * dt / (4.0 * h_);
    const double a = -(lam - mu), d = 1.0 + 2.0 * lam, c = -(lam + mu);
    tridiag_factor(a, d, c, m, cp);
    for (int s = 0; s < cn_steps; ++s) {
        for (std::size_t j = 0; j < m; ++j) {
            const double lft = u[j], mid = u[j + 1], rgt = u[j + 2];
            rhs[j] = mid + lam * (lft - 2.0 * mid + rgt) + mu * (rgt - lft);
        }
        tridiag_solve(a, d, cp, rhs);
        for (std::size_t j = 0; j < m; ++j) u[j + 1] = rhs[j];
    }
}

const Vec& DriftKernel::profile(bool row, double key, double t) const {
    auto& cache = row ? rows_ : cols_;
    // rows evolve in the source argument, which flips the drift sign
    const double b = row ? -drift_ : drift_;
    {
        std::shared_lock lk(mutex_);
        auto it = cache.find(key);
        if (it != cache.end()) {
            auto jt = it->second.find(t);
            if (jt != it->second.end()) return jt->second;
        }
    }
    std::unique_lock lk(mutex_);
    Snapshots& snaps = cache[key];
    auto jt = snaps.find(t);
    if (jt != snaps.end()) return jt->second;

    // continue from the latest earlier snapshot, or start at the delta
    auto lb = snaps.lower_bound(t);
    Vec u;
    double start = 0.0;
    if (lb != snaps.begin()) {
        --lb;
        start = lb->first;
        u = lb->second;
    } else {
        u = delta_profile(key);
    }
    const bool fresh = (start == 0.0);
    evolve(u, t - start, fresh ? opt_.delta_steps : opt_.smooth_steps, b, fresh);
    return snaps.emplace(t, std::move(u)).first->second;
}

double DriftKernel::interp(const Vec& u, double z) const {
    const double s = (z + opt_.half_width) / h_;
    const std::size_t j = std::min(std::size_t(s), u.size() - 2);
    const double th = s - double(j);
    return (1.0 - th) * u[j] + th * u[j + 1];
}

double DriftKernel::value(double t, const Point& x, const Point& y) const {
    check_time(t);
    if (t < opt_.min_time)
        throw resolution_error(family_ + ": time below the solver floor " +
                               std::to_string(opt_.min_time));
    check_point(x[0]);
    check_point(y[0]);
    {
        std::shared_lock lk(mutex_);
        auto it = rows_.find(x[0]);
        if (it != rows_.end()) {
            auto jt = it->second.find(t);
            if (jt != it->second.end()) return interp(jt->second, y[0]);
        }
        auto ic = cols_.find(y[0]);
        if (ic != cols_.end()) {
            auto jt = ic->second.find(t);
            if (jt != ic->second.end()) return interp(jt->second, x[0]);
        }
    }
    return interp(profile(true, x[0], t), y[0]);
}

double DriftKernel::mass(double t, const Point& x) const {
    check_time(t);
    check_point(x[0]);
    const Vec& row = profile(true, x[0], t);
    double m = 0.0;
    for (double v : row) m += v;
    return m * h_;  // boundary values are pinned to zero
}

Vec DriftKernel::fast_apply(double t, const Vec& f, const Grid& g) const {
    check_time(t);
    require(g.dim == 1, "DriftKernel: fast_apply needs a 1-D grid");
    require(g.size() == f.size(), "DriftKernel: fast_apply size mismatch");
    require(g.half_width <= opt_.half_width,
            "DriftKernel: grid wider than the solver box");

    // sample f onto the solver grid (zero outside the grid's support)
    Vec u(opt_.nodes, 0.0);
    const double gh = g.axis[1] - g.axis[0];
    for (int j = 1; j + 1 < opt_.nodes; ++j) {
        const double z = -opt_.half_width + j * h_;
        const double s = (z - g.axis.front()) / gh;
        if (s < 0.0 || s > double(g.points_per_axis - 1)) continue;
        const std::size_t i = std::min(std::size_t(s), g.axis.size() - 2);
        const double th = s - double(i);
        u[j] = (1.0 - th) * f[i] + th * f[i + 1];
    }
    evolve(u, t, opt_.smooth_steps, drift_, true);

    Vec out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = interp(u, g.axis[i]);
    return out;
}

void DriftKernel::prewarm_row(double x, const Vec& times) const {
    check_point(x);
    for (double t : times) {
        check_time(t);
        profile(true, x, t);
    }
}

void DriftKernel::prewarm_column(double y, const Vec& times) const {
    check_point(y);
    for (double t : times) {
        check_time(t);
        profile(false, y, t);
    }
}

}  // namespace heatlab
