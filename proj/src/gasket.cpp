#include "heatlab/gasket.hpp"

#include <cmath>

namespace heatlab {

GasketKernel::GasketKernel(const GasketGraph& g, double horizon)
    : horizon_(horizon), level_(g.level), corner_(g.corners[0]) {
    require(horizon > 0.0, "GasketKernel: horizon must be positive");
    const std::size_t n = g.size();
    require(n >= 3, "GasketKernel: graph too small");
    if (n > 3500)
        throw resource_error("GasketKernel: dense eigensolve beyond memory budget");

    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        lap(i, i) = double(g.adj[i].size());
        for (int j : g.adj[i]) lap(i, j) = -1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap);
    require(es.info() == Eigen::Success, "GasketKernel: eigensolver failed");
    evec_ = es.eigenvectors();
    eval_ = es.eigenvalues().cwiseMax(0.0);
}

void GasketKernel::check_time(double t) const {
    require(t >= 0.0, "GasketKernel: negative time");
    if (t > horizon_)
        throw resolution_error("GasketKernel: time beyond validity horizon");
}

double GasketKernel::value(double t, int i, int j) const {
    check_time(t);
    require(i >= 0 && j >= 0 && std::size_t(i) < size() && std::size_t(j) < size(),
            "GasketKernel: vertex index out of range");
    const int n = int(size());
    double acc = 0.0;
    for (int m = 0; m < n; ++m)
        acc += evec_(i, m) * evec_(j, m) * std::exp(-t * eval_(m));
    return acc;
}

Vec GasketKernel::row(double t, int i) const {
    check_time(t);
    require(i >= 0 && std::size_t(i) < size(), "GasketKernel: vertex index out of range");
    const int n = int(size());
    Eigen::VectorXd coef(n);
    for (int m = 0; m < n; ++m) coef(m) = std::exp(-t * eval_(m)) * evec_(i, m);
    const Eigen::VectorXd r = evec_ * coef;
    return Vec(r.data(), r.data() + r.size());
}

Vec GasketKernel::apply(double t, const Vec& f) const {
    check_time(t);
    require(f.size() == size(), "GasketKernel: function size mismatch");
    const int n = int(size());
    const Eigen::Map<const Eigen::VectorXd> fv(f.data(), n);
    Eigen::VectorXd coef = evec_.transpose() * fv;
    for (int m = 0; m < n; ++m) coef(m) *= std::exp(-t * eval_(m));
    const Eigen::VectorXd out = evec_ * coef;
    return Vec(out.data(), out.data() + out.size());
}

double GasketKernel::row_sum_deviation(double t) const {
    check_time(t);
    double worst = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        const Vec r = row(t, int(i));
        double s = 0.0;
        for (double v : r) s += v;
        worst = std::max(worst, std::fabs(s - 1.0));
    }
    return worst;
}

double GasketKernel::trace_average(double t) const {
    check_time(t);
    double acc = 0.0;
    for (int m = 0; m < int(size()); ++m) acc += std::exp(-t * eval_(m));
    return acc / double(size());
}

ExponentFit fit_diagonal_exponent(const GasketKernel& k, int samples) {
    require(samples >= 8, "fit_diagonal_exponent: too few samples");
    require(k.level() >= 4, "fit_diagonal_exponent: level too low for a scaling window");
    ExponentFit fit;
    // anchor the window at the latest usable time, an order of magnitude
    // clear of the relaxation time ~5^level, and span whole log-5 periods
    // backwards; the lower edge stays past the small-t crossover when the
    // level allows it
    fit.t_hi = std::pow(5.0, k.level()) / 30.0;
    const int periods = (fit.t_hi / 25.0 >= 15.0) ? 2 : 1;
    fit.t_lo = fit.t_hi / std::pow(5.0, periods);
    fit.points = samples;

    Vec lt(samples), lv(samples);
    const double step = std::log(fit.t_hi / fit.t_lo) / (samples - 1);
    for (int i = 0; i < samples; ++i) {
        const double t = fit.t_lo * std::exp(i * step);
        lt[i] = std::log(t);
        lv[i] = std::log(k.value(t, k.corner(), k.corner()));
    }
    double mt = 0.0, mv = 0.0;
    for (int i = 0; i < samples; ++i) {
        mt += lt[i];
        mv += lv[i];
    }
    mt /= samples;
    mv /= samples;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < samples; ++i) {
        num += (lt[i] - mt) * (lv[i] - mv);
        den += (lt[i] - mt) * (lt[i] - mt);
    }
    const double slope = num / den;
    fit.exponent = -slope;
    fit.intercept = mv - slope * mt;
    for (int i = 0; i < samples; ++i)
        fit.max_residual = std::max(
            fit.max_residual, std::fabs(lv[i] - (fit.intercept + slope * lt[i])));
    return fit;
}

}  // namespace heatlab
