#pragma once

#include <Eigen/Dense>

#include "heatlab/common.hpp"
#include "heatlab/space.hpp"

namespace heatlab {

// Heat kernel e^{-tL} of the pre-gasket graph Laplacian L = D - A under
// the counting measure.  L annihilates constants and is symmetric, so the
// kernel is exactly row-stochastic and symmetric; we diagonalize once and
// evaluate every time slice from the spectrum.  Vertices are addressed by
// index, not by coordinates.
class GasketKernel {
public:
    explicit GasketKernel(const GasketGraph& g, double horizon = 1e6);

    int level() const { return level_; }
    std::size_t size() const { return std::size_t(evec_.rows()); }
    double horizon() const { return horizon_; }
    int corner() const { return corner_; }

    double value(double t, int i, int j) const;
    Vec row(double t, int i) const;
    Vec apply(double t, const Vec& f) const;

    // max_i |sum_j phi_t(i,j) - 1|; zero up to roundoff for any t
    double row_sum_deviation(double t) const;
    // (1/N) tr e^{-tL}, cheap since only eigenvalues enter
    double trace_average(double t) const;

private:
    void check_time(double t) const;

    Eigen::MatrixXd evec_;
    Eigen::VectorXd eval_;
    double horizon_;
    int level_;
    int corner_;
};

// Least-squares fit of log phi_t(x,x) against log t at the corner vertex.
// The corner sees the unbounded gasket out to distance 2^level, so its
// diagonal decays like t^{-exponent} across [t_hi/5^p, t_hi] with
// t_hi ~ 5^level/30; spanning whole powers of 5 keeps an integer number
// of log-periodic oscillations inside the fit, and anchoring the window
// late keeps the small-t crossover out of it.
struct ExponentFit {
    double exponent = 0.0;   // positive decay rate, expected near log3/log5
    double intercept = 0.0;
    double max_residual = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    int points = 0;
};

ExponentFit fit_diagonal_exponent(const GasketKernel& k, int samples = 25);

}  // namespace heatlab
