#pragma once

#include "heatlab/kernels.hpp"

namespace heatlab {

// Rank-one Dunkl heat kernel on the line with reference measure
// |y|^{2k} dy.  The kernel is
//   c_k^{-1} (2t)^{-d/2} exp(-(x^2+y^2)/4t) E_k(x/sqrt(2t), y/sqrt(2t)),
// d = 1 + 2k, where E_k is the rank-one Dunkl kernel and
// c_k = int exp(-u^2/2) |u|^{2k} du.  k = 0 collapses to the classical
// heat kernel.

double dunkl_ck(double k);  // 2^{k+1/2} Gamma(k+1/2)

// log E_k(x, y); depends on the product z = x y only.  Evaluated through
// positive-term confluent series on either side of z = 0, so it is stable
// for large |z|.
double log_dunkl_ek(double k, double z);

class DunklKernel : public KernelBackend {
public:
    DunklKernel(double k, double horizon);

    double value(double t, const Point& x, const Point& y) const override;
    double mass(double t, const Point& x) const override;
    int dim() const override { return 1; }
    double horizon() const override { return horizon_; }
    const std::string& family() const override { return family_; }

    double k() const { return k_; }
    // density of the reference measure, for grid building
    Density measure() const;

private:
    double k_;
    double horizon_;
    double log_ck_;
    std::string family_;
};

// Translated ball indicator for the same measure: W_r(x, y) averages the
// indicator of {x^2 + y^2 - 2xyt < r^2} against the weight
// b_k (1+t)(1-t^2)^{k-1} on t in [-1, 1], which reduces to a difference
// of regularized incomplete beta values.  Symmetric in (x, y), with
//   int W_r(x, y) |y|^{2k} dy = dunkl_ball_measure(k, r)
// for every x.  k = 0 degenerates to the indicator of |x - y| < r.
double dunkl_ball_kernel(double k, double r, double x, double y);

// measure of the centered ball: 2 r^{2k+1} / (2k+1)
double dunkl_ball_measure(double k, double r);

}  // namespace heatlab
