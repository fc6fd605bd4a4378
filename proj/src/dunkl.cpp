#include "heatlab/dunkl.hpp"

#include <cmath>

#include "heatlab/special.hpp"

namespace heatlab {

double dunkl_ck(double k) {
    return std::exp((k + 0.5) * std::numbers::ln2 + std::lgamma(k + 0.5));
}

double log_dunkl_ek(double k, double z) {
    // Two confluent representations related by the Kummer transform:
    //   E_k = e^{-z} M(k+1, 2k+1, 2z) = e^{z} M(k, 2k+1, -2z).
    // Pick the one whose series has a nonnegative argument.
    if (z >= 0.0) return -z + log_kummer_m(k + 1.0, 2.0 * k + 1.0, 2.0 * z);
    return z + log_kummer_m(k, 2.0 * k + 1.0, -2.0 * z);
}

DunklKernel::DunklKernel(double k, double horizon) : k_(k), horizon_(horizon) {
    require(k >= 0.0, "DunklKernel: multiplicity must be nonnegative");
    require(horizon > 0.0, "DunklKernel: horizon must be positive");
    log_ck_ = (k + 0.5) * std::numbers::ln2 + std::lgamma(k + 0.5);
    family_ = "dunkl:k=" + std::to_string(k);
}

double DunklKernel::value(double t, const Point& x, const Point& y) const {
    check_time(t);
    const double a = x[0], b = y[0];
    const double s = std::sqrt(2.0 * t);
    const double d = 1.0 + 2.0 * k_;
    const double lg = -log_ck_ - 0.5 * d * std::log(2.0 * t) -
                      (a * a + b * b) / (4.0 * t) +
                      log_dunkl_ek(k_, (a / s) * (b / s));
    return std::exp(lg);
}

double DunklKernel::mass(double t, const Point& x) const {
    check_time(t);
    // trapezoid against the |y|^{2k} measure; the window covers the
    // gaussian envelope tails on both sides of the source
    const double half = std::fabs(x[0]) + 16.0 * std::sqrt(2.0 * t) + 1.0;
    const int n = 16000;
    const double h = 2.0 * half / n;
    double m = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double y = -half + i * h;
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        m += w * value(t, x, {y, 0.0}) * std::pow(std::fabs(y), 2.0 * k_);
    }
    return m * h;
}

Density DunklKernel::measure() const {
    const double k = k_;
    return [k](double x, double) { return std::pow(std::fabs(x), 2.0 * k); };
}

double dunkl_ball_measure(double k, double r) {
    require(k >= 0.0 && r >= 0.0, "dunkl_ball_measure: bad arguments");
    return 2.0 * std::pow(r, 2.0 * k + 1.0) / (2.0 * k + 1.0);
}

double dunkl_ball_kernel(double k, double r, double x, double y) {
    require(k >= 0.0 && r > 0.0, "dunkl_ball_kernel: bad arguments");
    if (k == 0.0) return std::fabs(x - y) < r ? 1.0 : 0.0;

    const double p = x * y;
    if (p == 0.0) return x * x + y * y < r * r ? 1.0 : 0.0;

    // weight of {t : x^2 + y^2 - 2xyt < r^2} under
    // b_k (1+t)(1-t^2)^{k-1} dt on [-1, 1]; in u = (1+t)/2 the cumulative
    // from the left endpoint is the regularized incomplete beta
    // I_u(k+1, k)
    const double tstar = (x * x + y * y - r * r) / (2.0 * p);
    double u0 = 0.0, u1 = 1.0;
    if (p > 0.0)
        u0 = std::clamp((1.0 + tstar) / 2.0, 0.0, 1.0);
    else
        u1 = std::clamp((1.0 + tstar) / 2.0, 0.0, 1.0);
    if (u1 <= u0) return 0.0;
    const double hi = u1 == 1.0 ? 1.0 : reg_inc_beta(k + 1.0, k, u1);
    const double lo = u0 == 0.0 ? 0.0 : reg_inc_beta(k + 1.0, k, u0);
    return std::max(hi - lo, 0.0);
}

}  // namespace heatlab
