#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "heatlab/common.hpp"

namespace heatlab {

// Radial negative-definite symbol psi: [0, inf) -> [0, inf), psi(0) = 0,
// strictly increasing, together with its weak scaling envelope
//   c_lo * lambda^alpha_lo * psi(theta) <= psi(lambda theta)
//                                       <= C_hi * lambda^alpha_hi * psi(theta)
// for lambda >= 1.  The envelope drives inverse brackets, kernel bounds
// and the doubling constant of the induced scale function.
struct LevySymbol {
    std::string name;
    std::function<double(double)> psi;
    double alpha_lo = 0.0;
    double alpha_hi = 0.0;
    double c_lo = 1.0;
    double C_hi = 1.0;
    bool verified = false;

    double operator()(double theta) const { return psi(theta); }
};

// psi(theta) = theta^(2s), s in (0, 1)
LevySymbol make_power_symbol(double s);

// psi(theta) = theta^(2 s1) + theta^(2 s2), 0 < s1 <= s2 < 1
LevySymbol make_mixed_symbol(double s1, double s2);

// Tabulated symbol: log-log linear interpolation through strictly
// increasing (theta, psi) pairs, power-law continuation beyond the table
// using the boundary segment slopes.  The scaling exponents are the
// caller's claim and stay unverified until verify_weak_scaling passes.
LevySymbol make_table_symbol(std::vector<std::pair<double, double>> points,
                             double alpha_lo, double alpha_hi,
                             double c_lo, double C_hi);

// Generalized inverse psi^-(y) by bisection inside the envelope bracket.
double inverse_symbol(const LevySymbol& s, double y);

struct ScalingReport {
    bool ok = false;
    double worst_lower = 0.0;   // min over the grid of psi(l t)/(c l^a psi(t))
    double worst_upper = 0.0;   // max over the grid of psi(l t)/(C l^A psi(t))
    double witness_lambda = 0.0;
    double witness_theta = 0.0;
};

// Checks the envelope on finite grids (lambda >= 1) and flips
// symbol.verified on success.
ScalingReport verify_weak_scaling(LevySymbol& s,
                                  const Vec& lambda_grid,
                                  const Vec& theta_grid,
                                  double slack = 1e-9);

// Space-time scale function phi(r) = 1 / psi^-(1/r) and its doubled
// companion Gamma(r) = phi(2r).
struct ScaleFunction {
    std::shared_ptr<const LevySymbol> symbol;
    double operator()(double r) const;
    double gamma(double r) const { return (*this)(2.0 * r); }
};

ScaleFunction make_scale_function(const LevySymbol& s);

// Two-sided stable-like envelope shape for the transition density:
// min( psi^-(1/t)^n, t * psi(1/r) / r^n ).  r = 0 falls back to the
// on-diagonal branch.
double levy_envelope(const LevySymbol& s, double t, double r, int n);

// Smallest dilation lambda > 1 with c_lo * lambda^alpha_lo >= 2, so that
// psi^-(2 theta) <= lambda * psi^-(theta).
double lambda_for_doubling(const LevySymbol& s);

}  // namespace heatlab
