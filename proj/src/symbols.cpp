#include "heatlab/symbols.hpp"

#include <algorithm>
#include <cmath>

namespace heatlab {

LevySymbol make_power_symbol(double s) {
    require(s > 0.0 && s < 1.0, "make_power_symbol: s must lie in (0,1)");
    LevySymbol sym;
    sym.name = "power(" + std::to_string(s) + ")";
    const double a = 2.0 * s;
    sym.psi = [a](double theta) { return std::pow(theta, a); };
    sym.alpha_lo = sym.alpha_hi = a;
    sym.c_lo = sym.C_hi = 1.0;
    return sym;
}

LevySymbol make_mixed_symbol(double s1, double s2) {
    require(s1 > 0.0 && s1 <= s2 && s2 < 1.0,
            "make_mixed_symbol: need 0 < s1 <= s2 < 1");
    LevySymbol sym;
    sym.name = "mixed(" + std::to_string(s1) + "," + std::to_string(s2) + ")";
    const double a1 = 2.0 * s1, a2 = 2.0 * s2;
    sym.psi = [a1, a2](double theta) {
        return std::pow(theta, a1) + std::pow(theta, a2);
    };
    // psi(l t) = l^a1 t^a1 + l^a2 t^a2 sits between l^a1 psi(t) and
    // l^a2 psi(t) for l >= 1, so the envelope constants are exactly 1.
    sym.alpha_lo = a1;
    sym.alpha_hi = a2;
    sym.c_lo = sym.C_hi = 1.0;
    return sym;
}

LevySymbol make_table_symbol(std::vector<std::pair<double, double>> points,
                             double alpha_lo, double alpha_hi,
                             double c_lo, double C_hi) {
    require(points.size() >= 2, "make_table_symbol: need at least 2 points");
    std::sort(points.begin(), points.end());
    for (std::size_t i = 0; i < points.size(); ++i) {
        require(points[i].first > 0.0 && points[i].second > 0.0,
                "make_table_symbol: entries must be positive");
        if (i > 0)
            require(points[i].first > points[i - 1].first &&
                        points[i].second > points[i - 1].second,
                    "make_table_symbol: table must be strictly increasing");
    }
    require(alpha_lo > 0.0 && alpha_hi >= alpha_lo && c_lo > 0.0 && C_hi >= c_lo,
            "make_table_symbol: malformed scaling envelope");

    std::vector<double> lt(points.size()), lp(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        lt[i] = std::log(points[i].first);
        lp[i] = std::log(points[i].second);
    }
    LevySymbol sym;
    sym.name = "table[" + std::to_string(points.size()) + "]";
    sym.psi = [lt, lp](double theta) -> double {
        if (theta <= 0.0) return 0.0;
        const double x = std::log(theta);
        std::size_t hi = std::upper_bound(lt.begin(), lt.end(), x) - lt.begin();
        if (hi == 0) hi = 1;                       // continue first segment
        if (hi == lt.size()) hi = lt.size() - 1;   // continue last segment
        const std::size_t lo = hi - 1;
        const double slope = (lp[hi] - lp[lo]) / (lt[hi] - lt[lo]);
        return std::exp(lp[lo] + slope * (x - lt[lo]));
    };
    sym.alpha_lo = alpha_lo;
    sym.alpha_hi = alpha_hi;
    sym.c_lo = c_lo;
    sym.C_hi = C_hi;
    return sym;
}

double inverse_symbol(const LevySymbol& s, double y) {
    require(y >= 0.0 && std::isfinite(y), "inverse_symbol: y must be finite and >= 0");
    if (y == 0.0) return 0.0;
    const double p1 = s.psi(1.0);
    require(p1 > 0.0, "inverse_symbol: psi(1) must be positive");

    // bracket from the scaling envelope, anchored at theta = 1
    double lo, hi;
    if (y >= p1) {
        lo = std::max(1.0, std::pow(y / (s.C_hi * p1), 1.0 / s.alpha_hi));
        hi = std::max(lo, std::pow(y / (s.c_lo * p1), 1.0 / s.alpha_lo));
    } else {
        lo = std::pow(s.c_lo * y / p1, 1.0 / s.alpha_lo);
        hi = std::min(1.0, std::pow(s.C_hi * y / p1, 1.0 / s.alpha_hi));
        hi = std::max(hi, lo);
    }
    // the bracket is exact only if the envelope holds; pad defensively
    lo *= 0.5;
    hi *= 2.0;
    if (s.psi(lo) > y || s.psi(hi) < y)
        throw resolution_error("inverse_symbol: envelope bracket failed for " + s.name);

    for (int it = 0; it < 200 && (hi - lo) > 1e-10 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (s.psi(mid) < y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

ScalingReport verify_weak_scaling(LevySymbol& s,
                                  const Vec& lambda_grid,
                                  const Vec& theta_grid,
                                  double slack) {
    ScalingReport rep;
    rep.worst_lower = 1e300;
    rep.worst_upper = 0.0;
    bool ok = true;
    for (double l : lambda_grid) {
        if (l < 1.0) continue;
        for (double t : theta_grid) {
            if (t <= 0.0) continue;
            const double base = s.psi(t);
            if (base <= 0.0) continue;
            const double val = s.psi(l * t);
            const double lower = val / (s.c_lo * std::pow(l, s.alpha_lo) * base);
            const double upper = val / (s.C_hi * std::pow(l, s.alpha_hi) * base);
            if (lower < rep.worst_lower) rep.worst_lower = lower;
            if (upper > rep.worst_upper) rep.worst_upper = upper;
            if (lower < 1.0 - slack || upper > 1.0 + slack) {
                if (ok) {
                    rep.witness_lambda = l;
                    rep.witness_theta = t;
                }
                ok = false;
            }
        }
    }
    rep.ok = ok;
    if (ok) s.verified = true;
    return rep;
}

double ScaleFunction::operator()(double r) const {
    require(r > 0.0, "ScaleFunction: r must be positive");
    return 1.0 / inverse_symbol(*symbol, 1.0 / r);
}

ScaleFunction make_scale_function(const LevySymbol& s) {
    return ScaleFunction{std::make_shared<LevySymbol>(s)};
}

double levy_envelope(const LevySymbol& s, double t, double r, int n) {
    require(t > 0.0, "levy_envelope: t must be positive");
    require(n == 1 || n == 2, "levy_envelope: n must be 1 or 2");
    const double on_diag = std::pow(inverse_symbol(s, 1.0 / t), n);
    if (r <= 0.0) return on_diag;
    const double tail = t * s.psi(1.0 / r) / std::pow(r, n);
    return std::min(on_diag, tail);
}

double lambda_for_doubling(const LevySymbol& s) {
    return std::pow(2.0 / s.c_lo, 1.0 / s.alpha_lo);
}

}  // namespace heatlab
