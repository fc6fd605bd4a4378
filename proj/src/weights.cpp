#include "heatlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

#include "heatlab/expr.hpp"

namespace heatlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLog2 = 0.6931471805599453;

// streaming log-sum-exp: log of a sum of exp(l_i) without leaving log space
struct LogAccum {
    double peak = -kInf;
    double sum = 0.0;

    void add(double l) {
        if (l == -kInf) return;
        if (l <= peak) {
            sum += std::exp(l - peak);
        } else {
            sum = sum * std::exp(peak - l) + 1.0;
            peak = l;
        }
    }
    double log() const { return sum > 0.0 ? peak + std::log(sum) : -kInf; }
};

// composite Simpson of exp(logf) over [a, b], returned as a log value;
// npts is rounded up to odd
double simpson_log(const std::function<double(double)>& logf, double a, double b,
                   int npts) {
    if (!(b > a)) return -kInf;
    if (npts % 2 == 0) ++npts;
    double h = (b - a) / (npts - 1);
    LogAccum acc;
    for (int i = 0; i < npts; ++i) {
        double coef = (i == 0 || i == npts - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc.add(logf(a + i * h) + std::log(coef * h / 3.0));
    }
    return acc.log();
}

double sup_log(const std::function<double(double)>& logf, double a, double b, int npts) {
    if (!(b > a)) return -kInf;
    double h = (b - a) / (npts - 1);
    double best = -kInf;
    for (int i = 0; i < npts; ++i) best = std::max(best, logf(a + i * h));
    return best;
}

// cut [a, b] at every dyadic landmark that falls strictly inside, so each
// band gets its own Simpson rule and the resolution follows the scales
std::vector<std::pair<double, double>> cut_at(double a, double b, const Vec& landmarks) {
    Vec cuts;
    cuts.push_back(a);
    for (double c : landmarks)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    std::vector<std::pair<double, double>> bands;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i]) bands.emplace_back(cuts[i], cuts[i + 1]);
    return bands;
}

// subtract the open interval (-eps, eps) from (lo, hi)
std::vector<std::pair<double, double>> puncture(double lo, double hi, double eps) {
    std::vector<std::pair<double, double>> out;
    if (lo < -eps) out.emplace_back(lo, std::min(hi, -eps));
    if (hi > eps) out.emplace_back(std::max(lo, eps), hi);
    return out;
}

// increments of a nondecreasing log sequence, in log space
double log_increment(double prev, double cur) {
    if (cur == -kInf) return -kInf;
    if (prev == -kInf || cur == kInf) return cur;
    if (cur <= prev) return -kInf;
    return cur + std::log1p(-std::exp(prev - cur));
}

// shared verdict rules over the dyadic log-partial sequence
void classify(MembershipVerdict& out, const MembershipOptions& opt, bool stopped_early) {
    const Vec& L = out.log_partials;
    std::size_t m = L.size();
    out.partial_integrals.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.partial_integrals[i] = std::exp(L[i]);
    out.value = m ? std::exp(L[m - 1]) : 0.0;
    if (m == 0) return;

    if (std::isinf(L[m - 1]) && L[m - 1] > 0) {
        out.verdict = Verdict::infinite;
        out.growth_exponent = kInf;
        return;
    }
    if (m < 3) return;  // inconclusive: not enough dyadic scales

    double slope = (L[m - 1] - L[m - 3]) / (2.0 * kLog2);
    bool growing = L[m - 1] > L[m - 2] + 1e-12 && L[m - 2] > L[m - 3] + 1e-12;
    out.growth_exponent = slope;
    if ((growing && slope > opt.slope_threshold) || stopped_early) {
        out.verdict = Verdict::infinite;
        return;
    }
    if (m < 4 || !std::isfinite(L[m - 1])) return;

    // Cauchy control over the last three shell increments: ratios under
    // ratio_cap bound the remaining tail by a geometric series, and the
    // extrapolated tail handles decay that is summable but not yet small
    double i1 = log_increment(L[m - 4], L[m - 3]);
    double i2 = log_increment(L[m - 3], L[m - 2]);
    double i3 = log_increment(L[m - 2], L[m - 1]);
    auto ratio = [](double a, double b) {
        if (b == -kInf) return 0.0;   // increment vanished: tail spent
        if (a == -kInf) return kInf;  // increment after silence: distrust
        return std::exp(b - a);
    };
    double r2 = ratio(i1, i2), r3 = ratio(i2, i3);
    bool geometric = r2 <= opt.ratio_cap && r3 <= opt.ratio_cap;
    double rho = std::max(r2, r3);
    double tail = kInf;
    if (i3 == -kInf)
        tail = 0.0;
    else if (rho < 1.0)
        tail = std::exp(i3 - L[m - 1]) * rho / (1.0 - rho);
    if (geometric || tail < opt.tail_tol) out.verdict = Verdict::finite;
}

// run the expanding-domain loop: partial(j) evaluates domain j, the early
// stop fires once divergence is beyond doubt (and before weight underflow
// could reach the sampler)
MembershipVerdict expand_and_classify(int shells, const MembershipOptions& opt,
                                      const std::function<double(int)>& partial) {
    MembershipVerdict out;
    bool stopped = false;
    for (int j = 0; j < shells; ++j) {
        out.log_partials.push_back(partial(j));
        std::size_t m = out.log_partials.size();
        if (m >= 3) {
            const Vec& L = out.log_partials;
            double slope = (L[m - 1] - L[m - 3]) / (2.0 * kLog2);
            bool growing = L[m - 1] > L[m - 2] + 1e-12 && L[m - 2] > L[m - 3] + 1e-12;
            if (L[m - 1] > opt.stop_log && growing && slope > opt.slope_threshold) {
                stopped = true;
                break;
            }
        }
    }
    classify(out, opt, stopped);
    return out;
}

// log of the weight, exact through under/overflow when the weight carries
// a log_eval.  A genuine zero returns -inf and blows up the integrand,
// which is the honest verdict; negative values are caller errors.
double log_weight(const Weight& v, double y) {
    double lv = v.log_eval ? v.log_eval(y) : std::log(v.eval(y));
    if (std::isnan(lv))
        throw invalid_parameter("weight '" + v.label + "' not positive at " +
                                std::to_string(y));
    return lv;
}

}  // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::finite: return "finite";
        case Verdict::infinite: return "infinite";
        default: return "inconclusive";
    }
}

Weight weight_from_expr(const std::string& label, const std::string& expr) {
    Expr e = parse_expr(expr);
    return Weight{[e](double x) { return e(x); }, label,
                  [e](double x) { return e.eval_log({{"x", x}}); }};
}

TimeWeight time_weight_from_expr(const std::string& label, const std::string& expr) {
    Expr e = parse_expr(expr);
    return TimeWeight{[e](double s) { return e.eval({{"s", s}, {"x", s}}); }, label};
}

std::vector<Weight> load_weight_battery(const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw config_error("cannot open weight battery " + csv_path);
    std::vector<Weight> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw config_error("battery row without expression: " + line);
        std::string label = line.substr(0, comma);
        if (label == "label") continue;  // header row
        out.push_back(weight_from_expr(label, line.substr(comma + 1)));
    }
    if (out.empty()) throw config_error("weight battery " + csv_path + " is empty");
    return out;
}

MembershipVerdict dp_membership(const KernelBackend& k, const Weight& v, double p,
                                double t0, double x0, const MembershipOptions& opt) {
    require(k.dim() == 1, "dp_membership: 1-D backends only");
    require(p >= 1.0, "dp_membership: p must be >= 1");
    require(t0 > 0.0 && t0 <= k.horizon(), "dp_membership: t0 outside (0, horizon]");
    double pp = p > 1.0 ? p / (p - 1.0) : kInf;
    double scale = std::sqrt(t0);

    auto logf = [&](double y) {
        double lphi = std::log(k.value(t0, {x0, 0.0}, {y, 0.0}));
        double base = lphi - log_weight(v, y) / p;
        return p > 1.0 ? pp * base : base;  // p = 1: sup of v^{-1} phi
    };

    // landmark radii for the band cuts; x0 itself so the kernel peak sits
    // on a band edge (the p = 1 sup then samples it exactly)
    Vec landmarks;
    landmarks.push_back(x0);
    for (double rm = scale; rm < opt.max_radius; rm *= 2.0) {
        landmarks.push_back(x0 + rm);
        landmarks.push_back(x0 - rm);
    }
    for (int m = 0; m <= opt.inner_shells; ++m) {
        double e = 0.25 * scale * std::pow(2.0, -m);
        landmarks.push_back(e);
        landmarks.push_back(-e);
    }

    auto partial = [&](int j) {
        double R = std::min(scale * std::pow(2.0, j), opt.max_radius);
        double eps = 0.25 * scale * std::pow(2.0, -j);
        LogAccum acc;
        double best = -kInf;
        for (auto [lo, hi] : puncture(x0 - R, x0 + R, eps))
            for (auto [a, b] : cut_at(lo, hi, landmarks)) {
                if (p > 1.0)
                    acc.add(simpson_log(logf, a, b, opt.points_per_piece));
                else
                    best = std::max(best, sup_log(logf, a, b, opt.points_per_piece));
            }
        return p > 1.0 ? acc.log() : best;
    };
    return expand_and_classify(opt.inner_shells, opt, partial);
}

MembershipVerdict dp_local_membership(const Grid& g, const Weight& v, double p,
                                      const Vec& radii, const MembershipOptions& opt) {
    require(g.dim == 1, "dp_local_membership: 1-D grids only");
    require(!radii.empty(), "dp_local_membership: no radii");
    require(std::is_sorted(radii.begin(), radii.end()),
            "dp_local_membership: radii must increase");
    require(radii.back() <= g.half_width, "dp_local_membership: radius outside the grid");
    require(p >= 1.0, "dp_local_membership: p must be >= 1");
    double r = radii.back();
    // exponent of v in the local integrand: v^{-p'/p} = v^{-1/(p-1)}
    double e = p > 1.0 ? 1.0 / (p - 1.0) : 1.0;

    auto logf = [&](double y) { return -e * log_weight(v, y); };

    auto partial = [&](int j) {
        double eps = r * std::pow(2.0, -(j + 1));
        LogAccum acc;
        double best = -kInf;
        for (auto [lo, hi] : {std::pair{-r, -eps}, std::pair{eps, r}}) {
            // band cuts at the dyadic cutoffs themselves
            Vec marks;
            for (int m = 0; m <= j + 1; ++m) {
                marks.push_back(r * std::pow(2.0, -(m + 1)));
                marks.push_back(-r * std::pow(2.0, -(m + 1)));
            }
            for (auto [a, b] : cut_at(lo, hi, marks)) {
                if (p > 1.0)
                    acc.add(simpson_log(logf, a, b, opt.points_per_piece));
                else
                    best = std::max(best, sup_log(logf, a, b, opt.points_per_piece));
            }
        }
        return p > 1.0 ? acc.log() : best;
    };
    return expand_and_classify(opt.inner_shells, opt, partial);
}

namespace {

// log of int (v^{-1/p} phi_tau(x0, .))^{p'} dy, bands scaled to the
// kernel width sqrt(tau) but always reaching out to cover the t0 scale
double log_inner_pow(const KernelBackend& k, const Weight& v, double p, double pp,
                     double tau, double x0, double t0_scale,
                     const MembershipOptions& opt) {
    double w = std::sqrt(tau);
    auto logf = [&](double y) {
        return pp * (std::log(k.value(tau, {x0, 0.0}, {y, 0.0})) - log_weight(v, y) / p);
    };
    double reach = std::min(std::max(32.0 * t0_scale, 32.0 * w), opt.max_radius);
    Vec landmarks;
    for (double rm = w; rm < reach; rm *= 2.0) {
        landmarks.push_back(x0 + rm);
        landmarks.push_back(x0 - rm);
    }
    for (int m = 0; m <= 10; ++m) {
        landmarks.push_back(0.25 * w * std::pow(2.0, -m));
        landmarks.push_back(-0.25 * w * std::pow(2.0, -m));
    }
    double eps = 0.25 * w * std::pow(2.0, -10);
    LogAccum acc;
    for (auto [lo, hi] : puncture(x0 - reach, x0 + reach, eps))
        for (auto [a, b] : cut_at(lo, hi, landmarks))
            acc.add(simpson_log(logf, a, b, opt.points_per_piece));
    return acc.log();
}

}  // namespace

MembershipVerdict dqp_membership(const KernelBackend& k, const Weight& v,
                                 const TimeWeight& w, double p, double q, double t0,
                                 double x0, const MembershipOptions& opt) {
    require(k.dim() == 1, "dqp_membership: 1-D backends only");
    require(p > 1.0, "dqp_membership: p must be > 1");
    require(q >= 1.0, "dqp_membership: q must be >= 1");
    require(t0 > 0.0 && t0 <= k.horizon(), "dqp_membership: t0 outside (0, horizon]");
    double pp = p / (p - 1.0);
    double qp = q > 1.0 ? q / (q - 1.0) : 1.0;  // q = 1 limiting convention

    // the s-integrand assumes the inner spatial norm is finite; if v fails
    // even that, report the spatial divergence directly
    MembershipVerdict inner_check = dp_membership(k, v, p, t0 / 2.0, x0, opt);
    if (inner_check.verdict == Verdict::infinite) return inner_check;

    double scale = std::sqrt(t0);
    auto log_time_weight = [&](double s) {
        double ws = w.eval(s);
        if (ws < 0.0 || ws == 0.0)
            throw invalid_parameter("time weight '" + w.label +
                                    "' not strictly positive at " + std::to_string(s));
        return std::log(ws);
    };
    // integrand at distance-from-endpoint parameterization: near s = t0 we
    // integrate in tau = t0 - s directly so the kernel time never suffers
    // cancellation
    auto log_g_s = [&](double s) {
        double tau = t0 - s;
        return (qp / pp) * log_inner_pow(k, v, p, pp, tau, x0, scale, opt) -
               (qp / q) * log_time_weight(s);
    };
    auto log_g_tau = [&](double tau) {
        return (qp / pp) * log_inner_pow(k, v, p, pp, tau, x0, scale, opt) -
               (qp / q) * log_time_weight(t0 - tau);
    };

    const int kSimpson = 17;
    double middle = simpson_log(log_g_s, 0.25 * t0, 0.75 * t0, 4 * kSimpson + 1);
    // collar m covers t0 * (2^{-(m+3)}, 2^{-(m+2)}) measured from each
    // endpoint; cached so shell j only pays for its two new bands
    Vec collar_s, collar_tau;
    auto partial = [&](int j) {
        while (static_cast<int>(collar_s.size()) <= j) {
            double hi = t0 * std::pow(2.0, -(static_cast<int>(collar_s.size()) + 2));
            collar_s.push_back(simpson_log(log_g_s, 0.5 * hi, hi, kSimpson));
            collar_tau.push_back(simpson_log(log_g_tau, 0.5 * hi, hi, kSimpson));
        }
        LogAccum acc;
        acc.add(middle);
        for (int m = 0; m <= j; ++m) {
            acc.add(collar_s[m]);
            acc.add(collar_tau[m]);
        }
        return acc.log();
    };
    return expand_and_classify(opt.time_shells, opt, partial);
}

MembershipVerdict dhp_membership(const HardyKernel& hk, const Weight& v, double p,
                                 double t0, double x0, const MembershipOptions& opt) {
    require(x0 != 0.0, "dhp_membership: base point must avoid the puncture");
    require(p >= 1.0, "dhp_membership: p must be >= 1");
    require(t0 > 0.0 && t0 <= hk.params().horizon,
            "dhp_membership: t0 outside (0, horizon]");
    int n = hk.params().n;
    double pp = p > 1.0 ? p / (p - 1.0) : kInf;
    double a = std::fabs(x0);
    double scale = std::sqrt(t0);
    double sphere = sphere_area(n - 1);               // |S^{n-2}|
    double log_norm = -0.5 * n * std::log(4.0 * M_PI);  // envelope -> kernel units

    // log of the angular integral of (v^{-1/p} envelope)^{p'} on |y| = c
    auto log_ring = [&](double c) {
        double lv = log_weight(v, c);
        const int kAng = 33;
        double h = M_PI / (kAng - 1);
        LogAccum ang;
        double best = -kInf;
        for (int i = 0; i < kAng; ++i) {
            double th = i * h;
            double env = hk.envelope(t0, {a, c, std::cos(th)}, 4.0);
            double base = std::log(env) + log_norm - lv / p;
            if (p > 1.0) {
                double coef = (i == 0 || i == kAng - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
                double meas = std::pow(std::sin(th), n - 2) * sphere;
                ang.add(pp * base + std::log(std::max(meas, 0.0) * coef * h / 3.0));
            } else {
                best = std::max(best, base);
            }
        }
        double radial = (n - 1) * std::log(c);
        return p > 1.0 ? ang.log() + radial : best;
    };

    Vec landmarks;
    for (double rm = scale; rm < opt.max_radius; rm *= 2.0) landmarks.push_back(rm);
    for (int m = 0; m <= opt.inner_shells; ++m)
        landmarks.push_back(0.25 * scale * std::pow(2.0, -m));
    landmarks.push_back(a);

    auto partial = [&](int j) {
        double R = std::min(scale * std::pow(2.0, j), opt.max_radius);
        double eps = 0.25 * scale * std::pow(2.0, -j);
        LogAccum acc;
        double best = -kInf;
        for (auto [lo, hi] : cut_at(eps, R, landmarks)) {
            if (p > 1.0)
                acc.add(simpson_log(log_ring, lo, hi, opt.points_per_piece));
            else
                best = std::max(best, sup_log(log_ring, lo, hi, opt.points_per_piece));
        }
        return p > 1.0 ? acc.log() : best;
    };
    return expand_and_classify(opt.inner_shells, opt, partial);
}

DivergentWitness construct_divergent_data(const KernelBackend& k, const Weight& v,
                                          double p, double t0, double x0,
                                          int truncation_levels, const Grid& g) {
    require(k.dim() == 1 && g.dim == 1, "construct_divergent_data: 1-D only");
    require(p > 1.0, "construct_divergent_data: p must be > 1 (the L^1 witness "
                     "is a point mass, not a grid function)");
    require(truncation_levels >= 2, "construct_divergent_data: need >= 2 levels");

    MembershipVerdict mv = dp_membership(k, v, p, t0, x0);
    if (mv.verdict != Verdict::infinite)
        throw invalid_parameter("construct_divergent_data: weight '" + v.label +
                                "' shows verdict '" + to_string(mv.verdict) +
                                "', not a divergence witness candidate");

    double pp = p / (p - 1.0);
    std::size_t N = g.size();
    // log of the pairing density g = v^{-1/p} phi_t0(x0, .); +inf marks
    // nodes past every truncation (weight vanishing faster than the kernel
    // decays), which the threshold scan must skip rather than chase
    Vec lg(N), lv(N);
    for (std::size_t i = 0; i < N; ++i) {
        double y = g.axis[i];
        lv[i] = log_weight(v, y);
        lg[i] = std::log(k.value(t0, {x0, 0.0}, {y, 0.0})) - lv[i] / p;
    }

    DivergentWitness out;
    double scale = std::sqrt(t0);
    double prev_log_M = -kInf;
    for (int l = 0; l < truncation_levels; ++l) {
        double r = std::min(scale * std::pow(2.0, l + 1), 0.98 * g.half_width);
        double log_M = -kInf;
        for (std::size_t i = 0; i < N; ++i)
            if (std::fabs(g.axis[i] - x0) <= r && std::isfinite(lg[i]))
                log_M = std::max(log_M, lg[i]);
        if (!(log_M > prev_log_M))
            throw invalid_parameter("construct_divergent_data: thresholds stop growing "
                                    "after level " + std::to_string(l) +
                                    "; widen the grid or lower truncation_levels");
        prev_log_M = log_M;

        LogAccum big_i;  // int_{g <= M} g^{p'} dmu, kept in log space
        for (std::size_t i = 0; i < N; ++i)
            if (lg[i] <= log_M) big_i.add(pp * lg[i] + std::log(g.weight[i]));
        double log_norm = big_i.log() / p;

        Vec f(N, 0.0);
        double pairing = 0.0, check = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            if (lg[i] > log_M) continue;
            f[i] = std::exp(-lv[i] / p + (pp - 1.0) * lg[i] - log_norm);
            pairing += k.value(t0, {x0, 0.0}, {g.axis[i], 0.0}) * f[i] * g.weight[i];
            check += std::pow(f[i], p) * std::exp(lv[i]) * g.weight[i];
        }
        out.thresholds.push_back(std::exp(log_M));
        out.pairing.push_back(pairing);
        out.norms.push_back(std::pow(check, 1.0 / p));
        if (l == truncation_levels - 1) out.f_last = std::move(f);
    }
    return out;
}

}  // namespace heatlab
