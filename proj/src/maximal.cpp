#include "heatlab/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "heatlab/dunkl.hpp"
#include "heatlab/rng.hpp"

namespace heatlab {

namespace {

constexpr double kRatio = 1.189207115002721;   // 2^{1/4}
constexpr double kFine = 1.0905077326652577;   // 2^{1/8}

std::vector<std::size_t> all_nodes(std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return idx;
}

// S_t f at a single 1-D coordinate by direct quadrature
double apply_at(KernelBackend& k, const Grid& g, const Vec& f, double t,
                double x) {
    double acc = 0.0;
    const Point px{x, 0.0};
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (g.weight[j] == 0.0) continue;
        acc += k.value(t, px, g.coord(j)) * f[j] * g.weight[j];
    }
    return acc;
}

double sup_over_times(KernelBackend& k, const Grid& g, const Vec& f,
                      const Vec& times, double x, double* arg) {
    double best = 0.0, at = times.empty() ? 0.0 : times.front();
    for (double t : times) {
        const double v = std::fabs(apply_at(k, g, f, t, x));
        if (v > best) {
            best = v;
            at = t;
        }
    }
    if (arg) *arg = at;
    return best;
}

}  // namespace

Vec geometric_grid(double top, double ratio, double floor_value) {
    require(top > 0.0 && ratio > 1.0 && floor_value > 0.0,
            "geometric_grid: bad parameters");
    require(floor_value < top, "geometric_grid: empty window");
    Vec out;
    for (double v = top / ratio; v >= floor_value; v /= ratio) out.push_back(v);
    if (out.empty()) out.push_back(top / ratio);
    std::reverse(out.begin(), out.end());
    return out;
}

MaximalReport hl_maximal(const Grid& g, const Vec& f, double R,
                         std::vector<std::size_t> probes) {
    require(f.size() == g.size(), "hl_maximal: sample size mismatch");
    require(R > 0.0, "hl_maximal: window must be positive");
    if (probes.empty()) probes = all_nodes(g.size());

    MaximalReport rep;
    rep.probes = probes;
    rep.values.assign(probes.size(), 0.0);
    rep.argmax.assign(probes.size(), 0.0);
    rep.refinement_delta.assign(probes.size(), 0.0);  // supremum is exact

#pragma omp parallel for schedule(static)
    for (std::size_t pi = 0; pi < probes.size(); ++pi) {
        const std::size_t i0 = probes[pi];
        double best = 0.0, at = 0.0;
        bool seen = false;
        auto feed = [&](double num, double den, double r) {
            if (den <= 0.0) return;  // empty balls are skipped
            const double avg = num / den;
            if (!seen || avg > best) {
                best = avg;
                at = r;
                seen = true;
            }
        };
        if (g.dim == 1) {
            // ball radii on a uniform axis are the index distances; grow
            // the ball one shell at a time and keep running sums
            const long n = long(g.size()), c = long(i0);
            double num = f[i0] * g.weight[i0], den = g.weight[i0];
            feed(num, den, 0.0);
            const long kmax = long(std::ceil(R / g.h)) - 1;
            for (long k = 1; k <= kmax && (c - k >= 0 || c + k < n); ++k) {
                if (k * g.h >= R) break;
                if (c - k >= 0) {
                    num += f[c - k] * g.weight[c - k];
                    den += g.weight[c - k];
                }
                if (c + k < n) {
                    num += f[c + k] * g.weight[c + k];
                    den += g.weight[c + k];
                }
                feed(num, den, k * g.h);
            }
        } else {
            std::vector<std::pair<double, std::size_t>> dist(g.size());
            for (std::size_t j = 0; j < g.size(); ++j)
                dist[j] = {g.distance(i0, j), j};
            std::sort(dist.begin(), dist.end());
            double num = 0.0, den = 0.0;
            std::size_t j = 0;
            while (j < dist.size() && dist[j].first < R) {
                const double r = dist[j].first;
                while (j < dist.size() && dist[j].first == r) {
                    num += f[dist[j].second] * g.weight[dist[j].second];
                    den += g.weight[dist[j].second];
                    ++j;
                }
                feed(num, den, r);
            }
        }
        rep.values[pi] = best;
        rep.argmax[pi] = at;
    }
    return rep;
}

MaximalReport time_maximal(KernelBackend& k, const Grid& g, const Vec& f,
                           double R, std::vector<std::size_t> probes,
                           double t_floor, bool refine) {
    require(f.size() == g.size(), "time_maximal: sample size mismatch");
    require(R > 0.0 && R <= k.horizon(), "time_maximal: window beyond horizon");
    if (probes.empty()) probes = all_nodes(g.size());

    const Vec times = geometric_grid(R, kRatio, t_floor);
    k.prepare(times);
    Vec fine_times;
    if (refine) {
        fine_times = geometric_grid(R, kFine, t_floor);
        k.prepare(fine_times);
    }

    MaximalReport rep;
    rep.probes = probes;
    rep.values.assign(probes.size(), 0.0);
    rep.argmax.assign(probes.size(), 0.0);
    rep.refinement_delta.assign(probes.size(), 0.0);

#pragma omp parallel for schedule(static)
    for (std::size_t pi = 0; pi < probes.size(); ++pi) {
        const double x = g.x1(probes[pi]);
        double arg = 0.0;
        const double coarse = sup_over_times(k, g, f, times, x, &arg);
        rep.values[pi] = coarse;
        rep.argmax[pi] = arg;
        if (refine) {
            const double fine = sup_over_times(k, g, f, fine_times, x, nullptr);
            rep.refinement_delta[pi] = std::fabs(fine - coarse);
        }
    }
    return rep;
}

MaximalReport hardy_maximal(const RadialSpace& sp, const Vec& f, double R,
                            double gamma_weight,
                            std::vector<std::size_t> probes) {
    require(f.size() == sp.size(), "hardy_maximal: sample size mismatch");
    require(R > 0.0, "hardy_maximal: window must be positive");
    if (probes.empty()) probes = all_nodes(sp.size());

    Vec wgt(sp.size());
    for (std::size_t i = 0; i < sp.size(); ++i)
        wgt[i] = std::pow(std::min(sp.rho[i], 1.0), gamma_weight);

    auto sup_at = [&](double x, const Vec& radii, double* arg) {
        double best = 0.0, at = radii.front();
        bool seen = false;
        for (double s : radii) {
            const long lo = std::max(0L, long(std::floor((x - s) / sp.h - 0.5)) + 1);
            const long hi =
                std::min(long(sp.size()) - 1, long(std::ceil((x + s) / sp.h - 0.5)) - 1);
            double num = 0.0, den = 0.0;
            for (long i = lo; i <= hi; ++i) {
                const double cap = sphere_cap_density(sp.n, sp.rho[i], x, s);
                num += wgt[i] * f[i] * cap;
                den += cap;
            }
            if (den <= 0.0) continue;
            const double avg = num / den;
            if (!seen || avg > best) {
                best = avg;
                at = s;
                seen = true;
            }
        }
        if (arg) *arg = at;
        return best;
    };

    const Vec radii = geometric_grid(R, kRatio, sp.h);
    const Vec fine = geometric_grid(R, kFine, sp.h);

    MaximalReport rep;
    rep.probes = probes;
    rep.values.assign(probes.size(), 0.0);
    rep.argmax.assign(probes.size(), 0.0);
    rep.refinement_delta.assign(probes.size(), 0.0);

#pragma omp parallel for schedule(static)
    for (std::size_t pi = 0; pi < probes.size(); ++pi) {
        const double x = sp.rho[probes[pi]];
        double arg = 0.0;
        const double coarse = sup_at(x, radii, &arg);
        rep.values[pi] = coarse;
        rep.argmax[pi] = arg;
        rep.refinement_delta[pi] = std::fabs(sup_at(x, fine, nullptr) - coarse);
    }
    return rep;
}

MaximalReport dunkl_maximal(const Grid& g, const Vec& f, double R, double k,
                            std::vector<std::size_t> probes) {
    require(g.dim == 1, "dunkl_maximal: one-dimensional spaces only");
    require(f.size() == g.size(), "dunkl_maximal: sample size mismatch");
    require(k >= 0.0, "dunkl_maximal: negative multiplicity");
    if (probes.empty()) probes = all_nodes(g.size());

    auto sup_at = [&](double x, const Vec& radii, double* arg) {
        double best = 0.0, at = radii.front();
        for (double r : radii) {
            double num = 0.0;
            for (std::size_t j = 0; j < g.size(); ++j) {
                const double y = g.axis[j];
                // the translated ball indicator lives on ||y|-|x|| < r
                if (std::fabs(std::fabs(y) - std::fabs(x)) >= r) continue;
                if (g.weight[j] == 0.0) continue;
                num += dunkl_ball_kernel(k, r, x, y) * f[j] * g.weight[j];
            }
            const double v = std::fabs(num) / dunkl_ball_measure(k, r);
            if (v > best) {
                best = v;
                at = r;
            }
        }
        if (arg) *arg = at;
        return best;
    };

    // unlike the plain ball average, this one divides by the continuum
    // measure, so balls of one or two cells overshoot by O(h/r); start
    // the ladder at eight cells where the error is under half a percent
    const Vec radii = geometric_grid(R, kRatio, 8.0 * g.h);
    const Vec fine = geometric_grid(R, kFine, 8.0 * g.h);

    MaximalReport rep;
    rep.probes = probes;
    rep.values.assign(probes.size(), 0.0);
    rep.argmax.assign(probes.size(), 0.0);
    rep.refinement_delta.assign(probes.size(), 0.0);

#pragma omp parallel for schedule(static)
    for (std::size_t pi = 0; pi < probes.size(); ++pi) {
        const double x = g.axis[probes[pi]];
        double arg = 0.0;
        const double coarse = sup_at(x, radii, &arg);
        rep.values[pi] = coarse;
        rep.argmax[pi] = arg;
        rep.refinement_delta[pi] = std::fabs(sup_at(x, fine, nullptr) - coarse);
    }
    return rep;
}

double nontangential_maximal(KernelBackend& k, const Grid& g, const Vec& f,
                             double x_center, const ScaleFunction& phi,
                             double aperture, double t_hi, double t_floor) {
    require(g.dim == 1, "nontangential_maximal: one-dimensional spaces only");
    require(aperture >= 0.0, "nontangential_maximal: negative aperture");
    require(t_hi > 0.0 && t_hi <= k.horizon(),
            "nontangential_maximal: window beyond horizon");
    const Vec times = geometric_grid(t_hi, kRatio, t_floor);
    k.prepare(times);
    double best = 0.0;
    for (double t : times) {
        const double reach = aperture * phi(t);
        // cone cross-section: grid nodes within reach of the vertex line
        const long c = long(g.nearest(x_center));
        const long w = long(std::floor(reach / g.h + 1e-12));
        for (long j = std::max(0L, c - w);
             j <= std::min(long(g.size()) - 1, c + w); ++j) {
            const double y = g.axis[j];
            if (std::fabs(y - x_center) > reach + 1e-15) continue;
            best = std::max(best, std::fabs(apply_at(k, g, f, t, y)));
        }
    }
    return best;
}

DominationRecipe gaussian_recipe() {
    DominationRecipe r;
    r.family = "gaussian";
    r.hl_radius = [](double R) { return 2.0 * std::sqrt(R); };
    r.time_factor = 2.0;
    r.xi1 = [](double, double) { return 1.0; };
    r.xi2 = [](double, double) { return 1.0; };
    return r;
}

DominationRecipe levy_recipe(const LevySymbol& s, int n) {
    DominationRecipe r;
    r.family = "levy";
    const ScaleFunction phi = make_scale_function(s);
    r.hl_radius = [phi](double R) { return phi.gamma(R); };  // phi(2R)
    r.time_factor = 1.0;
    const double lam = lambda_for_doubling(s);
    const double shape = 1.0 + std::pow(lam, n);  // annulus sum collapses to 1
    r.xi1 = [shape](double, double) { return shape; };
    r.xi2 = [](double, double) { return 1.0; };
    return r;
}

DominationRecipe drift_recipe(double alpha_upper, double alpha_lower, int n) {
    require(alpha_upper >= alpha_lower && alpha_lower > 0.0,
            "drift_recipe: malformed rates");
    DominationRecipe r;
    r.family = "drift";
    const double rho = alpha_upper / alpha_lower;
    r.hl_radius = [alpha_upper](double R) { return std::sqrt(alpha_upper * R); };
    r.time_factor = 2.0 * rho;
    r.xi1 = [](double, double) { return 1.0; };
    r.xi2 = [rho, n](double, double) { return std::pow(rho, 0.5 * n); };
    return r;
}

namespace {

void domination_tally(DominationReport& rep, double x, double lhs,
                      double shape_sum, double K) {
    ++rep.checks;
    if (K <= 0.0) {  // fitting mode
        if (shape_sum > 0.0)
            rep.required_constant = std::max(rep.required_constant, lhs / shape_sum);
        return;
    }
    const double rhs = K * shape_sum;
    const double margin = (rhs - lhs) / std::max(rhs, 1e-300);
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (lhs > rhs * (1.0 + 1e-9))
        rep.violations.push_back({x, lhs, rhs, margin});
}

}  // namespace

DominationReport check_domination(KernelBackend& k, const Grid& g,
                                  const std::vector<Vec>& battery, double R,
                                  const DominationRecipe& recipe, double K,
                                  const std::vector<std::size_t>& probes,
                                  double t_floor) {
    require(!battery.empty() && !probes.empty(),
            "check_domination: empty battery or probe set");
    const double t_anchor = recipe.time_factor * R;
    require(t_anchor <= k.horizon(),
            "check_domination: semigroup anchor beyond horizon");

    DominationReport rep;
    for (const Vec& f : battery) {
        const MaximalReport star =
            time_maximal(k, g, f, R, probes, t_floor, false);
        const MaximalReport hl = hl_maximal(g, f, recipe.hl_radius(R), probes);
        for (std::size_t pi = 0; pi < probes.size(); ++pi) {
            const double x = g.x1(probes[pi]);
            const double s_term = std::fabs(apply_at(k, g, f, t_anchor, x));
            const double shape_sum = recipe.xi1(x, R) * hl.values[pi] +
                                     recipe.xi2(x, R) * s_term;
            domination_tally(rep, x, star.values[pi], shape_sum, K);
        }
    }
    return rep;
}

Vec radial_sector_apply(const HardyKernel& k, const RadialSpace& sp,
                        const Vec& f, double t,
                        const std::vector<std::size_t>& probes) {
    require(f.size() == sp.size(), "radial_sector_apply: size mismatch");
    const int n = sp.n;
    require(n == k.params().n, "radial_sector_apply: dimension mismatch");
    const double gam = k.gamma();

    Vec out(probes.size(), 0.0);
#pragma omp parallel for schedule(static)
    for (std::size_t pi = 0; pi < probes.size(); ++pi) {
        const double a = sp.rho[probes[pi]];
        double acc = 0.0;
        for (std::size_t j = 0; j < sp.size(); ++j) {
            if (f[j] == 0.0) continue;
            acc += f[j] * sp.weight[j] * hardy_sphere_mean(n, gam, t, a, sp.rho[j]);
        }
        out[pi] = acc;
    }
    return out;
}

DominationReport check_domination_hardy(const HardyKernel& k,
                                        const RadialSpace& sp,
                                        const std::vector<Vec>& battery,
                                        double R, double K,
                                        const std::vector<std::size_t>& probes,
                                        double t_floor) {
    require(!battery.empty() && !probes.empty(),
            "check_domination_hardy: empty battery or probe set");
    const int n = sp.n;
    const double gam = k.gamma();
    const double time_factor = 2.0;
    require(time_factor * R <= k.params().horizon,
            "check_domination_hardy: semigroup anchor beyond horizon");

    auto xi1 = [&](double x) {
        if (gam > 0.0) return 1.0;
        return std::pow(std::max(R, 1.0), -0.5 * gam) *
               std::pow(std::min(x / std::sqrt(R), 1.0), gam);
    };
    auto xi2 = [&](double x) {
        if (gam > 0.0)
            return std::pow(time_factor, 0.5 * (n + gam)) *
                   std::pow(std::min(x / std::sqrt(time_factor * R), 1.0), -gam);
        return std::pow(time_factor, 0.5 * n);
    };

    const Vec times = geometric_grid(R, kRatio, t_floor);
    const double hl_window = 2.0 * std::sqrt(R);

    DominationReport rep;
    for (const Vec& f : battery) {
        Vec star(probes.size(), 0.0);
        for (double t : times) {
            const Vec st = radial_sector_apply(k, sp, f, t, probes);
            for (std::size_t pi = 0; pi < probes.size(); ++pi)
                star[pi] = std::max(star[pi], std::fabs(st[pi]));
        }
        const MaximalReport hl = hardy_maximal(sp, f, hl_window, gam, probes);
        const Vec s_term = radial_sector_apply(k, sp, f, time_factor * R, probes);
        for (std::size_t pi = 0; pi < probes.size(); ++pi) {
            const double x = sp.rho[probes[pi]];
            const double shape_sum =
                xi1(x) * hl.values[pi] + xi2(x) * std::fabs(s_term[pi]);
            domination_tally(rep, x, star[pi], shape_sum, K);
        }
    }
    return rep;
}

HarnackReport harnack_check(KernelBackend& k, const Grid& g, double eta,
                            double R,
                            const std::vector<std::pair<double, double>>& pairs,
                            double ball_radius) {
    require(eta > 0.0 && eta <= 1.0, "harnack_check: eta outside (0,1]");
    require(R > 0.0 && R <= k.horizon(), "harnack_check: window beyond horizon");
    k.prepare({eta * R, R});
    HarnackReport rep;
    for (const auto& [x1, x2] : pairs) {
        HarnackReport::Row row{x1, x2, 0.0, 1e300};
        const Point p1{x1, 0.0}, p2{x2, 0.0};
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (g.weight[j] == 0.0) continue;
            const Point y = g.coord(j);
            const double den = k.value(R, p2, y);
            if (den > 1e-280)
                row.ratio = std::max(row.ratio, k.value(eta * R, p1, y) / den);
            if (std::fabs(y[0] - x1) <= ball_radius && g.dim == 1)
                row.lower_bound = std::min(row.lower_bound, k.value(R, p1, y));
        }
        rep.rows.push_back(row);
    }
    return rep;
}

std::vector<Vec> random_f_battery(const Grid& g, int count, std::uint64_t seed) {
    require(count > 0, "random_f_battery: count must be positive");
    std::vector<Vec> out(count, Vec(g.size(), 0.0));
    const double L = g.half_width;
    for (int i = 0; i < count; ++i) {
        auto rng = substream(seed, std::uint64_t(i));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const int pieces = 1 + int(u(rng) * 3.0);
        for (int p = 0; p < pieces; ++p) {
            const int kind = int(u(rng) * 3.0);
            const double center = (2.0 * u(rng) - 1.0) * (L - 2.0);
            const double height = 0.2 + 2.0 * u(rng);
            if (kind == 0) {  // indicator
                const double w = 0.2 + 1.5 * u(rng);
                for (std::size_t j = 0; j < g.size(); ++j)
                    if (std::fabs(g.x1(j) - center) <= w) out[i][j] += height;
            } else if (kind == 1) {  // bump
                const double w = 0.2 + 1.5 * u(rng);
                for (std::size_t j = 0; j < g.size(); ++j) {
                    const double d = (g.x1(j) - center) / w;
                    out[i][j] += height * std::exp(-d * d);
                }
            } else {  // spike on a few nodes
                const std::size_t at = g.nearest(center);
                out[i][at] += 5.0 * height;
                if (at + 1 < g.size()) out[i][at + 1] += 2.0 * height;
            }
        }
    }
    return out;
}

std::vector<Vec> random_radial_battery(const RadialSpace& sp, int count,
                                       std::uint64_t seed) {
    require(count > 0, "random_radial_battery: count must be positive");
    std::vector<Vec> out(count, Vec(sp.size(), 0.0));
    for (int i = 0; i < count; ++i) {
        auto rng = substream(seed, 7000 + std::uint64_t(i));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const int pieces = 1 + int(u(rng) * 2.0);
        for (int p = 0; p < pieces; ++p) {
            const int kind = int(u(rng) * 3.0);
            const double center = u(rng) * (sp.radius - 1.0);
            const double height = 0.2 + 2.0 * u(rng);
            const double w = 0.1 + u(rng);
            for (std::size_t j = 0; j < sp.size(); ++j) {
                const double rho = sp.rho[j];
                if (kind == 0) {
                    if (std::fabs(rho - center) <= w) out[i][j] += height;
                } else if (kind == 1) {
                    const double d = (rho - center) / w;
                    out[i][j] += height * std::exp(-d * d);
                } else {
                    out[i][j] += height / (1.0 + rho * rho);
                }
            }
        }
    }
    return out;
}

}  // namespace heatlab
