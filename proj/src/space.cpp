#include "heatlab/space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <queue>
#include <unordered_map>

namespace heatlab {

double Grid::distance(std::size_t i, std::size_t j) const {
    const double dx = x1(i) - x1(j);
    const double dy = x2(i) - x2(j);
    return dim == 1 ? std::fabs(dx) : std::hypot(dx, dy);
}

std::size_t Grid::nearest(double x) const {
    require(dim == 1, "Grid::nearest: 1-D only");
    const double t = (x + half_width) / h;
    const long k = std::lround(t);
    return std::size_t(std::clamp(k, 0L, long(axis.size()) - 1));
}

Grid build_grid(int dim, double half_width, int points_per_axis,
                const Density& density, bool punctured) {
    require(dim == 1 || dim == 2, "build_grid: dim must be 1 or 2");
    require(points_per_axis >= 8, "build_grid: need at least 8 points per axis");
    require(half_width > 0.0, "build_grid: half_width must be positive");

    Grid g;
    g.dim = dim;
    g.half_width = half_width;
    g.points_per_axis = points_per_axis;
    g.h = 2.0 * half_width / (points_per_axis - 1);
    g.punctured = punctured;
    g.axis.resize(points_per_axis);
    for (int i = 0; i < points_per_axis; ++i)
        g.axis[i] = -half_width + i * g.h;

    const std::size_t n = dim == 1 ? std::size_t(points_per_axis)
                                   : std::size_t(points_per_axis) * points_per_axis;
    g.weight.resize(n);
    g.density.resize(n);
    auto axis_w = [&](int i) {
        return (i == 0 || i == points_per_axis - 1) ? g.h / 2.0 : g.h;
    };
    for (std::size_t i = 0; i < n; ++i) {
        const double x = g.x1(i), y = g.x2(i);
        double w = dim == 1 ? axis_w(int(i))
                            : axis_w(int(i % g.axis.size())) * axis_w(int(i / g.axis.size()));
        double dens = density ? density(x, y) : 1.0;
        if (punctured && std::hypot(x, y) < g.h / 2.0) {
            w = 0.0;
            dens = 0.0;
        } else {
            require(dens >= 0.0 && std::isfinite(dens),
                    "build_grid: density must be finite and nonnegative");
        }
        g.density[i] = dens;
        g.weight[i] = w * dens;
    }
    return g;
}

double sphere_area(int n) {
    return 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
}

RadialSpace build_radial_space(int n, double radius, int points) {
    require(n == 3 || n == 4, "build_radial_space: n must be 3 or 4");
    require(points >= 16, "build_radial_space: need at least 16 points");
    require(radius > 0.0, "build_radial_space: radius must be positive");
    RadialSpace s;
    s.n = n;
    s.radius = radius;
    s.h = radius / points;
    s.rho.resize(points);
    s.weight.resize(points);
    const double area = sphere_area(n);
    for (int i = 0; i < points; ++i) {
        s.rho[i] = (i + 0.5) * s.h;
        s.weight[i] = area * std::pow(s.rho[i], n - 1) * s.h;
    }
    return s;
}

double sphere_cap_density(int n, double rho, double d, double s) {
    require(n == 3 || n == 4, "sphere_cap_density: n must be 3 or 4");
    if (rho <= 0.0 || s <= 0.0) return 0.0;
    if (d <= 1e-14) {
        // ball centered at the origin: whole sphere in or out
        return rho < s ? sphere_area(n) * std::pow(rho, n - 1) : 0.0;
    }
    if (rho <= s - d) return sphere_area(n) * std::pow(rho, n - 1);  // sphere inside
    if (rho >= s + d || rho <= d - s) return 0.0;                    // disjoint
    const double c = std::clamp((d * d + rho * rho - s * s) / (2.0 * d * rho), -1.0, 1.0);
    const double theta = std::acos(c);
    if (n == 3) {
        // spherical cap on S^2_rho up to polar angle theta: 2 pi rho^2 (1 - cos)
        return 2.0 * std::numbers::pi * rho * rho * (1.0 - c);
    }
    // n = 4: area of the cap on S^3_rho is 2 pi rho^3 (theta - sin cos)
    return 2.0 * std::numbers::pi * rho * rho * rho * (theta - std::sin(theta) * c);
}

std::size_t GasketGraph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& nb : adj) twice += nb.size();
    return twice / 2;
}

namespace {

struct GasketBuilder {
    std::unordered_map<std::uint64_t, int> ids;
    GasketGraph g;

    int vertex(long a, long b) {
        const std::uint64_t key = (std::uint64_t(a) << 32) | std::uint64_t(b);
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        const int id = int(g.adj.size());
        ids.emplace(key, id);
        g.adj.emplace_back();
        // lattice basis e1 = (1,0), e2 = (1/2, sqrt(3)/2)
        g.coords.push_back({double(a) + 0.5 * double(b),
                            0.5 * std::numbers::sqrt3 * double(b)});
        return id;
    }

    void edge(int u, int v) {
        g.adj[u].push_back(v);
        g.adj[v].push_back(u);
    }

    void subdivide(long ax, long ay, long bx, long by, long cx, long cy, int depth) {
        if (depth == 0) {
            const int u = vertex(ax, ay), v = vertex(bx, by), w = vertex(cx, cy);
            edge(u, v);
            edge(v, w);
            edge(u, w);
            return;
        }
        const long abx = (ax + bx) / 2, aby = (ay + by) / 2;
        const long bcx = (bx + cx) / 2, bcy = (by + cy) / 2;
        const long acx = (ax + cx) / 2, acy = (ay + cy) / 2;
        subdivide(ax, ay, abx, aby, acx, acy, depth - 1);
        subdivide(abx, aby, bx, by, bcx, bcy, depth - 1);
        subdivide(acx, acy, bcx, bcy, cx, cy, depth - 1);
    }
};

}  // namespace

GasketGraph sierpinski_graph(int level) {
    require(level >= 1, "sierpinski_graph: level must be >= 1");
    if (level > 7)
        throw resource_error("sierpinski_graph: levels beyond 7 exceed the resource budget");
    GasketBuilder b;
    const long side = 1L << level;
    b.subdivide(0, 0, side, 0, 0, side, level);
    b.g.level = level;
    b.g.corners = {b.vertex(0, 0), b.vertex(side, 0), b.vertex(0, side)};
    // normalize the embedding to a unit triangle
    for (auto& c : b.g.coords) {
        c[0] /= double(side);
        c[1] /= double(side);
    }
    return b.g;
}

std::vector<int> graph_distances(const GasketGraph& g, int from) {
    std::vector<int> dist(g.size(), -1);
    std::queue<int> q;
    dist[from] = 0;
    q.push(from);
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int v : g.adj[u])
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                q.push(v);
            }
    }
    return dist;
}

int graph_diameter(const GasketGraph& g) {
    int diam = 0;
    for (int c : g.corners) {
        const auto d = graph_distances(g, c);
        diam = std::max(diam, *std::max_element(d.begin(), d.end()));
    }
    return diam;
}

double ball_measure(const Grid& g, std::size_t center, double r) {
    double m = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j)
        if (g.distance(center, j) <= r) m += g.weight[j];
    return m;
}

double doubling_ratio(const Grid& g, double r) {
    require(r > 0.0, "doubling_ratio: radius must be positive");
    double best = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double margin = g.half_width - std::max(std::fabs(g.x1(i)), std::fabs(g.x2(i)));
        if (margin <= 2.0 * r) continue;
        const double small = ball_measure(g, i, r);
        if (small <= 0.0) continue;
        best = std::max(best, ball_measure(g, i, 2.0 * r) / small);
    }
    return best;
}

double doubling_ratio(const GasketGraph& g, int r) {
    require(r >= 1, "doubling_ratio: radius must be >= 1");
    const int diam = graph_diameter(g);
    if (2 * r > diam) return 0.0;
    double best = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto dist = graph_distances(g, int(i));
        std::size_t small = 0, big = 0;
        for (int d : dist) {
            if (d >= 0 && d <= r) ++small;
            if (d >= 0 && d <= 2 * r) ++big;
        }
        if (small > 0) best = std::max(best, double(big) / double(small));
    }
    return best;
}

}  // namespace heatlab
