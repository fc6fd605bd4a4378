#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "heatlab/common.hpp"

namespace heatlab {

// Uniform tensor grid on [-L, L]^dim (dim 1 or 2) carrying a measure
// density w >= 0; quadrature weights are trapezoid x density.  Punctured
// grids zero the weight of the origin node so singular densities and
// integrands are never sampled at the singularity.
struct Grid {
    int dim = 1;
    double half_width = 0.0;
    int points_per_axis = 0;
    double h = 0.0;
    bool punctured = false;
    Vec axis;     // per-axis coordinates, size points_per_axis
    Vec weight;   // per-node quadrature weight, size() entries
    Vec density;  // per-node density values

    std::size_t size() const { return weight.size(); }
    double x1(std::size_t i) const {
        return dim == 1 ? axis[i] : axis[i % axis.size()];
    }
    double x2(std::size_t i) const {
        return dim == 1 ? 0.0 : axis[i / axis.size()];
    }
    std::array<double, 2> coord(std::size_t i) const { return {x1(i), x2(i)}; }
    double distance(std::size_t i, std::size_t j) const;
    // index of the node nearest to a point (1-D convenience)
    std::size_t nearest(double x) const;
};

using Density = std::function<double(double, double)>;

Grid build_grid(int dim, double half_width, int points_per_axis,
                const Density& density = {}, bool punctured = false);

// Radially symmetric discretization of the ball B(0, radius) in R^n minus
// the origin, n >= 3.  Functions on it are radial profiles; the weight of
// node i is |S^{n-1}| rho_i^{n-1} h (midpoint rule, so the integrable
// singularity at 0 is never sampled).
struct RadialSpace {
    int n = 3;
    double radius = 0.0;
    double h = 0.0;
    Vec rho;
    Vec weight;
    std::size_t size() const { return rho.size(); }
};

RadialSpace build_radial_space(int n, double radius, int points);

// surface area of the unit sphere S^{n-1}
double sphere_area(int n);

// Lebesgue measure in R^n of the intersection of the sphere {|y| = rho}
// with the ball B(x, s), expressed as a density in rho: integrating it
// in rho over (0, inf) gives |B(x, s)|.  Supports n = 3 and 4.
double sphere_cap_density(int n, double rho, double dist_center, double s);

// Level-m graph approximation of the Sierpinski gasket with the uniform
// counting measure.  Corners have degree 2, every other vertex degree 4.
struct GasketGraph {
    int level = 0;
    std::vector<std::array<double, 2>> coords;
    std::vector<std::vector<int>> adj;
    std::array<int, 3> corners{};
    std::size_t size() const { return adj.size(); }
    std::size_t edge_count() const;
};

GasketGraph sierpinski_graph(int level);

// BFS hop distances from a vertex.
std::vector<int> graph_distances(const GasketGraph& g, int from);
int graph_diameter(const GasketGraph& g);

// Measure of the metric ball B(x_center, r) truncated at the box
// boundary, via the grid's quadrature weights (closed ball).
double ball_measure(const Grid& g, std::size_t center, double r);

// max over admissible centers (distance to the box boundary > 2r) of
// mu(B(x,2r)) / mu(B(x,r))
double doubling_ratio(const Grid& g, double r);
double doubling_ratio(const GasketGraph& g, int r);

}  // namespace heatlab
