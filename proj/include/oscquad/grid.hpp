#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oscquad {

/// The m+1 equispaced nodes t_k = -a + 2ak/m on [-a, a]. The endpoints are
/// hit exactly; interior nodes are evaluated as a*(2k - m)/m so the grid is
/// symmetric about the origin.
struct EquispacedGrid {
    int degree = 0;
    double half_width = 0.0;
    std::vector<double> nodes;
};

inline EquispacedGrid make_grid(int m, double a) {
    if (m < 1) throw std::invalid_argument("make_grid: degree must be positive");
    if (!(a > 0.0) || !std::isfinite(a))
        throw std::invalid_argument("make_grid: half-width must be positive and finite");
    EquispacedGrid g;
    g.degree = m;
    g.half_width = a;
    g.nodes.resize(static_cast<std::size_t>(m) + 1);
    for (int k = 0; k <= m; ++k)
        g.nodes[static_cast<std::size_t>(k)] = a * static_cast<double>(2 * k - m) / m;
    g.nodes.front() = -a;
    g.nodes.back() = a;
    return g;
}

/// Samples of a function on an equispaced grid; the only access the product
/// rule has to the integrand.
struct GridFunction {
    EquispacedGrid grid;
    std::vector<double> values;
};

inline GridFunction make_grid_function(EquispacedGrid grid, std::vector<double> values) {
    if (values.size() != grid.nodes.size())
        throw std::invalid_argument("make_grid_function: need one value per node");
    for (double v : values)
        if (!std::isfinite(v))
            throw std::invalid_argument("make_grid_function: values must be finite");
    return GridFunction{std::move(grid), std::move(values)};
}

template <typename F>
GridFunction sample(const EquispacedGrid& grid, F&& f) {
    std::vector<double> values;
    values.reserve(grid.nodes.size());
    for (double t : grid.nodes) values.push_back(static_cast<double>(f(t)));
    return make_grid_function(grid, std::move(values));
}

} // namespace oscquad
