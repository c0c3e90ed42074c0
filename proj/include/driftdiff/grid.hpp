// Structured uniform grids (1-D interval, 2-D rectangle) shared by all
// discrete operators. Grids are immutable after construction.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace driftdiff {

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

struct Grid1D {
    int n_cells = 0;
    double x_left = 0.0;
    double x_right = 1.0;
    double cell_width = 0.0;
    std::vector<double> cell_centers;

    Grid1D() = default;
    Grid1D(int n, double xl, double xr) : n_cells(n), x_left(xl), x_right(xr) {
        require(n >= 2, "Grid1D: n_cells must be >= 2");
        require(xr > xl, "Grid1D: endpoints must be ordered");
        cell_width = (xr - xl) / n;
        cell_centers.resize(n);
        for (int i = 0; i < n; ++i) cell_centers[i] = xl + (i + 0.5) * cell_width;
    }

    double cell_volume() const { return cell_width; }
    std::size_t size() const { return static_cast<std::size_t>(n_cells); }
};

inline Grid1D build_grid_1d(int n_cells, std::pair<double, double> endpoints = {0.0, 1.0}) {
    return Grid1D(n_cells, endpoints.first, endpoints.second);
}

struct Grid2D {
    int nx = 0;
    int ny = 0;
    double x_left = 0.0, x_right = 1.0;
    double y_bottom = 0.0, y_top = 1.0;
    double hx = 0.0, hy = 0.0;

    Grid2D() = default;
    Grid2D(int nx_, int ny_, double xl = 0.0, double xr = 1.0, double yb = 0.0, double yt = 1.0)
        : nx(nx_), ny(ny_), x_left(xl), x_right(xr), y_bottom(yb), y_top(yt) {
        require(nx >= 3 && ny >= 3, "Grid2D: nx, ny must be >= 3");
        require(xr > xl && yt > yb, "Grid2D: degenerate rectangle");
        hx = (xr - xl) / nx;
        hy = (yt - yb) / ny;
    }

    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    double x_center(int i) const { return x_left + (i + 0.5) * hx; }
    double y_center(int j) const { return y_bottom + (j + 0.5) * hy; }
    double cell_volume() const { return hx * hy; }
};

template <class GridT>
double cell_integral(const GridT& grid, const std::vector<double>& field);

template <>
inline double cell_integral<Grid1D>(const Grid1D& grid, const std::vector<double>& field) {
    require(field.size() == grid.size(), "cell_integral: field length mismatch");
    double acc = 0.0;
    for (double v : field) acc += v;
    return acc * grid.cell_width;
}

template <>
inline double cell_integral<Grid2D>(const Grid2D& grid, const std::vector<double>& field) {
    require(field.size() == grid.size(), "cell_integral: field length mismatch");
    double acc = 0.0;
    for (double v : field) acc += v;
    return acc * grid.cell_volume();
}

// One face of the rectangle boundary (or one endpoint of the interval).
// side: 0 = left/x-min, 1 = right/x-max, 2 = bottom/y-min, 3 = top/y-max.
struct BoundaryPoint {
    int side = 0;
    double x = 0.0;
    double y = 0.0;
};

struct BoundaryFace {
    BoundaryPoint point;    // face midpoint on the physical boundary
    std::size_t cell;       // adjacent interior cell
    std::size_t cell_next;  // second cell inward (one-sided differences)
    double measure;         // 1 in 1-D, face length in 2-D
    double spacing;         // grid spacing normal to the face
};

inline std::vector<BoundaryFace> boundary_faces(const Grid1D& g) {
    return {
        {{0, g.x_left, 0.0}, 0, 1, 1.0, g.cell_width},
        {{1, g.x_right, 0.0}, g.size() - 1, g.size() - 2, 1.0, g.cell_width},
    };
}

// Boundary faces in a fixed order (bottom, top, left, right rows) so that
// trace/derivative arrays line up across the potential and flux code.
inline std::vector<BoundaryFace> boundary_faces(const Grid2D& g) {
    std::vector<BoundaryFace> faces;
    faces.reserve(2 * (g.nx + g.ny));
    for (int i = 0; i < g.nx; ++i) {
        faces.push_back({{2, g.x_center(i), g.y_bottom}, g.index(i, 0), g.index(i, 1), g.hx, g.hy});
    }
    for (int i = 0; i < g.nx; ++i) {
        faces.push_back({{3, g.x_center(i), g.y_top}, g.index(i, g.ny - 1), g.index(i, g.ny - 2), g.hx, g.hy});
    }
    for (int j = 0; j < g.ny; ++j) {
        faces.push_back({{0, g.x_left, g.y_center(j)}, g.index(0, j), g.index(1, j), g.hy, g.hx});
    }
    for (int j = 0; j < g.ny; ++j) {
        faces.push_back({{1, g.x_right, g.y_center(j)}, g.index(g.nx - 1, j), g.index(g.nx - 2, j), g.hy, g.hx});
    }
    return faces;
}

}  // namespace driftdiff
