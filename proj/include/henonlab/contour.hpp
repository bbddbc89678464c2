#pragma once

#include <complex>
#include <span>
#include <vector>

namespace henonlab {

/// Axis-aligned rectangle [x_min, x_max] x [y_min, y_max] of the plane,
/// identified with C.
struct Window {
    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;

    bool valid() const { return x_max > x_min && y_max > y_min; }
    bool contains(std::complex<double> z) const
    {
        return z.real() >= x_min && z.real() <= x_max && z.imag() >= y_min && z.imag() <= y_max;
    }
    /// Grid node (i, j) of an nx-by-ny lattice spanning the window, corners included.
    std::complex<double> node(int i, int j, int nx, int ny) const
    {
        return {x_min + (x_max - x_min) * i / (nx - 1), y_min + (y_max - y_min) * j / (ny - 1)};
    }
};

struct Polyline {
    std::vector<std::complex<double>> points;
    bool closed = false;
    /// Some crossing sits next to a non-finite sample.
    bool touches_undefined = false;
};

/// Marching squares on a row-major nx-by-ny field (index j * nx + i), extracting
/// the boundary of {value < level}. Non-finite samples count as outside. Saddle
/// cells are resolved with the cell-center average.
std::vector<Polyline> marching_squares(std::span<const double> values, int nx, int ny, double level,
                                       const Window &window);

/// Even-odd point-in-polygon test.
bool point_in_polygon(std::span<const std::complex<double>> polygon, std::complex<double> p);

/// Signed area (shoelace).
double polygon_area(std::span<const std::complex<double>> polygon);

} // namespace henonlab
