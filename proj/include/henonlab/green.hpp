#pragma once

#include <optional>
#include <vector>

#include "henonlab/contour.hpp"
#include "henonlab/henon_map.hpp"

namespace henonlab {

/// Forward (G+, f) or backward (G-, f^-1) dynamics.
enum class Direction { forward, backward };

struct GreenValue {
    double value = 0.0;
    /// The orbit did not reach the escape region within max_iter.
    bool truncated = false;
    /// Iterate at which the orbit entered V+_R (resp. V-_R).
    std::optional<int> exit_iterate;
};

inline constexpr int default_green_iterations = 200;
inline constexpr int default_classify_iterations = 2000;

/// G+(p) = lim 2^-n log+ |f^n(p)|, resp. G- with f^-1.
///
/// Once the orbit is in V+_R the first coordinate grows like z -> z^2 and the
/// limit is read off as 2^-n log|z_n| after iterating to |z_n| > 1e40, where the
/// remaining tail is below double precision. For G- the asymptotic step is
/// w -> -w^2 / a, which contributes the constant -log|a|.
GreenValue green(const HenonMap &m, const ComplexPoint2 &p, Direction dir,
                 int max_iter = default_green_iterations);

enum class OrbitStatus { bounded_forward, escapes_forward, bounded_backward, escapes_backward };

struct OrbitClassification {
    OrbitStatus status;
    std::optional<int> exit_iterate;
    /// Bounded only up to max_iter.
    bool truncated = false;
};

struct Classification {
    OrbitClassification forward;
    OrbitClassification backward;
};

Classification classify(const HenonMap &m, const ComplexPoint2 &p, int max_iter = default_classify_iterations);

/// Complex line t -> base + t * direction in C^2.
struct Slice {
    ComplexPoint2 base;
    ComplexPoint2 direction{1.0, 0.0};

    ComplexPoint2 at(cplx t) const { return base + t * direction; }
};

struct FieldGrid {
    Slice slice;
    Window window;
    int nx = 0;
    int ny = 0;
    /// Row-major, index j * nx + i, node i along Re t and node j along Im t.
    std::vector<double> values;
};

/// Level used to extract J+- slices from the Green field.
inline constexpr double julia_level = 1e-3;

FieldGrid julia_slice(const HenonMap &m, const Slice &slice, const Window &window, int nx, int ny,
                      Direction dir, int max_iter = default_green_iterations, unsigned workers = 1);

/// Classification codes per node: 0 bounded, 1 escapes (in the chosen direction).
FieldGrid classification_slice(const HenonMap &m, const Slice &slice, const Window &window, int nx, int ny,
                               Direction dir, int max_iter = default_classify_iterations, unsigned workers = 1);

/// Polylines approximating the J slice: the julia_level set of the Green field.
std::vector<Polyline> julia_contours(const FieldGrid &grid, double level = julia_level);

} // namespace henonlab
