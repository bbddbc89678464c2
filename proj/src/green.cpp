#include "henonlab/green.hpp"

#include <cmath>
#include <stdexcept>

#include "henonlab/parallel.hpp"

namespace henonlab {

namespace {

constexpr double tail_threshold = 1e40;

bool in_escape(const HenonMap &m, const ComplexPoint2 &p, Direction dir)
{
    return dir == Direction::forward ? m.in_escape_plus(p) : m.in_escape_minus(p);
}

ComplexPoint2 step(const HenonMap &m, const ComplexPoint2 &p, Direction dir)
{
    return dir == Direction::forward ? m.forward(p) : m.inverse(p);
}

} // namespace

GreenValue green(const HenonMap &m, const ComplexPoint2 &p, Direction dir, int max_iter)
{
    if (max_iter < 1) {
        throw std::invalid_argument("green: max_iter must be >= 1");
    }
    GreenValue out;
    ComplexPoint2 x = p;
    int n = 0;
    while (!in_escape(m, x, dir)) {
        if (n >= max_iter) {
            out.truncated = true;
            return out;
        }
        x = step(m, x, dir);
        ++n;
    }
    out.exit_iterate = n;

    // Filtration: the orbit stays in the escape region, the growing coordinate
    // squares at each step. Push it out until the tail is negligible.
    auto grow = [&](const ComplexPoint2 &q) { return dir == Direction::forward ? q.z : q.w; };
    int extra = 0;
    while (extra < 5 || std::abs(grow(x)) < tail_threshold) {
        x = step(m, x, dir);
        ++n;
        ++extra;
    }
    const double shift = dir == Direction::forward ? 0.0 : std::log(std::abs(m.a()));
    out.value = std::ldexp(std::log(std::abs(grow(x))) - shift, -n);
    return out;
}

Classification classify(const HenonMap &m, const ComplexPoint2 &p, int max_iter)
{
    auto run = [&](Direction dir) {
        OrbitClassification c{dir == Direction::forward ? OrbitStatus::bounded_forward : OrbitStatus::bounded_backward,
                              std::nullopt, true};
        ComplexPoint2 x = p;
        for (int n = 0; n <= max_iter; ++n) {
            if (in_escape(m, x, dir)) {
                c.status = dir == Direction::forward ? OrbitStatus::escapes_forward : OrbitStatus::escapes_backward;
                c.exit_iterate = n;
                c.truncated = false;
                return c;
            }
            if (n < max_iter) {
                x = step(m, x, dir);
            }
        }
        return c;
    };
    return {run(Direction::forward), run(Direction::backward)};
}

namespace {

template <typename Fn>
FieldGrid fill_grid(const Slice &slice, const Window &window, int nx, int ny, unsigned workers, Fn &&fn)
{
    if (nx < 2 || ny < 2) {
        throw std::invalid_argument("grid resolution must be at least 2x2");
    }
    if (!window.valid()) {
        throw std::invalid_argument("grid window must have positive sides");
    }
    FieldGrid g{slice, window, nx, ny, std::vector<double>(static_cast<std::size_t>(nx) * ny, 0.0)};
    parallel_for(static_cast<std::size_t>(ny), workers, [&](std::size_t j) {
        for (int i = 0; i < nx; ++i) {
            const auto t = window.node(i, static_cast<int>(j), nx, ny);
            g.values[j * nx + i] = fn(slice.at(t));
        }
    });
    return g;
}

} // namespace

FieldGrid julia_slice(const HenonMap &m, const Slice &slice, const Window &window, int nx, int ny,
                      Direction dir, int max_iter, unsigned workers)
{
    return fill_grid(slice, window, nx, ny, workers,
                     [&](const ComplexPoint2 &p) { return green(m, p, dir, max_iter).value; });
}

FieldGrid classification_slice(const HenonMap &m, const Slice &slice, const Window &window, int nx, int ny,
                               Direction dir, int max_iter, unsigned workers)
{
    return fill_grid(slice, window, nx, ny, workers, [&](const ComplexPoint2 &p) {
        const auto c = classify(m, p, max_iter);
        const auto &d = dir == Direction::forward ? c.forward : c.backward;
        return d.exit_iterate ? 1.0 : 0.0;
    });
}

std::vector<Polyline> julia_contours(const FieldGrid &grid, double level)
{
    return marching_squares(grid.values, grid.nx, grid.ny, level, grid.window);
}

} // namespace henonlab
