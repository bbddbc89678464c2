#include "henonlab/contour.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

namespace henonlab {

namespace {

using cplx = std::complex<double>;

struct EdgePoint {
    cplx position;
    bool undefined = false;
    std::array<std::int64_t, 2> next{-1, -1};
};

} // namespace

std::vector<Polyline> marching_squares(std::span<const double> values, int nx, int ny, double level,
                                       const Window &window)
{
    if (nx < 2 || ny < 2 || values.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny)) {
        throw std::invalid_argument("marching_squares: field shape mismatch");
    }
    auto value = [&](int i, int j) { return values[static_cast<std::size_t>(j) * nx + i]; };
    auto inside = [&](int i, int j) {
        const double v = value(i, j);
        return std::isfinite(v) && v < level;
    };
    // Edge ids: horizontal (i,j)-(i+1,j) -> 2*(j*nx+i); vertical (i,j)-(i,j+1) -> 2*(j*nx+i)+1.
    auto h_id = [&](int i, int j) { return 2 * (static_cast<std::int64_t>(j) * nx + i); };
    auto v_id = [&](int i, int j) { return 2 * (static_cast<std::int64_t>(j) * nx + i) + 1; };

    std::unordered_map<std::int64_t, EdgePoint> points;
    auto crossing = [&](std::int64_t id) -> EdgePoint & {
        auto it = points.find(id);
        if (it != points.end()) {
            return it->second;
        }
        const std::int64_t node = id / 2;
        const int i = static_cast<int>(node % nx);
        const int j = static_cast<int>(node / nx);
        const int i1 = (id % 2 == 0) ? i + 1 : i;
        const int j1 = (id % 2 == 0) ? j : j + 1;
        const double va = value(i, j);
        const double vb = value(i1, j1);
        EdgePoint ep;
        double t = 0.5;
        if (std::isfinite(va) && std::isfinite(vb) && va != vb) {
            t = (level - va) / (vb - va);
        } else if (!std::isfinite(va) || !std::isfinite(vb)) {
            ep.undefined = true;
        }
        const cplx pa = window.node(i, j, nx, ny);
        const cplx pb = window.node(i1, j1, nx, ny);
        ep.position = pa + t * (pb - pa);
        return points.emplace(id, ep).first->second;
    };
    auto link = [&](std::int64_t e0, std::int64_t e1) {
        auto attach = [&](std::int64_t from, std::int64_t to) {
            auto &p = crossing(from);
            if (p.next[0] < 0) {
                p.next[0] = to;
            } else {
                p.next[1] = to;
            }
        };
        attach(e0, e1);
        attach(e1, e0);
    };

    for (int j = 0; j + 1 < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            const bool bl = inside(i, j);
            const bool br = inside(i + 1, j);
            const bool tr = inside(i + 1, j + 1);
            const bool tl = inside(i, j + 1);
            const int code = (bl ? 1 : 0) | (br ? 2 : 0) | (tr ? 4 : 0) | (tl ? 8 : 0);
            if (code == 0 || code == 15) {
                continue;
            }
            const std::int64_t bottom = h_id(i, j);
            const std::int64_t top = h_id(i, j + 1);
            const std::int64_t left = v_id(i, j);
            const std::int64_t right = v_id(i + 1, j);
            if (code == 5 || code == 10) {
                const double c = 0.25 * (value(i, j) + value(i + 1, j) + value(i + 1, j + 1) + value(i, j + 1));
                const bool center_in = std::isfinite(c) && c < level;
                // Cut off the two corners that are not joined through the center.
                if ((code == 5) == center_in) {
                    link(left, top);
                    link(bottom, right);
                } else {
                    link(left, bottom);
                    link(top, right);
                }
                continue;
            }
            std::array<std::int64_t, 2> ends{};
            int n = 0;
            if (bl != br) ends[n++] = bottom;
            if (br != tr) ends[n++] = right;
            if (tr != tl) ends[n++] = top;
            if (tl != bl) ends[n++] = left;
            link(ends[0], ends[1]);
        }
    }

    // Chain the segments. Iterate in id order for determinism.
    std::vector<std::int64_t> ids;
    ids.reserve(points.size());
    for (const auto &kv : points) {
        ids.push_back(kv.first);
    }
    std::sort(ids.begin(), ids.end());
    std::unordered_map<std::int64_t, bool> used;
    std::vector<Polyline> out;

    auto walk = [&](std::int64_t start, Polyline &line, std::vector<cplx> &pts) {
        std::int64_t prev = -1;
        std::int64_t cur = start;
        while (cur >= 0 && !used[cur]) {
            used[cur] = true;
            const auto &p = points.at(cur);
            pts.push_back(p.position);
            line.touches_undefined = line.touches_undefined || p.undefined;
            std::int64_t nxt = p.next[0] != prev ? p.next[0] : p.next[1];
            if (p.next[0] == p.next[1]) {
                nxt = p.next[0];
            }
            prev = cur;
            cur = nxt;
            if (cur == start) {
                line.closed = true;
                break;
            }
        }
    };

    // Open chains first: start from endpoints with a single neighbour.
    for (const auto id : ids) {
        const auto &p = points.at(id);
        if (used[id] || p.next[1] >= 0) {
            continue;
        }
        Polyline line;
        walk(id, line, line.points);
        line.closed = false;
        out.push_back(std::move(line));
    }
    for (const auto id : ids) {
        if (used[id]) {
            continue;
        }
        Polyline line;
        walk(id, line, line.points);
        out.push_back(std::move(line));
    }
    return out;
}

bool point_in_polygon(std::span<const std::complex<double>> polygon, std::complex<double> p)
{
    bool in = false;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const auto &a = polygon[i];
        const auto &b = polygon[j];
        if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
            const double x = a.real() + (p.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
            if (p.real() < x) {
                in = !in;
            }
        }
    }
    return in;
}

double polygon_area(std::span<const std::complex<double>> polygon)
{
    double acc = 0.0;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        acc += polygon[j].real() * polygon[i].imag() - polygon[i].real() * polygon[j].imag();
    }
    return 0.5 * acc;
}

} // namespace henonlab
