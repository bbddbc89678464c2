#include "henonlab/horn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "henonlab/parallel.hpp"

namespace henonlab {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

bool less_lex(cplx a, cplx b)
{
    if (a.real() != b.real()) {
        return a.real() < b.real();
    }
    return a.imag() < b.imag();
}

// Distance between two canonical lifts, modulo 1 in the real direction.
double distance_mod1(cplx a, cplx b)
{
    double dx = std::abs(a.real() - b.real());
    dx = std::min(dx, 1.0 - dx);
    return std::hypot(dx, a.imag() - b.imag());
}

// z + m with 0 <= Re < 1, without snapping.
cplx reduce_mod1(cplx z) { return {z.real() - std::floor(z.real()), z.imag()}; }

double distance_to_integer(cplx z) { return std::hypot(z.real() - std::round(z.real()), z.imag()); }

} // namespace

std::optional<Jet> LiftedMap::jet(cplx z) const
{
    const auto v = (*this)(z);
    if (!v) {
        return std::nullopt;
    }
    const auto d = cauchy_derivative(*this, z);
    if (!d) {
        return std::nullopt;
    }
    return Jet{*v, *d};
}

std::optional<Jet> FunctionMap::jet(cplx z) const
{
    if (!derivative_) {
        return LiftedMap::jet(z);
    }
    const auto v = value_(z);
    const auto d = derivative_(z);
    if (!v || !d) {
        return std::nullopt;
    }
    return Jet{*v, *d};
}

HornResult HornMap::evaluate(cplx z) const
{
    HornResult out;
    const auto psi = ev_.outgoing_linear(z);
    if (psi.status != FatouStatus::ok) {
        out.status = psi.status;
        return out;
    }
    const auto phi = ev_.incoming_linear(psi.q, nullptr, false);
    out.status = phi.status;
    out.value = phi.value;
    return out;
}

HornResult HornMap::evaluate_jet(cplx z) const
{
    HornResult out;
    const auto psi = ev_.outgoing_linear(z);
    if (psi.status != FatouStatus::ok) {
        out.status = psi.status;
        return out;
    }
    const auto phi = ev_.incoming_linear(psi.q, &psi.dq, false);
    out.status = phi.status;
    out.value = phi.value;
    out.derivative = phi.derivative;
    return out;
}

std::optional<cplx> HornMap::operator()(cplx z) const
{
    const auto r = evaluate(z);
    if (!r.ok()) {
        return std::nullopt;
    }
    return r.value;
}

std::optional<Jet> HornMap::jet(cplx z) const
{
    const auto r = evaluate_jet(z);
    if (!r.ok()) {
        return std::nullopt;
    }
    return Jet{r.value, r.derivative};
}

cplx cylinder_coordinate(cplx z)
{
    return std::polar(std::exp(-two_pi * z.imag()), two_pi * z.real());
}

cplx canonical_lift(cplx z)
{
    constexpr double grid = 68719476736.0; // 2^36
    double x = z.real() - std::floor(z.real());
    x = std::round(x * grid) / grid;
    if (x >= 1.0) {
        x -= 1.0;
    }
    return {x, z.imag()};
}

CylinderPoint CylinderPoint::from_lift(cplx z)
{
    if (!finite(z)) {
        throw std::invalid_argument("CylinderPoint::from_lift: lift must be finite");
    }
    return {Kind::finite, cylinder_coordinate(z), z};
}

CylinderPoint CylinderPoint::from_zeta(cplx zeta)
{
    if (!finite(zeta) || zeta == cplx(0.0)) {
        throw std::invalid_argument("CylinderPoint::from_zeta: use the symbolic ends for 0 and infinity");
    }
    const cplx lift = std::log(zeta) / cplx(0.0, two_pi);
    return {Kind::finite, zeta, lift};
}

CylinderResult horn_cyl(const HornMap &horn, const CylinderPoint &p)
{
    if (p.kind != CylinderPoint::Kind::finite) {
        return {p, FatouStatus::ok};
    }
    const cplx lift = p.lift ? *p.lift : CylinderPoint::from_zeta(p.zeta).lift.value();
    const auto h = horn.evaluate(canonical_lift(lift));
    CylinderResult out;
    out.status = h.status;
    if (h.ok()) {
        out.point = CylinderPoint::from_lift(h.value);
    }
    return out;
}

std::optional<SecondJet> cauchy_jet(const LiftedMap &f, cplx z, double radius, int nodes)
{
    if (!(radius > 0.0) || nodes < 4) {
        throw std::invalid_argument("cauchy_jet: radius must be positive and nodes >= 4");
    }
    cplx s0 = 0.0;
    cplx s1 = 0.0;
    cplx s2 = 0.0;
    for (int j = 0; j < nodes; ++j) {
        const double th = two_pi * j / nodes;
        const auto v = f(z + std::polar(radius, th));
        if (!v) {
            return std::nullopt;
        }
        s0 += *v;
        s1 += *v * std::polar(1.0, -th);
        s2 += *v * std::polar(1.0, -2.0 * th);
    }
    const double n = nodes;
    return SecondJet{s0 / n, s1 / (n * radius), 2.0 * s2 / (n * radius * radius)};
}

std::optional<cplx> cauchy_derivative(const LiftedMap &f, cplx z, double radius, int nodes)
{
    const auto j = cauchy_jet(f, z, radius, nodes);
    if (!j) {
        return std::nullopt;
    }
    return j->first;
}

std::vector<CriticalPoint> critical_points(const LiftedMap &f, const Window &window, int seeds, bool periodic,
                                           unsigned workers)
{
    if (!window.valid() || seeds < 1) {
        throw std::invalid_argument("critical_points: invalid window or seed count");
    }
    const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(seeds))));
    std::vector<std::optional<CriticalPoint>> found(static_cast<std::size_t>(side) * side);
    parallel_for(found.size(), workers, [&](std::size_t idx) {
        const int i = static_cast<int>(idx) % side;
        const int j = static_cast<int>(idx) / side;
        cplx z{window.x_min + (window.x_max - window.x_min) * (i + 0.5) / side,
               window.y_min + (window.y_max - window.y_min) * (j + 0.5) / side};
        for (int it = 0; it < 50; ++it) {
            const auto jt = cauchy_jet(f, z);
            if (!jt || jt->second == cplx(0.0)) {
                return;
            }
            const cplx step = jt->first / jt->second;
            z -= step;
            if (!finite(z)) {
                return;
            }
            if (std::abs(step) < 1e-10 * std::max(1.0, std::abs(z))) {
                const auto fin = cauchy_jet(f, z);
                if (fin && std::abs(fin->first) < 1e-6) {
                    found[idx] = CriticalPoint{z, fin->value, std::abs(fin->first)};
                }
                return;
            }
        }
    });
    std::vector<CriticalPoint> out;
    for (const auto &c : found) {
        if (!c || !window.contains(c->lift)) {
            continue;
        }
        CriticalPoint p = *c;
        if (periodic) {
            const cplx shift = reduce_mod1(p.lift) - p.lift;
            p.lift += shift;
            p.value += shift;
        }
        const bool dup = std::any_of(out.begin(), out.end(), [&](const CriticalPoint &q) {
            return (periodic ? distance_mod1(p.lift, q.lift) : std::abs(p.lift - q.lift)) < 1e-6;
        });
        if (!dup) {
            out.push_back(p);
        }
    }
    std::sort(out.begin(), out.end(), [](const CriticalPoint &a, const CriticalPoint &b) {
        return less_lex(a.lift, b.lift);
    });
    return out;
}

namespace {

std::vector<cplx> resample_closed(const std::vector<cplx> &pts, int count)
{
    const std::size_t n = pts.size();
    std::vector<double> cum(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        cum[i + 1] = cum[i] + std::abs(pts[(i + 1) % n] - pts[i]);
    }
    const double total = cum[n];
    std::vector<cplx> out;
    out.reserve(count);
    std::size_t seg = 0;
    for (int k = 0; k < count; ++k) {
        const double s = total * k / count;
        while (seg + 1 < n && cum[seg + 1] <= s) {
            ++seg;
        }
        const double len = cum[seg + 1] - cum[seg];
        const double t = len > 0.0 ? (s - cum[seg]) / len : 0.0;
        out.push_back(pts[seg] + t * (pts[(seg + 1) % n] - pts[seg]));
    }
    return out;
}

// Moves z along f so that f(z) lands on the circle |w - z0| = r at the angle
// of the current image.
std::optional<cplx> project_to_level(const LiftedMap &f, cplx z, cplx z0, double r)
{
    auto j = f.jet(z);
    if (!j || std::abs(j->value - z0) == 0.0) {
        return std::nullopt;
    }
    const cplx dir = (j->value - z0) / std::abs(j->value - z0);
    const cplx target = z0 + r * dir;
    for (int it = 0; it < 20; ++it) {
        if (j->derivative == cplx(0.0)) {
            return std::nullopt;
        }
        const cplx step = (target - j->value) / j->derivative;
        z += step;
        j = f.jet(z);
        if (!j) {
            return std::nullopt;
        }
        if (std::abs(j->value - target) <= 1e-12 * std::max(1.0, r)) {
            return z;
        }
    }
    return std::abs(j->value - target) <= 1e-6 * r ? std::optional<cplx>(z) : std::nullopt;
}

} // namespace

std::optional<int> island_degree(const LiftedMap &f, const std::vector<cplx> &boundary, cplx z0)
{
    if (boundary.size() < 3) {
        return std::nullopt;
    }
    std::vector<cplx> img;
    img.reserve(boundary.size());
    for (const cplx b : boundary) {
        const auto v = f(b);
        if (!v || *v == z0) {
            return std::nullopt;
        }
        img.push_back(*v - z0);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < img.size(); ++i) {
        total += std::arg(img[(i + 1) % img.size()] / img[i]);
    }
    const int winding = static_cast<int>(std::lround(total / two_pi));
    return polygon_area(boundary) >= 0.0 ? winding : -winding;
}

std::vector<Island> find_islands(const LiftedMap &f, cplx z0, double r, const Window &window,
                                 const IslandOptions &options)
{
    if (!(r > 0.0) || !window.valid() || options.resolution < 2 || options.contour_nodes < 8) {
        throw std::invalid_argument("find_islands: invalid radius, window or options");
    }
    const int nx = std::max(3, static_cast<int>(std::ceil((window.x_max - window.x_min) * options.resolution)) + 1);
    const int ny = std::max(3, static_cast<int>(std::ceil((window.y_max - window.y_min) * options.resolution)) + 1);
    std::vector<double> values(static_cast<std::size_t>(nx) * ny);
    parallel_for(values.size(), options.workers, [&](std::size_t idx) {
        const int i = static_cast<int>(idx % nx);
        const int j = static_cast<int>(idx / nx);
        const auto v = f(window.node(i, j, nx, ny));
        values[idx] = v ? std::abs(*v - z0) - r : std::numeric_limits<double>::quiet_NaN();
    });

    const auto contours = marching_squares(values, nx, ny, 0.0, window);
    std::vector<std::optional<Island>> candidates(contours.size());
    parallel_for(contours.size(), options.workers, [&](std::size_t c) {
        const auto &poly = contours[c];
        if (!poly.closed || poly.touches_undefined || poly.points.size() < 3) {
            return;
        }
        // Every grid node enclosed must lie in the sublevel set: this rejects
        // holes and undefined interior samples.
        double bx0 = poly.points[0].real(), bx1 = bx0, by0 = poly.points[0].imag(), by1 = by0;
        for (const cplx p : poly.points) {
            bx0 = std::min(bx0, p.real());
            bx1 = std::max(bx1, p.real());
            by0 = std::min(by0, p.imag());
            by1 = std::max(by1, p.imag());
        }
        const double hx = (window.x_max - window.x_min) / (nx - 1);
        const double hy = (window.y_max - window.y_min) / (ny - 1);
        const int i0 = std::max(0, static_cast<int>(std::floor((bx0 - window.x_min) / hx)));
        const int i1 = std::min(nx - 1, static_cast<int>(std::ceil((bx1 - window.x_min) / hx)));
        const int j0 = std::max(0, static_cast<int>(std::floor((by0 - window.y_min) / hy)));
        const int j1 = std::min(ny - 1, static_cast<int>(std::ceil((by1 - window.y_min) / hy)));
        int inside = 0;
        for (int j = j0; j <= j1; ++j) {
            for (int i = i0; i <= i1; ++i) {
                if (!point_in_polygon(poly.points, window.node(i, j, nx, ny))) {
                    continue;
                }
                const double v = values[static_cast<std::size_t>(j) * nx + i];
                if (!(v < 0.0)) {
                    return;
                }
                ++inside;
            }
        }
        if (inside == 0) {
            return;
        }

        std::vector<cplx> pts = poly.points;
        if (polygon_area(pts) < 0.0) {
            std::reverse(pts.begin(), pts.end());
        }
        Island island;
        island.target_center = z0;
        island.target_radius = r;
        for (const cplx p : resample_closed(pts, options.contour_nodes)) {
            const auto q = project_to_level(f, p, z0, r);
            if (!q || !window.contains(*q)) {
                return;
            }
            island.boundary.push_back(*q);
        }
        const auto degree = island_degree(f, island.boundary, z0);
        if (!degree || *degree != 1) {
            return;
        }
        island.degree = *degree;
        for (const cplx b : island.boundary) {
            const auto v = f(b);
            island.boundary_error = std::max(island.boundary_error, std::abs(std::abs(*v - z0) - r) / r);
        }
        if (island.boundary_error > 1e-3) {
            return;
        }
        candidates[c] = std::move(island);
    });

    std::vector<Island> out;
    for (auto &c : candidates) {
        if (c) {
            out.push_back(std::move(*c));
        }
    }
    auto key = [](const Island &isl) {
        return *std::min_element(isl.boundary.begin(), isl.boundary.end(), less_lex);
    };
    std::sort(out.begin(), out.end(), [&](const Island &a, const Island &b) { return less_lex(key(a), key(b)); });
    return out;
}

InjectivityAudit audit_injectivity(const LiftedMap &f, const Island &island, int pairs, std::uint64_t seed)
{
    InjectivityAudit audit;
    const auto &poly = island.boundary;
    if (poly.size() < 3 || pairs < 1) {
        return audit;
    }
    double x0 = poly[0].real(), x1 = x0, y0 = poly[0].imag(), y1 = y0;
    for (const cplx p : poly) {
        x0 = std::min(x0, p.real());
        x1 = std::max(x1, p.real());
        y0 = std::min(y0, p.imag());
        y1 = std::max(y1, p.imag());
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(x0, x1);
    std::uniform_real_distribution<double> uy(y0, y1);
    auto draw = [&]() -> std::optional<cplx> {
        for (int tries = 0; tries < 100000; ++tries) {
            const cplx p{ux(rng), uy(rng)};
            if (point_in_polygon(poly, p)) {
                return p;
            }
        }
        return std::nullopt;
    };
    for (int k = 0; k < pairs; ++k) {
        const auto p = draw();
        const auto q = draw();
        if (!p || !q) {
            break;
        }
        ++audit.pairs;
        if (std::abs(*p - *q) <= 1e-9) {
            continue;
        }
        const auto fp = f(*p);
        const auto fq = f(*q);
        if (!fp || !fq || std::abs(*fp - *fq) <= 1e-12) {
            ++audit.collisions;
        }
    }
    return audit;
}

namespace {

struct IterateJet {
    cplx value;
    cplx derivative;
};

std::optional<IterateJet> iterate_jet(const LiftedMap &f, cplx z, int count)
{
    cplx d = 1.0;
    for (int i = 0; i < count; ++i) {
        const auto j = f.jet(z);
        if (!j) {
            return std::nullopt;
        }
        d *= j->derivative;
        z = j->value;
    }
    return IterateJet{z, d};
}

std::optional<cplx> iterate(const LiftedMap &f, cplx z, int count)
{
    for (int i = 0; i < count; ++i) {
        const auto v = f(z);
        if (!v) {
            return std::nullopt;
        }
        z = *v;
    }
    return z;
}

std::optional<cplx> derivative_with_fallback(const LiftedMap &f, cplx z, const std::vector<double> &radii)
{
    for (const double r : radii) {
        if (const auto d = cauchy_derivative(f, z, r)) {
            return d;
        }
    }
    return std::nullopt;
}

} // namespace

std::vector<PeriodicPoint> repelling_cycles(const LiftedMap &f, int period, const Window &window, int seeds,
                                            const CycleOptions &options)
{
    if (period < 1) {
        throw std::invalid_argument("repelling_cycles: period must be >= 1");
    }
    if (!window.valid() || seeds < 1) {
        throw std::invalid_argument("repelling_cycles: invalid window or seed count");
    }
    const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(seeds))));
    const int kmax = period * options.max_shift;
    const std::size_t runs = static_cast<std::size_t>(side) * side * (2 * kmax + 1);
    std::vector<std::optional<cplx>> roots(runs);
    parallel_for(runs, options.workers, [&](std::size_t idx) {
        const int k = static_cast<int>(idx % (2 * kmax + 1)) - kmax;
        const int cell = static_cast<int>(idx / (2 * kmax + 1));
        const int i = cell % side;
        const int j = cell / side;
        cplx z{window.x_min + (window.x_max - window.x_min) * (i + 0.5) / side,
               window.y_min + (window.y_max - window.y_min) * (j + 0.5) / side};
        for (int it = 0; it < options.newton_iterations; ++it) {
            const auto jt = iterate_jet(f, z, period);
            if (!jt) {
                return;
            }
            const cplx residual = jt->value - z - static_cast<double>(k);
            if (std::abs(residual) < options.newton_tolerance) {
                roots[idx] = z;
                return;
            }
            const cplx slope = jt->derivative - 1.0;
            if (slope == cplx(0.0)) {
                return;
            }
            const cplx step = residual / slope;
            z -= step;
            if (!finite(z) || std::abs(z.imag()) > 1e3) {
                return;
            }
            // The residual is 1-periodic in z.
            z = reduce_mod1(z);
            // Stagnation at the noise floor of f.
            if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(z))) {
                const auto v = iterate(f, z, period);
                if (v && std::abs(*v - z - static_cast<double>(k)) < 1e-10) {
                    roots[idx] = z;
                }
                return;
            }
        }
    });

    std::vector<cplx> distinct;
    for (const auto &r : roots) {
        if (!r) {
            continue;
        }
        const cplx c = reduce_mod1(*r);
        if (std::none_of(distinct.begin(), distinct.end(),
                         [&](cplx d) { return distance_mod1(c, d) < 1e-8; })) {
            distinct.push_back(c);
        }
    }

    std::vector<std::optional<PeriodicPoint>> checked(distinct.size());
    parallel_for(distinct.size(), options.workers, [&](std::size_t idx) {
        const cplx z = distinct[idx];
        for (int d = 1; d < period; ++d) {
            if (period % d != 0) {
                continue;
            }
            const auto v = iterate(f, z, d);
            if (!v || distance_to_integer(*v - z) < 1e-6) {
                return;
            }
        }
        PeriodicPoint p;
        p.lift = z;
        p.zeta = cylinder_coordinate(z);
        p.period = period;
        cplx mult = 1.0;
        cplx x = z;
        for (int i = 0; i < period; ++i) {
            const auto d = derivative_with_fallback(f, x, options.derivative_radii);
            const auto v = f(x);
            if (!d || !v) {
                return;
            }
            mult *= *d;
            x = *v;
        }
        p.multiplier = mult;
        p.residual = std::abs(cylinder_coordinate(x) - p.zeta);
        if (std::abs(mult) > 1.0 + 1e-6 && p.residual < 1e-9) {
            checked[idx] = p;
        }
    });

    std::vector<PeriodicPoint> out;
    for (auto &c : checked) {
        if (c) {
            out.push_back(*c);
        }
    }
    std::sort(out.begin(), out.end(),
              [](const PeriodicPoint &a, const PeriodicPoint &b) { return less_lex(a.lift, b.lift); });
    return out;
}

FunctionMap cylinder_square_model()
{
    return FunctionMap([](cplx z) -> std::optional<cplx> { return 2.0 * z; },
                       [](cplx) -> std::optional<cplx> { return cplx(2.0); });
}

FunctionMap square_model()
{
    return FunctionMap([](cplx z) -> std::optional<cplx> { return z * z; },
                       [](cplx z) -> std::optional<cplx> { return 2.0 * z; });
}

} // namespace henonlab
