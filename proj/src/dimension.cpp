#include "henonlab/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "henonlab/parallel.hpp"

namespace henonlab {

void validate(const IFSSystem &s)
{
    if (s.branches.empty()) {
        throw std::invalid_argument("IFS system needs at least one branch");
    }
    for (const auto &b : s.branches) {
        if (b.derivative_samples.empty()) {
            throw std::invalid_argument("IFS branch without derivative samples");
        }
        for (const double d : b.derivative_samples) {
            if (!std::isfinite(d) || !(d > 1.0)) {
                throw std::invalid_argument("IFS derivative samples must be finite and > 1");
            }
        }
        if (b.return_time < 1) {
            throw std::invalid_argument("IFS return time must be >= 1");
        }
    }
}

double moran_root(const std::vector<double> &ratios)
{
    if (ratios.empty()) {
        throw std::invalid_argument("moran_root: no ratios");
    }
    for (const double r : ratios) {
        if (!(r > 0.0 && r < 1.0)) {
            throw std::invalid_argument("moran_root: contraction ratios must lie in (0, 1)");
        }
    }
    if (ratios.size() == 1) {
        return 0.0;
    }
    auto pressure = [&](double s) {
        double sum = 0.0;
        for (const double r : ratios) {
            sum += std::pow(r, s);
        }
        return sum - 1.0;
    };
    // pressure is decreasing, positive at 0; grow the bracket until it changes sign.
    double lo = 0.0;
    double hi = 2.0;
    while (pressure(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (pressure(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

BowenResult bowen_dimension(const IFSSystem &s)
{
    validate(s);
    std::vector<double> mean;
    std::vector<double> weakest;
    std::vector<double> strongest;
    for (const auto &b : s.branches) {
        double logs = 0.0;
        for (const double d : b.derivative_samples) {
            logs += std::log(d);
        }
        const auto [dmin, dmax] = std::minmax_element(b.derivative_samples.begin(), b.derivative_samples.end());
        mean.push_back(std::exp(-logs / static_cast<double>(b.derivative_samples.size())));
        weakest.push_back(1.0 / *dmin);
        strongest.push_back(1.0 / *dmax);
    }
    BowenResult out;
    out.dimension = moran_root(mean);
    out.lower = moran_root(strongest);
    out.upper = moran_root(weakest);
    out.lower = std::min(out.lower, out.dimension);
    out.upper = std::max(out.upper, out.dimension);
    return out;
}

double hyperbolic_lower_bound(const IFSSystem &s)
{
    validate(s);
    double c = 0.0;
    for (const auto &b : s.branches) {
        c = std::max(c, *std::max_element(b.derivative_samples.begin(), b.derivative_samples.end()));
    }
    return std::log(static_cast<double>(s.branches.size())) / std::log(c);
}

IFSSystem island_system(const LiftedMap &f, cplx z0, double r, const IslandSystemOptions &options)
{
    if (!(r > 0.0)) {
        throw std::invalid_argument("island_system: radius must be positive");
    }
    const Window window{z0.real() - r, z0.real() + r, z0.imag() - r, z0.imag() + r};
    constexpr int probe = 64;
    std::vector<double> shifts(probe * probe, std::numeric_limits<double>::quiet_NaN());
    parallel_for(shifts.size(), options.islands.workers, [&](std::size_t idx) {
        const cplx z = window.node(static_cast<int>(idx % probe), static_cast<int>(idx / probe), probe, probe);
        if (std::abs(z - z0) < r) {
            if (const auto v = f(z)) {
                shifts[idx] = v->real() - z0.real();
            }
        }
    });
    std::erase_if(shifts, [](double v) { return !std::isfinite(v); });
    IFSSystem sys;
    if (shifts.empty()) {
        return sys;
    }
    std::sort(shifts.begin(), shifts.end());
    int k0 = static_cast<int>(std::floor(shifts.front() - r));
    int k1 = static_cast<int>(std::ceil(shifts.back() + r));
    if (k1 - k0 + 1 > options.max_targets) {
        const int mid = static_cast<int>(std::lround(shifts[shifts.size() / 2]));
        k0 = mid - options.max_targets / 2;
        k1 = k0 + options.max_targets - 1;
    }
    std::mt19937_64 rng(options.seed);
    for (int k = k0; k <= k1; ++k) {
        const cplx target = z0 + static_cast<double>(k);
        for (auto &island : find_islands(f, target, r, window, options.islands)) {
            const bool inside = std::all_of(island.boundary.begin(), island.boundary.end(),
                                            [&](cplx b) { return std::abs(b - z0) < r; });
            if (!inside) {
                continue;
            }
            IFSBranch branch;
            bool ok = true;
            auto sample = [&](cplx z) {
                const auto j = f.jet(z);
                if (!j) {
                    ok = false;
                    return;
                }
                branch.derivative_samples.push_back(std::abs(j->derivative));
            };
            for (std::size_t i = 0; i < island.boundary.size(); i += 8) {
                sample(island.boundary[i]);
            }
            double x0 = island.boundary[0].real(), x1 = x0, y0 = island.boundary[0].imag(), y1 = y0;
            for (const cplx b : island.boundary) {
                x0 = std::min(x0, b.real());
                x1 = std::max(x1, b.real());
                y0 = std::min(y0, b.imag());
                y1 = std::max(y1, b.imag());
            }
            std::uniform_real_distribution<double> ux(x0, x1);
            std::uniform_real_distribution<double> uy(y0, y1);
            for (int got = 0, tries = 0; got < options.interior_samples && tries < 10000; ++tries) {
                const cplx z{ux(rng), uy(rng)};
                if (point_in_polygon(island.boundary, z)) {
                    sample(z);
                    ++got;
                }
            }
            ok = ok && std::all_of(branch.derivative_samples.begin(), branch.derivative_samples.end(),
                                   [](double d) { return d > 1.0; });
            if (ok) {
                branch.island = std::move(island);
                sys.branches.push_back(std::move(branch));
            }
        }
    }
    return sys;
}

IFSSystem uniform_system(int branches, double ratio)
{
    if (branches < 1 || !(ratio > 0.0 && ratio < 1.0)) {
        throw std::invalid_argument("uniform_system: need branches >= 1 and ratio in (0, 1)");
    }
    IFSSystem s;
    for (int i = 0; i < branches; ++i) {
        IFSBranch b;
        b.derivative_samples = {1.0 / ratio};
        s.branches.push_back(b);
    }
    return s;
}

PointCloud make_cloud(int dim, std::vector<double> coords)
{
    if (dim != 2 && dim != 4) {
        throw std::invalid_argument("make_cloud: dimension must be 2 or 4");
    }
    if (coords.empty() || coords.size() % static_cast<std::size_t>(dim) != 0) {
        throw std::invalid_argument("make_cloud: need a nonempty list of whole points");
    }
    PointCloud c;
    c.dim = dim;
    c.lower.assign(dim, std::numeric_limits<double>::infinity());
    c.upper.assign(dim, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < coords.size(); ++i) {
        const double v = coords[i];
        if (!std::isfinite(v)) {
            throw std::invalid_argument("make_cloud: coordinates must be finite");
        }
        const std::size_t d = i % dim;
        c.lower[d] = std::min(c.lower[d], v);
        c.upper[d] = std::max(c.upper[d], v);
    }
    c.coords = std::move(coords);
    return c;
}

PointCloud level_set_cloud(const FieldGrid &grid, double level)
{
    std::vector<double> coords;
    auto inside = [&](int i, int j) {
        const double v = grid.values[static_cast<std::size_t>(j) * grid.nx + i];
        return v < level;
    };
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            if (!inside(i, j)) {
                continue;
            }
            const bool edge = (i > 0 && !inside(i - 1, j)) || (i + 1 < grid.nx && !inside(i + 1, j))
                              || (j > 0 && !inside(i, j - 1)) || (j + 1 < grid.ny && !inside(i, j + 1));
            if (edge) {
                const cplx t = grid.window.node(i, j, grid.nx, grid.ny);
                coords.push_back(t.real());
                coords.push_back(t.imag());
            }
        }
    }
    if (coords.empty()) {
        throw std::invalid_argument("level_set_cloud: the level set does not cross the grid");
    }
    return make_cloud(2, std::move(coords));
}

BoxDimension box_dimension(const PointCloud &cloud, int scale_count, unsigned workers)
{
    if (scale_count < 4) {
        throw std::invalid_argument("box_dimension: scale_count must be >= 4");
    }
    if (cloud.size() < 100) {
        throw std::invalid_argument("box_dimension: need at least 100 points");
    }
    const int dim = cloud.dim;
    double side = 0.0;
    for (int d = 0; d < dim; ++d) {
        side = std::max(side, cloud.upper[d] - cloud.lower[d]);
    }
    if (side == 0.0) {
        side = 1.0;
    }
    constexpr int first = 3;
    // Counts are averaged over translations of the grid by (i + 1/2)/8 of a box
    // along the diagonal, which removes the dependence on where the grid is anchored.
    constexpr int shifts = 8;
    const int count = scale_count + 1;
    if ((first + scale_count + 1) * dim > 64) {
        throw std::invalid_argument("box_dimension: too many scales for the box index range");
    }
    BoxDimension out;
    out.scales.resize(count);
    out.counts.resize(count);
    std::vector<std::size_t> occupied(static_cast<std::size_t>(count) * shifts);
    parallel_for(occupied.size(), workers, [&](std::size_t task) {
        const int k = first + static_cast<int>(task / shifts);
        const double offset = (static_cast<double>(task % shifts) + 0.5) / shifts;
        const double scale = std::ldexp(1.0, k) / side;
        std::vector<std::uint64_t> keys(cloud.size());
        for (std::size_t p = 0; p < cloud.size(); ++p) {
            std::uint64_t key = 0;
            for (int d = 0; d < dim; ++d) {
                const double x = (cloud.coords[p * dim + d] - cloud.lower[d]) * scale + offset;
                key = (key << (k + 1)) | static_cast<std::uint64_t>(x);
            }
            keys[p] = key;
        }
        std::sort(keys.begin(), keys.end());
        occupied[task] = static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
    });
    for (int s = 0; s < count; ++s) {
        double sum = 0.0;
        for (int t = 0; t < shifts; ++t) {
            sum += static_cast<double>(occupied[static_cast<std::size_t>(s) * shifts + t]);
        }
        out.scales[s] = first + s;
        out.counts[s] = sum / shifts;
    }

    double mx = 0.0;
    double my = 0.0;
    for (int s = 0; s < count; ++s) {
        mx += out.scales[s] * std::numbers::ln2;
        my += std::log(out.counts[s]);
    }
    mx /= count;
    my /= count;
    double sxx = 0.0;
    double sxy = 0.0;
    for (int s = 0; s < count; ++s) {
        const double dx = out.scales[s] * std::numbers::ln2 - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(out.counts[s]) - my);
    }
    if (!(sxx > 0.0)) {
        throw std::invalid_argument("box_dimension: degenerate fit");
    }
    out.slope = sxy / sxx;
    double ss = 0.0;
    for (int s = 0; s < count; ++s) {
        const double x = out.scales[s] * std::numbers::ln2 - mx;
        const double r = std::log(out.counts[s]) - my - out.slope * x;
        ss += r * r;
    }
    out.standard_error = std::sqrt(ss / (count - 2) / sxx);
    return out;
}

namespace {

std::optional<cplx> iterate(const Family &h, cplx lambda, cplx z, int count)
{
    for (int i = 0; i < count; ++i) {
        const auto v = h(lambda, z);
        if (!v) {
            return std::nullopt;
        }
        z = *v;
    }
    return z;
}

// Periodic point of h_lambda near `guess` by Newton with a central difference.
std::optional<cplx> track(const Family &h, cplx lambda, cplx guess, const ShootOptions &opt)
{
    cplx z = guess;
    for (int it = 0; it < 100; ++it) {
        const auto v = iterate(h, lambda, z, opt.period);
        const auto vp = iterate(h, lambda, z + opt.z_step, opt.period);
        const auto vm = iterate(h, lambda, z - opt.z_step, opt.period);
        if (!v || !vp || !vm) {
            return std::nullopt;
        }
        const cplx g = *v - z;
        const cplx dg = (*vp - *vm) / (2.0 * opt.z_step) - 1.0;
        if (std::abs(g) < 1e-15 * std::max(1.0, std::abs(z))) {
            return z;
        }
        if (dg == cplx(0.0)) {
            return std::nullopt;
        }
        const cplx step = g / dg;
        z -= step;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) {
            return z;
        }
    }
    const auto v = iterate(h, lambda, z, opt.period);
    return v && std::abs(*v - z) < 1e-12 * std::max(1.0, std::abs(z)) ? std::optional<cplx>(z) : std::nullopt;
}

struct Relation {
    cplx value;
    cplx target;
};

std::optional<Relation> relation(const Family &h, cplx lambda, cplx critical, int n, cplx guess,
                                 const ShootOptions &opt)
{
    const auto a = track(h, lambda, guess, opt);
    if (!a) {
        return std::nullopt;
    }
    const auto orbit = iterate(h, lambda, critical, n + 1);
    if (!orbit) {
        return std::nullopt;
    }
    return Relation{*orbit - *a, *a};
}

} // namespace

ShootResult misiurewicz_shoot(const Family &family, cplx lambda0, cplx critical_point, int n, cplx target_guess,
                              const ShootOptions &options)
{
    if (n < 0 || options.period < 1) {
        throw std::invalid_argument("misiurewicz_shoot: need n >= 0 and period >= 1");
    }
    ShootResult out;
    cplx lambda = lambda0;
    cplx guess = target_guess;
    out.trace.push_back(lambda);
    for (int it = 0; it <= options.max_iter; ++it) {
        const auto r = relation(family, lambda, critical_point, n, guess, options);
        if (!r) {
            out.parameter = lambda;
            out.message = "periodic point tracking or orbit evaluation failed";
            return out;
        }
        guess = r->target;
        out.parameter = lambda;
        out.target = r->target;
        out.residual = std::abs(r->value);
        if (out.residual < options.tolerance) {
            out.converged = true;
            return out;
        }
        if (it == options.max_iter) {
            break;
        }
        const double h = options.lambda_step;
        const auto rp = relation(family, lambda + h, critical_point, n, guess, options);
        const auto rm = relation(family, lambda - h, critical_point, n, guess, options);
        if (!rp || !rm) {
            out.message = "derivative evaluation failed";
            return out;
        }
        const cplx slope = (rp->value - rm->value) / (2.0 * h);
        if (slope == cplx(0.0) || !std::isfinite(std::abs(slope))) {
            out.message = "zero derivative in lambda";
            return out;
        }
        lambda -= r->value / slope;
        out.trace.push_back(lambda);
    }
    out.message = "no convergence within max_iter";
    return out;
}

Family horn_family(const HornMap &horn)
{
    return [&horn](cplx lambda, cplx zeta) -> std::optional<cplx> {
        if (!std::isfinite(std::abs(zeta)) || zeta == cplx(0.0)) {
            return std::nullopt;
        }
        const auto r = horn.evaluate(*CylinderPoint::from_zeta(zeta).lift);
        if (!r.ok()) {
            return std::nullopt;
        }
        return lambda * cylinder_coordinate(r.value);
    };
}

Family quadratic_family()
{
    return [](cplx c, cplx z) -> std::optional<cplx> { return z * z + c; };
}

} // namespace henonlab
