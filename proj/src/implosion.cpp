#include "henonlab/implosion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "henonlab/parallel.hpp"

namespace henonlab {

double alpha_epsilon(double alpha, int n)
{
    if (!std::isfinite(alpha) || !(static_cast<double>(n) > alpha)) {
        throw std::invalid_argument("alpha_epsilon: requires n > alpha");
    }
    const double pi = std::numbers::pi;
    const double nd = n;
    const double eps = pi / (nd - alpha);
    // Not every n - alpha is hit by some double pi / e; fall back to the
    // candidate with the smallest residual.
    double best = eps;
    double best_residual = std::abs(nd - pi / eps - alpha);
    auto consider = [&](double e) {
        const double r = std::abs(nd - pi / e - alpha);
        if (e > 0.0 && r < best_residual) {
            best = e;
            best_residual = r;
        }
    };
    double up = eps;
    double down = eps;
    for (int k = 0; k < 64 && best_residual > 0.0; ++k) {
        up = std::nextafter(up, 1.0e300);
        consider(up);
        down = std::nextafter(down, 0.0);
        consider(down);
    }
    return best;
}

std::vector<AlphaSequenceItem> alpha_sequence(double alpha, int first, int last)
{
    std::vector<AlphaSequenceItem> out;
    for (int n = std::max(1, first); n <= last; ++n) {
        if (static_cast<double>(n) > alpha) {
            out.push_back({n, alpha_epsilon(alpha, n), alpha});
        }
    }
    return out;
}

LavaursResult lavaurs(const FatouEvaluator &ev, cplx alpha, const ComplexPoint2 &p)
{
    LavaursResult out;
    const auto phi = ev.incoming(p);
    if (!phi.ok()) {
        out.status = phi.status;
        return out;
    }
    const auto psi = ev.outgoing(phi.value + alpha);
    out.status = psi.status;
    out.point = psi.sigma.point;
    return out;
}

ImplosionReport implosion_error(const FatouEvaluator &ev, double alpha, int n,
                                const std::vector<ComplexPoint2> &samples, unsigned workers)
{
    ImplosionReport rep;
    rep.alpha = alpha;
    rep.n = n;
    rep.epsilon = alpha_epsilon(alpha, n);
    rep.alpha_offset = ev.anchor_offset();
    const HenonMap perturbed = perturbed_family(ev.map(), rep.epsilon);
    const double bound = perturbed.radius();
    rep.errors.assign(samples.size(), std::nullopt);
    parallel_for(samples.size(), workers, [&](std::size_t i) {
        const ComplexPoint2 &p = samples[i];
        if (!ev.in_basin(p)) {
            return;
        }
        const auto target = lavaurs(ev, alpha + rep.alpha_offset, p);
        if (!target.ok()) {
            return;
        }
        ComplexPoint2 x = p;
        for (int k = 0; k < n; ++k) {
            x = perturbed.forward(x);
            if (!x.finite() || std::abs(x.z) > bound || std::abs(x.w) > bound) {
                return;
            }
        }
        rep.errors[i] = norm(x - target.point);
    });
    std::vector<double> errs;
    for (const auto &e : rep.errors) {
        if (e) {
            errs.push_back(*e);
        }
    }
    rep.evaluated = static_cast<int>(errs.size());
    rep.excluded = static_cast<int>(samples.size()) - rep.evaluated;
    if (!errs.empty()) {
        std::sort(errs.begin(), errs.end());
        rep.max_error = errs.back();
        const std::size_t m = errs.size();
        rep.median_error = m % 2 == 1 ? errs[m / 2] : 0.5 * (errs[m / 2 - 1] + errs[m / 2]);
    }
    return rep;
}

std::vector<ComplexPoint2> basin_samples(const FatouEvaluator &ev, int count, std::uint64_t seed,
                                         const SampleBand &band)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> real_part(-1.5, 1.5);
    std::uniform_real_distribution<double> imag_part(-0.75, 0.75);
    const ComplexPoint2 centre = ev.chart().fixed_point();
    std::vector<ComplexPoint2> out;
    int attempts = 0;
    while (static_cast<int>(out.size()) < count && attempts < 1000 * std::max(count, 1)) {
        ++attempts;
        const double zr = real_part(rng);
        const double zi = imag_part(rng);
        const double wr = real_part(rng);
        const double wi = imag_part(rng);
        const ComplexPoint2 p = centre + ComplexPoint2{{zr, zi}, {wr, wi}};
        if (!ev.in_basin(p)) {
            continue;
        }
        const auto phi = ev.incoming_natural(p);
        if (!phi.ok()) {
            continue;
        }
        const double im = std::abs(phi.value.imag());
        if (im >= band.min_abs_imag && im <= band.max_abs && std::abs(phi.value.real()) <= band.max_abs) {
            out.push_back(p);
        }
    }
    return out;
}

} // namespace henonlab
