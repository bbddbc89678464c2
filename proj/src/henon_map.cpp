#include "henonlab/henon_map.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace henonlab {

bool ComplexPoint2::finite() const
{
    return std::isfinite(z.real()) && std::isfinite(z.imag()) && std::isfinite(w.real())
           && std::isfinite(w.imag());
}

ComplexPoint2 operator+(const ComplexPoint2 &p, const ComplexPoint2 &q) { return {p.z + q.z, p.w + q.w}; }
ComplexPoint2 operator-(const ComplexPoint2 &p, const ComplexPoint2 &q) { return {p.z - q.z, p.w - q.w}; }
ComplexPoint2 operator*(cplx s, const ComplexPoint2 &p) { return {s * p.z, s * p.w}; }

double norm(const ComplexPoint2 &p) { return std::hypot(std::abs(p.z), std::abs(p.w)); }

HenonMap::HenonMap(cplx c, cplx a) : c_(c), a_(a)
{
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()) || !std::isfinite(a.real())
        || !std::isfinite(a.imag())) {
        throw std::invalid_argument("Henon map parameters must be finite");
    }
    if (a == cplx(0.0)) {
        throw std::invalid_argument("Henon map requires a != 0");
    }
    radius_ = filtration_radius(c, a);
}

Step eval_forward(const HenonMap &m, const ComplexPoint2 &p)
{
    const auto q = m.forward(p);
    return {q, !q.finite()};
}

Step eval_inverse(const HenonMap &m, const ComplexPoint2 &q)
{
    const auto p = m.inverse(q);
    return {p, !p.finite()};
}

cplx semi_parabolic_parameter(cplx a)
{
    const double r = std::abs(a);
    if (r == 0.0) {
        throw std::invalid_argument("semi_parabolic_parameter: a must be nonzero");
    }
    if (r >= 1.0) {
        throw std::invalid_argument("semi_parabolic_parameter: |a| must be < 1 (dissipative)");
    }
    const cplx t = 1.0 - a;
    return t * t / 4.0;
}

double filtration_radius(cplx c, cplx a)
{
    const double p = 1.0 + std::abs(a);
    const double root = 0.5 * (p + std::sqrt(p * p + 4.0 * std::abs(c)));
    return std::max(2.0, 2.0 * root);
}

namespace {

// Roots of lambda^2 - 2x lambda - a = 0, the neutral-most one first.
void multipliers_at(cplx x, cplx a, cplx out[2])
{
    const cplx s = std::sqrt(x * x + a);
    out[0] = x + s;
    out[1] = x - s;
    if (std::abs(out[1] - 1.0) < std::abs(out[0] - 1.0)) {
        std::swap(out[0], out[1]);
    }
}

bool is_semi_parabolic(const cplx mult[2])
{
    return std::abs(mult[0] - 1.0) <= multiplier_tolerance && std::abs(mult[1]) < 1.0;
}

} // namespace

std::vector<FixedPointInfo> fixed_points(const HenonMap &m)
{
    // x^2 + (a - 1) x + c = 0
    const cplx p = m.a() - 1.0;
    const cplx disc = p * p - 4.0 * m.c();
    std::vector<FixedPointInfo> out;
    const double scale = std::max({1.0, std::norm(p), 4.0 * std::abs(m.c())});
    if (std::abs(disc) <= 1e-14 * scale) {
        FixedPointInfo info;
        const cplx x = -p / 2.0;
        info.location = {x, x};
        info.multiplicity = 2;
        multipliers_at(x, m.a(), info.multipliers);
        info.semi_parabolic = is_semi_parabolic(info.multipliers);
        out.push_back(info);
        return out;
    }
    const cplx s = std::sqrt(disc);
    // Stable quadratic roots.
    const cplx q = -0.5 * (p + (std::real(std::conj(p) * s) >= 0.0 ? s : -s));
    cplx roots[2] = {q, m.c() / q};
    if (q == cplx(0.0)) {
        roots[1] = -p;
    }
    for (const cplx x : roots) {
        FixedPointInfo info;
        info.location = {x, x};
        multipliers_at(x, m.a(), info.multipliers);
        info.semi_parabolic = is_semi_parabolic(info.multipliers);
        out.push_back(info);
    }
    std::sort(out.begin(), out.end(), [](const FixedPointInfo &l, const FixedPointInfo &r) {
        if (l.location.z.real() != r.location.z.real()) {
            return l.location.z.real() < r.location.z.real();
        }
        return l.location.z.imag() < r.location.z.imag();
    });
    return out;
}

ComplexPoint2 LocalChart::to_linear(const ComplexPoint2 &p) const
{
    const cplx u = p.z - fixed_.z;
    const cplx v = p.w - fixed_.w;
    const cplx y = (u - v) / (b_ - 1.0);
    const cplx x = v - y;
    return {x * k_, y};
}

ComplexPoint2 LocalChart::from_linear(const ComplexPoint2 &q) const
{
    const cplx x = q.z / k_;
    const cplx y = q.w;
    return {fixed_.z + x + b_ * y, fixed_.w + x + y};
}

namespace {

struct Shears {
    cplx s1;
    cplx s2;

    ComplexPoint2 forward(const ComplexPoint2 &q) const
    {
        const cplx et = q.w + q.z * q.z;
        return {q.z + s1 * q.z * et + s2 * et * et, et};
    }
    ComplexPoint2 inverse(const ComplexPoint2 &q) const
    {
        const cplx et = q.w;
        const cplx zeta = (q.z - s2 * et * et) / (1.0 + s1 * et);
        return {zeta, et - zeta * zeta};
    }
};

} // namespace

ComplexPoint2 LocalChart::shear(const ComplexPoint2 &q) const { return Shears{s1_, s2_}.forward(q); }

ComplexPoint2 LocalChart::unshear(const ComplexPoint2 &q) const { return Shears{s1_, s2_}.inverse(q); }

ComplexPoint2 LocalChart::forward(const ComplexPoint2 &p) const { return shear(to_linear(p)); }

ComplexPoint2 LocalChart::inverse(const ComplexPoint2 &q) const { return from_linear(unshear(q)); }

ComplexPoint2 LocalChart::linear_step(const ComplexPoint2 &q) const
{
    // Translated coordinates (u, v) = p - fixed point, where
    // u' = delta + 2 x0 u + a v + u^2 and v' = u.
    const cplx x0 = fixed_.z;
    const cplx a = map_.a();
    const cplx delta = x0 * x0 + map_.c() + a * x0 - x0;
    const cplx x = q.z / k_;
    const cplx u = x + b_ * q.w;
    const cplx v = x + q.w;
    const cplx un = delta + 2.0 * x0 * u + a * v + u * u;
    const cplx vn = u;
    const cplx y = (un - vn) / (b_ - 1.0);
    return {(vn - y) * k_, y};
}

ComplexPoint2 LocalChart::linear_step_tangent(const ComplexPoint2 &q, const ComplexPoint2 &t) const
{
    const cplx x0 = fixed_.z;
    const cplx a = map_.a();
    const cplx x = q.z / k_;
    const cplx u = x + b_ * q.w;
    const cplx dx = t.z / k_;
    const cplx du = dx + b_ * t.w;
    const cplx dv = dx + t.w;
    const cplx dun = (2.0 * x0 + 2.0 * u) * du + a * dv;
    const cplx dvn = du;
    const cplx dy = (dun - dvn) / (b_ - 1.0);
    return {(dvn - dy) * k_, dy};
}

LocalChart local_chart(const HenonMap &m)
{
    const auto fps = fixed_points(m);
    const FixedPointInfo *best = nullptr;
    for (const auto &fp : fps) {
        if (std::abs(fp.multipliers[0] - 1.0) <= multiplier_tolerance
            && (best == nullptr
                || std::abs(fp.multipliers[0] - 1.0) < std::abs(best->multipliers[0] - 1.0))) {
            best = &fp;
        }
    }
    if (best == nullptr) {
        throw std::domain_error("local_chart: no fixed point with a multiplier within tolerance of 1");
    }

    LocalChart ch;
    ch.map_ = m;
    ch.fixed_ = best->location;
    ch.one_ = best->multipliers[0];
    ch.b_ = best->multipliers[1];
    if (std::abs(ch.b_) >= 1.0) {
        throw std::domain_error("local_chart: the second multiplier must be attracting");
    }
    ch.k_ = 1.0 / (1.0 - ch.b_);

    const cplx b = ch.b_;
    const cplx k = ch.k_;
    // Shears removing zeta*eta~ and eta~^2 from the neutral component.
    ch.s1_ = 2.0 * k * k * b;
    ch.s2_ = k * k * b * b / (1.0 - b * b);

    // Cubic coefficient of the conjugated map restricted to the neutral axis
    // (eta~ = 0), by a Cauchy integral on a small circle.
    const Shears sh{ch.s1_, ch.s2_};
    constexpr int nodes = 32;
    constexpr double r = 1e-2;
    cplx acc = 0.0;
    for (int j = 0; j < nodes; ++j) {
        const double th = 2.0 * std::numbers::pi * j / nodes;
        const cplx s = std::polar(r, th);
        const auto img = sh.forward(ch.linear_step(sh.inverse({s, 0.0})));
        acc += img.z * std::polar(1.0, -3.0 * th);
    }
    ch.c3_ = acc / (nodes * r * r * r);
    return ch;
}

HenonMap perturbed_family(const HenonMap &m, double eps)
{
    if (!(eps >= 0.0 && eps <= 0.5)) {
        throw std::invalid_argument("perturbed_family: eps must lie in [0, 0.5]");
    }
    if (eps == 0.0) {
        return m;
    }
    const auto ch = local_chart(m);
    // A shift dc of c moves the neutral coordinate by k^2 dc.
    const cplx kappa = ch.neutral_scale() * ch.neutral_scale();
    return HenonMap(m.c() + eps * eps / kappa, m.a());
}

} // namespace henonlab
