#include "henonlab/fatou.hpp"

#include <cmath>
#include <stdexcept>

namespace henonlab {

using series::Series;

const char *to_string(FatouStatus s)
{
    switch (s) {
    case FatouStatus::ok:
        return "ok";
    case FatouStatus::out_of_domain:
        return "out_of_domain";
    case FatouStatus::not_converged:
        return "not_converged";
    }
    return "unknown";
}

namespace {

// Neutral curve eta = H(zeta) of the ideal local form
//   zeta' = zeta + (zeta + k b eta)^2,  eta' = b eta - (zeta + k b eta)^2 / k,
// solved order by order from H(g(zeta)) = b H(zeta) - (zeta + k b H)^2 / k.
Series solve_neutral_curve(cplx b, cplx k, std::size_t order)
{
    const std::size_t n = order + 1;
    Series h(n, 0.0);
    auto restricted = [&](const Series &hh) {
        Series lin(n, 0.0);
        lin[1] = 1.0;
        const Series inner = series::add(lin, series::scale(hh, k * b));
        return series::add(lin, series::mul(inner, inner));
    };
    for (std::size_t j = 2; j < n; ++j) {
        const Series g = restricted(h);
        Series lin(n, 0.0);
        lin[1] = 1.0;
        const Series inner = series::add(lin, series::scale(h, k * b));
        Series residual = series::compose(h, g);
        residual = series::add(residual, series::scale(h, -b));
        residual = series::add(residual, series::scale(series::mul(inner, inner), 1.0 / k));
        h[j] = -residual[j] / (1.0 - b);
    }
    return h;
}

Series restricted_map(const Series &h, cplx b, cplx k)
{
    const std::size_t n = h.size();
    Series lin(n, 0.0);
    lin[1] = 1.0;
    const Series inner = series::add(lin, series::scale(h, k * b));
    return series::add(lin, series::mul(inner, inner));
}

cplx derivative(const Series &a, cplx t)
{
    cplx acc = 0.0;
    for (std::size_t i = a.size(); i-- > 1;) {
        acc = acc * t + static_cast<double>(i) * a[i];
    }
    return acc;
}

} // namespace

FatouEvaluator::FatouEvaluator(const HenonMap &m, FatouOptions options)
    : map_(m), options_(options), chart_(local_chart(m))
{
    if (!(options_.tolerance > 0.0)) {
        throw std::invalid_argument("FatouEvaluator: tolerance must be positive");
    }
    if (options_.max_iter < 1) {
        throw std::invalid_argument("FatouEvaluator: max_iter must be positive");
    }
    if (!(options_.stop_radius > 0.0 && options_.stop_radius <= options_.petal_radius)) {
        throw std::invalid_argument("FatouEvaluator: need 0 < stop_radius <= petal_radius");
    }
    if (options_.expansion_order < 0 || options_.expansion_order > 30) {
        throw std::invalid_argument("FatouEvaluator: expansion_order must lie in [0, 30]");
    }
    if (options_.outgoing_margin < 1) {
        throw std::invalid_argument("FatouEvaluator: outgoing_margin must be positive");
    }

    const cplx b = chart_.stable_multiplier();
    const cplx k = chart_.neutral_scale();
    const int order = options_.expansion_order;
    curve_ = solve_neutral_curve(b, k, static_cast<std::size_t>(order) + 6);

    // On the curve, u = -1/zeta maps to u' = u r(t) with t = 1/u and
    // r(t) = 1 / (1 + q(-t)), q(zeta) = g(zeta)/zeta - 1.
    const std::size_t len = static_cast<std::size_t>(order) + 3;
    const Series g = restricted_map(curve_, b, k);
    Series q_t(len, 0.0);
    for (std::size_t i = 0; i < len && i + 1 < g.size(); ++i) {
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        q_t[i] = sign * g[i + 1];
    }
    q_t[0] = 1.0;
    const Series r = series::reciprocal(q_t);
    beta_ = r[2];

    // u' - u - 1 = E(t), and Phi(u') - Phi(u) = 1 reads
    //   E(t) - beta log r(t) + sum_j s_j t^j (r^-j - 1) = 0.
    Series e(len, 0.0);
    for (std::size_t j = 1; j + 1 < len; ++j) {
        e[j] = r[j + 1];
    }
    const Series base = series::add(e, series::scale(series::log1(r), -beta_));
    expansion_.assign(static_cast<std::size_t>(order) + 1, 0.0);
    Series acc = base;
    for (int j = 1; j <= order; ++j) {
        // Coefficient of t^(j+1) fixes s_j.
        const cplx sj = acc[static_cast<std::size_t>(j) + 1] / static_cast<double>(j);
        expansion_[static_cast<std::size_t>(j)] = sj;
        Series term = series::power(r, -j);
        term[0] -= 1.0;
        Series shifted(len, 0.0);
        for (std::size_t i = 0; i + static_cast<std::size_t>(j) < len; ++i) {
            shifted[i + static_cast<std::size_t>(j)] = term[i];
        }
        acc = series::add(acc, series::scale(shifted, sj));
    }

    anchor_ = options_.anchor.value_or(chart_.inverse({-0.05, 0.0}));
    const auto a = incoming_linear(chart_.to_linear(anchor_), nullptr, true);
    if (!a.ok()) {
        throw std::domain_error("FatouEvaluator: anchor is not in the parabolic basin");
    }
    anchor_offset_ = a.value;
}

cplx FatouEvaluator::incoming_expansion(cplx u) const
{
    const cplx t = 1.0 / u;
    return u - beta_ * std::log(u) + t * series::evaluate(Series(expansion_.begin() + 1, expansion_.end()), t);
}

cplx FatouEvaluator::outgoing_expansion(cplx u) const
{
    const cplx t = 1.0 / u;
    return u - beta_ * std::log(-u) + t * series::evaluate(Series(expansion_.begin() + 1, expansion_.end()), t);
}

namespace {

// d Phi / du, identical for both branches.
cplx expansion_slope(const Series &s, cplx beta, cplx u)
{
    const cplx t = 1.0 / u;
    cplx acc = 0.0;
    for (std::size_t j = s.size(); j-- > 1;) {
        acc = acc * t + static_cast<double>(j) * s[j];
    }
    // sum_j j s_j t^(j+1) = t^2 * acc evaluated with the Horner above
    return 1.0 - beta * t - t * t * acc;
}

} // namespace

IncomingResult FatouEvaluator::incoming_linear(const ComplexPoint2 &start, const ComplexPoint2 *tangent,
                                               bool natural) const
{
    IncomingResult out;
    ComplexPoint2 q = start;
    ComplexPoint2 t = tangent != nullptr ? *tangent : ComplexPoint2{};
    const double rho = options_.petal_radius;
    bool entered = false;
    bool have_prev = false;
    cplx prev{};
    for (int n = 0; n <= options_.max_iter; ++n) {
        if (!q.finite() || map_.in_escape_plus(chart_.from_linear(q))) {
            out.status = FatouStatus::out_of_domain;
            out.iterations = n;
            return out;
        }
        const cplx zeta = options_.neutral == NeutralCoordinate::linear ? q.z : chart_.shear(q).z;
        const bool in_petal = std::abs(q.z) < rho && std::abs(q.w) < rho && zeta != cplx(0.0)
                              && std::real(-1.0 / zeta) > 1.0 / rho;
        entered = entered || in_petal;
        if (in_petal && std::abs(zeta) <= options_.stop_radius) {
            const cplx u = -1.0 / zeta;
            const cplx value = incoming_expansion(u) - static_cast<double>(n);
            if (have_prev) {
                out.residual = std::abs(value - prev);
                const bool on_curve
                    = std::abs(q.w - series::evaluate(curve_, q.z)) <= 1e-14 * std::abs(q.z);
                if (out.residual < options_.tolerance && on_curve) {
                    out.value = natural ? value : value - anchor_offset_;
                    out.iterations = n;
                    if (tangent != nullptr) {
                        out.derivative = expansion_slope(expansion_, beta_, u) * u * u * t.z;
                    }
                    return out;
                }
            }
            prev = value;
            have_prev = true;
        } else {
            have_prev = false;
        }
        if (tangent != nullptr) {
            t = chart_.linear_step_tangent(q, t);
        }
        q = chart_.linear_step(q);
    }
    out.status = entered ? FatouStatus::not_converged : FatouStatus::out_of_domain;
    out.iterations = options_.max_iter;
    return out;
}

bool FatouEvaluator::in_basin(const ComplexPoint2 &p) const { return in_basin(p, options_.max_iter); }

bool FatouEvaluator::in_basin(const ComplexPoint2 &p, int max_iter) const
{
    constexpr int confirm_steps = 64;
    const double rho = options_.petal_radius;
    ComplexPoint2 q = chart_.to_linear(p);
    auto in_petal = [&](const ComplexPoint2 &x) {
        return std::abs(x.z) < rho && std::abs(x.w) < rho && x.z != cplx(0.0) && std::real(-1.0 / x.z) > 1.0 / rho;
    };
    for (int n = 0; n <= max_iter; ++n) {
        if (!q.finite() || map_.in_escape_plus(chart_.from_linear(q))) {
            return false;
        }
        if (in_petal(q)) {
            const double entry = std::abs(q.z);
            ComplexPoint2 x = q;
            bool stays = true;
            for (int i = 0; i < confirm_steps && stays; ++i) {
                x = chart_.linear_step(x);
                stays = in_petal(x);
            }
            if (stays && std::abs(x.z) < entry) {
                return true;
            }
        }
        q = chart_.linear_step(q);
    }
    return false;
}

IncomingResult FatouEvaluator::incoming(const ComplexPoint2 &p) const
{
    return incoming_linear(chart_.to_linear(p), nullptr, false);
}

IncomingResult FatouEvaluator::incoming(const ComplexPoint2 &p, const ComplexPoint2 &v) const
{
    // The linear stage is affine: tangents transform by its linear part.
    const ComplexPoint2 lt = chart_.to_linear(chart_.fixed_point() + v);
    return incoming_linear(chart_.to_linear(p), &lt, false);
}

IncomingResult FatouEvaluator::incoming_natural(const ComplexPoint2 &p) const
{
    return incoming_linear(chart_.to_linear(p), nullptr, true);
}

FatouEvaluator::LinearOutgoing FatouEvaluator::push_seed(cplx w, int pushes) const
{
    LinearOutgoing out;
    const cplx u = w - static_cast<double>(pushes);
    // Invert the outgoing expansion: U = u + beta log(-U) - S(1/U).
    const Series tail(expansion_.begin() + 1, expansion_.end());
    cplx big_u = u;
    for (int i = 0; i < 100; ++i) {
        const cplx t = 1.0 / big_u;
        const cplx next = u + beta_ * std::log(-big_u) - t * series::evaluate(tail, t);
        const bool done = std::abs(next - big_u) <= 1e-15 * std::abs(big_u);
        big_u = next;
        if (done) {
            break;
        }
    }
    const cplx zeta = -1.0 / big_u;
    const cplx dzeta = 1.0 / (expansion_slope(expansion_, beta_, big_u) * big_u * big_u);
    ComplexPoint2 q{zeta, series::evaluate(curve_, zeta)};
    ComplexPoint2 dq{dzeta, derivative(curve_, zeta) * dzeta};
    for (int i = 0; i < pushes; ++i) {
        dq = chart_.linear_step_tangent(q, dq);
        q = chart_.linear_step(q);
        if (!q.finite()) {
            out.status = FatouStatus::not_converged;
            out.iterations = i + 1;
            return out;
        }
    }
    out.q = q;
    out.dq = dq;
    out.iterations = pushes;
    return out;
}

FatouEvaluator::LinearOutgoing FatouEvaluator::outgoing_linear(cplx w) const
{
    constexpr int step = 10;
    constexpr int max_extra = 200;
    constexpr double max_pushes = 1e6;
    if (!(std::abs(w.real()) < max_pushes) || !std::isfinite(w.imag())) {
        LinearOutgoing out;
        out.status = FatouStatus::not_converged;
        return out;
    }
    const int first = std::max(0, static_cast<int>(std::ceil(w.real() + options_.outgoing_margin)));
    LinearOutgoing prev = push_seed(w, first);
    if (!prev.q.finite() || prev.status != FatouStatus::ok) {
        prev.status = FatouStatus::not_converged;
        return prev;
    }
    for (int n = first + step; n <= first + max_extra; n += step) {
        LinearOutgoing cur = push_seed(w, n);
        if (cur.status != FatouStatus::ok) {
            return cur;
        }
        const ComplexPoint2 pa = chart_.from_linear(cur.q);
        const ComplexPoint2 pb = chart_.from_linear(prev.q);
        cur.residual = norm(pa - pb);
        if (cur.residual < options_.tolerance * std::max(1.0, norm(pa))) {
            return cur;
        }
        prev = cur;
    }
    prev.status = FatouStatus::not_converged;
    return prev;
}

namespace {

ComplexPoint2 tangent_to_original(const LocalChart &chart, const ComplexPoint2 &dq)
{
    return chart.from_linear(dq) - chart.fixed_point();
}

} // namespace

OutgoingResult FatouEvaluator::outgoing(cplx w) const
{
    const auto lin = outgoing_linear(w);
    OutgoingResult out;
    out.status = lin.status;
    out.iterations = lin.iterations;
    out.residual = lin.residual;
    out.sigma = {w, chart_.from_linear(lin.q)};
    out.derivative = tangent_to_original(chart_, lin.dq);
    return out;
}

OutgoingResult FatouEvaluator::outgoing_fixed(cplx w, int pushes) const
{
    if (pushes < 0) {
        throw std::invalid_argument("outgoing_fixed: pushes must be >= 0");
    }
    const auto lin = push_seed(w, pushes);
    OutgoingResult out;
    out.status = lin.status;
    out.iterations = lin.iterations;
    out.sigma = {w, chart_.from_linear(lin.q)};
    out.derivative = tangent_to_original(chart_, lin.dq);
    return out;
}

bool in_basin(const HenonMap &m, const ComplexPoint2 &p, int max_iter)
{
    FatouOptions opt;
    opt.max_iter = max_iter;
    return FatouEvaluator(m, opt).in_basin(p, max_iter);
}

} // namespace henonlab
