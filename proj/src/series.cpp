#include "henonlab/series.hpp"

#include <stdexcept>

namespace henonlab::series {

Series mul(const Series &a, const Series &b)
{
    const std::size_t n = a.size();
    Series out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == cplx(0.0)) {
            continue;
        }
        for (std::size_t j = 0; i + j < n && j < b.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

Series add(const Series &a, const Series &b)
{
    Series out = a;
    for (std::size_t i = 0; i < out.size() && i < b.size(); ++i) {
        out[i] += b[i];
    }
    return out;
}

Series scale(const Series &a, cplx s)
{
    Series out = a;
    for (auto &x : out) {
        x *= s;
    }
    return out;
}

Series reciprocal(const Series &a)
{
    if (a.empty() || a[0] == cplx(0.0)) {
        throw std::domain_error("series::reciprocal: zero constant term");
    }
    const std::size_t n = a.size();
    Series out(n, 0.0);
    out[0] = 1.0 / a[0];
    for (std::size_t i = 1; i < n; ++i) {
        cplx acc = 0.0;
        for (std::size_t j = 1; j <= i; ++j) {
            acc += a[j] * out[i - j];
        }
        out[i] = -acc / a[0];
    }
    return out;
}

Series log1(const Series &a)
{
    if (a.empty() || a[0] != cplx(1.0)) {
        throw std::domain_error("series::log1: constant term must be 1");
    }
    // (log a)' = a' / a
    const std::size_t n = a.size();
    Series da(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        da[i - 1] = static_cast<double>(i) * a[i];
    }
    const Series q = mul(da, reciprocal(a));
    Series out(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        out[i] = q[i - 1] / static_cast<double>(i);
    }
    return out;
}

Series power(const Series &a, int n)
{
    Series base = n < 0 ? reciprocal(a) : a;
    unsigned e = n < 0 ? static_cast<unsigned>(-n) : static_cast<unsigned>(n);
    Series out(a.size(), 0.0);
    if (!out.empty()) {
        out[0] = 1.0;
    }
    while (e != 0) {
        if (e & 1U) {
            out = mul(out, base);
        }
        e >>= 1U;
        if (e != 0) {
            base = mul(base, base);
        }
    }
    return out;
}

Series compose(const Series &outer, const Series &inner)
{
    if (!inner.empty() && inner[0] != cplx(0.0)) {
        throw std::domain_error("series::compose: inner series must vanish at 0");
    }
    const std::size_t n = inner.size();
    Series out(n, 0.0);
    // Horner in the series ring.
    for (std::size_t i = outer.size(); i-- > 0;) {
        out = mul(out, inner);
        if (!out.empty()) {
            out[0] += outer[i];
        }
    }
    return out;
}

cplx evaluate(const Series &a, cplx t)
{
    cplx acc = 0.0;
    for (std::size_t i = a.size(); i-- > 0;) {
        acc = acc * t + a[i];
    }
    return acc;
}

} // namespace henonlab::series
