#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace henonlab::series {

using cplx = std::complex<double>;

// Truncated power series: coefficient i multiplies t^i, all products are
// truncated to the length of the left operand.
using Series = std::vector<cplx>;

Series mul(const Series &a, const Series &b);
Series add(const Series &a, const Series &b);
Series scale(const Series &a, cplx s);

// 1 / a, requires a[0] != 0.
Series reciprocal(const Series &a);

// log(a), requires a[0] == 1.
Series log1(const Series &a);

// a^n for integer n (negative allowed when a[0] != 0).
Series power(const Series &a, int n);

// outer(inner(t)), requires inner[0] == 0.
Series compose(const Series &outer, const Series &inner);

// Horner evaluation.
cplx evaluate(const Series &a, cplx t);

} // namespace henonlab::series
