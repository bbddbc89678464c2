#pragma once

#include <random>
#include <vector>

#include "henonlab/fatou.hpp"

namespace henonlab::testing {

inline HenonMap semi_parabolic_map(double a = 0.5) { return HenonMap(semi_parabolic_parameter(a), a); }

/// Random points of the parabolic basin within `spread` of the fixed point in each coordinate.
inline std::vector<ComplexPoint2> random_basin_points(const FatouEvaluator &ev, int count, std::uint64_t seed,
                                                      double spread = 0.5)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-spread, spread);
    const ComplexPoint2 o = ev.chart().fixed_point();
    std::vector<ComplexPoint2> out;
    while (static_cast<int>(out.size()) < count) {
        const double zr = u(rng);
        const double zi = u(rng);
        const double wr = u(rng);
        const double wi = u(rng);
        const ComplexPoint2 p{o.z + cplx(zr, zi), o.w + cplx(wr, wi)};
        if (ev.in_basin(p)) {
            out.push_back(p);
        }
    }
    return out;
}

inline double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace henonlab::testing
