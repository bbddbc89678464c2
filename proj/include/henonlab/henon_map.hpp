#pragma once

#include <complex>
#include <vector>

namespace henonlab {

using cplx = std::complex<double>;

/// A point (z, w) of C^2.
struct ComplexPoint2 {
    cplx z{};
    cplx w{};

    friend bool operator==(const ComplexPoint2 &, const ComplexPoint2 &) = default;
    bool finite() const;
};

ComplexPoint2 operator+(const ComplexPoint2 &p, const ComplexPoint2 &q);
ComplexPoint2 operator-(const ComplexPoint2 &p, const ComplexPoint2 &q);
ComplexPoint2 operator*(cplx s, const ComplexPoint2 &p);

/// Euclidean norm on C^2.
double norm(const ComplexPoint2 &p);

/// Result of one application of the map or its inverse. `escaped` is set when
/// the arithmetic overflowed; `point` is then meaningless.
struct Step {
    ComplexPoint2 point;
    bool escaped = false;
};

/// The quadratic Henon map f(z, w) = (z^2 + c + a w, z), a != 0.
class HenonMap {
public:
    HenonMap(cplx c, cplx a);

    cplx c() const { return c_; }
    cplx a() const { return a_; }
    int degree() const { return 2; }
    /// Filtration radius, see filtration_radius().
    double radius() const { return radius_; }
    bool dissipative() const { return std::abs(a_) < 1.0; }

    ComplexPoint2 forward(const ComplexPoint2 &p) const { return {p.z * p.z + c_ + a_ * p.w, p.z}; }
    ComplexPoint2 inverse(const ComplexPoint2 &q) const { return {q.w, (q.z - q.w * q.w - c_) / a_}; }

    /// V+_R = {|z| > max(|w|, R)}, forward invariant.
    bool in_escape_plus(const ComplexPoint2 &p) const
    {
        const double az = std::abs(p.z);
        return az > radius_ && az > std::abs(p.w);
    }
    /// V-_R = {|w| > max(|z|, R)}, backward invariant.
    bool in_escape_minus(const ComplexPoint2 &p) const
    {
        const double aw = std::abs(p.w);
        return aw > radius_ && aw > std::abs(p.z);
    }

private:
    cplx c_;
    cplx a_;
    double radius_;
};

Step eval_forward(const HenonMap &m, const ComplexPoint2 &p);
Step eval_inverse(const HenonMap &m, const ComplexPoint2 &q);

/// c* = (1 - a)^2 / 4: the fixed point multipliers are {1, -a}.
cplx semi_parabolic_parameter(cplx a);

/// Larger root of R^2 - (1 + |a|) R - |c| = 0, doubled, floored at 2.
double filtration_radius(cplx c, cplx a);

struct FixedPointInfo {
    ComplexPoint2 location;
    cplx multipliers[2];
    int multiplicity = 1;
    bool semi_parabolic = false;
};

/// Absolute tolerance on the multiplier for declaring a fixed point semi-parabolic.
inline constexpr double multiplier_tolerance = 1e-9;

std::vector<FixedPointInfo> fixed_points(const HenonMap &m);

/// Polynomial chart at the semi-parabolic fixed point.
///
/// The chart is built in two stages. The linear stage translates the fixed
/// point to the origin and diagonalises the differential, scaling the neutral
/// direction so that the map reads exactly
///
///     zeta' = zeta + (zeta + k b eta)^2,   eta' = b eta - (zeta + k b eta)^2 / k,
///
/// with k = 1 / (1 - b). The quadratic stage applies the shears
/// eta~ = eta + zeta^2 and zeta~ = zeta + s1 zeta eta~ + s2 eta~^2, which kill the
/// mixed quadratic terms; its inverse is exact.
class LocalChart {
public:
    /// (zeta, eta) of the linear stage.
    ComplexPoint2 to_linear(const ComplexPoint2 &p) const;
    ComplexPoint2 from_linear(const ComplexPoint2 &q) const;

    /// Quadratic stage alone, linear-stage coordinates in and out.
    ComplexPoint2 shear(const ComplexPoint2 &q) const;
    ComplexPoint2 unshear(const ComplexPoint2 &q) const;

    /// Full chart (linear stage then quadratic shears).
    ComplexPoint2 forward(const ComplexPoint2 &p) const;
    ComplexPoint2 inverse(const ComplexPoint2 &q) const;

    /// The map f written in linear-stage coordinates (exact conjugate of f).
    ComplexPoint2 linear_step(const ComplexPoint2 &q) const;
    /// Differential of linear_step applied to a tangent vector v at q.
    ComplexPoint2 linear_step_tangent(const ComplexPoint2 &q, const ComplexPoint2 &v) const;

    const ComplexPoint2 &fixed_point() const { return fixed_; }
    cplx neutral_multiplier() const { return one_; }
    cplx stable_multiplier() const { return b_; }
    /// 1 / (1 - b), the scale of the neutral coordinate.
    cplx neutral_scale() const { return k_; }
    cplx cubic_center_coefficient() const { return c3_; }
    cplx shear_mixed() const { return s1_; }
    cplx shear_square() const { return s2_; }

private:
    friend LocalChart local_chart(const HenonMap &m);

    HenonMap map_{0.0, 1.0};
    ComplexPoint2 fixed_;
    cplx one_;
    cplx b_;
    cplx k_;
    cplx s1_;
    cplx s2_;
    cplx c3_;
};

/// Throws std::domain_error when no fixed point has a multiplier within
/// multiplier_tolerance of 1.
LocalChart local_chart(const HenonMap &m);

/// Map whose neutral dynamics reads zeta + zeta^2 + eps^2 + ... in the chart of m.
/// eps must lie in [0, 0.5].
HenonMap perturbed_family(const HenonMap &m, double eps);

} // namespace henonlab
