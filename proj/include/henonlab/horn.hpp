#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "henonlab/contour.hpp"
#include "henonlab/fatou.hpp"

namespace henonlab {

struct Jet {
    cplx value{};
    cplx derivative{};
};

/// A holomorphic map of (part of) C, undefined outside its domain.
class LiftedMap {
public:
    virtual ~LiftedMap() = default;
    virtual std::optional<cplx> operator()(cplx z) const = 0;
    /// Value and first derivative. The default differentiates by a Cauchy integral.
    virtual std::optional<Jet> jet(cplx z) const;
};

/// LiftedMap from plain functions; `derivative` may be empty.
class FunctionMap : public LiftedMap {
public:
    using Fn = std::function<std::optional<cplx>(cplx)>;

    explicit FunctionMap(Fn value, Fn derivative = {}) : value_(std::move(value)), derivative_(std::move(derivative)) {}

    std::optional<cplx> operator()(cplx z) const override { return value_(z); }
    std::optional<Jet> jet(cplx z) const override;

private:
    Fn value_;
    Fn derivative_;
};

struct HornResult {
    cplx value{};
    cplx derivative{};
    FatouStatus status = FatouStatus::ok;

    bool ok() const { return status == FatouStatus::ok; }
};

/// The lifted horn map H(z) = phi(psi(z)) of a semi-parabolic Henon map:
/// the outgoing parametrization followed by the incoming coordinate.
/// H(z + 1) = H(z) + 1. Points z whose psi(z) is not in the parabolic basin are
/// reported as out_of_domain.
class HornMap : public LiftedMap {
public:
    explicit HornMap(FatouEvaluator ev) : ev_(std::move(ev)) {}

    const FatouEvaluator &evaluator() const { return ev_; }

    HornResult evaluate(cplx z) const;
    /// Value and derivative, the latter by tangent propagation through both maps.
    HornResult evaluate_jet(cplx z) const;

    std::optional<cplx> operator()(cplx z) const override;
    std::optional<Jet> jet(cplx z) const override;

private:
    FatouEvaluator ev_;
};

/// A point of the cylinder C* together with its two ends 0 and infinity.
struct CylinderPoint {
    enum class Kind { finite, zero, infinity };

    Kind kind = Kind::finite;
    cplx zeta{};
    std::optional<cplx> lift;

    static CylinderPoint zero() { return {Kind::zero, 0.0, std::nullopt}; }
    static CylinderPoint infinity() { return {Kind::infinity, 0.0, std::nullopt}; }
    /// zeta = exp(2 pi i z), kept with its lift.
    static CylinderPoint from_lift(cplx z);
    /// Throws std::invalid_argument for zeta = 0 or non-finite zeta (use the symbols).
    static CylinderPoint from_zeta(cplx zeta);
};

/// exp(2 pi i z), computed without overflow for finite z.
cplx cylinder_coordinate(cplx z);

/// Representative of z + Z with real part in [0, 1). The real part is snapped to
/// a 2^-36 grid so that z and z + 1 give the same representative.
cplx canonical_lift(cplx z);

struct CylinderResult {
    CylinderPoint point;
    FatouStatus status = FatouStatus::ok;

    bool ok() const { return status == FatouStatus::ok; }
};

/// h(zeta) = exp(2 pi i H(lift)), with h(0) = 0 and h(infinity) = infinity.
CylinderResult horn_cyl(const HornMap &horn, const CylinderPoint &p);

inline constexpr double default_derivative_radius = 1e-2;
inline constexpr int default_derivative_nodes = 64;

/// f'(z) by the trapezoid rule for the Cauchy integral on |t - z| = radius.
/// Empty when f is undefined at any node.
std::optional<cplx> cauchy_derivative(const LiftedMap &f, cplx z, double radius = default_derivative_radius,
                                      int nodes = default_derivative_nodes);

struct SecondJet {
    cplx value{};
    cplx first{};
    cplx second{};
};

/// f, f' and f'' from the same Cauchy samples.
std::optional<SecondJet> cauchy_jet(const LiftedMap &f, cplx z, double radius = default_derivative_radius,
                                    int nodes = default_derivative_nodes);

struct CriticalPoint {
    cplx lift{};
    cplx value{};
    /// |f'| at the returned point.
    double residual = 0.0;
};

/// Zeros of f' in the window by Newton from an s x s grid of seeds (s^2 >= seeds),
/// deduplicated modulo 1 when `periodic`, sorted by real then imaginary part.
std::vector<CriticalPoint> critical_points(const LiftedMap &f, const Window &window, int seeds, bool periodic = true,
                                           unsigned workers = 1);

struct Island {
    /// Closed polyline in lift coordinates, counter-clockwise.
    std::vector<cplx> boundary;
    cplx target_center{};
    double target_radius = 0.0;
    int degree = 0;
    /// max over the boundary of | |f - z0| - r | / r.
    double boundary_error = 0.0;
};

struct IslandOptions {
    /// Grid nodes per unit length.
    int resolution = 256;
    /// Nodes of the boundary quadrature.
    int contour_nodes = 256;
    unsigned workers = 1;
};

/// Components of {|f - z0| < r} compactly inside `window` on which f has degree 1
/// onto D(z0, r), found by marching squares on |f - z0| - r. Each component
/// must be simply connected and free of undefined samples. Boundaries are
/// projected onto the exact level set by Newton's method.
std::vector<Island> find_islands(const LiftedMap &f, cplx z0, double r, const Window &window,
                                 const IslandOptions &options = {});

/// Winding number of f(boundary) around z0 (signed by the boundary orientation).
std::optional<int> island_degree(const LiftedMap &f, const std::vector<cplx> &boundary, cplx z0);

struct InjectivityAudit {
    int pairs = 0;
    int collisions = 0;
    bool passed() const { return collisions == 0; }
};

/// Draws `pairs` random point pairs inside the island and counts pairs of distinct
/// points (farther apart than 1e-9) whose images coincide within 1e-12.
InjectivityAudit audit_injectivity(const LiftedMap &f, const Island &island, int pairs = 200,
                                   std::uint64_t seed = 0);

struct PeriodicPoint {
    cplx zeta{};
    /// Representative with real part in [0, 1).
    cplx lift{};
    int period = 1;
    cplx multiplier{};
    /// |h^period(zeta) - zeta| on the cylinder.
    double residual = 0.0;
};

struct CycleOptions {
    int max_shift = 3;
    double newton_tolerance = 1e-12;
    int newton_iterations = 50;
    /// Cauchy radii tried in turn for the multiplier.
    std::vector<double> derivative_radii{1e-2, 1e-3, 1e-4};
    unsigned workers = 1;
};

/// Repelling periodic points of the cylinder map of a lift f commuting with
/// z -> z + 1, by Newton on f^period(z) - z - k from a grid of seeds.
std::vector<PeriodicPoint> repelling_cycles(const LiftedMap &f, int period, const Window &window, int seeds,
                                            const CycleOptions &options = {});

/// Lift of zeta -> zeta^2 on the cylinder: z -> 2z.
FunctionMap cylinder_square_model();
/// z -> z^2 on C.
FunctionMap square_model();

} // namespace henonlab
