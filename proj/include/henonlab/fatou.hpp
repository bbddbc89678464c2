#pragma once

#include <optional>

#include "henonlab/henon_map.hpp"
#include "henonlab/series.hpp"

namespace henonlab {

/// Which coordinate of the chart is read as the neutral coordinate zeta when
/// evaluating the incoming limit. Both are valid charts with the same
/// quadratic normalization; `sheared` converges more slowly (see tests).
enum class NeutralCoordinate { linear, sheared };

struct FatouOptions {
    /// Tolerance on successive partial limits.
    double tolerance = 1e-9;
    int max_iter = 100000;
    /// Petal radius rho: attracting petal is {Re(-1/zeta) > 1/rho, |zeta| < rho}.
    double petal_radius = 0.1;
    /// |zeta| below which the incoming limit is read off.
    double stop_radius = 0.02;
    /// Outgoing seeds are placed at Re u <= -outgoing_margin.
    int outgoing_margin = 30;
    /// Number of 1/u^j terms in the asymptotic Fatou expansion.
    int expansion_order = 10;
    NeutralCoordinate neutral = NeutralCoordinate::linear;
    /// Point where the incoming coordinate is normalized to 0; default is
    /// chart.inverse(-0.05, 0).
    std::optional<ComplexPoint2> anchor;
};

enum class FatouStatus { ok, out_of_domain, not_converged };

const char *to_string(FatouStatus s);

struct IncomingResult {
    cplx value{};
    FatouStatus status = FatouStatus::ok;
    int iterations = 0;
    /// Last |P_n - P_{n-1}| of the partial limits.
    double residual = 0.0;
    /// d(phi) applied to the requested tangent, when one was given.
    cplx derivative{};

    bool ok() const { return status == FatouStatus::ok; }
};

/// Point of the parabolic curve Sigma with its outgoing Fatou parameter.
struct SigmaPoint {
    cplx parameter{};
    ComplexPoint2 point;
};

struct OutgoingResult {
    SigmaPoint sigma;
    FatouStatus status = FatouStatus::ok;
    /// Number of forward iterates applied to the seed.
    int iterations = 0;
    /// Distance between the last two candidates.
    double residual = 0.0;
    /// d psi / dw.
    ComplexPoint2 derivative;

    bool ok() const { return status == FatouStatus::ok; }
};

/// Incoming Fatou coordinate phi and outgoing parametrization psi of a map
/// with a semi-parabolic fixed point.
///
/// Near the fixed point, in the linear chart coordinates (zeta, eta), orbits
/// are attracted exponentially fast to the formal neutral curve eta = H(zeta)
/// on which the map reads zeta -> g(zeta) = zeta + zeta^2 + c3 zeta^3 + ....
/// With u = -1/zeta the Fatou coordinate of g has the asymptotic expansion
///
///     Phi(u) = u - beta log u + sum_{j=1..K} s_j u^-j,   beta = 1 - c3,
///
/// whose coefficients are computed here by formal power series. The incoming
/// coordinate is phi(p) = Phi(u_n) - n once the orbit is close to the curve
/// and deep in the petal; the outgoing parametrization pushes forward a seed on
/// the curve solving Phi(u) = w - n with log(-u) in place of log u.
///
/// The incoming coordinate is reported relative to the anchor. The natural
/// normalization (no subtraction) is the one compatible with the
/// outgoing parametrization for implosion; the two differ by anchor_offset().
class FatouEvaluator {
public:
    explicit FatouEvaluator(const HenonMap &m, FatouOptions options = {});

    const HenonMap &map() const { return map_; }
    const LocalChart &chart() const { return chart_; }
    const FatouOptions &options() const { return options_; }
    cplx beta() const { return beta_; }
    const ComplexPoint2 &anchor() const { return anchor_; }
    /// Natural incoming coordinate of the anchor.
    cplx anchor_offset() const { return anchor_offset_; }
    const series::Series &neutral_curve() const { return curve_; }
    const series::Series &expansion() const { return expansion_; }

    bool in_basin(const ComplexPoint2 &p) const;
    bool in_basin(const ComplexPoint2 &p, int max_iter) const;

    /// phi(p), normalized so that phi(anchor) = 0.
    IncomingResult incoming(const ComplexPoint2 &p) const;
    /// Same, with the derivative along tangent vector v (original coordinates).
    IncomingResult incoming(const ComplexPoint2 &p, const ComplexPoint2 &v) const;
    /// Phi without anchor normalization.
    IncomingResult incoming_natural(const ComplexPoint2 &p) const;

    OutgoingResult outgoing(cplx w) const;
    /// Outgoing parametrization with a fixed number of pushes (no adaptivity).
    OutgoingResult outgoing_fixed(cplx w, int pushes) const;

    /// Phi(u) on the attracting side (principal log u).
    cplx incoming_expansion(cplx u) const;
    /// Phi on the repelling side (log(-u)).
    cplx outgoing_expansion(cplx u) const;

    // Internal entry points on linear chart coordinates (used by the horn map).
    IncomingResult incoming_linear(const ComplexPoint2 &q, const ComplexPoint2 *tangent, bool natural) const;

    struct LinearOutgoing {
        ComplexPoint2 q;
        ComplexPoint2 dq;
        FatouStatus status = FatouStatus::ok;
        int iterations = 0;
        double residual = 0.0;
    };
    LinearOutgoing outgoing_linear(cplx w) const;

private:
    LinearOutgoing push_seed(cplx w, int pushes) const;

    HenonMap map_;
    FatouOptions options_;
    LocalChart chart_;
    series::Series curve_;     // H(zeta), coefficient i of zeta^i
    series::Series expansion_; // s_j, coefficient j of u^-j (index 0 unused)
    cplx beta_;
    ComplexPoint2 anchor_;
    cplx anchor_offset_;
};

/// Convenience wrapper building the chart from m.
bool in_basin(const HenonMap &m, const ComplexPoint2 &p, int max_iter = 100000);

} // namespace henonlab
