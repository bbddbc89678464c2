#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "henonlab/fatou.hpp"

namespace henonlab {

struct AlphaSequenceItem {
    int n = 1;
    double epsilon = 0.0;
    cplx alpha{};
};

/// epsilon = pi / (n - alpha), chosen among the nearest doubles so that
/// n - pi / epsilon == alpha holds in floating point. When no double achieves
/// it, the one with the smallest residual. Throws for n <= alpha.
double alpha_epsilon(double alpha, int n);

/// Items n = first..last of the alpha-sequence.
std::vector<AlphaSequenceItem> alpha_sequence(double alpha, int first, int last);

struct LavaursResult {
    ComplexPoint2 point;
    FatouStatus status = FatouStatus::ok;

    bool ok() const { return status == FatouStatus::ok; }
};

/// Lavaurs map of phase alpha: psi(phi(p) + alpha), using the evaluator's
/// anchored incoming coordinate.
LavaursResult lavaurs(const FatouEvaluator &ev, cplx alpha, const ComplexPoint2 &p);

struct ImplosionReport {
    double alpha = 0.0;
    int n = 0;
    double epsilon = 0.0;
    /// Phase shift applied to the Lavaurs map: the natural incoming coordinate
    /// of the anchor. The perturbed iterates f_eps^n converge to the Lavaurs
    /// map of phase alpha + alpha_offset in the evaluator's anchored normalization.
    cplx alpha_offset{};
    /// Empty when no sample was evaluated.
    std::optional<double> max_error;
    std::optional<double> median_error;
    int evaluated = 0;
    /// Samples outside the basin, whose perturbed orbit left the filtration
    /// bidisk, or whose Fatou evaluation failed.
    int excluded = 0;
    /// Per-sample error, empty for excluded samples (same order as the input).
    std::vector<std::optional<double>> errors;
};

/// Distance between f_eps^n(p) and the Lavaurs map at p, eps = alpha_epsilon(alpha, n).
ImplosionReport implosion_error(const FatouEvaluator &ev, double alpha, int n,
                                const std::vector<ComplexPoint2> &samples, unsigned workers = 1);

/// Band of natural incoming coordinates from which basin samples are drawn.
/// For the a = 0.5 map the outgoing parametrization sends |Im w| >= 2.5 into
/// the basin, so Lavaurs images of phase 0 of such samples stay bounded.
struct SampleBand {
    double min_abs_imag = 2.5;
    double max_abs = 8.0;
};

/// Up to `count` basin points near the fixed point (offsets with real parts in
/// [-1.5, 1.5] and imaginary parts in [-0.75, 0.75]) whose natural incoming
/// coordinate lies in the band, drawn reproducibly from `seed`.
std::vector<ComplexPoint2> basin_samples(const FatouEvaluator &ev, int count, std::uint64_t seed = 0,
                                         const SampleBand &band = {});

} // namespace henonlab
