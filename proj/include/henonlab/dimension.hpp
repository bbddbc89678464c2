#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "henonlab/green.hpp"
#include "henonlab/horn.hpp"

namespace henonlab {

struct IFSBranch {
    Island island;
    int return_time = 1;
    /// |derivative| of the expanding return map sampled on the island.
    std::vector<double> derivative_samples;
};

struct IFSSystem {
    std::vector<IFSBranch> branches;
};

/// Throws std::invalid_argument unless the system is nonempty and every
/// derivative sample is finite and > 1.
void validate(const IFSSystem &s);

struct BowenResult {
    double dimension = 0.0;
    /// Solutions for the weakest and strongest contraction of each branch.
    double lower = 0.0;
    double upper = 0.0;
};

/// Root s of sum_i r_i^s = 1 by bisection to 1e-12. Throws if some r_i is not in (0, 1).
double moran_root(const std::vector<double> &ratios);

/// Contraction per branch is the reciprocal geometric mean of its derivative
/// samples; the bracket uses the reciprocal max and min samples.
BowenResult bowen_dimension(const IFSSystem &s);

/// log N / log c, c the largest derivative sample.
double hyperbolic_lower_bound(const IFSSystem &s);

struct IslandSystemOptions {
    IslandOptions islands;
    /// Interior points per island at which |f'| is sampled (in addition to
    /// every eighth boundary node).
    int interior_samples = 16;
    /// Upper bound on the number of integer translates of the target tried.
    int max_targets = 64;
    std::uint64_t seed = 0;
};

/// Islands of the lift f inside the disk D = D(z0, r) that f maps onto a
/// translate D + k: each gives a branch of the expanding system f - k on the
/// cylinder. Branches whose |f'| samples are not all > 1 are dropped.
IFSSystem island_system(const LiftedMap &f, cplx z0, double r, const IslandSystemOptions &options = {});

/// IFS with equal-contraction branches and no island geometry, for oracles.
IFSSystem uniform_system(int branches, double ratio);

struct PointCloud {
    /// Row-major points of dimension `dim` (2 or 4).
    int dim = 2;
    std::vector<double> coords;
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t size() const { return dim > 0 ? coords.size() / static_cast<std::size_t>(dim) : 0; }
};

/// Cloud with a tight bounding box. Throws for an empty point list or dim not in {2, 4}.
PointCloud make_cloud(int dim, std::vector<double> coords);

/// Slice parameters (Re t, Im t) of grid nodes inside {value < level} with a
/// 4-neighbour outside it: the discrete level set of a Green field.
PointCloud level_set_cloud(const FieldGrid &grid, double level = julia_level);

struct BoxDimension {
    double slope = 0.0;
    double standard_error = 0.0;
    std::vector<int> scales;
    /// Occupied boxes per scale, averaged over the grid translations.
    std::vector<double> counts;
};

/// Slope of log N(2^-k) against k log 2 for k = 3..3+scale_count, where N counts
/// occupied boxes of side 2^-k times the largest side of the bounding box,
/// averaged over eight translations of the grid along the diagonal.
/// Requires scale_count >= 4 and at least 100 points.
BoxDimension box_dimension(const PointCloud &cloud, int scale_count, unsigned workers = 1);

/// One-parameter family (lambda, z) -> h_lambda(z); may be undefined.
using Family = std::function<std::optional<cplx>(cplx lambda, cplx z)>;

struct ShootOptions {
    /// Residual target for h^(n+1)(critical) - a.
    double tolerance = 1e-10;
    int max_iter = 60;
    /// Step of the central difference in lambda.
    double lambda_step = 1e-6;
    /// Step of the central difference in z used by the Newton tracking of a.
    double z_step = 1e-6;
    int period = 1;
};

struct ShootResult {
    cplx parameter{};
    /// Repelling periodic point a at the returned parameter.
    cplx target{};
    double residual = 0.0;
    bool converged = false;
    std::vector<cplx> trace;
    std::string message;
};

/// Newton in lambda on h_lambda^(n+1)(critical) = a_lambda, with a_lambda
/// tracked by Newton in z from `target_guess` (a periodic point of the given
/// period). Returns lambda0 itself when the relation already holds there.
ShootResult misiurewicz_shoot(const Family &family, cplx lambda0, cplx critical_point, int n, cplx target_guess,
                              const ShootOptions &options = {});

/// lambda * h on the cylinder, through the lifted horn map.
Family horn_family(const HornMap &horn);

/// z^2 + c, with lambda = c.
Family quadratic_family();

} // namespace henonlab
