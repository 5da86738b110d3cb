#pragma once

#include "multipath/grid.hpp"

#include <vector>

namespace multipath {

/// Per-path, per-cell values (sub-densities, totals, fractions, ...).
using PathArray = std::vector<std::vector<double>>;

enum class BoundaryKind {
    dirichlet,   ///< fixed ghost density
    zero_flux,   ///< wall: nothing enters, nothing leaves
    periodic,    ///< ghost mirrors the opposite end (cyclic paths only)
};

struct BoundaryCondition {
    BoundaryKind kind = BoundaryKind::zero_flux;
    double value = 0.0;

    static BoundaryCondition dirichlet(double v) { return {BoundaryKind::dirichlet, v}; }
    static BoundaryCondition zero_flux() { return {BoundaryKind::zero_flux, 0.0}; }
    static BoundaryCondition periodic() { return {BoundaryKind::periodic, 0.0}; }
    friend bool operator==(const BoundaryCondition&, const BoundaryCondition&) = default;
};

/// Sub-densities of every path plus the boundary data at each path end.
struct DensityField {
    PathArray mu;                              // [path][cell]
    std::vector<BoundaryCondition> left;       // per path
    std::vector<BoundaryCondition> right;      // per path

    static DensityField zeros(const NetworkGrid& grid);
};

/// Total density per path cell: the sum of the sub-densities of every path
/// aliasing the same physical cell. Computed once per physical cell (summing
/// in ascending path order) and fanned out, so aliased cells agree bitwise.
PathArray accumulate_omega(const NetworkGrid& grid, const PathArray& mu);

/// Diagnostic admissibility report (never throws).
struct AdmissibilityReport {
    double max_omega = 0.0;
    std::vector<int> offenders;   ///< physical cells with omega > rho_max + 1e-10
    bool admissible() const { return offenders.empty(); }
};
AdmissibilityReport check_admissible(const NetworkGrid& grid, const PathArray& mu, double rho_max);

/// Fraction of each path's sub-density in the local total, with 0 where the
/// cell is empty. On every non-empty cell the fractions over its aliases sum
/// to one.
PathArray turning_fractions(const NetworkGrid& grid, const PathArray& mu);

/// Vehicles on each path: sum of mu * dx over the path's cells.
std::vector<double> path_masses(const NetworkGrid& grid, const PathArray& mu);

} // namespace multipath
