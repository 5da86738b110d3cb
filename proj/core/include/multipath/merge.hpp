#pragma once

#include "multipath/flux.hpp"

#include <array>

namespace multipath {

/// Constant boundary data of the two-in-one merge problem: inflow densities
/// of the incoming roads and the downstream density (possibly given as two
/// per-path components; only the sum matters).
///
/// The supported regime is free inflow against a congested outlet:
/// u_left, v_left in (0, sigma) and beta in (sigma, rho_max). Outside it the
/// analysis refuses rather than extrapolates.
struct MergeBoundary {
    double u_left = 0.0;
    double v_left = 0.0;
    double beta = 0.0;

    static MergeBoundary with_components(double u_left, double v_left,
                                         double beta1, double beta2) {
        return {u_left, v_left, beta1 + beta2};
    }

    /// Throws RegimeError when outside the supported regime.
    void validate(const FluxModel& model) const;
};

/// Classification of merge boundary data by which queues form:
///   A       free flow, no queue;
///   B       queue along the first incoming road;
///   BPrime  queue along the second incoming road;
///   C       queues along both;
///   IsBoundary  within tolerance of a region border, where the stationary
///               state is not unique.
enum class MergeRegion { A, B, BPrime, C, IsBoundary };

const char* to_string(MergeRegion r);

/// Evaluates the three flux inequalities separating the regions, with an
/// absolute tolerance (default 1e-12) around each border.
MergeRegion classify_region(const FluxModel& model, const MergeBoundary& b, double tol = 1e-12);

/// The unique stationary state of the scheme around the junction:
/// sub-densities of the last cells of the incoming roads, the total in the
/// first cell past the junction, and how that total splits per path.
struct StationaryMergeSolution {
    MergeRegion region = MergeRegion::A;
    double mu1_before = 0.0;       ///< path-1 density in its last incoming cell
    double mu2_before = 0.0;       ///< path-2 density in its last incoming cell
    double omega_junction = 0.0;   ///< total density in the junction cell
    double mu1_junction = 0.0;     ///< path-1 share of the junction cell
    double mu2_junction = 0.0;     ///< path-2 share (omega_junction - mu1_junction)
};

/// Closed-form stationary solution per region; throws RegimeError on
/// region-border data (infinitely many stationary states there).
StationaryMergeSolution stationary_merge(const FluxModel& model, const MergeBoundary& b);

/// Eigenvalues of the linearized update map at the stationary point for
/// lambda = dt/dx. The Jacobians are triangular, so the eigenvalues are the
/// diagonal entries 1 -/+ lambda f' at the three stationary densities. All
/// magnitudes sit strictly below 1 under the standard CFL bound.
std::array<double, 3> stability_eigenvalues(const FluxModel& model,
                                            const StationaryMergeSolution& solution,
                                            double lambda);

/// The junction cell read as a finite buffer: inflow gathered from both
/// incoming roads, outflow released downstream, both demand/supply limited.
struct BufferFluxes {
    double inflow = 0.0;    ///< up to 2 f(sigma)
    double outflow = 0.0;   ///< up to f(sigma)
};

BufferFluxes buffer_fluxes(const FluxModel& model, double omega_j, double omega_jp1,
                           double mu1_jm1, double mu2_jm1);

/// Forward-Euler balance update of the buffer load:
///   omega_j + lambda * (inflow - outflow).
/// Algebraically identical to the scheme's own junction-cell update.
double buffer_step(const FluxModel& model, double omega_j, double omega_jp1,
                   double mu1_jm1, double mu2_jm1, double lambda);

} // namespace multipath
