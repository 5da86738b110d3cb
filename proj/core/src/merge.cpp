#include "multipath/merge.hpp"
#include "multipath/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace multipath {

const char* to_string(MergeRegion r) {
    switch (r) {
    case MergeRegion::A: return "A";
    case MergeRegion::B: return "B";
    case MergeRegion::BPrime: return "B'";
    case MergeRegion::C: return "C";
    case MergeRegion::IsBoundary: return "boundary";
    }
    return "?";
}

void MergeBoundary::validate(const FluxModel& model) const {
    std::ostringstream msg;
    msg.precision(17);
    if (!(u_left > 0.0 && u_left < model.sigma()) ||
        !(v_left > 0.0 && v_left < model.sigma())) {
        msg << "merge: inflow densities must lie strictly inside (0, sigma); got u=" << u_left
            << ", v=" << v_left << " with sigma=" << model.sigma();
        throw RegimeError(msg.str());
    }
    if (!(beta > model.sigma() && beta < model.rho_max())) {
        msg << "merge: downstream density must lie strictly inside (sigma, rho_max); got beta="
            << beta;
        throw RegimeError(msg.str());
    }
}

MergeRegion classify_region(const FluxModel& model, const MergeBoundary& b, double tol) {
    b.validate(model);
    double fu = model.flux(b.u_left);
    double fv = model.flux(b.v_left);
    double fb = model.flux(b.beta);

    double excess = fu + fv - fb;
    if (std::abs(excess) <= tol) return MergeRegion::IsBoundary;
    if (excess < 0.0) return MergeRegion::A;
    // Oversupplied junction: which roads queue up depends on the half-share.
    if (std::abs(fv - 0.5 * fb) <= tol || std::abs(fu - 0.5 * fb) <= tol)
        return MergeRegion::IsBoundary;
    if (fv < 0.5 * fb) return MergeRegion::B;
    if (fu < 0.5 * fb) return MergeRegion::BPrime;
    return MergeRegion::C;
}

StationaryMergeSolution stationary_merge(const FluxModel& model, const MergeBoundary& b) {
    MergeRegion region = classify_region(model, b);
    if (region == MergeRegion::IsBoundary)
        throw RegimeError("merge: boundary-region data admits infinitely many stationary states; "
                          "no unique solution to report");
    if (region == MergeRegion::BPrime) {
        // Mirror of region B with the incoming roads swapped.
        StationaryMergeSolution s = stationary_merge(model, {b.v_left, b.u_left, b.beta});
        std::swap(s.mu1_before, s.mu2_before);
        std::swap(s.mu1_junction, s.mu2_junction);
        s.region = MergeRegion::BPrime;
        return s;
    }

    double fu = model.flux(b.u_left);
    double fv = model.flux(b.v_left);
    double fb = model.flux(b.beta);

    StationaryMergeSolution s;
    s.region = region;
    switch (region) {
    case MergeRegion::A: {
        // Everything passes: the junction carries the sum of the inflows, in
        // free flow.
        s.mu1_before = b.u_left;
        s.mu2_before = b.v_left;
        s.omega_junction = model.density_at_flux(fu + fv, FluxModel::Branch::lower);
        s.mu1_junction = s.omega_junction * (fu / (fu + fv));
        break;
    }
    case MergeRegion::B: {
        // Road 1 queues: it only gets what road 2 leaves of the downstream
        // capacity.
        double level = fb - fv;
        double x = model.density_at_flux(level, FluxModel::Branch::upper);
        s.mu1_before = x;
        s.mu2_before = b.v_left;
        s.omega_junction = x;
        s.mu1_junction = s.omega_junction * (level / fb);
        break;
    }
    case MergeRegion::C: {
        // Both roads queue and the downstream capacity splits evenly.
        double x = model.density_at_flux(0.5 * fb, FluxModel::Branch::upper);
        s.mu1_before = x;
        s.mu2_before = x;
        s.omega_junction = x;
        s.mu1_junction = 0.5 * s.omega_junction;
        break;
    }
    default:
        break;
    }
    s.mu2_junction = s.omega_junction - s.mu1_junction;
    return s;
}

std::array<double, 3> stability_eigenvalues(const FluxModel& model,
                                            const StationaryMergeSolution& s,
                                            double lambda) {
    double dx = model.flux_deriv(s.mu1_before);
    double dy = model.flux_deriv(s.mu2_before);
    double dz = model.flux_deriv(s.omega_junction);
    switch (s.region) {
    case MergeRegion::A:
        return {1.0 - lambda * dx, 1.0 - lambda * dy, 1.0 - lambda * dz};
    case MergeRegion::B:
        return {1.0 + lambda * dx, 1.0 - lambda * dy, 1.0 + lambda * dz};
    case MergeRegion::BPrime:
        return {1.0 - lambda * dx, 1.0 + lambda * dy, 1.0 + lambda * dz};
    case MergeRegion::C:
        return {1.0 + lambda * dx, 1.0 + lambda * dy, 1.0 + 2.0 * lambda * dz};
    default:
        throw RegimeError("merge: no stability analysis on region-border data");
    }
}

BufferFluxes buffer_fluxes(const FluxModel& model, double omega_j, double omega_jp1,
                           double mu1_jm1, double mu2_jm1) {
    BufferFluxes f;
    f.outflow = std::min(model.demand(omega_j), model.supply(omega_jp1));
    f.inflow = std::min(model.demand(mu1_jm1), model.supply(omega_j)) +
               std::min(model.demand(mu2_jm1), model.supply(omega_j));
    return f;
}

double buffer_step(const FluxModel& model, double omega_j, double omega_jp1,
                   double mu1_jm1, double mu2_jm1, double lambda) {
    BufferFluxes f = buffer_fluxes(model, omega_j, omega_jp1, mu1_jm1, mu2_jm1);
    return omega_j + lambda * (f.inflow - f.outflow);
}

} // namespace multipath
