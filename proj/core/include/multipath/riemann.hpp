#pragma once

#include "multipath/flux.hpp"
#include "multipath/merge.hpp"

#include <optional>
#include <string>
#include <vector>

namespace multipath {

/// Flux raised by a constant: h(rho) = f(rho) + shift, shift in [0, f(sigma)].
/// Concavity and the maximizer carry over from the base flux; the junction
/// cell runs on such fluxes while its capacity is widened.
struct ShiftedFlux {
    const FluxModel* base = nullptr;
    double shift = 0.0;

    ShiftedFlux(const FluxModel& model, double shift_value);

    double flux(double rho) const { return base->flux(rho) + shift; }
    double deriv(double rho) const { return base->flux_deriv(rho); }
    double demand(double rho) const { return base->demand(rho) + shift; }
    double godunov(double left, double right) const { return base->godunov(left, right) + shift; }
};

enum class WaveKind { none, shock, rarefaction };

/// Sign of a wave's speed range. Shocks carry one speed (negative, zero or
/// positive); rarefaction fans carry their edge speeds and are `spanning`
/// when the fan straddles zero.
enum class WaveSign { zero, negative, positive, spanning };

/// Shock speeds this close to zero classify as standing: balanced states
/// evaluate their equal flux values a rounding error apart.
inline constexpr double kZeroSpeedTolerance = 1e-14;

const char* to_string(WaveKind k);
const char* to_string(WaveSign s);

struct WaveSide {
    double density = 0.0;
    double flux = 0.0;
};

/// One wave of a Riemann fan: a shock (equal edge speeds, jump condition
/// speed) or a rarefaction (edge speeds are the characteristic speeds of the
/// flanking states), or nothing when the states coincide.
struct Wave {
    WaveKind kind = WaveKind::none;
    WaveSign sign = WaveSign::zero;
    double speed_min = 0.0;
    double speed_max = 0.0;
    WaveSide left, right;
};

/// Entropy solution structure of the single-flux Riemann problem: a shock
/// when the density jumps up, a rarefaction when it jumps down.
Wave classical_wave(const FluxModel& model, double rho_left, double rho_right);

/// Self-similar interior of a classical rarefaction fan: the density carried
/// along the ray x/t = xi, i.e. the solution of f'(rho) = xi. Valid for xi
/// between the fan's edge speeds.
double rarefaction_profile(const FluxModel& model, double xi);

/// Riemann problem whose two states obey different (shifted) fluxes. The
/// wave type follows from the characteristic slopes; a shock's speed comes
/// from the jump condition on the two flux values. Equal slopes with
/// different states are rejected as undefined.
Wave two_flux_wave(const ShiftedFlux& left_flux, double rho_left,
                   const ShiftedFlux& right_flux, double rho_right);

struct DensityInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double rho, double tol = 0.0) const { return rho >= lo - tol && rho <= hi + tol; }
};

/// Right states reachable from rho_left through waves of negative speed only
/// (the boundary trace set of the left-half problem).
DensityInterval attainable_negative(const FluxModel& model, double rho_left);

/// Left states reachable toward rho_right through waves of positive speed
/// only (the right-half counterpart).
DensityInterval attainable_positive(const FluxModel& model, double rho_right);

/// Where solution states live in the merge wave diagram.
enum class RiemannRoad { incoming_first, incoming_second, junction_cell, outgoing };

const char* to_string(RiemannRoad r);

struct LoggedWave {
    std::string label;       ///< diagram position: L1u, L1v, L2, L3, L4, L5, L6, L7u, L7v, L7w
    RiemannRoad road = RiemannRoad::junction_cell;
    int stage = 0;           ///< 0 initial, 1 wave interaction, 2 boundary re-emission
    bool created = false;    ///< suppressed waves are logged with their (equal) states
    Wave wave;
    double start_x = 0.0;
    double start_t = 0.0;
};

/// Piecewise record of the junction-cell flux shifts: the cell starts at
/// capacity f(sigma) above the road flux and relaxes stage by stage to the
/// recorded shifts (left part of the cell behind the inbound wave, right
/// part behind the outbound one).
struct FluxSchedule {
    double initial_shift = 0.0;             ///< f(sigma) at t = 0
    double hat_shift = 0.0;                 ///< left-part flux after the first waves
    double tilde_shift = 0.0;               ///< right-part flux after the first waves
    std::optional<double> hat2_shift;       ///< after re-emission at x = 0
    std::optional<double> tilde2_shift;     ///< after re-emission at x = dx
};

/// Full constructive solution of the merge Riemann problem with the widened
/// junction cell: boundary traces per stage, the ordered wave log, the flux
/// schedule and the asymptotic constant states.
struct MergeRiemannSolution {
    MergeRegion region = MergeRegion::A;
    double cell_width = 1.0;

    // Asymptotic states on the two incoming roads, in the cell, downstream.
    double u_bar = 0.0, v_bar = 0.0, z_bar = 0.0, w_bar = 0.0;

    // Stage-0 traces.
    double u_tilde = 0.0, v_tilde = 0.0;
    double z_hat = 0.0, z_tilde = 0.0;
    double w_hat = 0.0;

    // Re-emission traces: exactly one set applies per region.
    std::optional<double> u_tilde2, v_tilde2, z_hat2;   // queues back up (B, C)
    std::optional<double> z_tilde2, w_hat2;             // free flow spills out (A)

    FluxSchedule fluxes;
    std::vector<LoggedWave> waves;

    const LoggedWave* find_wave(const std::string& label) const;
};

/// Solves the merge Riemann problem for inflow states u_left, v_left and
/// downstream state w_right (the junction cell starts at sigma with doubled
/// capacity). Requires the same regime as the stationary analysis; border
/// data is rejected. The construction terminates after at most one wave
/// interaction and one boundary re-emission.
MergeRiemannSolution solve_merge_riemann(const FluxModel& model, double u_left,
                                         double v_left, double w_right,
                                         double cell_width = 1.0);

/// Largest flux-conservation residual of the solution's stages at the two
/// cell boundaries (exact construction keeps it at rounding level).
double flux_conservation_residual(const FluxModel& model, const MergeRiemannSolution& s);

} // namespace multipath
