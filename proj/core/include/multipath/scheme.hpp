#pragma once

#include "multipath/field.hpp"
#include "multipath/flux.hpp"
#include "multipath/grid.hpp"

#include <vector>

namespace multipath {

/// Largest stable time step for the grid/flux pair:
///   dx / (r * sup|f'|),   r = max incoming roads over junctions (>= 1).
/// On a junction-free network this is the standard CFL bound; a junction
/// with r incoming roads can push up to r maximal fluxes into one cell, so
/// the bound tightens by that factor.
double max_stable_dt(const NetworkGrid& grid, const FluxModel& model);

struct SchemeConfig {
    double dt = 0.0;            ///< 0: derive as cfl_safety * max_stable_dt
    double cfl_safety = 0.9;
    double t_final = 0.0;
    double steady_tolerance = 1e-12;   ///< max per-cell change per step
    long max_steps = 1'000'000;        ///< cap for run_to_steady

    enum class Admissibility { every_step, snapshots_only, off };
    /// Total-density check cadence. Checking each step costs one extra pass;
    /// release builds default to snapshot-time checks.
#ifdef NDEBUG
    Admissibility admissibility = Admissibility::snapshots_only;
#else
    Admissibility admissibility = Admissibility::every_step;
#endif
};

/// Evolving simulation state. `mass` is bookkept incrementally from boundary
/// fluxes and must stay within 1e-12 (relative) of direct summation.
struct SimState {
    DensityField field;
    PathArray omega;
    long step = 0;
    double time = 0.0;
    std::vector<double> mass;
};

struct Snapshot {
    double time = 0.0;
    long step = 0;
    PathArray mu;
    PathArray omega;
};

struct RunResult {
    std::vector<Snapshot> snapshots;
    std::vector<double> global_mass;   ///< one entry per executed step
};

struct SteadyResult {
    long steps = 0;            ///< steps executed
    long effective_steps = 0;  ///< steps whose max cell change exceeded tolerance
    bool converged = false;    ///< false: step cap hit first
    double last_change = 0.0;
};

/// Sequential driver for the path-coupled Godunov scheme. Junctions need no
/// special treatment: the coupling happens entirely through the shared-cell
/// totals. Owns copies of the grid and the flux model.
class Simulator {
public:
    Simulator(NetworkGrid grid, FluxModel model, SchemeConfig config);

    /// State with the given field at t = 0 (boundary setup validated here).
    SimState make_state(DensityField field) const;

    /// One update of every interior cell from time-n data:
    ///   mu_k += (dt/dx) * [ (mu_{k-1}/w_{k-1}) G(w_{k-1}, w_k)
    ///                     - (mu_k / w_k)       G(w_k, w_{k+1}) ]
    /// with the 0/0 ratio taken as 0. Both phases (totals, then updates) see
    /// only time-n values. Throws RegimeError when the post-step total
    /// density breaks the admissible bound (a time-step violation).
    void step(SimState& state) const;

    /// Runs to t_final, emitting snapshots at the scheduled times (each
    /// schedule entry fires at the first step reaching it; time 0 fires
    /// before stepping). Records global mass after every step.
    RunResult run(SimState& state, const std::vector<double>& snapshot_times) const;

    /// Steps until the max per-cell change drops below steady_tolerance or
    /// the step cap is hit.
    SteadyResult run_to_steady(SimState& state) const;

    double dt() const { return dt_; }
    double lambda() const { return dt_ / grid_.dx(); }
    const SchemeConfig& config() const { return config_; }
    const NetworkGrid& grid() const { return grid_; }
    const FluxModel& model() const { return model_; }

private:
    void check_admissibility(const SimState& state) const;

    NetworkGrid grid_;
    FluxModel model_;
    SchemeConfig config_;
    double dt_ = 0.0;
};

} // namespace multipath
