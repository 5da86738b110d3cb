#include "multipath/scheme.hpp"
#include "multipath/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace multipath {

namespace {

constexpr double kAdmissibleSlack = 1e-12;

struct Ghost {
    double mu = 0.0;
    double omega = 0.0;
};

/// Total boundary density seen from inside a dirichlet ghost group: the
/// values of all path ends sharing the ghost location add up, exactly like
/// the sub-densities of a shared terminal cell.
double ghost_group_total(const NetworkGrid& grid, const DensityField& field, int group) {
    double total = 0.0;
    for (auto [p, end] : grid.ghost_group_members(group)) {
        const BoundaryCondition& bc =
            end == PathEnd::left ? field.left[p] : field.right[p];
        total += bc.value;
    }
    return total;
}

Ghost resolve_ghost(const NetworkGrid& grid, const SimState& state, const FluxModel& model,
                    int path, PathEnd end) {
    const DensityField& field = state.field;
    const BoundaryCondition& bc = end == PathEnd::left ? field.left[path] : field.right[path];
    const int n = grid.cell_count(path);
    switch (bc.kind) {
    case BoundaryKind::dirichlet:
        return {bc.value, ghost_group_total(grid, field, grid.ghost_group(path, end))};
    case BoundaryKind::zero_flux:
        // Empty upstream sends nothing; a jammed downstream accepts nothing.
        return end == PathEnd::left ? Ghost{0.0, 0.0}
                                    : Ghost{model.rho_max(), model.rho_max()};
    case BoundaryKind::periodic: {
        int k = end == PathEnd::left ? n - 1 : 0;
        return {field.mu[path][k], state.omega[path][k]};
    }
    }
    return {};
}

} // namespace

double max_stable_dt(const NetworkGrid& grid, const FluxModel& model) {
    double speed = model.max_wave_speed();
    if (!(speed > 0.0))
        throw ModelError("max_stable_dt: flux has no propagation speed");
    return grid.dx() / (grid.max_incoming_roads() * speed);
}

Simulator::Simulator(NetworkGrid grid, FluxModel model, SchemeConfig config)
    : grid_(std::move(grid)), model_(std::move(model)), config_(config) {
    if (config_.dt > 0.0) {
        dt_ = config_.dt;
    } else {
        if (!(config_.cfl_safety > 0.0) || config_.cfl_safety > 1.0)
            throw ModelError("scheme: cfl_safety must lie in (0, 1]");
        dt_ = config_.cfl_safety * max_stable_dt(grid_, model_);
    }
}

SimState Simulator::make_state(DensityField field) const {
    if (static_cast<int>(field.mu.size()) != grid_.path_count() ||
        static_cast<int>(field.left.size()) != grid_.path_count() ||
        static_cast<int>(field.right.size()) != grid_.path_count())
        throw ModelError("state: field shape does not match the grid");
    for (int p = 0; p < grid_.path_count(); ++p) {
        if (static_cast<int>(field.mu[p].size()) != grid_.cell_count(p))
            throw ModelError("state: path " + std::to_string(p + 1) + " has wrong cell count");
        for (double v : field.mu[p])
            if (v < 0.0 || v > model_.rho_max())
                throw ModelError("state: initial sub-density out of [0, rho_max]");
    }

    // Boundary setup: ghost groups must agree on kind, dirichlet groups must
    // stay admissible, periodic ends must be private cyclic wrap-arounds.
    for (int g = 0; g < grid_.ghost_group_count(); ++g) {
        const auto& members = grid_.ghost_group_members(g);
        BoundaryKind kind = BoundaryKind::dirichlet;
        double total = 0.0;
        for (std::size_t i = 0; i < members.size(); ++i) {
            auto [p, end] = members[i];
            const BoundaryCondition& bc = end == PathEnd::left ? field.left[p] : field.right[p];
            if (i == 0) kind = bc.kind;
            else if (bc.kind != kind)
                throw ModelError("boundary: path ends sharing a ghost location must share one kind");
            if (bc.kind == BoundaryKind::dirichlet) {
                if (bc.value < 0.0 || bc.value > model_.rho_max())
                    throw ModelError("boundary: dirichlet value out of [0, rho_max]");
                total += bc.value;
            }
            if (bc.kind == BoundaryKind::periodic) {
                if (members.size() != 1)
                    throw ModelError("boundary: periodic end may not share its ghost location");
                if (!grid_.path_is_cycle(p))
                    throw ModelError("boundary: periodic needs a cyclic path");
                const BoundaryCondition& other =
                    end == PathEnd::left ? field.right[p] : field.left[p];
                if (other.kind != BoundaryKind::periodic)
                    throw ModelError("boundary: periodic must be set on both path ends");
            }
        }
        if (kind == BoundaryKind::dirichlet && total > model_.rho_max() + kAdmissibleSlack)
            throw ModelError("boundary: dirichlet values sharing a ghost location exceed rho_max");
    }

    AdmissibilityReport report = check_admissible(grid_, field.mu, model_.rho_max());
    if (report.max_omega > model_.rho_max() + kAdmissibleSlack)
        throw ModelError("state: initial total density exceeds rho_max");

    SimState state;
    state.omega = accumulate_omega(grid_, field.mu);
    state.mass = path_masses(grid_, field.mu);
    state.field = std::move(field);
    return state;
}

void Simulator::step(SimState& state) const {
    // Phase 1: totals at time n (recomputed so external field edits are safe).
    state.omega = accumulate_omega(grid_, state.field.mu);

    const double lambda = dt_ / grid_.dx();
    PathArray next(state.field.mu.size());
    std::vector<double> flux;   // interface fluxes of one path
    for (int p = 0; p < grid_.path_count(); ++p) {
        const std::vector<double>& mu = state.field.mu[p];
        const std::vector<double>& w = state.omega[p];
        const int n = grid_.cell_count(p);
        Ghost gl = resolve_ghost(grid_, state, model_, p, PathEnd::left);
        Ghost gr = resolve_ghost(grid_, state, model_, p, PathEnd::right);

        flux.assign(n + 1, 0.0);
        for (int i = 0; i <= n; ++i) {
            double mu_up = i == 0 ? gl.mu : mu[i - 1];
            double w_up = i == 0 ? gl.omega : w[i - 1];
            double w_down = i == n ? gr.omega : w[i];
            double coef = w_up == 0.0 ? 0.0 : mu_up / w_up;
            flux[i] = coef * model_.godunov(w_up, w_down);
        }
        next[p].resize(n);
        for (int k = 0; k < n; ++k)
            next[p][k] = mu[k] - lambda * (flux[k + 1] - flux[k]);
        state.mass[p] += dt_ * (flux[0] - flux[n]);
    }

    state.field.mu = std::move(next);
    state.omega = accumulate_omega(grid_, state.field.mu);
    state.time += dt_;
    state.step += 1;

    if (config_.admissibility == SchemeConfig::Admissibility::every_step)
        check_admissibility(state);
}

void Simulator::check_admissibility(const SimState& state) const {
    for (int c = 0; c < grid_.physical_cell_count(); ++c) {
        const PathCellRef ref = grid_.aliases(c).front();
        double total = state.omega[ref.path][ref.cell];
        if (total > model_.rho_max() + kAdmissibleSlack) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "scheme: total density " << total << " exceeds rho_max after step "
                << state.step << "; dt = " << dt_ << " breaks the junction stability bound (max stable dt = "
                << max_stable_dt(grid_, model_) << ")";
            throw RegimeError(msg.str());
        }
    }
}

RunResult Simulator::run(SimState& state, const std::vector<double>& snapshot_times) const {
    std::vector<double> schedule = snapshot_times;
    std::sort(schedule.begin(), schedule.end());

    RunResult result;
    const double eps = 1e-9 * dt_;
    std::size_t si = 0;
    auto emit = [&]() {
        if (config_.admissibility == SchemeConfig::Admissibility::snapshots_only)
            check_admissibility(state);
        result.snapshots.push_back({state.time, state.step, state.field.mu, state.omega});
    };
    while (si < schedule.size() && schedule[si] <= state.time + eps) {
        emit();
        ++si;
    }
    while (state.time + eps < config_.t_final) {
        step(state);
        double total = 0.0;
        for (double m : state.mass) total += m;
        result.global_mass.push_back(total);
        bool due = false;
        while (si < schedule.size() && schedule[si] <= state.time + eps) {
            due = true;
            ++si;
        }
        if (due) emit();
    }
    // Entries past the last step (scheduling quirks) report the final state.
    while (si < schedule.size() && schedule[si] <= config_.t_final + eps) {
        emit();
        ++si;
    }
    return result;
}

SteadyResult Simulator::run_to_steady(SimState& state) const {
    SteadyResult result;
    PathArray previous;
    for (long i = 0; i < config_.max_steps; ++i) {
        previous = state.field.mu;
        step(state);
        ++result.steps;
        double change = 0.0;
        for (int p = 0; p < grid_.path_count(); ++p)
            for (int k = 0; k < grid_.cell_count(p); ++k)
                change = std::max(change, std::abs(state.field.mu[p][k] - previous[p][k]));
        result.last_change = change;
        if (change < config_.steady_tolerance) {
            result.converged = true;
            break;
        }
        ++result.effective_steps;
    }
    if (config_.admissibility == SchemeConfig::Admissibility::snapshots_only)
        check_admissibility(state);
    return result;
}

} // namespace multipath
