#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "multipath/errors.hpp"
#include "multipath/merge.hpp"
#include "multipath/scheme.hpp"
#include "test_networks.hpp"

#include <cmath>
#include <random>

using namespace multipath;

namespace {

/// Classical Godunov reference update for one road with dirichlet ghosts.
std::vector<double> godunov_reference_step(const FluxModel& f, const std::vector<double>& rho,
                                           double ghost_left, double ghost_right, double lambda) {
    const int n = static_cast<int>(rho.size());
    std::vector<double> flux(n + 1), out(n);
    for (int i = 0; i <= n; ++i) {
        double l = i == 0 ? ghost_left : rho[i - 1];
        double r = i == n ? ghost_right : rho[i];
        flux[i] = f.godunov(l, r);
    }
    for (int k = 0; k < n; ++k)
        out[k] = rho[k] - lambda * (flux[k + 1] - flux[k]);
    return out;
}

DensityField random_admissible_field(const NetworkGrid& grid, std::mt19937_64& rng,
                                     double rho_max = 1.0) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    DensityField f = DensityField::zeros(grid);
    for (int c = 0; c < grid.physical_cell_count(); ++c) {
        const auto& refs = grid.aliases(c);
        double total = uni(rng) * rho_max;
        double weight_sum = 0.0;
        std::vector<double> w(refs.size());
        for (auto& x : w) weight_sum += (x = uni(rng) + 1e-3);
        for (std::size_t i = 0; i < refs.size(); ++i)
            f.mu[refs[i].path][refs[i].cell] = total * w[i] / weight_sum;
    }
    return f;
}

} // namespace

TEST_CASE("stable time step per junction layout") {
    FluxModel f = FluxModel::quadratic();
    CHECK(max_stable_dt(testnet::merge_grid(0.04), f) == doctest::Approx(0.02).epsilon(1e-14));
    CHECK(max_stable_dt(testnet::three_in_one_grid(0.03), f) == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(max_stable_dt(testnet::single_road_grid(1.0), f) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(max_stable_dt(testnet::diverge_grid(0.04), f) == doctest::Approx(0.04).epsilon(1e-14));
}

TEST_CASE("uniform state with matching boundaries is a fixed point") {
    NetworkGrid grid = testnet::single_road_grid(0.1);
    FluxModel f = FluxModel::quadratic();
    Simulator sim(grid, f, {});
    DensityField field = DensityField::zeros(grid);
    std::fill(field.mu[0].begin(), field.mu[0].end(), 0.3);
    field.left[0] = BoundaryCondition::dirichlet(0.3);
    field.right[0] = BoundaryCondition::dirichlet(0.3);
    SimState state = sim.make_state(field);
    std::vector<double> before = state.field.mu[0];
    for (int i = 0; i < 10; ++i) sim.step(state);
    CHECK(state.field.mu[0] == before);   // bitwise
}

TEST_CASE("merge worst case: junction cell gains both maximal fluxes") {
    // Full downstream, both incoming roads at the critical density, the
    // junction cell at 0.5: one step with dt/dx = 1/4 lands exactly on
    // 0.5 + 2 * 0.25 * f(sigma) = 0.625.
    NetworkGrid grid = testnet::merge_grid(0.04);
    testnet::MergeCells cells = testnet::merge_cells(grid);
    FluxModel f = FluxModel::quadratic();
    SchemeConfig cfg;
    cfg.dt = 0.25 * grid.dx();
    Simulator sim(grid, f, cfg);

    DensityField field = testnet::merge_field(grid, 0.5, 0.5, 0.5, 0.5);
    for (int p = 0; p < 2; ++p) {
        for (int k = 0; k < cells.junction_cell; ++k) field.mu[p][k] = 0.5;
        field.mu[p][cells.junction_cell] = 0.25;
        for (int k = cells.junction_cell + 1; k < grid.cell_count(p); ++k) field.mu[p][k] = 0.5;
    }
    SimState state = sim.make_state(field);
    sim.step(state);
    CHECK(state.omega[0][cells.junction_cell] == doctest::Approx(0.625).epsilon(1e-14));
    CHECK(state.field.mu[0][cells.junction_cell] == doctest::Approx(0.3125).epsilon(1e-14));
    CHECK(state.omega[0][cells.junction_cell] <= 1.0);
}

TEST_CASE("inflow front raises the mass by dt * f(boundary) per step") {
    NetworkGrid grid = testnet::single_road_grid(0.04);
    FluxModel f = FluxModel::quadratic();
    SchemeConfig cfg;
    cfg.dt = 0.5 * max_stable_dt(grid, f);
    Simulator sim(grid, f, cfg);
    DensityField field = DensityField::zeros(grid);
    field.left[0] = BoundaryCondition::dirichlet(0.1);
    field.right[0] = BoundaryCondition::dirichlet(0.0);
    SimState state = sim.make_state(field);
    double expected = sim.dt() * f.flux(0.1);
    for (int n = 0; n < 20; ++n) {
        double before = path_masses(grid, state.field.mu)[0];
        sim.step(state);
        double after = path_masses(grid, state.field.mu)[0];
        CHECK(after - before == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("run with t_final = 0 emits only the initial snapshot") {
    NetworkGrid grid = testnet::single_road_grid(0.1);
    Simulator sim(grid, FluxModel::quadratic(), {});
    SimState state = sim.make_state(DensityField::zeros(grid));
    RunResult r = sim.run(state, {0.0});
    CHECK(r.snapshots.size() == 1);
    CHECK(r.snapshots[0].time == 0.0);
    CHECK(state.step == 0);
}

TEST_CASE("closed ring conserves every path mass") {
    NetworkGrid grid = testnet::ring_grid(0.05);
    FluxModel f = FluxModel::quadratic();
    Simulator sim(grid, f, {});
    DensityField field = DensityField::zeros(grid);
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> uni(0.0, 0.9);
    for (double& v : field.mu[0]) v = uni(rng);
    field.left[0] = BoundaryCondition::periodic();
    field.right[0] = BoundaryCondition::periodic();
    SimState state = sim.make_state(field);
    double initial = path_masses(grid, state.field.mu)[0];
    for (int n = 0; n < 10000; ++n) sim.step(state);
    double final_mass = path_masses(grid, state.field.mu)[0];
    CHECK(std::abs(final_mass - initial) <= 1e-12 * initial);
}

TEST_CASE("zero-flux walls conserve every path mass on a merge") {
    NetworkGrid grid = testnet::merge_grid(0.1);
    FluxModel f = FluxModel::quadratic();
    Simulator sim(grid, f, {});
    std::mt19937_64 rng(17);
    DensityField field = random_admissible_field(grid, rng);
    SimState state = sim.make_state(field);
    std::vector<double> initial = path_masses(grid, state.field.mu);
    for (int n = 0; n < 1000; ++n) sim.step(state);
    std::vector<double> final_mass = path_masses(grid, state.field.mu);
    for (int p = 0; p < 2; ++p)
        CHECK(std::abs(final_mass[p] - initial[p]) <= 1e-12 * std::max(initial[p], 1e-30));
}

TEST_CASE("single path reproduces the classical godunov scheme bitwise") {
    NetworkGrid grid = testnet::single_road_grid(0.02);
    FluxModel f = FluxModel::quadratic();
    SchemeConfig cfg;
    cfg.dt = 0.9 * max_stable_dt(grid, f);
    Simulator sim(grid, f, cfg);

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    DensityField field = DensityField::zeros(grid);
    for (double& v : field.mu[0]) v = uni(rng);
    field.left[0] = BoundaryCondition::dirichlet(0.2);
    field.right[0] = BoundaryCondition::dirichlet(0.7);
    SimState state = sim.make_state(field);

    std::vector<double> reference = state.field.mu[0];
    double lambda = sim.dt() / grid.dx();
    for (int n = 0; n < 100; ++n) {
        reference = godunov_reference_step(f, reference, 0.2, 0.7, lambda);
        sim.step(state);
        REQUIRE(state.field.mu[0] == reference);   // bitwise
    }
}

TEST_CASE("steady merge matches the analytic stationary state") {
    FluxModel f = FluxModel::quadratic();
    NetworkGrid grid = testnet::merge_grid(0.2);   // 5 cells per arc is enough
    testnet::MergeCells cells = testnet::merge_cells(grid);
    SchemeConfig cfg;
    cfg.steady_tolerance = 1e-13;
    Simulator sim(grid, f, cfg);

    struct Case {
        double ul, vl, b1, b2;
    };
    for (const Case& c : {Case{0.1, 0.15, 0.3, 0.3},    // free flow
                          Case{0.3, 0.1, 0.35, 0.25},   // one queue
                          Case{0.2, 0.3, 0.3, 0.5}}) {  // two queues
        SimState state = sim.make_state(testnet::merge_field(grid, c.ul, c.vl, c.b1, c.b2));
        SteadyResult r = sim.run_to_steady(state);
        REQUIRE(r.converged);
        StationaryMergeSolution analytic =
            stationary_merge(f, MergeBoundary::with_components(c.ul, c.vl, c.b1, c.b2));
        CHECK(state.field.mu[0][cells.before] ==
              doctest::Approx(analytic.mu1_before).epsilon(1e-6));
        CHECK(state.field.mu[1][cells.before] ==
              doctest::Approx(analytic.mu2_before).epsilon(1e-6));
        CHECK(state.omega[0][cells.junction_cell] ==
              doctest::Approx(analytic.omega_junction).epsilon(1e-6));
        CHECK(state.field.mu[0][cells.junction_cell] ==
              doctest::Approx(analytic.mu1_junction).epsilon(1e-6));
        CHECK(state.field.mu[1][cells.junction_cell] ==
              doctest::Approx(analytic.mu2_junction).epsilon(1e-6));
    }
}

TEST_CASE("run_to_steady on a stationary field reports zero effective steps") {
    NetworkGrid grid = testnet::single_road_grid(0.1);
    Simulator sim(grid, FluxModel::quadratic(), {});
    DensityField field = DensityField::zeros(grid);
    std::fill(field.mu[0].begin(), field.mu[0].end(), 0.4);
    field.left[0] = BoundaryCondition::dirichlet(0.4);
    field.right[0] = BoundaryCondition::dirichlet(0.4);
    SimState state = sim.make_state(field);
    std::vector<double> before = state.field.mu[0];
    SteadyResult r = sim.run_to_steady(state);
    CHECK(r.converged);
    CHECK(r.effective_steps == 0);
    CHECK(state.field.mu[0] == before);
}

TEST_CASE("standard time step is not enough at a merge") {
    // dt/dx = 0.95 respects the single-road bound (sup|f'| = 1) but exceeds
    // the merge bound 1/2: the junction cell overshoots rho_max.
    NetworkGrid grid = testnet::merge_grid(0.04);
    testnet::MergeCells cells = testnet::merge_cells(grid);
    FluxModel f = FluxModel::quadratic();
    SchemeConfig cfg;
    cfg.dt = 0.95 * grid.dx();
    REQUIRE(cfg.dt <= grid.dx() / f.max_wave_speed());     // standard bound holds
    REQUIRE(cfg.dt > max_stable_dt(grid, f));              // junction bound broken

    DensityField field = testnet::merge_field(grid, 0.5, 0.5, 0.5, 0.5);
    for (int p = 0; p < 2; ++p) {
        for (int k = 0; k < cells.junction_cell; ++k) field.mu[p][k] = 0.5;
        field.mu[p][cells.junction_cell] = 0.25;
        for (int k = cells.junction_cell + 1; k < grid.cell_count(p); ++k) field.mu[p][k] = 0.5;
    }

    SUBCASE("with per-step checks the step throws") {
        cfg.admissibility = SchemeConfig::Admissibility::every_step;
        Simulator sim(grid, f, cfg);
        SimState state = sim.make_state(field);
        CHECK_THROWS_AS((sim.step(state), sim.step(state)), RegimeError);
    }
    SUBCASE("without checks the overshoot is visible in the field") {
        cfg.admissibility = SchemeConfig::Admissibility::off;
        Simulator sim(grid, f, cfg);
        SimState state = sim.make_state(field);
        double peak = 0.0;
        for (int n = 0; n < 5 && peak <= 1.0 + 1e-12; ++n) {
            sim.step(state);
            peak = std::max(peak, state.omega[0][cells.junction_cell]);
        }
        CHECK(peak > 1.0 + 1e-12);
    }
}

TEST_CASE("mass ledger agrees with direct summation") {
    NetworkGrid grid = testnet::merge_grid(0.1);
    FluxModel f = FluxModel::quadratic();
    Simulator sim(grid, f, {});
    SimState state = sim.make_state(testnet::merge_field(grid, 0.2, 0.3, 0.3, 0.3));
    for (int n = 0; n < 500; ++n) sim.step(state);
    std::vector<double> direct = path_masses(grid, state.field.mu);
    for (int p = 0; p < 2; ++p)
        CHECK(std::abs(state.mass[p] - direct[p]) <= 1e-12 * std::max(1.0, direct[p]));
}

TEST_CASE("densities stay non-negative under the junction-aware bound") {
    FluxModel f = FluxModel::quadratic();
    NetworkGrid merge = testnet::merge_grid(0.2);
    NetworkGrid diverge = testnet::diverge_grid(0.2);
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const NetworkGrid& grid = trial % 2 == 0 ? merge : diverge;
        SchemeConfig cfg;
        cfg.dt = 0.999 * max_stable_dt(grid, f);
        Simulator sim(grid, f, cfg);
        DensityField field = random_admissible_field(grid, rng);
        for (int p = 0; p < grid.path_count(); ++p) {
            field.left[p] = BoundaryCondition::dirichlet(0.4 * uni(rng));
            field.right[p] = BoundaryCondition::dirichlet(0.4 * uni(rng));
        }
        SimState state = sim.make_state(field);
        for (int n = 0; n < 30; ++n) {
            sim.step(state);
            for (int p = 0; p < grid.path_count(); ++p)
                for (double v : state.field.mu[p])
                    REQUIRE(v >= 0.0);
        }
        REQUIRE(check_admissible(grid, state.field.mu, f.rho_max()).admissible());
    }
}

TEST_CASE("state construction rejects broken setups") {
    NetworkGrid grid = testnet::merge_grid(0.2);
    FluxModel f = FluxModel::quadratic();
    Simulator sim(grid, f, {});

    SUBCASE("wrong shape") {
        DensityField field = DensityField::zeros(grid);
        field.mu[0].pop_back();
        CHECK_THROWS_AS(sim.make_state(field), ModelError);
    }
    SUBCASE("shared right ghosts exceeding rho_max") {
        DensityField field = testnet::merge_field(grid, 0.1, 0.1, 0.6, 0.6);
        CHECK_THROWS_AS(sim.make_state(field), ModelError);
    }
    SUBCASE("inadmissible initial data") {
        DensityField field = testnet::merge_field(grid, 0.1, 0.1, 0.3, 0.3);
        field.mu[0][grid.cell_count(0) - 1] = 0.7;
        field.mu[1][grid.cell_count(1) - 1] = 0.7;   // shared cell at 1.4
        CHECK_THROWS_AS(sim.make_state(field), ModelError);
    }
    SUBCASE("periodic on a non-cycle") {
        DensityField field = DensityField::zeros(grid);
        field.left[0] = BoundaryCondition::periodic();
        field.right[0] = BoundaryCondition::periodic();
        field.left[1] = BoundaryCondition::dirichlet(0.1);
        field.right[1] = BoundaryCondition::dirichlet(0.1);
        CHECK_THROWS_AS(sim.make_state(field), ModelError);
    }
    SUBCASE("mixed kinds on a shared ghost") {
        DensityField field = testnet::merge_field(grid, 0.1, 0.1, 0.3, 0.3);
        field.right[1] = BoundaryCondition::zero_flux();
        CHECK_THROWS_AS(sim.make_state(field), ModelError);
    }
}

TEST_CASE("junction cell update equals the buffer balance") {
    NetworkGrid grid = testnet::merge_grid(0.2);
    testnet::MergeCells cells = testnet::merge_cells(grid);
    FluxModel f = FluxModel::quadratic();
    SchemeConfig cfg;
    cfg.dt = max_stable_dt(grid, f);
    Simulator sim(grid, f, cfg);
    double lambda = sim.dt() / grid.dx();

    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        DensityField field = random_admissible_field(grid, rng);
        SimState state = sim.make_state(field);
        double mu1 = state.field.mu[0][cells.before];
        double mu2 = state.field.mu[1][cells.before];
        double wj = state.omega[0][cells.junction_cell];
        double wj1 = state.omega[0][cells.junction_cell + 1];
        double predicted = buffer_step(f, wj, wj1, mu1, mu2, lambda);
        sim.step(state);
        CHECK(std::abs(state.omega[0][cells.junction_cell] - predicted) <= 1e-14);
    }
}
