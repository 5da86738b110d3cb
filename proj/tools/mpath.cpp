// mpath: command-line front end for the multipath traffic engine.
//
// Exit codes: 0 success, 1 usage error, 2 model/validation error,
// 3 numerical-regime error (time-step bound broken, region-border data).

#include <CLI11.hpp>

#include "multipath/errors.hpp"
#include "multipath/io.hpp"
#include "multipath/merge.hpp"
#include "multipath/riemann.hpp"
#include "multipath/scheme.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

using namespace multipath;

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct FluxOptions {
    double rho_max = 1.0;
    double scale = 1.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--rho-max", rho_max, "maximal density (default 1)");
        cmd->add_option("--scale", scale, "quadratic flux scale (default 1)");
    }
    FluxModel model() const { return FluxModel::quadratic(rho_max, scale); }
};

struct MergeDataOptions {
    double ul = 0.0, vl = 0.0;
    double beta = -1.0, beta1 = -1.0, beta2 = -1.0;

    void attach(CLI::App* cmd, const char* beta_name) {
        cmd->add_option("--ul", ul, "density entering the first incoming road")->required();
        cmd->add_option("--vl", vl, "density entering the second incoming road")->required();
        cmd->add_option(std::string("--") + beta_name, beta, "downstream density (total)");
        cmd->add_option("--beta1", beta1, "downstream density, first-path share");
        cmd->add_option("--beta2", beta2, "downstream density, second-path share");
    }
    MergeBoundary boundary() const {
        if (beta >= 0.0) return {ul, vl, beta};
        if (beta1 >= 0.0 && beta2 >= 0.0)
            return MergeBoundary::with_components(ul, vl, beta1, beta2);
        throw CLI::ValidationError("downstream density required (total, or both shares)");
    }
};

struct StepOptions {
    double dt = 0.0;
    double cfl_safety = 0.9;

    void attach(CLI::App* cmd) {
        cmd->add_option("--dt", dt, "time step (default: derived from --cfl-safety)");
        cmd->add_option("--cfl-safety", cfl_safety, "fraction of the stable step (default 0.9)");
    }
    void apply(SchemeConfig& cfg) const {
        cfg.dt = dt;
        cfg.cfl_safety = cfl_safety;
    }
};

void write_wave_log_csv(const MergeRiemannSolution& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ModelError("cannot open '" + path + "' for writing");
    out << "stage,label,road,created,kind,sign,speed_min,speed_max,"
           "left_density,left_flux,right_density,right_flux,start_x,start_t\n";
    for (const LoggedWave& w : s.waves) {
        out << w.stage << ',' << w.label << ',' << to_string(w.road) << ','
            << (w.created ? 1 : 0) << ',' << to_string(w.wave.kind) << ','
            << to_string(w.wave.sign) << ',' << fmt(w.wave.speed_min) << ','
            << fmt(w.wave.speed_max) << ',' << fmt(w.wave.left.density) << ','
            << fmt(w.wave.left.flux) << ',' << fmt(w.wave.right.density) << ','
            << fmt(w.wave.right.flux) << ',' << fmt(w.start_x) << ',' << fmt(w.start_t) << '\n';
    }
    if (!out) throw ModelError("write failed for '" + path + "'");
}

std::vector<SnapshotRecord> records_of(const NetworkGrid& grid, const Snapshot& snap) {
    return make_snapshot_records(grid, snap.mu, snap.omega, snap.time);
}

int run_simulate(const std::string& file, double t_final, int snapshots,
                 const StepOptions& stepping, const std::string& out) {
    NetworkFile nf = load_network_file(file);
    NetworkGrid grid = make_grid(nf);
    SchemeConfig cfg;
    stepping.apply(cfg);
    cfg.t_final = t_final;
    Simulator sim(grid, nf.flux, cfg);
    SimState state = sim.make_state(make_field(nf, grid));

    std::vector<double> schedule{0.0};
    for (int i = 1; i <= snapshots; ++i)
        schedule.push_back(t_final * i / snapshots);
    RunResult result = sim.run(state, schedule);

    std::vector<SnapshotRecord> rows;
    for (const Snapshot& snap : result.snapshots) {
        std::vector<SnapshotRecord> r = records_of(grid, snap);
        rows.insert(rows.end(), r.begin(), r.end());
    }
    write_snapshots_csv(rows, out);

    double mass = 0.0;
    for (double m : state.mass) mass += m;
    std::cout << "steps " << state.step << "\n"
              << "time " << fmt(state.time) << "\n"
              << "dt " << fmt(sim.dt()) << "\n"
              << "mass " << fmt(mass) << "\n"
              << "snapshots " << result.snapshots.size() << "\n";
    return 0;
}

int run_steady(const std::string& file, double tol, const StepOptions& stepping,
               const std::string& out) {
    NetworkFile nf = load_network_file(file);
    NetworkGrid grid = make_grid(nf);
    SchemeConfig cfg;
    stepping.apply(cfg);
    cfg.steady_tolerance = tol;
    Simulator sim(grid, nf.flux, cfg);
    SimState state = sim.make_state(make_field(nf, grid));
    SteadyResult result = sim.run_to_steady(state);

    write_snapshots_csv(make_snapshot_records(grid, state.field.mu, state.omega, state.time), out);
    std::cout << "steps " << result.steps << "\n"
              << "effective_steps " << result.effective_steps << "\n"
              << "stopped " << (result.converged ? "tolerance" : "step-cap") << "\n"
              << "last_change " << fmt(result.last_change) << "\n";
    return 0;
}

int run_stationary(const FluxOptions& flux_opt, const MergeDataOptions& data, double lambda) {
    FluxModel model = flux_opt.model();
    MergeBoundary b = data.boundary();
    StationaryMergeSolution s = stationary_merge(model, b);
    std::cout << "region " << to_string(s.region) << "\n"
              << "mu1_before " << fmt(s.mu1_before) << "\n"
              << "mu2_before " << fmt(s.mu2_before) << "\n"
              << "omega_junction " << fmt(s.omega_junction) << "\n"
              << "mu1_junction " << fmt(s.mu1_junction) << "\n"
              << "mu2_junction " << fmt(s.mu2_junction) << "\n";
    for (double e : stability_eigenvalues(model, s, lambda))
        std::cout << "eigenvalue " << fmt(e) << "\n";
    return 0;
}

int run_riemann(const FluxOptions& flux_opt, double ul, double vl, double wr, double dx,
                const std::string& out) {
    FluxModel model = flux_opt.model();
    MergeRiemannSolution s = solve_merge_riemann(model, ul, vl, wr, dx);
    if (!out.empty()) write_wave_log_csv(s, out);
    std::cout << "region " << to_string(s.region) << "\n"
              << "u_bar " << fmt(s.u_bar) << "\n"
              << "v_bar " << fmt(s.v_bar) << "\n"
              << "z_bar " << fmt(s.z_bar) << "\n"
              << "w_bar " << fmt(s.w_bar) << "\n"
              << "waves " << s.waves.size() << "\n";
    return 0;
}

int run_check_cfl(const std::string& file, double dt) {
    NetworkFile nf = load_network_file(file);
    NetworkGrid grid = make_grid(nf);
    for (const auto& j : grid.junctions())
        std::cout << "junction " << j.node << " incoming " << j.incoming_roads
                  << " outgoing " << j.outgoing_roads << "\n";
    double limit = max_stable_dt(grid, nf.flux);
    std::cout << "governing_incoming " << grid.max_incoming_roads() << "\n"
              << "max_stable_dt " << fmt(limit) << "\n";
    if (dt > 0.0) {
        bool ok = dt <= limit;
        std::cout << "dt " << fmt(dt) << " " << (ok ? "PASS" : "FAIL") << "\n";
        if (!ok) {
            std::cerr << "error: regime: dt " << fmt(dt)
                      << " exceeds the stable limit " << fmt(limit) << "\n";
            return 3;
        }
    }
    return 0;
}

int run_classify(const FluxOptions& flux_opt, const MergeDataOptions& data) {
    std::cout << to_string(classify_region(flux_opt.model(), data.boundary())) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multipath traffic simulator"};
    app.require_subcommand(1);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run the scheme to a final time");
    std::string sim_file, sim_out;
    double sim_t_final = 1.0;
    int sim_snapshots = 1;
    StepOptions sim_step;
    simulate->add_option("file", sim_file, "network description")->required();
    simulate->add_option("--t-final", sim_t_final, "final time")->required();
    simulate->add_option("--snapshots", sim_snapshots, "evenly spaced snapshots after t=0")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--out", sim_out, "snapshot csv path")->required();
    sim_step.attach(simulate);

    // steady
    auto* steady = app.add_subcommand("steady", "run until the profile stops changing");
    std::string steady_file, steady_out;
    double steady_tol = 1e-12;
    StepOptions steady_step;
    steady->add_option("file", steady_file, "network description")->required();
    steady->add_option("--tol", steady_tol, "max per-cell change per step (default 1e-12)");
    steady->add_option("--out", steady_out, "profile csv path")->required();
    steady_step.attach(steady);

    // stationary
    auto* stationary = app.add_subcommand(
        "stationary", "analytic stationary merge state, split and eigenvalues");
    FluxOptions stat_flux;
    MergeDataOptions stat_data;
    double stat_lambda = 0.5;
    stat_data.attach(stationary, "beta");
    stat_flux.attach(stationary);
    stationary->add_option("--lambda", stat_lambda, "dt/dx ratio for the eigenvalues (default 0.5)");

    // riemann
    auto* riemann = app.add_subcommand("riemann", "wave construction for the merge problem");
    FluxOptions rie_flux;
    double rie_ul = 0.0, rie_vl = 0.0, rie_wr = 0.0, rie_dx = 1.0;
    std::string rie_out;
    riemann->add_option("--ul", rie_ul, "first incoming density")->required();
    riemann->add_option("--vl", rie_vl, "second incoming density")->required();
    riemann->add_option("--wr", rie_wr, "downstream density")->required();
    riemann->add_option("--dx", rie_dx, "junction cell width (default 1)");
    riemann->add_option("--out", rie_out, "wave log csv path");
    rie_flux.attach(riemann);

    // check-cfl
    auto* check = app.add_subcommand("check-cfl", "junction degrees and the stable time step");
    std::string check_file;
    double check_dt = 0.0;
    check->add_option("file", check_file, "network description")->required();
    check->add_option("--dt", check_dt, "proposed time step to verify");

    // classify
    auto* classify = app.add_subcommand("classify", "merge region label only");
    FluxOptions cls_flux;
    MergeDataOptions cls_data;
    cls_data.attach(classify, "beta");
    cls_flux.attach(classify);

    try {
        app.parse(argc, argv);
        if (simulate->parsed())
            return run_simulate(sim_file, sim_t_final, sim_snapshots, sim_step, sim_out);
        if (steady->parsed())
            return run_steady(steady_file, steady_tol, steady_step, steady_out);
        if (stationary->parsed())
            return run_stationary(stat_flux, stat_data, stat_lambda);
        if (riemann->parsed())
            return run_riemann(rie_flux, rie_ul, rie_vl, rie_wr, rie_dx, rie_out);
        if (check->parsed())
            return run_check_cfl(check_file, check_dt);
        if (classify->parsed())
            return run_classify(cls_flux, cls_data);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return 1;
    } catch (const RegimeError& e) {
        std::cerr << "error: regime: " << e.what() << "\n";
        return 3;
    } catch (const ModelError& e) {
        std::cerr << "error: model: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
