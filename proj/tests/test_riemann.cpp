#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "multipath/errors.hpp"
#include "multipath/riemann.hpp"

#include <cmath>
#include <random>

using namespace multipath;

namespace {

const FluxModel f = FluxModel::quadratic();

/// Rebuilds a logged wave's kind/sign from its stored states alone (the
/// characteristic slopes come from the base flux, the speeds from the stored
/// flux values) and checks the claim.
void check_wave_consistency(const LoggedWave& w) {
    INFO("wave ", w.label);
    if (w.wave.kind == WaveKind::none) {
        CHECK(w.wave.left.density == w.wave.right.density);
        CHECK(w.wave.left.flux == w.wave.right.flux);
        CHECK_FALSE(w.created);
        return;
    }
    CHECK(w.created);
    double slope_l = f.flux_deriv(w.wave.left.density);
    double slope_r = f.flux_deriv(w.wave.right.density);
    if (w.wave.kind == WaveKind::shock) {
        CHECK(slope_l > slope_r);
        double speed = (w.wave.right.flux - w.wave.left.flux) /
                       (w.wave.right.density - w.wave.left.density);
        CHECK(w.wave.speed_min == speed);
        CHECK(w.wave.speed_max == speed);
        if (speed < -kZeroSpeedTolerance) CHECK(w.wave.sign == WaveSign::negative);
        else if (speed > kZeroSpeedTolerance) CHECK(w.wave.sign == WaveSign::positive);
        else CHECK(w.wave.sign == WaveSign::zero);
    } else {
        CHECK(slope_l < slope_r);
        CHECK(w.wave.speed_min == slope_l);
        CHECK(w.wave.speed_max == slope_r);
    }
}

MergeBoundary random_regular_boundary(std::mt19937_64& rng, double margin = 1e-3) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (;;) {
        MergeBoundary b;
        b.u_left = 0.02 + uni(rng) * 0.46;
        b.v_left = 0.02 + uni(rng) * 0.46;
        b.beta = 0.52 + uni(rng) * 0.46;
        double fu = f.flux(b.u_left), fv = f.flux(b.v_left), fb = f.flux(b.beta);
        if (std::abs(fu + fv - fb) < margin) continue;
        if (fu + fv > fb &&
            (std::abs(fu - 0.5 * fb) < margin || std::abs(fv - 0.5 * fb) < margin))
            continue;
        return b;
    }
}

} // namespace

TEST_CASE("classical riemann fan") {
    SUBCASE("up-jump with equal fluxes: standing shock") {
        Wave w = classical_wave(f, 0.2, 0.8);
        CHECK(w.kind == WaveKind::shock);
        CHECK(w.sign == WaveSign::zero);
        CHECK(w.speed_max == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("down-jump: spanning rarefaction") {
        Wave w = classical_wave(f, 0.8, 0.2);
        CHECK(w.kind == WaveKind::rarefaction);
        CHECK(w.sign == WaveSign::spanning);
        CHECK(w.speed_min == doctest::Approx(-0.6).epsilon(1e-14));
        CHECK(w.speed_max == doctest::Approx(0.6).epsilon(1e-14));
    }
    SUBCASE("equal states: no wave") {
        Wave w = classical_wave(f, 0.3, 0.3);
        CHECK(w.kind == WaveKind::none);
        CHECK(w.sign == WaveSign::zero);
    }
    SUBCASE("one-sided fans") {
        CHECK(classical_wave(f, 0.4, 0.1).sign == WaveSign::positive);
        CHECK(classical_wave(f, 0.9, 0.6).sign == WaveSign::negative);
    }
}

TEST_CASE("rarefaction interior rides the characteristic rays") {
    Wave w = classical_wave(f, 0.8, 0.2);
    REQUIRE(w.kind == WaveKind::rarefaction);
    // the fan edges reconnect to the flanking states
    CHECK(rarefaction_profile(f, w.speed_min) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(rarefaction_profile(f, w.speed_max) == doctest::Approx(0.2).epsilon(1e-12));
    // and f'(profile(xi)) = xi across the fan
    for (double xi = w.speed_min; xi <= w.speed_max; xi += 0.1)
        CHECK(f.flux_deriv(rarefaction_profile(f, xi)) == doctest::Approx(xi).epsilon(1e-12));
    CHECK_THROWS_AS(rarefaction_profile(f, 2.0), ModelError);
}

TEST_CASE("trace sets of the half problems") {
    DensityInterval n = attainable_negative(f, 0.3);
    CHECK(n.lo == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(n.hi == 1.0);
    n = attainable_negative(f, 0.5);
    CHECK(n.lo == 0.5);
    n = attainable_negative(f, 0.8);
    CHECK(n.lo == 0.5);

    DensityInterval p = attainable_positive(f, 0.8);
    CHECK(p.lo == 0.0);
    CHECK(p.hi == doctest::Approx(0.2).epsilon(1e-14));
    p = attainable_positive(f, 0.3);
    CHECK(p.hi == 0.5);
    p = attainable_positive(f, 0.5);
    CHECK(p.hi == 0.5);
}

TEST_CASE("attainable sets really produce one-signed waves") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        double rho = uni(rng);
        DensityInterval n = attainable_negative(f, rho);
        double inside = n.lo + uni(rng) * (n.hi - n.lo);
        if (inside != rho) {
            Wave w = classical_wave(f, rho, inside);
            CHECK(w.speed_max <= 1e-14);
        }
        DensityInterval p = attainable_positive(f, rho);
        double left = p.lo + uni(rng) * (p.hi - p.lo);
        if (left != rho) {
            Wave w = classical_wave(f, left, rho);
            CHECK(w.speed_min >= -1e-14);
        }
    }
}

TEST_CASE("two-flux wave construction") {
    ShiftedFlux plain(f, 0.0);
    ShiftedFlux raised(f, 0.25);

    SUBCASE("raised left flux against a lower right one: fast backward shock") {
        Wave w = two_flux_wave(raised, 0.5, plain, 0.6);
        CHECK(w.kind == WaveKind::shock);
        CHECK(w.sign == WaveSign::negative);
        CHECK(w.speed_max == doctest::Approx(-2.6).epsilon(1e-12));
    }
    SUBCASE("free state against the raised cell flux: forward shock") {
        double z = f.density_at_flux(0.2175, FluxModel::Branch::lower);
        Wave w = two_flux_wave(plain, z, raised, 0.5);
        CHECK(w.kind == WaveKind::shock);
        CHECK(w.sign == WaveSign::positive);
        CHECK(w.speed_max == doctest::Approx((0.5 - 0.2175) / (0.5 - z)).epsilon(1e-12));
    }
    SUBCASE("identical flux and state: nothing") {
        Wave w = two_flux_wave(raised, 0.4, raised, 0.4);
        CHECK(w.kind == WaveKind::none);
    }
    SUBCASE("equal slopes with different fluxes are undefined") {
        CHECK_THROWS_AS(two_flux_wave(plain, 0.5, raised, 0.5), RegimeError);
    }
    SUBCASE("two-flux rarefaction keeps the slope edges") {
        Wave w = two_flux_wave(raised, 0.7, plain, 0.2);
        CHECK(w.kind == WaveKind::rarefaction);
        CHECK(w.speed_min == doctest::Approx(f.flux_deriv(0.7)).epsilon(1e-14));
        CHECK(w.speed_max == doctest::Approx(f.flux_deriv(0.2)).epsilon(1e-14));
    }
}

TEST_CASE("merge riemann, free flow") {
    MergeRiemannSolution s = solve_merge_riemann(f, 0.1, 0.15, 0.6);
    CHECK(s.region == MergeRegion::A);
    double z = f.density_at_flux(f.flux(0.1) + f.flux(0.15), FluxModel::Branch::lower);
    CHECK(s.u_bar == 0.1);
    CHECK(s.v_bar == 0.15);
    CHECK(s.z_bar == doctest::Approx(z).epsilon(1e-13));
    CHECK(s.w_bar == s.z_bar);   // the free-flow state spills downstream
    CHECK(std::abs(s.z_bar - 0.3197) < 5e-5);

    CHECK(s.fluxes.initial_shift == 0.25);
    CHECK(s.fluxes.hat_shift == 0.0);
    CHECK(s.fluxes.tilde_shift == 0.0);
    REQUIRE(s.fluxes.tilde2_shift.has_value());
    CHECK(*s.fluxes.tilde2_shift == 0.0);

    CHECK_FALSE(s.find_wave("L1u")->created);
    CHECK_FALSE(s.find_wave("L1v")->created);
    CHECK_FALSE(s.find_wave("L4")->created);
    CHECK_FALSE(s.find_wave("L6")->created);
    CHECK(s.find_wave("L2")->wave.sign == WaveSign::positive);
    CHECK(s.find_wave("L3")->wave.sign == WaveSign::negative);
    CHECK(s.find_wave("L5")->wave.sign == WaveSign::positive);
    CHECK(s.find_wave("L7w")->wave.sign == WaveSign::positive);
    CHECK(s.find_wave("L7w")->wave.kind == WaveKind::shock);
    CHECK(s.waves.size() == 8);
    CHECK(flux_conservation_residual(f, s) < 1e-12);
}

TEST_CASE("merge riemann, one queue") {
    MergeRiemannSolution s = solve_merge_riemann(f, 0.3, 0.1, 0.6);
    CHECK(s.region == MergeRegion::B);
    double x = f.density_at_flux(f.flux(0.6) - f.flux(0.1), FluxModel::Branch::upper);
    CHECK(s.u_bar == doctest::Approx(x).epsilon(1e-13));
    CHECK(std::abs(s.u_bar - 0.8162) < 5e-5);
    CHECK(s.v_bar == 0.1);
    CHECK(s.z_bar == doctest::Approx(x).epsilon(1e-13));
    CHECK(s.w_bar == 0.6);

    CHECK(s.fluxes.hat_shift == doctest::Approx(f.flux(0.1)).epsilon(1e-14));
    CHECK(s.fluxes.tilde_shift == s.fluxes.hat_shift);
    REQUIRE(s.fluxes.hat2_shift.has_value());
    CHECK(*s.fluxes.hat2_shift == s.fluxes.tilde_shift);

    CHECK(s.find_wave("L5")->wave.sign == WaveSign::negative);
    const LoggedWave* l7u = s.find_wave("L7u");
    REQUIRE(l7u != nullptr);
    CHECK(l7u->created);
    CHECK(l7u->wave.kind == WaveKind::shock);
    CHECK(l7u->wave.sign == WaveSign::negative);
    CHECK_FALSE(s.find_wave("L7v")->created);
    CHECK(s.waves.size() == 9);
    CHECK(flux_conservation_residual(f, s) < 1e-12);
}

TEST_CASE("merge riemann, two queues") {
    MergeRiemannSolution s = solve_merge_riemann(f, 0.2, 0.3, 0.8);
    CHECK(s.region == MergeRegion::C);
    double x = f.density_at_flux(0.5 * f.flux(0.8), FluxModel::Branch::upper);
    CHECK(s.u_bar == doctest::Approx(x).epsilon(1e-13));
    CHECK(s.v_bar == s.u_bar);
    CHECK(s.z_bar == s.u_bar);
    CHECK(s.w_bar == 0.8);
    CHECK(std::abs(s.z_bar - 0.9123) < 5e-5);

    CHECK(s.fluxes.hat_shift == doctest::Approx(std::min(f.flux(0.2), f.flux(0.3))).epsilon(1e-14));
    CHECK(s.fluxes.tilde_shift == doctest::Approx(0.5 * f.flux(0.8)).epsilon(1e-14));

    CHECK(s.find_wave("L5")->wave.sign == WaveSign::negative);
    CHECK(s.find_wave("L7u")->wave.sign == WaveSign::negative);
    CHECK(s.find_wave("L7v")->wave.sign == WaveSign::negative);
    CHECK(s.find_wave("L7u")->created);
    CHECK(s.find_wave("L7v")->created);
    CHECK(flux_conservation_residual(f, s) < 1e-12);
}

TEST_CASE("merge riemann, mirrored queue") {
    MergeRiemannSolution s = solve_merge_riemann(f, 0.1, 0.3, 0.6);
    MergeRiemannSolution b = solve_merge_riemann(f, 0.3, 0.1, 0.6);
    CHECK(s.region == MergeRegion::BPrime);
    CHECK(s.u_bar == b.v_bar);
    CHECK(s.v_bar == b.u_bar);
    CHECK(s.z_bar == b.z_bar);
    CHECK(s.w_bar == b.w_bar);
    CHECK(s.find_wave("L7v")->created);
    CHECK_FALSE(s.find_wave("L7u")->created);
    CHECK(s.find_wave("L7v")->wave.sign == WaveSign::negative);
    CHECK(flux_conservation_residual(f, s) < 1e-12);
}

TEST_CASE("wave interaction geometry") {
    for (double dx : {1.0, 0.04}) {
        MergeRiemannSolution s = solve_merge_riemann(f, 0.1, 0.15, 0.6, dx);
        const LoggedWave* l2 = s.find_wave("L2");
        const LoggedWave* l3 = s.find_wave("L3");
        const LoggedWave* l5 = s.find_wave("L5");
        const LoggedWave* l7 = s.find_wave("L7w");
        double t1 = dx / (l2->wave.speed_max - l3->wave.speed_max);
        CHECK(l5->start_t == doctest::Approx(t1).epsilon(1e-13));
        CHECK(l5->start_x == doctest::Approx(l2->wave.speed_max * t1).epsilon(1e-13));
        CHECK(l5->start_x > 0.0);
        CHECK(l5->start_x < dx);
        CHECK(l7->start_t > l5->start_t);
        CHECK(l7->start_x == dx);
    }
}

TEST_CASE("wave log claims hold when recomputed from the stored states") {
    std::mt19937_64 rng(5150);
    for (int i = 0; i < 300; ++i) {
        MergeBoundary b = random_regular_boundary(rng);
        MergeRiemannSolution s = solve_merge_riemann(f, b.u_left, b.v_left, b.beta);
        for (const LoggedWave& w : s.waves) {
            check_wave_consistency(w);
            // Waves on the incoming roads leave the junction leftward, waves
            // on the outgoing road rightward.
            if (w.created && (w.road == RiemannRoad::incoming_first ||
                              w.road == RiemannRoad::incoming_second))
                CHECK(w.wave.sign == WaveSign::negative);
            if (w.created && w.road == RiemannRoad::outgoing)
                CHECK(w.wave.sign == WaveSign::positive);
            CHECK(w.stage <= 2);
        }
        CHECK(flux_conservation_residual(f, s) < 1e-12);
    }
}

TEST_CASE("junction fluxes are demand/supply minima at every stage") {
    std::mt19937_64 rng(6502);
    for (int i = 0; i < 300; ++i) {
        MergeBoundary b = random_regular_boundary(rng);
        MergeRiemannSolution s = solve_merge_riemann(f, b.u_left, b.v_left, b.beta);

        // Stage 0 at x = 0: each road sends min of its demand and the cell's supply.
        CHECK(std::abs(f.flux(s.u_tilde) -
                       std::min(f.demand(s.u_tilde), f.supply(s.z_hat))) < 1e-12);
        CHECK(std::abs(f.flux(s.v_tilde) -
                       std::min(f.demand(s.v_tilde), f.supply(s.z_hat))) < 1e-12);
        // Stage 0 at x = dx: the raised cell flux against the road supply.
        double tilde_out = f.flux(s.z_tilde) + s.fluxes.tilde_shift;
        double tilde_demand = f.demand(s.z_tilde) + s.fluxes.tilde_shift;
        CHECK(std::abs(tilde_out - std::min(tilde_demand, f.supply(s.w_hat))) < 1e-12);

        if (s.u_tilde2) {
            CHECK(std::abs(f.flux(*s.u_tilde2) -
                           std::min(f.demand(*s.u_tilde2), f.supply(*s.z_hat2))) < 1e-12);
            CHECK(std::abs(f.flux(*s.v_tilde2) -
                           std::min(f.demand(*s.v_tilde2), f.supply(*s.z_hat2))) < 1e-12);
            // Queued traces are reachable through backward waves only.
            if (*s.u_tilde2 != s.u_tilde)
                CHECK(attainable_negative(f, s.u_tilde).contains(*s.u_tilde2, 1e-12));
            if (*s.v_tilde2 != s.v_tilde)
                CHECK(attainable_negative(f, s.v_tilde).contains(*s.v_tilde2, 1e-12));
        }
        if (s.w_hat2 && *s.w_hat2 != s.w_hat)
            CHECK(attainable_positive(f, s.w_hat).contains(*s.w_hat2, 1e-12));
    }
}

TEST_CASE("asymptotic states match the stationary junction analysis") {
    std::mt19937_64 rng(8080);
    for (int i = 0; i < 300; ++i) {
        MergeBoundary b = random_regular_boundary(rng);
        MergeRiemannSolution r = solve_merge_riemann(f, b.u_left, b.v_left, b.beta);
        StationaryMergeSolution s = stationary_merge(f, b);
        CHECK(std::abs(r.u_bar - s.mu1_before) < 1e-12);
        CHECK(std::abs(r.v_bar - s.mu2_before) < 1e-12);
        CHECK(std::abs(r.z_bar - s.omega_junction) < 1e-12);
    }
}

TEST_CASE("merge riemann rejects out-of-regime data") {
    CHECK_THROWS_AS(solve_merge_riemann(f, 0.6, 0.1, 0.7), RegimeError);
    double u = f.density_at_flux(0.12, FluxModel::Branch::lower);
    CHECK_THROWS_AS(solve_merge_riemann(f, u, u, 0.6), RegimeError);   // region border
    CHECK_THROWS_AS(solve_merge_riemann(f, 0.1, 0.1, 0.7, -1.0), ModelError);
}
