#include "multipath/riemann.hpp"
#include "multipath/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace multipath {

namespace {

WaveSign shock_sign(double speed) {
    if (speed < -kZeroSpeedTolerance) return WaveSign::negative;
    if (speed > kZeroSpeedTolerance) return WaveSign::positive;
    return WaveSign::zero;
}

WaveSign fan_sign(double lo, double hi) {
    if (lo >= 0.0) return WaveSign::positive;
    if (hi <= 0.0) return WaveSign::negative;
    return WaveSign::spanning;
}

} // namespace

const char* to_string(WaveKind k) {
    switch (k) {
    case WaveKind::none: return "none";
    case WaveKind::shock: return "shock";
    case WaveKind::rarefaction: return "rarefaction";
    }
    return "?";
}

const char* to_string(WaveSign s) {
    switch (s) {
    case WaveSign::zero: return "zero";
    case WaveSign::negative: return "negative";
    case WaveSign::positive: return "positive";
    case WaveSign::spanning: return "spanning";
    }
    return "?";
}

const char* to_string(RiemannRoad r) {
    switch (r) {
    case RiemannRoad::incoming_first: return "u";
    case RiemannRoad::incoming_second: return "v";
    case RiemannRoad::junction_cell: return "z";
    case RiemannRoad::outgoing: return "w";
    }
    return "?";
}

ShiftedFlux::ShiftedFlux(const FluxModel& model, double shift_value)
    : base(&model), shift(shift_value) {
    if (shift < 0.0 || shift > model.peak_flow() + 1e-12)
        throw ModelError("shifted flux: shift must lie in [0, f(sigma)]");
}

Wave classical_wave(const FluxModel& model, double rho_left, double rho_right) {
    Wave w;
    w.left = {rho_left, model.flux(rho_left)};
    w.right = {rho_right, model.flux(rho_right)};
    if (rho_left == rho_right) return w;
    if (rho_left < rho_right) {
        w.kind = WaveKind::shock;
        double speed = (w.right.flux - w.left.flux) / (rho_right - rho_left);
        w.speed_min = w.speed_max = speed;
        w.sign = shock_sign(speed);
    } else {
        w.kind = WaveKind::rarefaction;
        w.speed_min = model.flux_deriv(rho_left);
        w.speed_max = model.flux_deriv(rho_right);
        w.sign = fan_sign(w.speed_min, w.speed_max);
    }
    return w;
}

double rarefaction_profile(const FluxModel& model, double xi) {
    double edge = model.max_wave_speed();
    if (xi < -edge || xi > edge)
        throw ModelError("rarefaction profile: ray speed outside the characteristic range");
    if (model.is_quadratic()) {
        // f'(rho) = scale (rho_max - 2 rho)
        double scale = model.quadratic_scale();
        return 0.5 * (model.rho_max() - xi / scale);
    }
    // f' falls monotonically; bisect it.
    double lo = 0.0, hi = model.rho_max();
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        if (model.flux_deriv(mid) > xi) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

Wave two_flux_wave(const ShiftedFlux& left_flux, double rho_left,
                   const ShiftedFlux& right_flux, double rho_right) {
    Wave w;
    w.left = {rho_left, left_flux.flux(rho_left)};
    w.right = {rho_right, right_flux.flux(rho_right)};
    double slope_left = left_flux.deriv(rho_left);
    double slope_right = right_flux.deriv(rho_right);
    if (slope_left > slope_right) {
        // Characteristics collide; the jump condition on the two flux values
        // gives the shock speed.
        w.kind = WaveKind::shock;
        double speed = (w.right.flux - w.left.flux) / (rho_right - rho_left);
        w.speed_min = w.speed_max = speed;
        w.sign = shock_sign(speed);
    } else if (slope_left < slope_right) {
        w.kind = WaveKind::rarefaction;
        w.speed_min = slope_left;
        w.speed_max = slope_right;
        w.sign = fan_sign(w.speed_min, w.speed_max);
    } else {
        if (rho_left == rho_right && w.left.flux == w.right.flux)
            return w;  // no wave between identical states
        throw RegimeError("two-flux wave: equal characteristic slopes with differing "
                          "states or fluxes have no defined solution");
    }
    return w;
}

DensityInterval attainable_negative(const FluxModel& model, double rho_left) {
    if (rho_left <= model.sigma())
        return {model.sharp(rho_left), model.rho_max()};
    return {model.sigma(), model.rho_max()};
}

DensityInterval attainable_positive(const FluxModel& model, double rho_right) {
    if (rho_right <= model.sigma())
        return {0.0, model.sigma()};
    return {0.0, model.sharp(rho_right)};
}

const LoggedWave* MergeRiemannSolution::find_wave(const std::string& label) const {
    for (const LoggedWave& w : waves)
        if (w.label == label) return &w;
    return nullptr;
}

namespace {

void expect(bool ok, const char* what) {
    if (!ok)
        throw std::logic_error(std::string("merge riemann construction: ") + what);
}

MergeRiemannSolution solve_impl(const FluxModel& model, double u_left, double v_left,
                                double w_right, double dx) {
    MergeBoundary boundary{u_left, v_left, w_right};
    MergeRegion region = classify_region(model, boundary);
    if (region == MergeRegion::IsBoundary)
        throw RegimeError("merge riemann: boundary-region data has no unique asymptotic "
                          "state; construction refused");
    if (region == MergeRegion::BPrime) {
        // Same construction with the two incoming roads swapped.
        MergeRiemannSolution s = solve_impl(model, v_left, u_left, w_right, dx);
        s.region = MergeRegion::BPrime;
        std::swap(s.u_bar, s.v_bar);
        std::swap(s.u_tilde, s.v_tilde);
        std::swap(s.u_tilde2, s.v_tilde2);
        for (LoggedWave& w : s.waves) {
            if (w.road == RiemannRoad::incoming_first) w.road = RiemannRoad::incoming_second;
            else if (w.road == RiemannRoad::incoming_second) w.road = RiemannRoad::incoming_first;
            if (w.label.back() == 'u') w.label.back() = 'v';
            else if (w.label.back() == 'v') w.label.back() = 'u';
        }
        std::sort(s.waves.begin(), s.waves.end(),
                  [](const LoggedWave& a, const LoggedWave& b) {
                      return a.stage != b.stage ? a.stage < b.stage : a.label < b.label;
                  });
        return s;
    }

    const double sigma = model.sigma();
    const double fu = model.flux(u_left);
    const double fv = model.flux(v_left);
    const double fw = model.flux(w_right);

    MergeRiemannSolution s;
    s.region = region;
    s.cell_width = dx;
    s.fluxes.initial_shift = model.peak_flow();

    // Stage 0: boundary traces and junction-cell fluxes right after t = 0.
    s.u_tilde = u_left;
    s.v_tilde = v_left;
    s.w_hat = w_right;
    switch (region) {
    case MergeRegion::A:
        s.z_hat = model.density_at_flux(fu + fv, FluxModel::Branch::lower);
        s.z_tilde = w_right;
        s.fluxes.hat_shift = 0.0;
        s.fluxes.tilde_shift = 0.0;
        break;
    case MergeRegion::B:
        s.z_hat = u_left;
        s.z_tilde = model.density_at_flux(fw - fv, FluxModel::Branch::upper);
        s.fluxes.hat_shift = fv;
        s.fluxes.tilde_shift = fv;
        break;
    case MergeRegion::C:
        s.z_hat = std::max(u_left, v_left);
        s.z_tilde = model.density_at_flux(0.5 * fw, FluxModel::Branch::upper);
        s.fluxes.hat_shift = std::min(fu, fv);
        s.fluxes.tilde_shift = 0.5 * fw;
        break;
    default:
        break;
    }

    ShiftedFlux cell_initial(model, s.fluxes.initial_shift);
    ShiftedFlux hat(model, s.fluxes.hat_shift);
    ShiftedFlux tilde(model, s.fluxes.tilde_shift);

    LoggedWave l1u{"L1u", RiemannRoad::incoming_first, 0, false,
                   classical_wave(model, u_left, s.u_tilde), 0.0, 0.0};
    LoggedWave l1v{"L1v", RiemannRoad::incoming_second, 0, false,
                   classical_wave(model, v_left, s.v_tilde), 0.0, 0.0};
    LoggedWave l2{"L2", RiemannRoad::junction_cell, 0, true,
                  two_flux_wave(hat, s.z_hat, cell_initial, sigma), 0.0, 0.0};
    LoggedWave l3{"L3", RiemannRoad::junction_cell, 0, true,
                  two_flux_wave(cell_initial, sigma, tilde, s.z_tilde), dx, 0.0};
    LoggedWave l4{"L4", RiemannRoad::outgoing, 0, false,
                  classical_wave(model, s.w_hat, w_right), dx, 0.0};
    l1u.created = l1u.wave.kind != WaveKind::none;
    l1v.created = l1v.wave.kind != WaveKind::none;
    l4.created = l4.wave.kind != WaveKind::none;
    expect(!l1u.created && !l1v.created && !l4.created, "road waves must be suppressed");
    expect(l2.wave.kind == WaveKind::shock && l2.wave.sign == WaveSign::positive,
           "inbound cell wave must be a strictly positive shock");
    expect(l3.wave.kind == WaveKind::shock && l3.wave.sign == WaveSign::negative,
           "outbound cell wave must be a strictly negative shock");

    // Stage 1: the two cell shocks meet inside (0, dx).
    double s2 = l2.wave.speed_max;
    double s3 = l3.wave.speed_max;
    double t1 = dx / (s2 - s3);
    double x1 = s2 * t1;
    LoggedWave l5{"L5", RiemannRoad::junction_cell, 1, true,
                  two_flux_wave(hat, s.z_hat, tilde, s.z_tilde), x1, t1};
    expect(l5.wave.kind == WaveKind::shock, "interaction wave must be a shock");
    expect(l5.wave.sign == (region == MergeRegion::A ? WaveSign::positive : WaveSign::negative),
           "interaction wave has the wrong sign");

    s.waves = {l1u, l1v, l2, l3, l4, l5};

    // Stage 2: the interaction wave reaches a cell boundary and re-emits.
    double s5 = l5.wave.speed_max;
    if (region == MergeRegion::A) {
        double t2 = t1 + (dx - x1) / s5;
        s.z_tilde2 = s.z_hat;
        s.w_hat2 = s.z_hat;
        s.fluxes.tilde2_shift = s.fluxes.hat_shift;
        ShiftedFlux tilde2(model, *s.fluxes.tilde2_shift);
        LoggedWave l6{"L6", RiemannRoad::junction_cell, 2, false,
                      two_flux_wave(hat, s.z_hat, tilde2, *s.z_tilde2), dx, t2};
        LoggedWave l7{"L7w", RiemannRoad::outgoing, 2, true,
                      classical_wave(model, *s.w_hat2, w_right), dx, t2};
        l6.created = l6.wave.kind != WaveKind::none;
        expect(!l6.created, "re-emitted cell wave must be suppressed");
        expect(l7.wave.kind == WaveKind::shock && l7.wave.sign == WaveSign::positive,
               "spill-out wave must be a strictly positive shock");
        s.waves.push_back(l6);
        s.waves.push_back(l7);
        s.u_bar = s.u_tilde;
        s.v_bar = s.v_tilde;
        s.z_bar = s.z_hat;
        s.w_bar = *s.w_hat2;
    } else {
        double t2 = t1 + x1 / (-s5);
        if (region == MergeRegion::B) {
            s.u_tilde2 = model.density_at_flux(fw - fv, FluxModel::Branch::upper);
            s.v_tilde2 = v_left;
        } else {
            s.u_tilde2 = s.z_tilde;
            s.v_tilde2 = s.z_tilde;
        }
        s.z_hat2 = s.z_tilde;
        s.fluxes.hat2_shift = s.fluxes.tilde_shift;
        ShiftedFlux hat2(model, *s.fluxes.hat2_shift);
        LoggedWave l6{"L6", RiemannRoad::junction_cell, 2, false,
                      two_flux_wave(hat2, *s.z_hat2, tilde, s.z_tilde), 0.0, t2};
        LoggedWave l7u{"L7u", RiemannRoad::incoming_first, 2, true,
                       classical_wave(model, s.u_tilde, *s.u_tilde2), 0.0, t2};
        LoggedWave l7v{"L7v", RiemannRoad::incoming_second, 2, true,
                       classical_wave(model, s.v_tilde, *s.v_tilde2), 0.0, t2};
        l6.created = l6.wave.kind != WaveKind::none;
        l7u.created = l7u.wave.kind != WaveKind::none;
        l7v.created = l7v.wave.kind != WaveKind::none;
        expect(!l6.created, "re-emitted cell wave must be suppressed");
        expect(l7u.created && l7u.wave.kind == WaveKind::shock &&
               l7u.wave.sign == WaveSign::negative,
               "first queue wave must be a strictly negative shock");
        if (region == MergeRegion::B) {
            expect(!l7v.created, "second road keeps its state in a single-queue merge");
        } else {
            expect(l7v.created && l7v.wave.kind == WaveKind::shock &&
                   l7v.wave.sign == WaveSign::negative,
                   "second queue wave must be a strictly negative shock");
        }
        s.waves.push_back(l6);
        s.waves.push_back(l7u);
        s.waves.push_back(l7v);
        s.u_bar = *s.u_tilde2;
        s.v_bar = *s.v_tilde2;
        s.z_bar = s.z_tilde;
        s.w_bar = s.w_hat;
    }
    return s;
}

} // namespace

MergeRiemannSolution solve_merge_riemann(const FluxModel& model, double u_left,
                                         double v_left, double w_right, double cell_width) {
    if (!(cell_width > 0.0))
        throw ModelError("merge riemann: cell width must be positive");
    return solve_impl(model, u_left, v_left, w_right, cell_width);
}

double flux_conservation_residual(const FluxModel& model, const MergeRiemannSolution& s) {
    double r = 0.0;
    auto track = [&](double lhs, double rhs) { r = std::max(r, std::abs(lhs - rhs)); };
    // Inflow side (x = 0) and outflow side (x = dx), stage by stage.
    track(model.flux(s.u_tilde) + model.flux(s.v_tilde),
          model.flux(s.z_hat) + s.fluxes.hat_shift);
    track(model.flux(s.z_tilde) + s.fluxes.tilde_shift, model.flux(s.w_hat));
    if (s.u_tilde2 && s.v_tilde2 && s.z_hat2 && s.fluxes.hat2_shift)
        track(model.flux(*s.u_tilde2) + model.flux(*s.v_tilde2),
              model.flux(*s.z_hat2) + *s.fluxes.hat2_shift);
    if (s.z_tilde2 && s.w_hat2 && s.fluxes.tilde2_shift)
        track(model.flux(*s.z_tilde2) + *s.fluxes.tilde2_shift, model.flux(*s.w_hat2));
    return r;
}

} // namespace multipath
