#pragma once

#include <vector>

namespace multipath {

/// Concave traffic flux f on [0, rho_max] with f(0) = f(rho_max) = 0 and a
/// unique interior maximizer sigma (the critical density).
///
/// Two flavours are supported:
///  - quadratic: f(rho) = scale * rho * (rho_max - rho), the standard choice;
///  - tabulated: monotone cubic interpolation of user samples, built
///    separately on each side of sigma so the interpolant stays unimodal.
///
/// All evaluations accept densities up to 1e-12 outside [0, rho_max] (snapped
/// back to the interval) and reject anything farther out: silently accepting
/// large violations would hide scheme bugs.
class FluxModel {
public:
    enum class Branch { lower, upper };

    /// f(rho) = scale * rho * (rho_max - rho); sigma = rho_max / 2.
    static FluxModel quadratic(double rho_max = 1.0, double scale = 1.0);

    /// Interpolates (rho[i], flow[i]) samples. Requirements: rho strictly
    /// increasing from 0 to the maximal density, flow zero at both ends,
    /// sampled values strictly concave with a unique maximum.
    static FluxModel tabulated(std::vector<double> rho, std::vector<double> flow);

    FluxModel() : FluxModel(quadratic()) {}

    double rho_max() const { return rho_max_; }
    double sigma() const { return sigma_; }
    /// f(sigma), the road capacity.
    double peak_flow() const { return peak_flow_; }
    bool is_quadratic() const { return quadratic_; }
    double quadratic_scale() const { return scale_; }
    const std::vector<double>& sample_densities() const { return knots_; }
    const std::vector<double>& sample_flows() const { return values_; }

    /// f(rho).
    double flux(double rho) const;

    /// f'(rho); one-sided at the interval ends.
    double flux_deriv(double rho) const;

    /// The companion density on the other side of sigma carrying the same
    /// flux value: sharp(rho) != rho, f(sharp(rho)) = f(rho), and
    /// sharp(sigma) = sigma. The endpoints swap (0 <-> rho_max).
    double sharp(double rho) const;

    /// Inverse of f restricted to one side of sigma: the unique density at
    /// the given flux level with rho <= sigma (lower) or rho >= sigma
    /// (upper). Levels above peak_flow() are infeasible.
    double density_at_flux(double level, Branch branch) const;

    /// Godunov numerical flux G(left, right) of the Riemann problem between
    /// two neighbouring cell states.
    double godunov(double left, double right) const;

    /// Largest flow a cell at this density can emit: f(rho) below sigma,
    /// f(sigma) above. Equals G(rho, sigma).
    double demand(double rho) const;

    /// Largest flow a cell at this density can accept: f(sigma) below sigma,
    /// f(rho) above. Equals G(sigma, rho).
    double supply(double rho) const;

    /// sup |f'| over (0, rho_max); exact for the quadratic flavour, dense
    /// sampling plus one-sided end derivatives otherwise.
    double max_wave_speed() const;

    bool operator==(const FluxModel& other) const;

private:
    FluxModel(double rho_max, double scale);

    // A density argument snapped into [0, rho_max]; throws ModelError when
    // more than 1e-12 outside.
    double checked(double rho, const char* who) const;

    double tab_flux(double rho) const;
    double tab_deriv(double rho) const;
    void build_interpolant();
    void validate_samples() const;

    bool quadratic_ = true;
    double rho_max_ = 1.0;
    double scale_ = 1.0;
    double sigma_ = 0.5;
    double peak_flow_ = 0.25;

    // Tabulated flavour: sample knots plus Hermite slopes (monotone on each
    // side of sigma, zero slope at the sigma knot).
    std::vector<double> knots_;
    std::vector<double> values_;
    std::vector<double> slopes_;
    double max_speed_ = 1.0;
};

} // namespace multipath
