#include "multipath/flux.hpp"
#include "multipath/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace multipath {

namespace {

constexpr double kDomainSlack = 1e-12;   // snap-back tolerance on density input
constexpr double kRootTol = 1e-12;       // bisection tolerance in density

[[noreturn]] void domain_error(const char* who, double rho, double rho_max) {
    std::ostringstream msg;
    msg.precision(17);
    msg << who << ": density " << rho << " outside [0, " << rho_max << "]";
    throw ModelError(msg.str());
}

} // namespace

FluxModel::FluxModel(double rho_max, double scale) {
    if (!(rho_max > 0.0))
        throw ModelError("flux model: rho_max must be positive");
    if (!(scale > 0.0))
        throw ModelError("flux model: scale must be positive");
    quadratic_ = true;
    rho_max_ = rho_max;
    scale_ = scale;
    sigma_ = 0.5 * rho_max;
    peak_flow_ = scale * sigma_ * (rho_max - sigma_);
    max_speed_ = scale * rho_max;  // |f'(0)| = |f'(rho_max)|
}

FluxModel FluxModel::quadratic(double rho_max, double scale) {
    return FluxModel(rho_max, scale);
}

FluxModel FluxModel::tabulated(std::vector<double> rho, std::vector<double> flow) {
    FluxModel m(1.0, 1.0);
    m.quadratic_ = false;
    m.knots_ = std::move(rho);
    m.values_ = std::move(flow);
    m.validate_samples();
    m.rho_max_ = m.knots_.back();
    m.values_.front() = 0.0;
    m.values_.back() = 0.0;
    auto peak = std::max_element(m.values_.begin(), m.values_.end());
    m.sigma_ = m.knots_[static_cast<std::size_t>(peak - m.values_.begin())];
    m.peak_flow_ = *peak;
    m.build_interpolant();

    // sup |f'| by dense sampling; the one-sided end slopes are knot slopes.
    double speed = std::max(std::abs(m.slopes_.front()), std::abs(m.slopes_.back()));
    const int n = 4096;
    for (int i = 1; i < n; ++i)
        speed = std::max(speed, std::abs(m.tab_deriv(m.rho_max_ * i / n)));
    m.max_speed_ = speed;
    return m;
}

void FluxModel::validate_samples() const {
    if (knots_.size() < 3 || knots_.size() != values_.size())
        throw ModelError("tabulated flux: need at least 3 (rho, flow) samples");
    if (knots_.front() != 0.0)
        throw ModelError("tabulated flux: first sample must sit at rho = 0");
    for (std::size_t i = 1; i < knots_.size(); ++i)
        if (!(knots_[i] > knots_[i - 1]))
            throw ModelError("tabulated flux: sample densities must be strictly increasing");
    if (!(knots_.back() > 0.0))
        throw ModelError("tabulated flux: maximal density must be positive");
    if (std::abs(values_.front()) > kDomainSlack || std::abs(values_.back()) > kDomainSlack)
        throw ModelError("tabulated flux: flow must vanish at rho = 0 and at the maximal density");
    // Strict concavity of the samples: secant slopes strictly decreasing.
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
        double d = (values_[i + 1] - values_[i]) / (knots_[i + 1] - knots_[i]);
        if (!(d < prev))
            throw ModelError("tabulated flux: samples are not strictly concave");
        prev = d;
    }
    auto peak = std::max_element(values_.begin(), values_.end());
    if (peak == values_.begin() || peak + 1 == values_.end() || !(*peak > 0.0))
        throw ModelError("tabulated flux: the maximum must be positive and interior");
    for (auto it = values_.begin(); it != values_.end(); ++it)
        if (it != peak && std::abs(*it - *peak) <= kDomainSlack)
            throw ModelError("tabulated flux: the maximizer must be unique");
}

void FluxModel::build_interpolant() {
    // Fritsch-Carlson monotone slopes, built separately on the rising and the
    // falling side of sigma with a zero slope at the sigma knot.
    const std::size_t n = knots_.size();
    slopes_.assign(n, 0.0);
    std::vector<double> h(n - 1), d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = knots_[i + 1] - knots_[i];
        d[i] = (values_[i + 1] - values_[i]) / h[i];
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0) {
            slopes_[i] = 0.0;
        } else {
            double w1 = 2.0 * h[i] + h[i - 1];
            double w2 = h[i] + 2.0 * h[i - 1];
            slopes_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (m * d0 <= 0.0) return 0.0;
        if (std::abs(m) > 3.0 * std::abs(d0)) return 3.0 * d0;
        return m;
    };
    slopes_.front() = end_slope(h[0], h[1], d[0], d[1]);
    slopes_.back() = end_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    // Pin the maximum at the sigma knot.
    auto peak = std::max_element(values_.begin(), values_.end());
    slopes_[static_cast<std::size_t>(peak - values_.begin())] = 0.0;
}

double FluxModel::checked(double rho, const char* who) const {
    if (rho < 0.0) {
        if (rho < -kDomainSlack) domain_error(who, rho, rho_max_);
        return 0.0;
    }
    if (rho > rho_max_) {
        if (rho > rho_max_ + kDomainSlack) domain_error(who, rho, rho_max_);
        return rho_max_;
    }
    return rho;
}

double FluxModel::tab_flux(double rho) const {
    auto hi = std::upper_bound(knots_.begin(), knots_.end(), rho);
    std::size_t i = hi == knots_.begin() ? 0
                  : std::min(static_cast<std::size_t>(hi - knots_.begin()) - 1, knots_.size() - 2);
    double h = knots_[i + 1] - knots_[i];
    double t = (rho - knots_[i]) / h;
    double t2 = t * t, t3 = t2 * t;
    return values_[i] * (2.0 * t3 - 3.0 * t2 + 1.0)
         + h * slopes_[i] * (t3 - 2.0 * t2 + t)
         + values_[i + 1] * (-2.0 * t3 + 3.0 * t2)
         + h * slopes_[i + 1] * (t3 - t2);
}

double FluxModel::tab_deriv(double rho) const {
    auto hi = std::upper_bound(knots_.begin(), knots_.end(), rho);
    std::size_t i = hi == knots_.begin() ? 0
                  : std::min(static_cast<std::size_t>(hi - knots_.begin()) - 1, knots_.size() - 2);
    double h = knots_[i + 1] - knots_[i];
    double t = (rho - knots_[i]) / h;
    double t2 = t * t;
    return (values_[i] * (6.0 * t2 - 6.0 * t)
          + h * slopes_[i] * (3.0 * t2 - 4.0 * t + 1.0)
          + values_[i + 1] * (-6.0 * t2 + 6.0 * t)
          + h * slopes_[i + 1] * (3.0 * t2 - 2.0 * t)) / h;
}

double FluxModel::flux(double rho) const {
    rho = checked(rho, "flux");
    if (quadratic_) return scale_ * rho * (rho_max_ - rho);
    return tab_flux(rho);
}

double FluxModel::flux_deriv(double rho) const {
    rho = checked(rho, "flux_deriv");
    if (quadratic_) return scale_ * (rho_max_ - 2.0 * rho);
    return tab_deriv(rho);
}

double FluxModel::sharp(double rho) const {
    rho = checked(rho, "sharp");
    if (quadratic_) return rho_max_ - rho;
    if (rho == sigma_) return sigma_;
    double level = tab_flux(rho);
    return density_at_flux(level, rho < sigma_ ? Branch::upper : Branch::lower);
}

double FluxModel::density_at_flux(double level, Branch branch) const {
    if (level < 0.0 || level > peak_flow_ + kDomainSlack) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "density_at_flux: level " << level << " infeasible, capacity is " << peak_flow_;
        throw ModelError(msg.str());
    }
    level = std::min(level, peak_flow_);
    if (quadratic_) {
        double disc = rho_max_ * rho_max_ - 4.0 * level / scale_;
        double root = std::sqrt(std::max(disc, 0.0));
        return branch == Branch::lower ? 0.5 * (rho_max_ - root) : 0.5 * (rho_max_ + root);
    }
    // Bisection on the monotone side.
    double lo, hi;
    bool rising = branch == Branch::lower;
    if (rising) { lo = 0.0; hi = sigma_; } else { lo = sigma_; hi = rho_max_; }
    while (hi - lo > kRootTol) {
        double mid = 0.5 * (lo + hi);
        double v = tab_flux(mid);
        if ((v < level) == rising) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

double FluxModel::godunov(double left, double right) const {
    left = checked(left, "godunov");
    right = checked(right, "godunov");
    if (left <= right) return std::min(flux(left), flux(right));
    if (left < sigma_) return flux(left);
    if (right <= sigma_) return peak_flow_;
    return flux(right);
}

double FluxModel::demand(double rho) const {
    rho = checked(rho, "demand");
    return rho <= sigma_ ? flux(rho) : peak_flow_;
}

double FluxModel::supply(double rho) const {
    rho = checked(rho, "supply");
    return rho <= sigma_ ? peak_flow_ : flux(rho);
}

double FluxModel::max_wave_speed() const {
    return max_speed_;
}

bool FluxModel::operator==(const FluxModel& other) const {
    if (quadratic_ != other.quadratic_) return false;
    if (quadratic_) return rho_max_ == other.rho_max_ && scale_ == other.scale_;
    return knots_ == other.knots_ && values_ == other.values_;
}

} // namespace multipath
