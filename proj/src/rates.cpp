#include "rgas/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace rgas {

namespace {

// Spherical average of |v - vbar| over |vbar| = r for |v| = c:
// ((c+r)^3 - |c-r|^3) / (6 c r), with the obvious limits at c = 0 or r = 0.
double angular_mean_reldist(double c, double r) {
    if (c <= 0.0) return r;
    if (r <= 0.0) return c;
    const double p = c + r;
    const double q = std::fabs(c - r);
    return (p * p * p - q * q * q) / (6.0 * c * r);
}

} // namespace

double loss_rate_speed(double speed, const BackgroundLaw& g0) {
    if (!(speed >= 0.0) || !std::isfinite(speed))
        throw std::invalid_argument("loss_rate: speed must be finite and >= 0");
    // split at the law's kinks and at r = speed (kink of the angular factor)
    std::vector<double> pts = g0.quadrature_breakpoints();
    const double hi = g0.effective_support();
    if (speed > 0.0 && speed < hi) pts.push_back(speed);
    std::sort(pts.begin(), pts.end());
    const auto integrand = [&](double r) {
        return 4.0 * M_PI * r * r * g0.radial_density(r) * angular_mean_reldist(speed, r);
    };
    double integral = 0.0, err_total = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (!(pts[i] > pts[i - 1])) continue;
        double err = 0.0;
        integral += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            integrand, pts[i - 1], pts[i], 10, 1e-11, &err);
        err_total += err;
    }
    if (!(err_total <= 1e-6 * std::max(integral, 1e-30)))
        throw std::runtime_error("loss_rate: quadrature did not converge");
    return M_PI * integral;
}

double loss_rate(const Vec3& v, const BackgroundLaw& g0) {
    return loss_rate_speed(norm(v), g0);
}

RateCache::RateCache(const BackgroundLaw& g0, double r_max, int n_nodes) : g0_(g0) {
    if (n_nodes < 8) throw std::invalid_argument("RateCache: too few nodes");
    beta_ = g0.beta();
    r_max_ = r_max > 0.0 ? r_max : 2.0 * g0.effective_support() + 1.0;
    speeds_.resize(static_cast<std::size_t>(n_nodes));
    values_.resize(static_cast<std::size_t>(n_nodes));
    for (int i = 0; i < n_nodes; ++i) {
        const double s = r_max_ * i / (n_nodes - 1);
        speeds_[static_cast<std::size_t>(i)] = s;
        values_[static_cast<std::size_t>(i)] = loss_rate_speed(s, g0);
    }
    // lambda(c) ~ pi (c + E|vbar|^2 / (3 c)) for large c (radial law)
    const double second_moment = g0.second_moment_weighted() - g0.normalization();
    asym_coeff_ = second_moment / 3.0;
}

double RateCache::lambda_speed(double speed) const {
    if (!(speed >= 0.0)) throw std::invalid_argument("RateCache: negative speed");
    if (speed >= r_max_) return M_PI * (speed + asym_coeff_ / speed);
    const double h = r_max_ / static_cast<double>(speeds_.size() - 1);
    const auto i = static_cast<std::size_t>(speed / h);
    const std::size_t i1 = std::min(i + 1, speeds_.size() - 1);
    const double t = (speed - speeds_[i]) / h;
    return values_[i] * (1.0 - t) + values_[i1] * t;
}

} // namespace rgas
