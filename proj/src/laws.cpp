#include "rgas/laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace rgas {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double gk_integrate(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 12, 1e-10);
}

// piecewise quadrature splitting at the law's kink radii
double gk_integrate_split(const std::function<double(double)>& f, double a, double b,
                          const std::vector<double>& breakpoints) {
    std::vector<double> pts{a, b};
    for (double p : breakpoints)
        if (p > a && p < b) pts.push_back(p);
    std::sort(pts.begin(), pts.end());
    double total = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i] > pts[i - 1]) total += gk_integrate(f, pts[i - 1], pts[i]);
    return total;
}

} // namespace

BackgroundLaw BackgroundLaw::maxwellian(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("maxwellian: sigma must be > 0");
    BackgroundLaw law;
    law.kind_ = Kind::Maxwellian;
    law.sigma_ = sigma;
    law.tail_ = TailKind::Compact; // unused for this family
    return law;
}

BackgroundLaw BackgroundLaw::uniform_ball(double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("uniform_ball: radius must be > 0");
    BackgroundLaw law;
    law.kind_ = Kind::UniformBall;
    law.radius_ = radius;
    return law;
}

BackgroundLaw BackgroundLaw::tabulated_radial(std::vector<double> radii,
                                              std::vector<double> values,
                                              TailKind tail, double power) {
    if (radii.size() < 2 || radii.size() != values.size())
        throw std::invalid_argument("tabulated_radial: need matching grids with >= 2 nodes");
    if (radii.front() != 0.0)
        throw std::invalid_argument("tabulated_radial: grid must start at r = 0");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1]))
            throw std::invalid_argument("tabulated_radial: grid must be increasing");
    for (double g : values)
        if (!(g >= 0.0) || !std::isfinite(g))
            throw std::invalid_argument("tabulated_radial: density values must be finite and >= 0");
    BackgroundLaw law;
    law.kind_ = Kind::TabulatedRadial;
    law.tail_ = tail;
    law.power_ = power;
    law.radii_ = std::move(radii);
    law.values_ = std::move(values);
    law.build_tables();
    return law;
}

void BackgroundLaw::build_tables() {
    // cumulative integrals of 4 pi r^2 g and 4 pi r^3 g on the grid
    // (trapezoid), used for inverse-CDF sampling
    const std::size_t n = radii_.size();
    cdf_.assign(n, 0.0);
    cdf_biased_.assign(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        const double r0 = radii_[i - 1], r1 = radii_[i];
        const double f0 = 4.0 * M_PI * r0 * r0 * values_[i - 1];
        const double f1 = 4.0 * M_PI * r1 * r1 * values_[i];
        cdf_[i] = cdf_[i - 1] + 0.5 * (f0 + f1) * (r1 - r0);
        cdf_biased_[i] = cdf_biased_[i - 1] + 0.5 * (f0 * r0 + f1 * r1) * (r1 - r0);
    }
    mass_biased_ = cdf_biased_.back();
}

double BackgroundLaw::radial_density(double r) const {
    switch (kind_) {
        case Kind::Maxwellian: {
            const double s2 = sigma_ * sigma_;
            return std::pow(2.0 * M_PI * s2, -1.5) * std::exp(-0.5 * r * r / s2);
        }
        case Kind::UniformBall:
            return r <= radius_ ? 3.0 / (4.0 * M_PI * radius_ * radius_ * radius_) : 0.0;
        case Kind::TabulatedRadial: {
            if (r <= radii_.back()) {
                auto it = std::upper_bound(radii_.begin(), radii_.end(), r);
                if (it == radii_.begin()) return values_.front();
                const std::size_t i = static_cast<std::size_t>(it - radii_.begin());
                if (i >= radii_.size()) return values_.back();
                const double t = (r - radii_[i - 1]) / (radii_[i] - radii_[i - 1]);
                return values_[i - 1] * (1.0 - t) + values_[i] * t;
            }
            if (tail_ == TailKind::PowerLaw)
                return values_.back() * std::pow(r / radii_.back(), -power_);
            return 0.0;
        }
    }
    return 0.0;
}

double BackgroundLaw::effective_support() const {
    switch (kind_) {
        case Kind::Maxwellian: return 12.0 * sigma_;
        case Kind::UniformBall: return radius_;
        case Kind::TabulatedRadial:
            return tail_ == TailKind::PowerLaw ? 64.0 * radii_.back() : radii_.back();
    }
    return 0.0;
}

std::vector<double> BackgroundLaw::quadrature_breakpoints() const {
    switch (kind_) {
        case Kind::Maxwellian: return {0.0, effective_support()};
        case Kind::UniformBall: return {0.0, radius_};
        case Kind::TabulatedRadial: {
            std::vector<double> pts = radii_;
            if (tail_ == TailKind::PowerLaw) pts.push_back(effective_support());
            return pts;
        }
    }
    return {};
}

double BackgroundLaw::normalization() const {
    if (kind_ == Kind::Maxwellian) return 1.0;
    if (kind_ == Kind::UniformBall) return 1.0;
    double total = gk_integrate_split(
        [this](double r) { return 4.0 * M_PI * r * r * radial_density(r); }, 0.0,
        radii_.back(), radii_);
    if (tail_ == TailKind::PowerLaw) {
        // int_{rmax}^inf 4 pi r^2 c (r/rmax)^-p dr, finite iff p > 3
        if (power_ <= 3.0) return kInf;
        const double rm = radii_.back();
        total += 4.0 * M_PI * values_.back() * rm * rm * rm / (power_ - 3.0);
    }
    return total;
}

double BackgroundLaw::mean_speed() const {
    switch (kind_) {
        case Kind::Maxwellian: return sigma_ * std::sqrt(8.0 / M_PI);
        case Kind::UniformBall: return 0.75 * radius_;
        case Kind::TabulatedRadial: {
            double total = gk_integrate_split(
                [this](double r) { return 4.0 * M_PI * r * r * r * radial_density(r); },
                0.0, radii_.back(), radii_);
            if (tail_ == TailKind::PowerLaw) {
                if (power_ <= 4.0) return kInf;
                const double rm = radii_.back();
                total += 4.0 * M_PI * values_.back() * std::pow(rm, 4) / (power_ - 4.0);
            }
            return total;
        }
    }
    return 0.0;
}

double BackgroundLaw::second_moment_weighted() const {
    switch (kind_) {
        case Kind::Maxwellian: return 1.0 + 3.0 * sigma_ * sigma_;
        case Kind::UniformBall: return 1.0 + 0.6 * radius_ * radius_;
        case Kind::TabulatedRadial: {
            double total = gk_integrate_split(
                [this](double r) {
                    return 4.0 * M_PI * r * r * (1.0 + r * r) * radial_density(r);
                },
                0.0, radii_.back(), radii_);
            if (tail_ == TailKind::PowerLaw) {
                // tail integrand ~ r^(4-p): finite iff p > 5
                if (power_ <= 5.0) return kInf;
                const double rm = radii_.back();
                const double c = values_.back();
                total += 4.0 * M_PI * c *
                         (rm * rm * rm / (power_ - 3.0) + std::pow(rm, 5) / (power_ - 5.0));
            }
            return total;
        }
    }
    return 0.0;
}

double BackgroundLaw::sup_weighted() const {
    auto weighted = [this](double r) { return radial_density(r) * (1.0 + std::pow(r, 4)); };
    switch (kind_) {
        case Kind::Maxwellian: {
            // g(r)(1+r^4) -> 0 at infinity; scan a fine grid out to the far cutoff
            double sup = 0.0;
            const double rmax = effective_support();
            for (int i = 0; i <= 4096; ++i) sup = std::max(sup, weighted(rmax * i / 4096.0));
            return sup;
        }
        case Kind::UniformBall:
            return weighted(radius_);
        case Kind::TabulatedRadial: {
            double sup = 0.0;
            for (std::size_t i = 0; i < radii_.size(); ++i) sup = std::max(sup, weighted(radii_[i]));
            if (tail_ == TailKind::PowerLaw && power_ < 4.0) return kInf;
            return sup;
        }
    }
    return 0.0;
}

double BackgroundLaw::plane_integral(double d) const {
    d = std::fabs(d);
    switch (kind_) {
        case Kind::Maxwellian: {
            const double s2 = sigma_ * sigma_;
            return std::exp(-0.5 * d * d / s2) / std::sqrt(2.0 * M_PI * s2);
        }
        case Kind::UniformBall: {
            if (d >= radius_) return 0.0;
            const double c = 3.0 / (4.0 * M_PI * radius_ * radius_ * radius_);
            return M_PI * c * (radius_ * radius_ - d * d);
        }
        case Kind::TabulatedRadial: {
            const double hi = effective_support();
            if (d >= hi) return 0.0;
            return 2.0 * M_PI *
                   gk_integrate_split([this](double s) { return s * radial_density(s); }, d,
                                      hi, radii_);
        }
    }
    return 0.0;
}

Vec3 BackgroundLaw::sample(RngStream& rng) const {
    switch (kind_) {
        case Kind::Maxwellian:
            return rng.normal3(sigma_);
        case Kind::UniformBall: {
            const double r = radius_ * std::cbrt(rng.u01());
            return rng.unit_sphere() * r;
        }
        case Kind::TabulatedRadial: {
            const double target = rng.u01() * cdf_.back();
            auto it = std::lower_bound(cdf_.begin(), cdf_.end(), target);
            std::size_t i = std::max<std::size_t>(1, static_cast<std::size_t>(it - cdf_.begin()));
            const double t = (target - cdf_[i - 1]) / std::max(cdf_[i] - cdf_[i - 1], 1e-300);
            const double r = radii_[i - 1] + t * (radii_[i] - radii_[i - 1]);
            return rng.unit_sphere() * r;
        }
    }
    return {};
}

Vec3 BackgroundLaw::sample_speed_biased(RngStream& rng) const {
    switch (kind_) {
        case Kind::Maxwellian: {
            // radius pdf ~ r^3 exp(-r^2/(2 s^2)): r = s sqrt(2 Gamma(2))
            const double g2 = -std::log(rng.u01_open() * rng.u01_open());
            return rng.unit_sphere() * (sigma_ * std::sqrt(2.0 * g2));
        }
        case Kind::UniformBall: {
            const double r = radius_ * std::pow(rng.u01(), 0.25);
            return rng.unit_sphere() * r;
        }
        case Kind::TabulatedRadial: {
            const double target = rng.u01() * cdf_biased_.back();
            auto it = std::lower_bound(cdf_biased_.begin(), cdf_biased_.end(), target);
            std::size_t i = std::max<std::size_t>(1, static_cast<std::size_t>(it - cdf_biased_.begin()));
            const double t =
                (target - cdf_biased_[i - 1]) / std::max(cdf_biased_[i] - cdf_biased_[i - 1], 1e-300);
            const double r = radii_[i - 1] + t * (radii_[i] - radii_[i - 1]);
            return rng.unit_sphere() * r;
        }
    }
    return {};
}

// ---------------------------------------------------------------------------

InitialLaw InitialLaw::uniform_point_velocity(const Vec3& v0) {
    InitialLaw law;
    law.spatial_ = SpatialKind::UniformU;
    law.velocity_ = VelocityKind::PointMass;
    law.v0_ = v0;
    return law;
}

InitialLaw InitialLaw::uniform_maxwellian(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("InitialLaw: sigma must be > 0");
    InitialLaw law;
    law.spatial_ = SpatialKind::UniformU;
    law.velocity_ = VelocityKind::Maxwellian;
    law.sigma_ = sigma;
    return law;
}

InitialLaw InitialLaw::point_point(const Vec3& x0, const Vec3& v0) {
    InitialLaw law;
    law.spatial_ = SpatialKind::PointMass;
    law.velocity_ = VelocityKind::PointMass;
    law.x0_ = x0;
    law.v0_ = v0;
    return law;
}

InitialLaw InitialLaw::make(SpatialKind sk, const Vec3& x0, VelocityKind vk,
                            const Vec3& v0, double sigma, const BackgroundLaw* tabulated) {
    InitialLaw law;
    law.spatial_ = sk;
    law.velocity_ = vk;
    law.x0_ = x0;
    law.v0_ = v0;
    law.sigma_ = sigma;
    if (vk == VelocityKind::TabulatedRadial) {
        if (!tabulated) throw std::invalid_argument("InitialLaw: tabulated velocity law missing");
        law.tab_ = *tabulated;
        law.has_tab_ = true;
    }
    return law;
}

Vec3 InitialLaw::sample_position(RngStream& rng) const {
    return spatial_ == SpatialKind::UniformU ? rng.point_in_unit_cube() : x0_;
}

Vec3 InitialLaw::sample_velocity(RngStream& rng) const {
    switch (velocity_) {
        case VelocityKind::PointMass: return v0_;
        case VelocityKind::Maxwellian: return rng.normal3(sigma_);
        case VelocityKind::TabulatedRadial: return tab_.sample(rng);
    }
    return {};
}

bool InitialLaw::has_density() const {
    return spatial_ == SpatialKind::UniformU && velocity_ != VelocityKind::PointMass;
}

double InitialLaw::density(const Vec3& /*x*/, const Vec3& v) const {
    if (!has_density())
        throw std::runtime_error("InitialLaw::density: law has a point-mass factor");
    if (velocity_ == VelocityKind::Maxwellian) {
        const double s2 = sigma_ * sigma_;
        return std::pow(2.0 * M_PI * s2, -1.5) * std::exp(-0.5 * norm2(v) / s2);
    }
    return tab_.density(v);
}

double InitialLaw::second_moment_weighted() const {
    switch (velocity_) {
        case VelocityKind::PointMass: return 1.0 + norm2(v0_);
        case VelocityKind::Maxwellian: return 1.0 + 3.0 * sigma_ * sigma_;
        case VelocityKind::TabulatedRadial: return tab_.second_moment_weighted();
    }
    return 0.0;
}

// ---------------------------------------------------------------------------

AdmissibilityReport check_admissibility(const InitialLaw& f0, const BackgroundLaw& g0) {
    if (g0.kind() == BackgroundLaw::Kind::TabulatedRadial &&
        g0.tail() == TailKind::Unspecified)
        throw std::runtime_error("check_admissibility: cannot certify moments "
                                 "of a tabulated law without tail decay metadata");

    AdmissibilityReport rep;
    rep.second_moment_f0 = f0.second_moment_weighted();
    rep.second_moment_g0 = g0.second_moment_weighted();
    rep.sup_weighted_g0 = g0.sup_weighted();
    auto ok = [](double x) { return std::isfinite(x) && x < kMomentCap; };
    rep.admissible = ok(rep.second_moment_f0) && ok(rep.second_moment_g0) &&
                     ok(rep.sup_weighted_g0);
    return rep;
}

} // namespace rgas
