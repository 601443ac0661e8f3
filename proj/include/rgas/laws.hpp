#pragma once

#include <string>
#include <vector>
#include <stdexcept>

#include "rgas/vec3.hpp"
#include "rgas/rng.hpp"

namespace rgas {

/// Tail certification for tabulated radial laws. Moments can only be
/// certified when the behaviour beyond the grid is known.
enum class TailKind { Compact, PowerLaw, Unspecified };

/// Radially symmetric velocity law of the background particles.
/// Supported families: Maxwellian(sigma), UniformBall(radius) and
/// TabulatedRadial (linear interpolation of g(|v|) on a grid).
class BackgroundLaw {
public:
    enum class Kind { Maxwellian, UniformBall, TabulatedRadial };

    static BackgroundLaw maxwellian(double sigma);
    static BackgroundLaw uniform_ball(double radius);
    /// radii must be increasing from 0; values are the density g(|v|).
    /// For TailKind::PowerLaw the density continues as g(r_max)*(r/r_max)^-p.
    static BackgroundLaw tabulated_radial(std::vector<double> radii,
                                          std::vector<double> values,
                                          TailKind tail, double power = 0.0);

    /// Default-constructs a unit Maxwellian.
    BackgroundLaw() = default;

    Kind kind() const { return kind_; }
    double sigma() const { return sigma_; }
    double radius() const { return radius_; }
    TailKind tail() const { return tail_; }

    double density(const Vec3& v) const { return radial_density(norm(v)); }
    double radial_density(double r) const;

    /// Integral of the density over all of R^3 (should be 1 within 1e-6).
    double normalization() const;

    /// E|v| under the law.
    double mean_speed() const;

    /// int g(v) (1 + |v|^2) dv; +inf when the tail makes it diverge.
    double second_moment_weighted() const;

    /// ess sup of g(v)(1 + |v|^4); +inf for fat tails.
    double sup_weighted() const;

    /// beta = int g(v)(1 + |v|) dv = 1 + E|v| for a normalized law.
    double beta() const { return normalization() + mean_speed(); }

    /// Integral of the density over a plane at distance d from the origin.
    /// For a radial law this is 2 pi int_d^inf s g(s) ds.
    double plane_integral(double d) const;

    /// Radius beyond which the density is negligible (exact support for
    /// compact laws, a far Gaussian cutoff for the Maxwellian).
    double effective_support() const;

    /// Radii where the radial density is not smooth (table nodes, support
    /// edges); quadratures split at these points.
    std::vector<double> quadrature_breakpoints() const;

    Vec3 sample(RngStream& rng) const;
    /// Sample with density proportional to |v| g(v) (speed-biased).
    Vec3 sample_speed_biased(RngStream& rng) const;

private:
    void build_tables();

    Kind kind_ = Kind::Maxwellian;
    double sigma_ = 1.0;
    double radius_ = 1.0;
    TailKind tail_ = TailKind::Compact;
    double power_ = 0.0;
    std::vector<double> radii_, values_;
    // inverse-CDF tables for sampling the tabulated family
    std::vector<double> cdf_, cdf_biased_;
    double mass_biased_ = 0.0; // int r^3 g / int r^2 g normalizer helper
};

/// Law of the tagged particle's initial state: product of a spatial law on U
/// and a velocity law.
class InitialLaw {
public:
    enum class SpatialKind { UniformU, PointMass };
    enum class VelocityKind { PointMass, Maxwellian, TabulatedRadial };

    static InitialLaw uniform_point_velocity(const Vec3& v0);
    static InitialLaw uniform_maxwellian(double sigma);
    static InitialLaw point_point(const Vec3& x0, const Vec3& v0);
    static InitialLaw make(SpatialKind sk, const Vec3& x0, VelocityKind vk,
                           const Vec3& v0, double sigma,
                           const BackgroundLaw* tabulated = nullptr);

    SpatialKind spatial_kind() const { return spatial_; }
    VelocityKind velocity_kind() const { return velocity_; }
    const Vec3& x0() const { return x0_; }
    const Vec3& v0() const { return v0_; }
    double sigma() const { return sigma_; }

    Vec3 sample_position(RngStream& rng) const;
    Vec3 sample_velocity(RngStream& rng) const;

    /// True when f0 has a pointwise-evaluable density (no point-mass factor
    /// in velocity; a point mass in space is fine for conditionals but not
    /// for densities either).
    bool has_density() const;
    /// f0(x, v); throws when has_density() is false.
    double density(const Vec3& x, const Vec3& v) const;

    /// int f0(x,v) (1 + |v|^2) dx dv.
    double second_moment_weighted() const;

private:
    SpatialKind spatial_ = SpatialKind::UniformU;
    VelocityKind velocity_ = VelocityKind::PointMass;
    Vec3 x0_{0, 0, 0};
    Vec3 v0_{0, 0, 0};
    double sigma_ = 1.0;
    std::vector<double> radii_, values_; // tabulated velocity family
    BackgroundLaw tab_; // reuse the radial machinery for TabulatedRadial
    bool has_tab_ = false;
};

/// Finiteness report for the moment conditions the model requires of
/// (f0, g0): finite weighted second moments and a bounded (1+|v|^4)-weighted
/// sup of g0.
struct AdmissibilityReport {
    double second_moment_f0 = 0.0;
    double second_moment_g0 = 0.0;
    double sup_weighted_g0 = 0.0;
    bool admissible = false;
};

/// Numerically evaluates the moment conditions by radial quadrature with a
/// certified tail for each parametric family. Throws for tabulated laws
/// whose tail behaviour is unspecified.
AdmissibilityReport check_admissibility(const InitialLaw& f0, const BackgroundLaw& g0);

/// Cap above which a numerically evaluated moment counts as divergent.
inline constexpr double kMomentCap = 1e12;

} // namespace rgas
