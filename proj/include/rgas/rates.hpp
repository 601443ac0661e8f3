#pragma once

#include <vector>

#include "rgas/laws.hpp"

namespace rgas {

/// Total collision rate of a tagged particle at velocity v against the
/// background law:
///   lambda(v) = int_{S^2} int g0(vbar) [(v - vbar) . nu]_+ dvbar dnu
///             = pi int g0(vbar) |v - vbar| dvbar,
/// using int_{S^2} [w . nu]_+ dnu = pi |w|. Evaluated by adaptive radial
/// quadrature (the angular average of |v - vbar| is closed-form for a
/// radial law). Relative accuracy ~1e-9. Throws when the quadrature does
/// not converge.
double loss_rate(const Vec3& v, const BackgroundLaw& g0);
double loss_rate_speed(double speed, const BackgroundLaw& g0);

/// Tabulated lambda(|v|) with linear interpolation plus the far-field
/// asymptote, and the moment beta = int g0 (1 + |v|) dv. Satisfies
/// lambda(v) <= pi (|v| + beta) everywhere; the dominating rate used for
/// thinning is 1.05 pi (|v| + beta).
class RateCache {
public:
    RateCache(const BackgroundLaw& g0, double r_max = 0.0, int n_nodes = 768);

    double lambda(const Vec3& v) const { return lambda_speed(norm(v)); }
    double lambda_speed(double speed) const;

    double beta() const { return beta_; }
    double dominating_rate(const Vec3& v) const {
        return 1.05 * M_PI * (norm(v) + beta_);
    }

    double grid_max() const { return r_max_; }
    const BackgroundLaw& law() const { return g0_; }

private:
    BackgroundLaw g0_;
    double beta_ = 0.0;
    double r_max_ = 0.0;
    double asym_coeff_ = 0.0; // lambda ~ pi (r + c/r) beyond the grid
    std::vector<double> speeds_, values_;
};

} // namespace rgas
