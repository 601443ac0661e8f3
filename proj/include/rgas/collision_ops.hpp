#pragma once

#include <vector>

#include "rgas/density_grid.hpp"
#include "rgas/rates.hpp"

namespace rgas {

/// Loss semigroup: (T(t) f)(x, v) = exp(-t lambda(v)) f(x - t v, v).
/// VelocityOnly densities skip the spatial shift (a spatially homogeneous
/// f stays homogeneous); PhaseSpace densities are shifted periodically with
/// trilinear weights.
KineticDensity semigroup_T(const KineticDensity& f, double t, const RateCache& rates);

/// Node counts for the gain quadrature (sphere x rotated Cartesian).
struct GainQuadrature {
    int n_sphere_theta = 16;
    int n_sphere_phi = 32;
    int n_line = 24;
    int n_plane = 24;
};

struct GainValue {
    double value = 0.0;
    /// Fraction of the kernel weight whose pre-collisional velocity falls
    /// outside the grid extent (that part contributes zero).
    double out_of_grid_fraction = 0.0;
};

/// Gain operator in spherical form at velocity v:
///   Q+[f](v) = int_{S^2} int f(v') g0(vbar') [(v - vbar) . nu]_+ dvbar dnu,
/// with v' = v + nu (nu.(vbar - v)) and vbar' = vbar - nu (nu.(vbar - v)).
/// Numerical quadrature over S^2 x R^3 in per-node rotated coordinates;
/// f is interpolated (tricubically) at the pre-collisional velocities.
GainValue gain_sphere_detailed(const KineticDensity& f, const Vec3& v,
                               const BackgroundLaw& g0, const GainQuadrature& q = {});
double gain_sphere(const KineticDensity& f, const Vec3& v, const BackgroundLaw& g0,
                   const GainQuadrature& q = {});

/// Carleman kernel k(v, v*) = (1/|v - v*|) int_{E} g0(w) dw over the plane
/// E = { w : w.(v - v*) = v.(v - v*) }. The plane integral reduces to
/// 2 pi int_d^inf s g0(s) ds at plane distance d = |v.(v - v*)|/|v - v*|
/// (closed form for the Maxwellian). Throws when v = v*.
double carleman_k(const Vec3& v, const Vec3& v_star, const BackgroundLaw& g0);

/// Gain operator through the Carleman kernel:
///   (B f)(v) = int k(v, v*) f(v*) dv*,
/// integrated in spherical coordinates around v (which cancels the kernel
/// singularity exactly). Independent quadrature route from gain_sphere.
double carleman_apply(const KineticDensity& f, const Vec3& v, const BackgroundLaw& g0,
                      int n_radial = 48, int n_sphere_theta = 16, int n_sphere_phi = 32);

/// Discretized gain operator on a velocity grid: K[i][j] approximates
/// int_{cell j} k(v_i, v*) dv*. Columns whose quadrature mass exceeds the
/// exact column mass lambda(v_j) are scaled down to it, so the discrete
/// cascade stays substochastic. Stored in float (the kernel is O(1)).
class GainMatrix {
public:
    GainMatrix(const KineticDensity& grid_shape, const BackgroundLaw& g0,
               const RateCache& rates);

    /// out = K in  (both flat velocity grids matching the shape).
    void apply(const std::vector<double>& in, std::vector<double>& out) const;

    std::size_t cells() const { return n_; }

private:
    std::size_t n_ = 0;
    std::vector<float> k_;
};

struct DuhamelResult {
    KineticDensity density;           // partial sum sum_{j<=j_max} P_t^(j)
    std::vector<double> level_masses; // mass of each P_t^(j)
    double partial_mass = 0.0;
    double mass_deficit = 0.0;        // initial mass minus partial_mass
    bool deficit_warning = false;
};

/// Duhamel iteration for the linear transport problem on a velocity grid:
/// P^(0)_t = T(t) f0 and P^(j)_t = int_0^t T(t - s) B P^(j-1)_s ds, summed
/// up to j_max. The time integrals use a composite midpoint rule on a shared
/// grid of n_time_steps nodes, reusing each level's values at the nodes for
/// the next level. Requires a VelocityOnly density.
DuhamelResult duhamel_solve(const KineticDensity& f0, const BackgroundLaw& g0, double t,
                            int j_max, int n_time_steps = 64,
                            double deficit_tolerance = 1e-2);

} // namespace rgas
