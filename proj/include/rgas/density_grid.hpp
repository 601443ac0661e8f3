#pragma once

#include <vector>

#include "rgas/vec3.hpp"

namespace rgas {

/// Gridded density over velocity space, optionally times position on U.
/// Velocity cells are cubes of side 2 v_max / nv with centres at
/// -v_max + (i + 1/2) h; values are density values at cell centres.
/// In PhaseSpace mode an ns^3 spatial grid on U multiplies the layout
/// (cell index = ((spatial) * nv^3 + velocity)).
class KineticDensity {
public:
    enum class Mode { VelocityOnly, PhaseSpace };

    KineticDensity() = default;
    KineticDensity(Mode mode, double v_max, int nv, int ns = 1);

    Mode mode() const { return mode_; }
    double v_max() const { return v_max_; }
    int nv() const { return nv_; }
    int ns() const { return ns_; }
    double cell_side() const { return 2.0 * v_max_ / nv_; }
    double cell_volume() const;

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    std::size_t velocity_cells() const {
        return static_cast<std::size_t>(nv_) * nv_ * nv_;
    }

    Vec3 velocity_center(std::size_t flat_v_index) const;
    std::size_t velocity_index(int ix, int iy, int iz) const;

    /// Integral of the density over its domain.
    double mass() const;

    /// Throws when a value is negative beyond -1e-12 or the mass exceeds
    /// 1 + 1e-9.
    void validate() const;

    /// Clamp tiny negative values (round-off from interpolation) to zero.
    void clamp_nonnegative();

    double interp_linear(const Vec3& v, std::size_t spatial_cell = 0) const;
    /// Catmull-Rom tricubic interpolation; falls back to trilinear within one
    /// cell of the boundary. Zero outside the grid.
    double interp_cubic(const Vec3& v, std::size_t spatial_cell = 0) const;

    /// Velocity-only density with f(v) = f0(v) sampled at cell centres.
    template <class F>
    static KineticDensity from_function(double v_max, int nv, F&& f) {
        KineticDensity d(Mode::VelocityOnly, v_max, nv);
        for (std::size_t i = 0; i < d.values_.size(); ++i)
            d.values_[i] = f(d.velocity_center(i));
        return d;
    }

    /// All mass in the velocity cell containing v0 (density 1/cell_volume).
    static KineticDensity point_mass(double v_max, int nv, const Vec3& v0);

private:
    Mode mode_ = Mode::VelocityOnly;
    double v_max_ = 6.0;
    int nv_ = 40;
    int ns_ = 1;
    std::vector<double> values_;
};

} // namespace rgas
