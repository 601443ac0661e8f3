#include "rgas/density_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace rgas {

KineticDensity::KineticDensity(Mode mode, double v_max, int nv, int ns)
    : mode_(mode), v_max_(v_max), nv_(nv), ns_(mode == Mode::PhaseSpace ? ns : 1) {
    if (!(v_max > 0.0)) throw std::invalid_argument("KineticDensity: v_max must be > 0");
    if (nv < 2) throw std::invalid_argument("KineticDensity: need at least 2 bins per axis");
    if (mode_ == Mode::PhaseSpace && ns_ < 2)
        throw std::invalid_argument("KineticDensity: PhaseSpace mode needs a spatial grid");
    const std::size_t n_spatial = mode_ == Mode::PhaseSpace
                                      ? static_cast<std::size_t>(ns_) * ns_ * ns_
                                      : 1;
    values_.assign(n_spatial * velocity_cells(), 0.0);
}

double KineticDensity::cell_volume() const {
    const double h = cell_side();
    double vol = h * h * h;
    if (mode_ == Mode::PhaseSpace) {
        const double hs = 1.0 / ns_;
        vol *= hs * hs * hs;
    }
    return vol;
}

Vec3 KineticDensity::velocity_center(std::size_t flat) const {
    const double h = cell_side();
    const int iz = static_cast<int>(flat % static_cast<std::size_t>(nv_));
    const int iy = static_cast<int>((flat / static_cast<std::size_t>(nv_)) % static_cast<std::size_t>(nv_));
    const int ix = static_cast<int>(flat / (static_cast<std::size_t>(nv_) * nv_));
    return {-v_max_ + (ix + 0.5) * h, -v_max_ + (iy + 0.5) * h, -v_max_ + (iz + 0.5) * h};
}

std::size_t KineticDensity::velocity_index(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(ix) * nv_ + iy) * nv_ + iz;
}

double KineticDensity::mass() const {
    double sum = 0.0;
    for (double v : values_) sum += v;
    return sum * cell_volume();
}

void KineticDensity::validate() const {
    for (double v : values_)
        if (v < -1e-12) throw std::runtime_error("KineticDensity: negative density value");
    if (mass() > 1.0 + 1e-9) throw std::runtime_error("KineticDensity: mass exceeds 1");
}

void KineticDensity::clamp_nonnegative() {
    for (double& v : values_)
        if (v < 0.0) v = 0.0;
}

namespace {

// Catmull-Rom weight for 1-d cubic convolution at offset t in [0,1].
inline void cr_weights(double t, double w[4]) {
    const double t2 = t * t, t3 = t2 * t;
    w[0] = 0.5 * (-t3 + 2.0 * t2 - t);
    w[1] = 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0);
    w[2] = 0.5 * (-3.0 * t3 + 4.0 * t2 + t);
    w[3] = 0.5 * (t3 - t2);
}

} // namespace

double KineticDensity::interp_linear(const Vec3& v, std::size_t spatial_cell) const {
    const double h = cell_side();
    double fx[3];
    int ix[3];
    for (int a = 0; a < 3; ++a) {
        const double u = (v[a] + v_max_) / h - 0.5;
        if (u < -1.0 || u > nv_) return 0.0;
        const double fl = std::floor(u);
        ix[a] = static_cast<int>(fl);
        fx[a] = u - fl;
    }
    const std::size_t base = spatial_cell * velocity_cells();
    double result = 0.0;
    for (int dx = 0; dx < 2; ++dx)
        for (int dy = 0; dy < 2; ++dy)
            for (int dz = 0; dz < 2; ++dz) {
                const int jx = ix[0] + dx, jy = ix[1] + dy, jz = ix[2] + dz;
                if (jx < 0 || jy < 0 || jz < 0 || jx >= nv_ || jy >= nv_ || jz >= nv_)
                    continue; // outside contributes zero
                const double w = (dx ? fx[0] : 1.0 - fx[0]) * (dy ? fx[1] : 1.0 - fx[1]) *
                                 (dz ? fx[2] : 1.0 - fx[2]);
                result += w * values_[base + velocity_index(jx, jy, jz)];
            }
    return result;
}

double KineticDensity::interp_cubic(const Vec3& v, std::size_t spatial_cell) const {
    const double h = cell_side();
    double w[3][4];
    int i0[3];
    for (int a = 0; a < 3; ++a) {
        const double u = (v[a] + v_max_) / h - 0.5;
        if (u < -1.0 || u > nv_) return 0.0;
        const double fl = std::floor(u);
        const int i = static_cast<int>(fl);
        if (i < 1 || i + 2 >= nv_) return interp_linear(v, spatial_cell);
        i0[a] = i - 1;
        cr_weights(u - fl, w[a]);
    }
    const std::size_t base = spatial_cell * velocity_cells();
    double result = 0.0;
    for (int dx = 0; dx < 4; ++dx)
        for (int dy = 0; dy < 4; ++dy) {
            double line = 0.0;
            const std::size_t row =
                base + velocity_index(i0[0] + dx, i0[1] + dy, i0[2]);
            for (int dz = 0; dz < 4; ++dz)
                line += w[2][dz] * values_[row + static_cast<std::size_t>(dz)];
            result += w[0][dx] * w[1][dy] * line;
        }
    return result;
}

KineticDensity KineticDensity::point_mass(double v_max, int nv, const Vec3& v0) {
    KineticDensity d(Mode::VelocityOnly, v_max, nv);
    const double h = d.cell_side();
    int idx[3];
    for (int a = 0; a < 3; ++a) {
        const double u = (v0[a] + v_max) / h;
        const int i = static_cast<int>(std::floor(u));
        if (i < 0 || i >= nv)
            throw std::invalid_argument("point_mass: v0 outside the grid");
        idx[a] = i;
    }
    d.values_[d.velocity_index(idx[0], idx[1], idx[2])] = 1.0 / d.cell_volume();
    return d;
}

} // namespace rgas
