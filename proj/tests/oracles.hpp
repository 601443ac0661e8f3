#pragma once

// Independent brute-force and closed-form oracles used by the unit and
// acceptance suites. Everything here deliberately avoids the library's own
// computational paths for the quantities it checks.

#include <cmath>
#include <optional>
#include <vector>

#include "rgas/vec3.hpp"

namespace rgas::oracles {

inline Vec3 reduce(Vec3 d) {
    for (int i = 0; i < 3; ++i) d[i] -= std::ceil(d[i] - 0.5);
    return d;
}

/// Time-stepped first-contact detector: walks the pair at fixed dt and
/// reports the first sample time with minimal-image distance <= eps.
inline std::optional<double> stepped_first_contact(const Vec3& rel_pos, const Vec3& rel_vel,
                                                   double eps, double horizon, double dt) {
    const double eps2 = eps * eps;
    const auto n_steps = static_cast<long>(std::floor(horizon / dt));
    for (long k = 1; k <= n_steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const Vec3 p = reduce(rel_pos + rel_vel * t);
        if (norm2(p) <= eps2) return t;
    }
    return std::nullopt;
}

/// Closed-form loss rate for a Maxwellian background with per-component
/// standard deviation sigma:
///   lambda(c) = pi sigma [ sqrt(2/pi) e^{-s^2/2} + (s + 1/s) erf(s/sqrt 2) ],
/// s = c / sigma, with lambda(0) = pi sigma sqrt(8/pi).
inline double maxwellian_loss_rate(double speed, double sigma) {
    if (speed <= 0.0) return M_PI * sigma * std::sqrt(8.0 / M_PI);
    const double s = speed / sigma;
    return M_PI * sigma *
           (std::sqrt(2.0 / M_PI) * std::exp(-0.5 * s * s) +
            (s + 1.0 / s) * std::erf(s / std::sqrt(2.0)));
}

/// Exact bin masses of a centered Maxwellian on a cubic histogram grid
/// (per-axis erf differences, product across axes).
inline std::vector<double> maxwellian_bin_masses(double sigma, double v_max, int bins) {
    std::vector<double> axis(static_cast<std::size_t>(bins));
    const double h = 2.0 * v_max / bins;
    const double inv = 1.0 / (sigma * std::sqrt(2.0));
    for (int i = 0; i < bins; ++i) {
        const double lo = -v_max + i * h, hi = lo + h;
        double m = 0.5 * (std::erf(hi * inv) - std::erf(lo * inv));
        if (i == 0) m += 0.5 * (1.0 + std::erf(lo * inv));          // clamped edge bins
        if (i == bins - 1) m += 0.5 * (1.0 - std::erf(hi * inv));
        axis[static_cast<std::size_t>(i)] = m;
    }
    std::vector<double> out(static_cast<std::size_t>(bins) * bins * bins);
    std::size_t k = 0;
    for (int ix = 0; ix < bins; ++ix)
        for (int iy = 0; iy < bins; ++iy)
            for (int iz = 0; iz < bins; ++iz)
                out[k++] = axis[static_cast<std::size_t>(ix)] *
                           axis[static_cast<std::size_t>(iy)] *
                           axis[static_cast<std::size_t>(iz)];
    return out;
}

/// Uniform-grid spherical quadrature of int_{S^2} [w . nu]_+ dnu.
inline double sphere_positive_flux(const Vec3& w, int n_theta = 512, int n_phi = 512) {
    double total = 0.0;
    for (int i = 0; i < n_theta; ++i) {
        const double theta = M_PI * (i + 0.5) / n_theta;
        const double st = std::sin(theta), ct = std::cos(theta);
        double row = 0.0;
        for (int j = 0; j < n_phi; ++j) {
            const double phi = 2.0 * M_PI * (j + 0.5) / n_phi;
            const Vec3 nu{st * std::cos(phi), st * std::sin(phi), ct};
            const double d = dot(w, nu);
            if (d > 0.0) row += d;
        }
        total += row * st;
    }
    return total * (M_PI / n_theta) * (2.0 * M_PI / n_phi);
}

} // namespace rgas::oracles
