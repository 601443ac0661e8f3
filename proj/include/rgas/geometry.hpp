#pragma once

#include <optional>
#include <stdexcept>

#include "rgas/vec3.hpp"

namespace rgas {

/// A point on the unit 3-torus U = [0,1)^3.
struct TorusPoint {
    Vec3 coords;
};

/// Contact between the tagged particle and a background particle.
/// `normal` points along the minimal-image displacement from the
/// background centre to the tagged centre and has unit length.
struct ContactEvent {
    double time = 0.0;
    Vec3 normal;
    int partner_index = -1;
};

// Tolerances shared across the geometry layer.
inline constexpr double kContactTol = 1e-9;   // |distance - eps| at a contact
inline constexpr double kUnitTol = 1e-12;     // | |nu| - 1 | for normals

/// Wrap a point into [0,1)^3, componentwise mod 1. Throws on non-finite input.
TorusPoint wrap(const Vec3& p);

/// Minimal-image displacement d with a + d == b (mod 1) and |d_i| <= 1/2.
/// Antipodal ties (|d_i| = 1/2) resolve to +1/2.
Vec3 min_image(const TorusPoint& a, const TorusPoint& b);

/// Earliest t in (0, horizon] at which |rel_pos + t rel_vel - k| = epsilon
/// for some integer image k, with the pair approaching at contact
/// (radial velocity < 0). Returns nullopt if no such contact exists.
/// A pair already at contact distance (within tolerance) and approaching
/// reports t = 0. Precondition: the pair does not overlap at t = 0
/// (minimal-image distance >= epsilon - tolerance); deeper overlap throws.
std::optional<double> predict_contact(const Vec3& rel_pos, const Vec3& rel_vel,
                                      double epsilon, double horizon);

/// Unit normal along the minimal-image displacement from the background
/// centre to the tagged centre. Throws unless the minimal-image distance
/// equals epsilon within kContactTol.
Vec3 collision_normal(const TorusPoint& x_tagged, const TorusPoint& x_background,
                      double epsilon);

/// Hard-sphere velocity update for the tagged particle:
///   v' = v - (nu . (v - v_j)) nu.
/// The background velocity v_j is not modified; momentum is not conserved.
/// nu enters quadratically, so either orientation of the normal gives the
/// same result. Throws if nu is not unit length within kUnitTol.
Vec3 scatter(const Vec3& v, const Vec3& v_j, const Vec3& nu);

} // namespace rgas
