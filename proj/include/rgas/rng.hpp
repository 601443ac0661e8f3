#pragma once

#include <cstdint>
#include <cmath>

#include "rgas/vec3.hpp"

namespace rgas {

/// Counter-based random stream. Each draw hashes (key, counter) with the
/// splitmix64 finalizer, so streams keyed by (seed, stream index) are
/// independent and reproducible regardless of scheduling. One stream per
/// realization; workers must use disjoint stream indices.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_index)
        : key_(mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^ mix(stream_index + 0xbf58476d1ce4e5b9ULL))),
          counter_(0) {}

    std::uint64_t next_u64() {
        counter_ += 0x9e3779b97f4a7c15ULL;
        return mix(key_ ^ counter_);
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1), never exactly 0 or 1; safe under log().
    double u01_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * u01(); }

    double exponential(double rate) { return -std::log(u01_open()) / rate; }

    /// Standard normal (Box-Muller; second value cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(u01_open()));
        const double phi = 2.0 * M_PI * u01();
        spare_ = r * std::sin(phi);
        have_spare_ = true;
        return r * std::cos(phi);
    }

    Vec3 normal3(double sigma) { return {sigma * normal(), sigma * normal(), sigma * normal()}; }

    Vec3 point_in_unit_cube() { return {u01(), u01(), u01()}; }

    Vec3 unit_sphere() {
        const double c = uniform(-1.0, 1.0);
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        const double phi = 2.0 * M_PI * u01();
        return {s * std::cos(phi), s * std::sin(phi), c};
    }

    /// Direction distributed as [axis . nu]_+ on the sphere (cosine-weighted
    /// hemisphere around the unit vector `axis`).
    Vec3 cosine_hemisphere(const Vec3& axis) {
        const double c = std::sqrt(u01());
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        const double phi = 2.0 * M_PI * u01();
        // orthonormal frame around axis
        const Vec3 e1 = std::fabs(axis.x) < 0.7 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
        Vec3 u = e1 - axis * dot(e1, axis);
        u = u / norm(u);
        const Vec3 w{axis.y * u.z - axis.z * u.y,
                     axis.z * u.x - axis.x * u.z,
                     axis.x * u.y - axis.y * u.x};
        return axis * c + (u * std::cos(phi) + w * std::sin(phi)) * s;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t counter_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace rgas
