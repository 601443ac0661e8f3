#include "rgas/good_trees.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rgas {

namespace {

constexpr double kDistTol = 1e-9;   // slack on |distance - eps| comparisons
constexpr double kTimeTol = 1e-9;   // exclusion window around the marker time
constexpr double kGrazeMargin = 1e-12;

Vec3 reduce_disp(Vec3 d) {
    for (int i = 0; i < 3; ++i) d[i] -= std::ceil(d[i] - 0.5);
    return d;
}

// Minimum of |r0 + s w - k|^2 over s in [0, s_len] and the 27 neighbour
// images; also reports the minimizing s.
void min_dist2_27(const Vec3& r0, const Vec3& w, double s_len, double& best_d2,
                  double& best_s) {
    const double a = norm2(w);
    best_d2 = std::numeric_limits<double>::infinity();
    best_s = 0.0;
    for (int kx = -1; kx <= 1; ++kx)
        for (int ky = -1; ky <= 1; ++ky)
            for (int kz = -1; kz <= 1; ++kz) {
                const Vec3 dk{r0.x - kx, r0.y - ky, r0.z - kz};
                double s = 0.0;
                if (a > 0.0) s = std::clamp(-dot(dk, w) / a, 0.0, s_len);
                const double d2 = norm2(dk + w * s);
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best_s = s;
                }
                // also consider the endpoint (the clamped vertex covers it,
                // but keep s = s_len explicit for a = 0)
                const double d2e = norm2(dk + w * s_len);
                if (d2e < best_d2) {
                    best_d2 = d2e;
                    best_s = s_len;
                }
            }
}

} // namespace

void GoodTreeParams::validate() const {
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw std::invalid_argument("GoodTreeParams: epsilon must lie in (0,1)");
    if (epsilon * V_eps * V_eps * V_eps > 0.125 * (1.0 + 1e-12))
        throw std::invalid_argument("GoodTreeParams: eps V^3 must be <= 1/8");
    if (M_eps > 1.0 / std::sqrt(epsilon) * (1.0 + 1e-12))
        throw std::invalid_argument("GoodTreeParams: M must be <= 1/sqrt(eps)");
}

GoodTreeParams default_good_params(double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw std::invalid_argument("default_good_params: epsilon must lie in (0,1)");
    GoodTreeParams p;
    p.epsilon = epsilon;
    p.V_eps = std::cbrt(1.0 / (8.0 * epsilon));
    p.M_eps = 1.0 / std::sqrt(epsilon);
    return p;
}

GoodTreeReport classify(const CollisionTree& tree, const GoodTreeParams& params) {
    params.validate();
    const double eps = params.epsilon;
    const int n = tree.n();

    GoodTreeReport rep;
    rep.n = n;
    rep.tau = tree.tau();

    // Tagged piecewise trajectory: node times, positions and velocities.
    std::vector<double> times{0.0};
    std::vector<Vec3> xs{tree.x0.coords};
    std::vector<Vec3> vs{tree.v0};
    for (const auto& m : tree.collisions) {
        if (m.t <= times.back())
            throw std::invalid_argument("classify: collision times must be strictly increasing");
        const std::size_t i = times.size() - 1;
        xs.push_back(wrap(xs[i] + vs[i] * (m.t - times[i])).coords);
        vs.push_back(scatter(vs[i], m.v, m.nu));
        times.push_back(m.t);
    }

    rep.max_speed = norm(tree.v0);
    for (const auto& v : vs) rep.max_speed = std::max(rep.max_speed, norm(v));
    for (const auto& m : tree.collisions) rep.max_speed = std::max(rep.max_speed, norm(m.v));

    rep.n_ok = n <= params.M_eps;
    rep.speed_ok = rep.max_speed <= params.V_eps;

    for (int j = 0; j < n; ++j) {
        const auto& m = tree.collisions[static_cast<std::size_t>(j)];
        const Vec3 v_pre = vs[static_cast<std::size_t>(j)];
        if (dot(m.nu, v_pre - m.v) <= kGrazeMargin) rep.non_grazing = false;

        // background straight line through the contact point
        const Vec3 bg_at_tj = xs[static_cast<std::size_t>(j + 1)] + m.nu * eps;
        const Vec3 bg_at_0 = wrap(bg_at_tj - m.v * m.t).coords;
        if (norm(reduce_disp(Vec3{bg_at_0 - tree.x0.coords})) <= eps) rep.overlap_free = false;

        // re-collision scan over the tagged path strictly before t_j
        for (std::size_t seg = 0;
             rep.recollision_free && seg + 1 < times.size() && times[seg] < m.t; ++seg) {
            const double seg_end = std::min(times[seg + 1], m.t);
            const Vec3 w = vs[seg] - m.v;
            Vec3 r = reduce_disp(Vec3{xs[seg] - (bg_at_tj + m.v * (times[seg] - m.t))});
            const double speed = norm(w);
            const double slice = speed > 0.0 ? 0.45 / speed : (seg_end - times[seg]);
            double s_done = 0.0;
            const double seg_len = seg_end - times[seg];
            while (s_done < seg_len) {
                const double s_len = std::min(slice, seg_len - s_done);
                double d2, s_at;
                min_dist2_27(r, w, s_len, d2, s_at);
                const double t_at = times[seg] + s_done + s_at;
                const bool below = d2 < (eps - kDistTol) * (eps - kDistTol);
                const bool touches = d2 <= (eps + kDistTol) * (eps + kDistTol);
                if (below || (touches && t_at < m.t - kTimeTol)) {
                    rep.recollision_free = false;
                    break;
                }
                r = reduce_disp(r + w * s_len);
                s_done += s_len;
            }
        }
    }

    rep.good = rep.recollision_free && rep.non_grazing && rep.overlap_free && rep.n_ok &&
               rep.speed_ok;
    return rep;
}

} // namespace rgas
