#include "rgas/tree_density.hpp"

#include <cmath>

#include "rgas/rates.hpp"

namespace rgas {

double tree_density_P(const CollisionTree& tree, double t, const InitialLaw& f0,
                      const BackgroundLaw& g0) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw std::invalid_argument("tree_density_P: t must be finite and >= 0");
    if (t < tree.tau()) return 0.0;

    double p = f0.density(tree.x0.coords, tree.v0);
    Vec3 v = tree.v0;
    double t_prev = 0.0;
    for (const auto& m : tree.collisions) {
        if (m.t <= t_prev)
            throw std::invalid_argument("tree_density_P: collision times must be increasing");
        p *= std::exp(-(m.t - t_prev) * loss_rate(v, g0));
        const double flux = dot(v - m.v, m.nu); // [(v(t-) - v').nu]_+
        if (flux <= 0.0) return 0.0;
        p *= g0.density(m.v) * flux;
        v = scatter(v, m.v, m.nu);
        t_prev = m.t;
    }
    p *= std::exp(-(t - t_prev) * loss_rate(v, g0));
    return p;
}

} // namespace rgas
