#include "rgas/jump_process.hpp"

#include <cmath>
#include <stdexcept>

namespace rgas {

Vec3 sample_partner(const Vec3& v, const BackgroundLaw& g0, RngStream& rng) {
    // proposal: mixture g0(vbar)(|v| + |vbar|)/(|v| + E|vbar|), then accept
    // with |v - vbar| / (|v| + |vbar|)  (valid since |v-vbar| <= |v|+|vbar|)
    const double speed = norm(v);
    const double m1 = g0.mean_speed();
    const double p_plain = speed / (speed + m1);
    for (int tries = 0; tries < 100000; ++tries) {
        const Vec3 vbar =
            rng.u01() < p_plain ? g0.sample(rng) : g0.sample_speed_biased(rng);
        const double denom = speed + norm(vbar);
        if (denom == 0.0) continue;
        if (rng.u01() * denom < norm(v - vbar)) return vbar;
    }
    throw std::runtime_error("sample_partner: rejection sampling did not terminate");
}

JumpTrajectory jump_sample(const InitialLaw& f0, const RateCache& rates, double T,
                           RngStream& rng) {
    if (!(T > 0.0)) throw std::invalid_argument("jump_sample: T must be > 0");
    JumpTrajectory traj;
    Vec3 x = wrap(f0.sample_position(rng)).coords;
    Vec3 v = f0.sample_velocity(rng);
    double t = 0.0;
    traj.states.push_back({0.0, x, v});

    while (true) {
        const double dominating = rates.dominating_rate(v);
        const double lambda = rates.lambda(v);
        const double accept = lambda / dominating;
        if (accept < 1e-4)
            throw std::runtime_error("jump_sample: thinning acceptance below 1e-4 "
                                     "(dominating bound is broken)");
        const double dt = rng.exponential(dominating);
        if (t + dt >= T) {
            x = wrap(x + v * (T - t)).coords;
            t = T;
            break;
        }
        t += dt;
        x = wrap(x + v * dt).coords;
        if (rng.u01() >= accept) continue; // thinned-out candidate
        const Vec3 vbar = sample_partner(v, rates.law(), rng);
        const Vec3 w = v - vbar;
        const Vec3 nu = rng.cosine_hemisphere(w / norm(w));
        v = scatter(v, vbar, nu);
        traj.states.push_back({t, x, v});
    }
    traj.final_state = ParticleState{TorusPoint{x}, v};
    return traj;
}

ParticleState jump_state_at(const JumpTrajectory& traj, double t) {
    if (traj.states.empty()) throw std::invalid_argument("jump_state_at: empty trajectory");
    if (!(t >= 0.0)) throw std::invalid_argument("jump_state_at: t must be >= 0");
    const JumpTrajectory::Event* last = &traj.states.front();
    for (const auto& e : traj.states) {
        if (e.t > t) break;
        last = &e;
    }
    return ParticleState{wrap(last->x + last->v * (t - last->t)), last->v};
}

} // namespace rgas
