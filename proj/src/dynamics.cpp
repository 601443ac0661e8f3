#include "rgas/dynamics.hpp"

#include <cmath>
#include <limits>

namespace rgas {

int SimConfig::resolved_N() const {
    return n_background >= 0 ? n_background : boltzmann_grad_N(epsilon);
}

void SimConfig::validate() const {
    if (!(epsilon > 0.0) || !(epsilon < 0.25))
        throw std::invalid_argument("SimConfig: epsilon must lie in (0, 0.25)");
    if (!(T > 0.0) || !std::isfinite(T))
        throw std::invalid_argument("SimConfig: T must be positive and finite");
    const int n = resolved_N();
    const double packing = 4.0 / 3.0 * M_PI * epsilon * epsilon * epsilon * n;
    if (!(packing < 1.0))
        throw std::invalid_argument("SimConfig: excluded volume 4/3 pi eps^3 N must be < 1");
    if (event_cap <= 0) throw std::invalid_argument("SimConfig: event_cap must be > 0");
}

namespace {

Vec3 reduce_disp(Vec3 d) {
    for (int i = 0; i < 3; ++i) d[i] -= std::ceil(d[i] - 0.5);
    return d;
}

} // namespace

SimOutcome run_from(const SimConfig& config, const ParticleState& tagged,
                    const std::vector<ParticleState>& backgrounds) {
    config.validate();
    const double eps = config.epsilon;
    if (!reject_overlap(tagged.position, backgrounds, eps))
        throw std::invalid_argument("run_from: initial configuration overlaps");

    SimOutcome out;
    out.tree.x0 = tagged.position;
    out.tree.v0 = tagged.velocity;

    double t_now = 0.0;
    Vec3 x = tagged.position.coords;
    Vec3 v = tagged.velocity;
    const std::size_t n = backgrounds.size();

    while (t_now < config.T) {
        const double horizon = config.T - t_now;
        double best = std::numeric_limits<double>::infinity();
        double second = best;
        int best_j = -1;
        for (std::size_t j = 0; j < n; ++j) {
            const Vec3 bg_pos = backgrounds[j].position.coords + backgrounds[j].velocity * t_now;
            const Vec3 rel_pos = reduce_disp(Vec3{x - bg_pos});
            const Vec3 rel_vel = v - backgrounds[j].velocity;
            // anything later than best + tol cannot matter, even for tie detection
            const double cap = std::min(horizon, best + 2.0 * config.tol_simultaneous);
            const auto s = predict_contact(rel_pos, rel_vel, eps, cap);
            if (!s) continue;
            if (*s < best) {
                second = best;
                best = *s;
                best_j = static_cast<int>(j);
            } else if (*s < second) {
                second = *s;
            }
        }

        if (best_j < 0) {
            x = wrap(x + v * horizon).coords;
            t_now = config.T;
            break;
        }
        // Degenerate-contact handling: abort when two candidate contacts tie
        // below resolution, and likewise when consecutive collisions pile up
        // closer than the tolerance (pinch cascades between two converging
        // spheres collapse double-exponentially and fall below what doubles
        // can represent). The caller resamples.
        if (second - best < config.tol_simultaneous ||
            (!out.tree.collisions.empty() && best < config.tol_simultaneous)) {
            out.status = SimStatus::AbortedSimultaneous;
            out.tree.status = out.status;
            out.final_state = ParticleState{wrap(x), v};
            return out;
        }

        t_now += best;
        x = wrap(x + v * best).coords;
        const auto& bg = backgrounds[static_cast<std::size_t>(best_j)];
        const Vec3 bg_pos = wrap(bg.position.coords + bg.velocity * t_now).coords;
        Vec3 m = reduce_disp(Vec3{bg_pos - x}); // tagged -> background
        const Vec3 nu = m / norm(m);

        out.tree.collisions.push_back(CollisionMarker{t_now, nu, bg.velocity});
        out.partner_indices.push_back(best_j);
        v = scatter(v, bg.velocity, nu);

        if (!config.gain_enabled) {
            // absorbing variant: the run ends at the first collision
            out.final_state = ParticleState{wrap(Vec3{x}), v};
            out.tree.status = SimStatus::Completed;
            return out;
        }
        if (out.tree.n() >= config.event_cap) {
            out.status = SimStatus::AbortedEventCap;
            out.tree.status = out.status;
            out.final_state = ParticleState{wrap(Vec3{x}), v};
            return out;
        }
    }

    out.final_state = ParticleState{wrap(Vec3{x}), v};
    out.tree.status = SimStatus::Completed;
    return out;
}

SimOutcome run(const SimConfig& config, const InitialLaw& f0, const BackgroundLaw& g0,
               RngStream& rng) {
    config.validate();
    const auto cfg = sample_configuration(f0, g0, config.resolved_N(), config.epsilon, rng);
    SimOutcome out = run_from(config, cfg.tagged, cfg.backgrounds);
    out.sample_attempts = cfg.attempts;
    return out;
}

ParticleState tagged_trajectory(const CollisionTree& tree, double t,
                                const ParticleState& initial) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw std::invalid_argument("tagged_trajectory: t must be finite and >= 0");
    double t_prev = 0.0;
    Vec3 x = initial.position.coords;
    Vec3 v = initial.velocity;
    for (const auto& m : tree.collisions) {
        if (m.t < t_prev)
            throw std::invalid_argument("tagged_trajectory: markers are not sorted");
        if (m.t > t) break;
        x = wrap(x + v * (m.t - t_prev)).coords;
        v = scatter(v, m.v, m.nu);
        t_prev = m.t;
    }
    return ParticleState{wrap(x + v * (t - t_prev)), v};
}

} // namespace rgas
