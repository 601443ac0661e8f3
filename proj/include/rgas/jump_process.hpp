#pragma once

#include <vector>

#include "rgas/initial_sampling.hpp"
#include "rgas/rates.hpp"

namespace rgas {

/// State of the jump process at a jump instant (post-jump velocity).
/// states[0] is the initial state at t = 0.
struct JumpTrajectory {
    struct Event {
        double t = 0.0;
        Vec3 x;
        Vec3 v;
    };
    std::vector<Event> states;
    ParticleState final_state;

    int jumps() const { return static_cast<int>(states.size()) - 1; }
};

/// Velocity-jump realization of the linear Boltzmann dynamics on [0, T]:
/// free flight at velocity v, jump times by thinning against the dominating
/// rate 1.05 pi (|v| + beta), and at each accepted jump a partner/direction
/// pair (vbar, nu) with density proportional to g0(vbar) [(v - vbar).nu]_+,
/// after which v <- v - nu (nu.(v - vbar)).
JumpTrajectory jump_sample(const InitialLaw& f0, const RateCache& rates, double T,
                           RngStream& rng);

/// State of a trajectory at any time in [0, T] (free flight between jumps).
ParticleState jump_state_at(const JumpTrajectory& traj, double t);

/// Sample a collision partner for current velocity v: density proportional
/// to g0(vbar) |v - vbar| (exposed for tests).
Vec3 sample_partner(const Vec3& v, const BackgroundLaw& g0, RngStream& rng);

} // namespace rgas
