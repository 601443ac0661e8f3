#pragma once

#include <vector>

#include "rgas/geometry.hpp"
#include "rgas/laws.hpp"
#include "rgas/rng.hpp"

namespace rgas {

/// Position on the torus plus velocity, for tagged and background particles.
struct ParticleState {
    TorusPoint position;
    Vec3 velocity;
};

/// Number of background particles under the diameter-number coupling
/// N eps^2 = 1, rounded to the nearest integer.
int boltzmann_grad_N(double epsilon);

/// N i.i.d. background particles: position uniform on U, velocity from g0.
std::vector<ParticleState> sample_background(const BackgroundLaw& g0, int n,
                                             RngStream& rng);

/// True iff the minimal-image distance from x0 to every background centre
/// strictly exceeds epsilon.
bool reject_overlap(const TorusPoint& x0, const std::vector<ParticleState>& backgrounds,
                    double epsilon);

/// Acceptance probability of the no-overlap conditioning under uniform
/// placement: zeta = (1 - 4/3 pi eps^3)^N. Requires 4/3 pi eps^3 < 1.
double zeta(double epsilon, int n);

/// A full initial configuration conditioned on no overlap: the whole
/// background is resampled until reject_overlap passes, matching the
/// conditional law of the model. `attempts` counts the total number of
/// background configurations drawn (>= 1).
struct InitialConfiguration {
    ParticleState tagged;
    std::vector<ParticleState> backgrounds;
    int attempts = 0;
};

InitialConfiguration sample_configuration(const InitialLaw& f0, const BackgroundLaw& g0,
                                          int n, double epsilon, RngStream& rng,
                                          int max_attempts = 1000000);

} // namespace rgas
