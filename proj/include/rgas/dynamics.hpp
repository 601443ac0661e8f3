#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rgas/initial_sampling.hpp"
#include "rgas/tree.hpp"

namespace rgas {

/// Parameters of one event-driven realization.
struct SimConfig {
    double epsilon = 0.1;
    int n_background = -1;       // -1: derive from N eps^2 = 1
    double T = 1.0;
    std::uint64_t seed = 0;
    bool gain_enabled = true;    // false: absorb the tagged particle at its first collision
    int event_cap = 10000;
    double tol_simultaneous = 1e-10;

    int resolved_N() const;
    void validate() const;
};

/// Result of one realization. `partner_indices[k]` records which background
/// particle produced collision k (simulator ground truth, not serialized).
struct SimOutcome {
    CollisionTree tree;
    ParticleState final_state;
    SimStatus status = SimStatus::Completed;
    std::vector<int> partner_indices;
    int sample_attempts = 1; // overlap-rejection draws used for the initial data
};

/// Exact event-driven dynamics from an explicit overlap-free configuration.
/// Background particles move in straight lines with fixed velocities; the
/// tagged particle free-flights and scatters at each contact.
SimOutcome run_from(const SimConfig& config, const ParticleState& tagged,
                    const std::vector<ParticleState>& backgrounds);

/// Samples an overlap-free initial configuration (resampling the whole
/// background until it is accepted) and runs the dynamics.
SimOutcome run(const SimConfig& config, const InitialLaw& f0, const BackgroundLaw& g0,
               RngStream& rng);

/// Reconstructs the tagged particle state at time t in [0, inf) from a tree:
/// free flight between markers, scatter at each marker. At t = t_j exactly the
/// post-collisional velocity applies. Throws for t < 0 or unsorted markers.
ParticleState tagged_trajectory(const CollisionTree& tree, double t,
                                const ParticleState& initial);

} // namespace rgas
