#pragma once

#include "rgas/tree.hpp"

namespace rgas {

/// Cutoffs defining the good-tree set at diameter eps. The speed cap V and
/// collision-count cap M must satisfy eps V^3 <= 1/8 and M <= 1/sqrt(eps).
struct GoodTreeParams {
    double epsilon = 0.0;
    double V_eps = 0.0;
    double M_eps = 0.0;

    void validate() const;
};

/// Equality choices in the admissible range: V = (1/(8 eps))^(1/3),
/// M = eps^(-1/2).
GoodTreeParams default_good_params(double epsilon);

/// Per-tree classification result. `good` is the conjunction of the five
/// individual flags.
struct GoodTreeReport {
    int n = 0;
    double tau = 0.0;
    double max_speed = 0.0;
    bool recollision_free = true;
    bool non_grazing = true;
    bool overlap_free = true;
    bool n_ok = true;
    bool speed_ok = true;
    bool good = true;
};

/// Classifies a tree against the good-tree conditions at diameter eps:
/// each background trajectory is reconstructed from its marker via
/// x_j(t_j) = x(t_j) + eps nu_j and run backwards as a straight line; the
/// flags check (a) no earlier approach within eps of the tagged path,
/// (b) strictly positive normal relative velocity at every marker,
/// (c) no initial overlap with the root, (d) n <= M(eps), (e) all speeds
/// involved <= V(eps).
GoodTreeReport classify(const CollisionTree& tree, const GoodTreeParams& params);

} // namespace rgas
