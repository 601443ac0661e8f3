#pragma once

#include <string>
#include <vector>

#include "rgas/geometry.hpp"

namespace rgas {

/// One collision in the tagged particle's history: time, impact direction
/// and the (unchanging) velocity of the background partner.
///
/// `nu` is the unit vector from the tagged centre to the background centre
/// at the collision instant, so the approach condition reads
/// nu . (v(t-) - v_j) >= 0 and the background's starting point is
/// recovered as x_j(0) = x(t_j) + eps nu_j - t_j v_j.
struct CollisionMarker {
    double t = 0.0;
    Vec3 nu;
    Vec3 v;
};

enum class SimStatus { Completed, AbortedSimultaneous, AbortedEventCap };

std::string to_string(SimStatus s);
SimStatus sim_status_from_string(const std::string& s);

/// Collision history of one realization: the root datum (x0, v0) plus the
/// ordered list of collisions. Collision times are strictly increasing.
struct CollisionTree {
    TorusPoint x0;
    Vec3 v0;
    std::vector<CollisionMarker> collisions;
    SimStatus status = SimStatus::Completed;

    int n() const { return static_cast<int>(collisions.size()); }
    /// Final collision time, 0 for a bare root.
    double tau() const { return collisions.empty() ? 0.0 : collisions.back().t; }
};

/// Tree with the final collision marker removed. Throws when n = 0.
CollisionTree prune(const CollisionTree& tree);

/// Metric on tree space: 1 when the collision counts differ, otherwise
/// min(1, max over components of the sup-norm differences), where the
/// components are (x0, v0) and each (t_j, nu_j, v_j).
double tree_distance(const CollisionTree& a, const CollisionTree& b);

/// One-line JSON form: {"x0":[..],"v0":[..],"collisions":[...],"status":".."}.
std::string tree_to_json_line(const CollisionTree& tree);
CollisionTree tree_from_json_line(const std::string& line);

std::vector<CollisionTree> read_trees_jsonl(std::istream& in);
void write_trees_jsonl(std::ostream& out, const std::vector<CollisionTree>& trees);

} // namespace rgas
