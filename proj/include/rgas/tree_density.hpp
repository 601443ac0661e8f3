#pragma once

#include "rgas/laws.hpp"
#include "rgas/tree.hpp"

namespace rgas {

/// Pointwise idealized tree density at time t:
///   n = 0:   P_t = exp(-t lambda(v0)) f0(x0, v0)
///   n >= 1:  P_t = 1_{t >= tau} exp(-(t - tau) lambda(v(tau)))
///                   P_tau(pruned tree) g0(v') [(v(tau-) - v').nu]_+
/// evaluated iteratively along the markers. Returns 0 for t < tau and for
/// trees with a grazing marker (the [.]_+ factor vanishes). Requires f0 to
/// have an evaluable density.
double tree_density_P(const CollisionTree& tree, double t, const InitialLaw& f0,
                      const BackgroundLaw& g0);

} // namespace rgas
