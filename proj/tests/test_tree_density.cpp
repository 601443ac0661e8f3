#include <doctest.h>

#include <cmath>

#include "rgas/rates.hpp"
#include "rgas/tree_density.hpp"
#include "oracles.hpp"

using namespace rgas;

namespace {

// sigma with (2 pi sigma^2)^(3/2) = 1, so the velocity density is exactly 1
// at v = 0
const double kUnitSigma = 1.0 / std::sqrt(2.0 * M_PI);

} // namespace

TEST_CASE("collisionless tree density is the attenuated initial density") {
    auto g0 = BackgroundLaw::maxwellian(1.0);
    const auto f0 = InitialLaw::uniform_maxwellian(kUnitSigma);

    CollisionTree tree;
    tree.x0 = TorusPoint{{0.3, 0.7, 0.1}};
    tree.v0 = {0, 0, 0};

    CHECK(f0.density(tree.x0.coords, tree.v0) == doctest::Approx(1.0).epsilon(1e-14));

    const double t = 1.0;
    const double p = tree_density_P(tree, t, f0, g0);
    // same rate path as the implementation: relative agreement to 1e-9
    const double expected = std::exp(-t * loss_rate(tree.v0, g0)) *
                            f0.density(tree.x0.coords, tree.v0);
    CHECK(p == doctest::Approx(expected).epsilon(1e-9));
    // and against the closed-form rate oracle (independent route)
    const double oracle = std::exp(-t * oracles::maxwellian_loss_rate(0.0, 1.0));
    CHECK(p == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("density vanishes before the final collision time") {
    auto g0 = BackgroundLaw::maxwellian(1.0);
    const auto f0 = InitialLaw::uniform_maxwellian(1.0);
    CollisionTree tree;
    tree.x0 = TorusPoint{{0.5, 0.5, 0.5}};
    tree.v0 = {1, 0, 0};
    tree.collisions.push_back({0.6, {1, 0, 0}, {0, 0, 0}});
    CHECK(tree_density_P(tree, 0.59, f0, g0) == 0.0);
    CHECK(tree_density_P(tree, 0.6, f0, g0) > 0.0);
}

TEST_CASE("grazing markers annihilate the density") {
    auto g0 = BackgroundLaw::maxwellian(1.0);
    const auto f0 = InitialLaw::uniform_maxwellian(1.0);
    CollisionTree tree;
    tree.x0 = TorusPoint{{0.5, 0.5, 0.5}};
    tree.v0 = {1, 0, 0};
    // nu orthogonal to the relative velocity: [.]_+ factor is zero
    tree.collisions.push_back({0.4, {0, 1, 0}, {0.5, 0, 0}});
    CHECK(tree_density_P(tree, 1.0, f0, g0) == 0.0);
    // flipped normal: outgoing flux factor negative -> also zero
    tree.collisions[0].nu = {-1, 0, 0};
    CHECK(tree_density_P(tree, 1.0, f0, g0) == 0.0);
}

TEST_CASE("density follows the final-collision recursion") {
    auto g0 = BackgroundLaw::maxwellian(1.0);
    const auto f0 = InitialLaw::uniform_maxwellian(1.0);
    RngStream rng(4001, 0);

    for (int rep = 0; rep < 20; ++rep) {
        CollisionTree tree;
        tree.x0 = TorusPoint{rng.point_in_unit_cube()};
        tree.v0 = rng.normal3(1.0);
        Vec3 v = tree.v0;
        double time = 0.0;
        const int n = 1 + static_cast<int>(rng.u01() * 3);
        for (int j = 0; j < n; ++j) {
            time += rng.uniform(0.05, 0.3);
            const Vec3 vj = rng.normal3(1.0);
            Vec3 w = v - vj;
            if (norm(w) < 1e-9) w = Vec3{1, 0, 0};
            const Vec3 nu = rng.cosine_hemisphere(w / norm(w));
            tree.collisions.push_back({time, nu, vj});
            v = scatter(v, vj, nu);
        }

        const double t = time + rng.uniform(0.0, 0.5);
        const auto& last = tree.collisions.back();
        // v(tau-) is the velocity entering the final collision
        Vec3 v_pre = tree.v0;
        for (int j = 0; j + 1 < n; ++j)
            v_pre = scatter(v_pre, tree.collisions[static_cast<std::size_t>(j)].v,
                            tree.collisions[static_cast<std::size_t>(j)].nu);
        const Vec3 v_post = scatter(v_pre, last.v, last.nu);

        const double lhs = tree_density_P(tree, t, f0, g0);
        const double tau = tree.tau();
        const double rhs = std::exp(-(t - tau) * loss_rate(v_post, g0)) *
                           tree_density_P(prune(tree), tau, f0, g0) * g0.density(last.v) *
                           std::max(0.0, dot(v_pre - last.v, last.nu));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        CHECK(lhs >= 0.0);
    }
}

TEST_CASE("point-mass initial laws have no evaluable density") {
    auto g0 = BackgroundLaw::maxwellian(1.0);
    const auto f0 = InitialLaw::uniform_point_velocity({1, 0, 0});
    CollisionTree tree;
    tree.x0 = TorusPoint{{0.5, 0.5, 0.5}};
    tree.v0 = {1, 0, 0};
    CHECK_THROWS_AS(tree_density_P(tree, 0.5, f0, g0), std::runtime_error);
}
