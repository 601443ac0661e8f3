#include <doctest.h>

#include <cmath>

#include "rgas/dynamics.hpp"
#include "rgas/rates.hpp"
#include "oracles.hpp"

using namespace rgas;

namespace {

// Dense replay of a tree: exact piecewise free flight sampled on a dt grid
// without overshooting marker times.
ParticleState replay(const CollisionTree& tree, double t, const ParticleState& init,
                     double dt) {
    Vec3 x = init.position.coords;
    Vec3 v = init.velocity;
    double now = 0.0;
    std::size_t next = 0;
    while (now < t) {
        double step = std::min(dt, t - now);
        if (next < tree.collisions.size()) {
            const double tj = tree.collisions[next].t;
            if (tj - now <= step) {
                step = tj - now;
                x = wrap(x + v * step).coords;
                now = tj;
                v = scatter(v, tree.collisions[next].v, tree.collisions[next].nu);
                ++next;
                continue;
            }
        }
        x = wrap(x + v * step).coords;
        now += step;
    }
    return {TorusPoint{x}, v};
}

} // namespace

TEST_CASE("SimConfig validation") {
    SimConfig cfg;
    cfg.epsilon = 0.2;
    cfg.n_background = 25; // packing fraction 0.84: allowed (< 1)
    CHECK_NOTHROW(cfg.validate());
    cfg.n_background = 40; // packing > 1
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.epsilon = 0.3;
    cfg.n_background = 4;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = SimConfig{};
    cfg.epsilon = 0.1;
    CHECK(cfg.resolved_N() == 100);
}

TEST_CASE("free flight without background particles") {
    SimConfig cfg;
    cfg.epsilon = 0.1;
    cfg.n_background = 0;
    cfg.T = 1.7;
    const ParticleState tagged{TorusPoint{{0.2, 0.9, 0.5}}, {0.5, 0.25, -1.0}};
    const auto out = run_from(cfg, tagged, {});
    CHECK(out.status == SimStatus::Completed);
    CHECK(out.tree.n() == 0);
    CHECK(out.final_state.velocity == tagged.velocity);
    const Vec3 expected = wrap(tagged.position.coords + tagged.velocity * cfg.T).coords;
    CHECK(inf_norm(out.final_state.position.coords - expected) < 1e-12);
}

TEST_CASE("deterministic single-background head-on collision") {
    SimConfig cfg;
    cfg.epsilon = 0.1;
    cfg.n_background = 1;
    cfg.T = 1.0;
    const ParticleState tagged{TorusPoint{{0, 0, 0}}, {1, 0, 0}};
    std::vector<ParticleState> bg{{TorusPoint{{0.5, 0, 0}}, {0, 0, 0}}};

    const auto out = run_from(cfg, tagged, bg);
    CHECK(out.status == SimStatus::Completed);
    REQUIRE(out.tree.n() == 1);
    const auto& m = out.tree.collisions[0];
    CHECK(m.t == doctest::Approx(0.4).epsilon(1e-12));
    // marker normal points from the tagged centre to the background centre,
    // so the approach condition nu.(v- - v_j) >= 0 holds
    CHECK(m.nu.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dot(m.nu, Vec3{1, 0, 0} - m.v) >= 0.0);
    CHECK(norm(out.final_state.velocity) == doctest::Approx(0.0));
    CHECK(out.partner_indices == std::vector<int>{0});

    // trajectory reconstruction: at t = 0.5 the tagged particle has stopped
    const auto mid = tagged_trajectory(out.tree, 0.5, tagged);
    CHECK(mid.position.coords.x == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(norm(mid.velocity) == doctest::Approx(0.0));

    // at t = t_j exactly the post-collisional velocity applies
    const auto at_tj = tagged_trajectory(out.tree, m.t, tagged);
    CHECK(norm(at_tj.velocity) == doctest::Approx(0.0));
}

TEST_CASE("same seed reproduces identical trees byte for byte") {
    SimConfig cfg;
    cfg.epsilon = 0.1;
    cfg.T = 1.0;
    auto g0 = BackgroundLaw::maxwellian(1.0);
    const auto f0 = InitialLaw::uniform_point_velocity({1, 0, 0});
    RngStream r1(77, 3), r2(77, 3);
    const auto a = run(cfg, f0, g0, r1);
    const auto b = run(cfg, f0, g0, r2);
    CHECK(tree_to_json_line(a.tree) == tree_to_json_line(b.tree));
}

TEST_CASE("simulated trees satisfy the recorded-marker invariants") {
    SimConfig cfg;
    cfg.epsilon = 0.1;
    cfg.T = 2.0;
    auto g0 = BackgroundLaw::maxwellian(1.0);
    const auto f0 = InitialLaw::uniform_point_velocity({0.5, 0.5, 0});

    int collisions_seen = 0;
    bool energy_changed = false;
    for (int r = 0; r < 100; ++r) {
        RngStream rng(31, static_cast<std::uint64_t>(r));
        const auto out = run(cfg, f0, g0, rng);
        if (out.status != SimStatus::Completed) continue;

        Vec3 v = out.tree.v0;
        double prev_t = 0.0;
        for (const auto& m : out.tree.collisions) {
            CHECK(m.t > prev_t);
            prev_t = m.t;
            CHECK(dot(m.nu, v - m.v) >= 0.0); // approach condition
            CHECK(std::fabs(norm(m.nu) - 1.0) <= 1e-12);
            const Vec3 v_post = scatter(v, m.v, m.nu);
            if (std::fabs(norm2(v_post) - norm2(v)) > 1e-6) energy_changed = true;
            v = v_post;
            ++collisions_seen;
        }
        CHECK(inf_norm(out.final_state.velocity - v) < 1e-12);
    }
    CHECK(collisions_seen > 50);
    CHECK(energy_changed); // the model does not conserve energy
}

TEST_CASE("trajectory reconstruction matches a dense replay") {
    SimConfig cfg;
    cfg.epsilon = 0.1;
    cfg.T = 2.0;
    auto g0 = BackgroundLaw::maxwellian(0.3);
    const auto f0 = InitialLaw::uniform_point_velocity({0.4, 0.15, -0.1});
    int compared = 0;
    for (int r = 0; r < 20 && compared < 800; ++r) {
        RngStream rng(55, static_cast<std::uint64_t>(r));
        const auto out = run(cfg, f0, g0, rng);
        if (out.status != SimStatus::Completed) continue;
        const ParticleState init{out.tree.x0, out.tree.v0};
        for (int k = 1; k <= 100; ++k) {
            const double t = cfg.T * k / 100.0;
            const auto a = tagged_trajectory(out.tree, t, init);
            const auto b = replay(out.tree, t, init, 1e-4);
            const Vec3 diff = oracles::reduce(a.position.coords - b.position.coords);
            CHECK(norm(diff) < 1e-6);
            CHECK(inf_norm(a.velocity - b.velocity) < 1e-12);
            ++compared;
        }
        // final state agrees with the reconstruction at T
        const auto end = tagged_trajectory(out.tree, cfg.T, init);
        CHECK(inf_norm(end.velocity - out.final_state.velocity) < 1e-12);
        CHECK(norm(oracles::reduce(end.position.coords -
                                   out.final_state.position.coords)) < 1e-9);
    }
    CHECK(compared >= 500);
}

TEST_CASE("background velocities never change") {
    SimConfig cfg;
    cfg.epsilon = 0.15;
    cfg.n_background = 20;
    cfg.T = 3.0;
    auto g0 = BackgroundLaw::maxwellian(1.0);
    RngStream rng(13, 0);
    const auto init = sample_configuration(InitialLaw::uniform_point_velocity({1, 0, 0}), g0,
                                           20, cfg.epsilon, rng);
    const auto out = run_from(cfg, init.tagged, init.backgrounds);
    // every marker's partner velocity equals that background's initial one
    for (std::size_t k = 0; k < out.partner_indices.size(); ++k) {
        const auto j = static_cast<std::size_t>(out.partner_indices[k]);
        CHECK(out.tree.collisions[k].v == init.backgrounds[j].velocity);
    }
}

TEST_CASE("loss-only absorb mode reproduces the exponential survival law") {
    SimConfig cfg;
    cfg.epsilon = 0.1;
    cfg.T = 0.3;
    cfg.gain_enabled = false;
    auto g0 = BackgroundLaw::maxwellian(1.0);
    const auto f0 = InitialLaw::uniform_point_velocity({0, 0, 0});

    const int M = 4000;
    int survived = 0;
    for (int r = 0; r < M; ++r) {
        RngStream rng(21, static_cast<std::uint64_t>(r));
        const auto out = run(cfg, f0, g0, rng);
        if (out.tree.n() == 0) ++survived;
    }
    const double lambda0 = loss_rate({0, 0, 0}, g0);
    CHECK(lambda0 == doctest::Approx(std::sqrt(8.0 * M_PI)).epsilon(1e-6));
    const double expected = std::exp(-cfg.T * lambda0);
    const double sigma = std::sqrt(expected * (1.0 - expected) / M);
    const double allowance = 3.0 * sigma + 0.15 * expected;
    CHECK(std::fabs(static_cast<double>(survived) / M - expected) <= allowance);
}

TEST_CASE("event cap converts runaway runs into flagged aborts") {
    SimConfig cfg;
    cfg.epsilon = 0.2;
    cfg.n_background = 10;
    cfg.T = 4.0;
    auto g0 = BackgroundLaw::maxwellian(1.0);
    const auto f0 = InitialLaw::uniform_point_velocity({1, 0, 0});

    // find a seed whose run has at least two collisions, then cap at one
    for (int s = 0; s < 50; ++s) {
        RngStream rng(400, static_cast<std::uint64_t>(s));
        const auto out = run(cfg, f0, g0, rng);
        if (out.status == SimStatus::Completed && out.tree.n() >= 2) {
            SimConfig capped = cfg;
            capped.event_cap = 1;
            RngStream rng2(400, static_cast<std::uint64_t>(s));
            const auto aborted = run(capped, f0, g0, rng2);
            CHECK(aborted.status == SimStatus::AbortedEventCap);
            CHECK(aborted.tree.status == SimStatus::AbortedEventCap);
            return;
        }
    }
    FAIL("no multi-collision run found in 50 seeds");
}

TEST_CASE("trajectory argument validation") {
    CollisionTree tree;
    tree.x0 = TorusPoint{{0, 0, 0}};
    tree.v0 = {1, 0, 0};
    const ParticleState init{tree.x0, tree.v0};
    CHECK_THROWS_AS(tagged_trajectory(tree, -0.1, init), std::invalid_argument);
    tree.collisions.push_back({0.5, {1, 0, 0}, {0, 0, 0}});
    tree.collisions.push_back({0.3, {1, 0, 0}, {0, 0, 0}}); // out of order
    CHECK_THROWS_AS(tagged_trajectory(tree, 1.0, init), std::invalid_argument);
}
