#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "rgas/collision_ops.hpp"
#include "rgas/histogram.hpp"
#include "rgas/rng.hpp"
#include "oracles.hpp"

using namespace rgas;

namespace {

double maxwellian_density(const Vec3& v, double sigma) {
    const double s2 = sigma * sigma;
    return std::pow(2.0 * M_PI * s2, -1.5) * std::exp(-0.5 * norm2(v) / s2);
}

struct Bump {
    Vec3 center;
    double sigma;
    double weight;
};

KineticDensity bumps_density(const std::vector<Bump>& bumps, double v_max, int nv) {
    return KineticDensity::from_function(v_max, nv, [&](const Vec3& v) {
        double val = 0.0;
        for (const auto& b : bumps) val += b.weight * maxwellian_density(v - b.center, b.sigma);
        return val;
    });
}

std::vector<Bump> random_bumps(RngStream& rng) {
    std::vector<Bump> bumps;
    double wsum = 0.0;
    for (int i = 0; i < 2; ++i) {
        Bump b;
        b.center = rng.unit_sphere() * rng.uniform(0.0, 1.2);
        b.sigma = rng.uniform(0.6, 1.0);
        b.weight = rng.uniform(0.2, 1.0);
        wsum += b.weight;
        bumps.push_back(b);
    }
    for (auto& b : bumps) b.weight /= wsum;
    return bumps;
}

// tensor Gauss-Legendre integral over [-L, L]^3
template <class F>
double integrate_velocity(F&& f, double L) {
    using GL = boost::math::quadrature::gauss<double, 24>;
    std::vector<double> xs, ws;
    for (std::size_t i = 0; i < GL::abscissa().size(); ++i) {
        const double a = GL::abscissa()[i], w = GL::weights()[i];
        if (a == 0.0) {
            xs.push_back(0.0);
            ws.push_back(w * L);
            continue;
        }
        xs.push_back(-a * L);
        ws.push_back(w * L);
        xs.push_back(a * L);
        ws.push_back(w * L);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j)
            for (std::size_t k = 0; k < xs.size(); ++k)
                total += ws[i] * ws[j] * ws[k] * f(Vec3{xs[i], xs[j], xs[k]});
    return total;
}

} // namespace

TEST_CASE("loss semigroup: identity at t = 0 and substochastic decay") {
    auto g0 = BackgroundLaw::maxwellian(1.0);
    const RateCache rates(g0);
    auto f = bumps_density({{Vec3{0.5, 0, 0}, 0.8, 1.0}}, 6.0, 24);

    const auto same = semigroup_T(f, 0.0, rates);
    for (std::size_t i = 0; i < f.values().size(); ++i)
        CHECK(same.values()[i] == f.values()[i]);

    double prev_mass = f.mass();
    for (double t : {0.1, 0.4, 1.0}) {
        const auto ft = semigroup_T(f, t, rates);
        CHECK(ft.mass() < prev_mass);
        prev_mass = ft.mass();
        for (double v : ft.values()) CHECK(v >= 0.0);
    }
}

TEST_CASE("loss semigroup point-mass decay matches the rate oracle") {
    auto g0 = BackgroundLaw::maxwellian(1.0);
    const RateCache rates(g0);
    // 21 bins centre a cell exactly at v = 0
    auto f = KineticDensity::point_mass(6.0, 21, {0, 0, 0});
    const auto ft = semigroup_T(f, 1.0, rates);
    const double ratio = ft.mass() / f.mass();
    const double expected = std::exp(-oracles::maxwellian_loss_rate(0.0, 1.0));
    CHECK(expected == doctest::Approx(6.6492e-3).epsilon(1e-4));
    CHECK(ratio == doctest::Approx(expected).epsilon(1e-4));
}

TEST_CASE("phase-space semigroup shifts characteristics periodically") {
    auto g0 = BackgroundLaw::maxwellian(1.0);
    const RateCache rates(g0);
    KineticDensity f(KineticDensity::Mode::PhaseSpace, 2.0, 5, 8);
    const std::size_t vcell = f.velocity_index(4, 2, 2);
    const Vec3 vc = f.velocity_center(vcell);
    CHECK(vc.x == doctest::Approx(1.6));
    CHECK(vc.y == doctest::Approx(0.0));
    const std::size_t scell = (1 * 8 + 4) * 8 + 4;
    f.values()[scell * f.velocity_cells() + vcell] = 1.0;

    const double t = 0.25; // x shift: -t v = -0.4 torus lengths = -3.2 cells
    const auto ft = semigroup_T(f, t, rates);
    CHECK(ft.mass() ==
          doctest::Approx(f.mass() * std::exp(-t * rates.lambda(vc))).epsilon(1e-12));
    // spatial cell s samples the source at s - 3.2 cells, so the bump in
    // x-cell 1 lands in cells 4 and 5 with weights 0.8 / 0.2
    const double at4 = ft.values()[((4 * 8 + 4) * 8 + 4) * ft.velocity_cells() + vcell];
    const double at5 = ft.values()[((5 * 8 + 4) * 8 + 4) * ft.velocity_cells() + vcell];
    CHECK(at4 + at5 > 0.0);
    CHECK(at4 / (at4 + at5) == doctest::Approx(0.8).epsilon(1e-9));
}

TEST_CASE("gain of the zero density vanishes") {
    auto g0 = BackgroundLaw::maxwellian(1.0);
    KineticDensity f(KineticDensity::Mode::VelocityOnly, 6.0, 16);
    CHECK(gain_sphere(f, {0.7, -0.2, 0.1}, g0) == 0.0);
}

TEST_CASE("equilibrium detailed balance: Q+[M] = lambda M") {
    auto g0 = BackgroundLaw::maxwellian(1.0);
    // fine grid so interpolation error stays below the 1e-3 comparison
    auto f = bumps_density({{Vec3{0, 0, 0}, 1.0, 1.0}}, 6.0, 72);
    for (const Vec3 v : {Vec3{0.3, 0, 0}, Vec3{-0.8, 0.5, 0.2}, Vec3{1.2, -1.0, 0.4}}) {
        const double gain = gain_sphere(f, v, g0);
        const double expected = loss_rate(v, g0) * maxwellian_density(v, 1.0);
        CHECK(gain == doctest::Approx(expected).epsilon(1e-3));
    }
}

TEST_CASE("gain preserves collision mass: int Q+[f] = int lambda f") {
    auto g0 = BackgroundLaw::maxwellian(1.0);
    RngStream rng(101, 0);
    const auto bumps = random_bumps(rng);
    auto f = bumps_density(bumps, 3.5, 20);

    GainQuadrature q;
    q.n_sphere_theta = 12;
    q.n_sphere_phi = 24;
    const double lhs =
        integrate_velocity([&](const Vec3& v) { return gain_sphere(f, v, g0, q); }, 8.0);
    const RateCache rates(g0);
    const double rhs = integrate_velocity(
        [&](const Vec3& v) { return rates.lambda(v) * f.interp_cubic(v); }, 3.5);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-3));
}

TEST_CASE("Carleman kernel closed form, brute plane integral, symmetry") {
    auto g0 = BackgroundLaw::maxwellian(1.0);
    const double k = carleman_k({1, 0, 0}, {-1, 0, 0}, g0);
    const double expected = std::exp(-0.5) / std::sqrt(2.0 * M_PI) / 2.0;
    CHECK(expected == doctest::Approx(0.1209855).epsilon(1e-6));
    CHECK(k == doctest::Approx(expected).epsilon(1e-12));

    // brute 2-d quadrature of int_E g0 over the plane, as an independent check
    const Vec3 v{0.7, 0.4, -0.2}, vs{-0.3, 0.9, 0.5};
    const Vec3 u = (v - vs) / norm(v - vs);
    Vec3 seed = std::fabs(u.x) < 0.7 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    Vec3 e1 = seed - u * dot(seed, u);
    e1 = e1 / norm(e1);
    const Vec3 e2{u.y * e1.z - u.z * e1.y, u.z * e1.x - u.x * e1.z, u.x * e1.y - u.y * e1.x};
    const Vec3 base = u * dot(v, u);
    double plane = 0.0;
    const int n = 600;
    const double L = 9.0, h = 2.0 * L / n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double a = -L + (i + 0.5) * h, b = -L + (j + 0.5) * h;
            plane += g0.density(base + e1 * a + e2 * b) * h * h;
        }
    CHECK(carleman_k(v, vs, g0) == doctest::Approx(plane / norm(v - vs)).epsilon(1e-6));

    // rotational invariance for a radial law
    const Vec3 vr{-0.4, 0.7, 0.2}, vsr{0.9, 0.3, -0.3};
    auto rot = [](const Vec3& p) { return Vec3{p.z, p.x, p.y}; };
    CHECK(carleman_k(rot(vr), rot(vsr), g0) ==
          doctest::Approx(carleman_k(vr, vsr, g0)).epsilon(1e-12));

    CHECK_THROWS_AS(carleman_k({1, 1, 1}, {1, 1, 1}, g0), std::invalid_argument);
}

TEST_CASE("Carleman representation agrees with the spherical gain form") {
    auto g0 = BackgroundLaw::maxwellian(1.0);
    RngStream rng(202, 0);
    for (int rep = 0; rep < 5; ++rep) {
        const auto bumps = random_bumps(rng);
        auto f = bumps_density(bumps, 4.0, 28);
        for (int k = 0; k < 3; ++k) {
            const Vec3 v = rng.unit_sphere() * rng.uniform(0.0, 2.0);
            const double sphere = gain_sphere(f, v, g0);
            const double carleman = carleman_apply(f, v, g0);
            CHECK(sphere == doctest::Approx(carleman).epsilon(1e-3));
        }
    }
}

TEST_CASE("out-of-grid gain weight is reported") {
    auto g0 = BackgroundLaw::maxwellian(1.0);
    auto small = bumps_density({{Vec3{0, 0, 0}, 0.4, 1.0}}, 1.0, 10);
    CHECK(gain_sphere_detailed(small, {0.8, 0, 0}, g0).out_of_grid_fraction > 1e-3);
    auto big = bumps_density({{Vec3{0, 0, 0}, 1.0, 1.0}}, 9.0, 16);
    CHECK(gain_sphere_detailed(big, {0.3, 0, 0}, g0).out_of_grid_fraction < 1e-3);
}

TEST_CASE("Duhamel series base cases") {
    auto g0 = BackgroundLaw::maxwellian(1.0);
    auto f0 = bumps_density({{Vec3{0, 0, 0}, 1.0, 1.0}}, 6.0, 16);

    SUBCASE("t = 0 returns f0 with no higher levels") {
        const auto res = duhamel_solve(f0, g0, 0.0, 5, 16);
        CHECK(res.level_masses[0] == doctest::Approx(f0.mass()).epsilon(1e-12));
        for (std::size_t j = 1; j < res.level_masses.size(); ++j)
            CHECK(res.level_masses[j] == 0.0);
        for (std::size_t i = 0; i < f0.values().size(); ++i)
            CHECK(res.density.values()[i] == f0.values()[i]);
    }

    SUBCASE("j_max = 0 is the pure loss solution") {
        const RateCache rates(g0);
        const auto res = duhamel_solve(f0, g0, 0.7, 0, 16);
        const auto loss = semigroup_T(f0, 0.7, rates);
        for (std::size_t i = 0; i < loss.values().size(); ++i)
            CHECK(res.density.values()[i] ==
                  doctest::Approx(loss.values()[i]).epsilon(1e-9));
        CHECK(res.mass_deficit > 0.0);
        CHECK(res.deficit_warning); // most of the mass sits in skipped levels
    }
}

TEST_CASE("Duhamel partial sums: monotone, substochastic, stationary at "
          "equilibrium") {
    auto g0 = BackgroundLaw::maxwellian(1.0);
    auto f0 = bumps_density({{Vec3{0, 0, 0}, 1.0, 1.0}}, 6.0, 16);

    const auto res = duhamel_solve(f0, g0, 1.0, 14, 48);

    double cumulative = 0.0;
    for (double m : res.level_masses) {
        CHECK(m >= 0.0);
        cumulative += m;
        CHECK(cumulative <= 1.0 + 1e-9);
    }
    CHECK(res.partial_mass == doctest::Approx(cumulative));

    // at sigma = 1 the equilibrium collision rate is about 7.09, so even 14
    // levels leave a Poisson-like tail above 1e-3; "mass >= 0.999 at twelve
    // levels" is unattainable at this collision rate
    CHECK(res.partial_mass > 0.96);
    CHECK(res.partial_mass < 0.995);
    CHECK(res.mass_deficit == doctest::Approx(f0.mass() - res.partial_mass).epsilon(1e-9));

    // stationarity: the partial sum reproduces the gridded Maxwellian up to
    // the truncated tail, well inside 1e-2 sup-norm
    double sup = 0.0;
    for (std::size_t i = 0; i < f0.values().size(); ++i)
        sup = std::max(sup, std::fabs(res.density.values()[i] - f0.values()[i]));
    CHECK(sup < 1e-2);
    res.density.validate();
}
