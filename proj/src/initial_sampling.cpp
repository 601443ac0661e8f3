#include "rgas/initial_sampling.hpp"

#include <cmath>

namespace rgas {

int boltzmann_grad_N(double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("boltzmann_grad_N: epsilon must be > 0");
    return static_cast<int>(std::lround(1.0 / (epsilon * epsilon)));
}

std::vector<ParticleState> sample_background(const BackgroundLaw& g0, int n, RngStream& rng) {
    if (n < 0) throw std::invalid_argument("sample_background: n must be >= 0");
    std::vector<ParticleState> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        ParticleState p;
        p.position = TorusPoint{rng.point_in_unit_cube()};
        p.velocity = g0.sample(rng);
        out.push_back(p);
    }
    return out;
}

bool reject_overlap(const TorusPoint& x0, const std::vector<ParticleState>& backgrounds,
                    double epsilon) {
    const double eps2 = epsilon * epsilon;
    for (const auto& b : backgrounds) {
        if (norm2(min_image(x0, b.position)) <= eps2) return false;
    }
    return true;
}

double zeta(double epsilon, int n) {
    if (n < 0) throw std::invalid_argument("zeta: n must be >= 0");
    const double ball = 4.0 / 3.0 * M_PI * epsilon * epsilon * epsilon;
    if (!(ball < 1.0)) throw std::invalid_argument("zeta: 4/3 pi eps^3 must be < 1");
    return std::pow(1.0 - ball, n);
}

InitialConfiguration sample_configuration(const InitialLaw& f0, const BackgroundLaw& g0,
                                          int n, double epsilon, RngStream& rng,
                                          int max_attempts) {
    InitialConfiguration cfg;
    cfg.tagged.position = wrap(f0.sample_position(rng));
    cfg.tagged.velocity = f0.sample_velocity(rng);
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        cfg.backgrounds = sample_background(g0, n, rng);
        if (reject_overlap(cfg.tagged.position, cfg.backgrounds, epsilon)) {
            cfg.attempts = attempt;
            return cfg;
        }
    }
    throw std::runtime_error("sample_configuration: overlap rejection did not terminate");
}

} // namespace rgas
