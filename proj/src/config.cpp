#include "rgas/config.hpp"

#include <fstream>

namespace rgas {

using nlohmann::json;

namespace {

Vec3 vec_from(const json& j) {
    if (!j.is_array() || j.size() != 3) throw std::invalid_argument("expected a 3-array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json vec_to(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

std::pair<TailKind, double> tail_from(const json& j) {
    if (!j.contains("tail")) return {TailKind::Unspecified, 0.0};
    const auto& t = j.at("tail");
    if (t.is_string()) {
        const auto s = t.get<std::string>();
        if (s == "compact") return {TailKind::Compact, 0.0};
        if (s == "unspecified") return {TailKind::Unspecified, 0.0};
        throw std::invalid_argument("unknown tail kind: " + s);
    }
    return {TailKind::PowerLaw, t.at("power").get<double>()};
}

} // namespace

BackgroundLaw background_law_from_json(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "maxwellian") return BackgroundLaw::maxwellian(j.at("sigma").get<double>());
    if (kind == "uniform_ball") return BackgroundLaw::uniform_ball(j.at("radius").get<double>());
    if (kind == "tabulated_radial") {
        auto [tail, power] = tail_from(j);
        return BackgroundLaw::tabulated_radial(j.at("r").get<std::vector<double>>(),
                                               j.at("g").get<std::vector<double>>(), tail,
                                               power);
    }
    throw std::invalid_argument("unknown background law kind: " + kind);
}

json background_law_to_json(const BackgroundLaw& law) {
    switch (law.kind()) {
        case BackgroundLaw::Kind::Maxwellian:
            return json{{"kind", "maxwellian"}, {"sigma", law.sigma()}};
        case BackgroundLaw::Kind::UniformBall:
            return json{{"kind", "uniform_ball"}, {"radius", law.radius()}};
        case BackgroundLaw::Kind::TabulatedRadial:
            throw std::runtime_error("serializing tabulated laws is not supported");
    }
    return {};
}

InitialLaw initial_law_from_json(const json& j) {
    const auto& sp = j.at("spatial");
    const auto& vel = j.at("velocity");
    const auto sk = sp.at("kind").get<std::string>();
    const auto vk = vel.at("kind").get<std::string>();

    InitialLaw::SpatialKind spatial;
    Vec3 x0{0, 0, 0};
    if (sk == "uniform") {
        spatial = InitialLaw::SpatialKind::UniformU;
    } else if (sk == "point") {
        spatial = InitialLaw::SpatialKind::PointMass;
        x0 = vec_from(sp.at("x"));
    } else {
        throw std::invalid_argument("unknown spatial law kind: " + sk);
    }

    if (vk == "point")
        return InitialLaw::make(spatial, x0, InitialLaw::VelocityKind::PointMass,
                                vec_from(vel.at("v")), 1.0);
    if (vk == "maxwellian")
        return InitialLaw::make(spatial, x0, InitialLaw::VelocityKind::Maxwellian, {},
                                vel.at("sigma").get<double>());
    if (vk == "tabulated_radial") {
        const auto tab = background_law_from_json(
            json{{"kind", "tabulated_radial"}, {"r", vel.at("r")}, {"g", vel.at("g")},
                 {"tail", vel.contains("tail") ? vel.at("tail") : json("unspecified")}});
        return InitialLaw::make(spatial, x0, InitialLaw::VelocityKind::TabulatedRadial, {},
                                1.0, &tab);
    }
    throw std::invalid_argument("unknown velocity law kind: " + vk);
}

json initial_law_to_json(const InitialLaw& law) {
    json sp = law.spatial_kind() == InitialLaw::SpatialKind::UniformU
                  ? json{{"kind", "uniform"}}
                  : json{{"kind", "point"}, {"x", vec_to(law.x0())}};
    json vel;
    switch (law.velocity_kind()) {
        case InitialLaw::VelocityKind::PointMass:
            vel = json{{"kind", "point"}, {"v", vec_to(law.v0())}};
            break;
        case InitialLaw::VelocityKind::Maxwellian:
            vel = json{{"kind", "maxwellian"}, {"sigma", law.sigma()}};
            break;
        case InitialLaw::VelocityKind::TabulatedRadial:
            throw std::runtime_error("serializing tabulated laws is not supported");
    }
    return json{{"spatial", sp}, {"velocity", vel}};
}

void ExperimentConfig::validate() const {
    if (epsilons.empty()) throw std::invalid_argument("config: epsilons must be non-empty");
    for (std::size_t i = 1; i < epsilons.size(); ++i)
        if (!(epsilons[i] < epsilons[i - 1]))
            throw std::invalid_argument("config: epsilons must be strictly decreasing");
    for (double e : epsilons)
        if (!(e > 0.0) || !(e < 0.25))
            throw std::invalid_argument("config: epsilons must lie in (0, 0.25)");
    if (realizations_per_eps < 100)
        throw std::invalid_argument("config: need at least 100 realizations per epsilon");
    if (t_eval.empty()) throw std::invalid_argument("config: t_eval must be non-empty");
    for (double t : t_eval)
        if (!(t > 0.0) || t > T) throw std::invalid_argument("config: t_eval entries must lie in (0, T]");
    if (!(T > 0.0)) throw std::invalid_argument("config: T must be > 0");
    if (bins_per_axis < 2) throw std::invalid_argument("config: bins_per_axis must be >= 2");
    if (!(v_max > 0.0)) throw std::invalid_argument("config: v_max must be > 0");
    if (reference_factor < 1) throw std::invalid_argument("config: reference_factor must be >= 1");
    if (bootstrap_resamples < 10)
        throw std::invalid_argument("config: bootstrap_resamples must be >= 10");
}

ExperimentConfig experiment_config_from_json(const json& j) {
    ExperimentConfig c;
    c.epsilons = j.at("epsilons").get<std::vector<double>>();
    c.realizations_per_eps = j.at("realizations_per_eps").get<int>();
    if (j.contains("t_eval")) c.t_eval = j.at("t_eval").get<std::vector<double>>();
    c.T = j.at("T").get<double>();
    c.f0 = initial_law_from_json(j.at("f0"));
    c.g0 = background_law_from_json(j.at("g0"));
    if (j.contains("bins_per_axis")) c.bins_per_axis = j.at("bins_per_axis").get<int>();
    if (j.contains("v_max")) c.v_max = j.at("v_max").get<double>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("workers")) c.workers = j.at("workers").get<int>();
    if (j.contains("reference_factor")) c.reference_factor = j.at("reference_factor").get<int>();
    if (j.contains("bootstrap_resamples"))
        c.bootstrap_resamples = j.at("bootstrap_resamples").get<int>();
    if (j.contains("gate_runs")) c.gate_runs = j.at("gate_runs").get<int>();
    c.validate();
    return c;
}

json experiment_config_to_json(const ExperimentConfig& c) {
    return json{{"epsilons", c.epsilons},
                {"realizations_per_eps", c.realizations_per_eps},
                {"t_eval", c.t_eval},
                {"T", c.T},
                {"f0", initial_law_to_json(c.f0)},
                {"g0", background_law_to_json(c.g0)},
                {"bins_per_axis", c.bins_per_axis},
                {"v_max", c.v_max},
                {"seed", c.seed},
                {"workers", c.workers},
                {"reference_factor", c.reference_factor},
                {"bootstrap_resamples", c.bootstrap_resamples},
                {"gate_runs", c.gate_runs}};
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    json j;
    in >> j;
    return experiment_config_from_json(j);
}

} // namespace rgas
